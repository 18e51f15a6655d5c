//! Monte Carlo study of the integrated squared error of the classical and
//! boundary-corrected estimators.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analysis::mise_terms;
use crate::boundary::BoundaryVariant;
use crate::distributions::{Distribution, RandomStream};
use crate::error::{Error, Result};
use crate::estimator::{evaluate_grid, EstimatorConfig, Sample};
use crate::kernel::BaseKernel;

/// Simpson panels per unit length of the integration region.
pub const ISE_PANELS_PER_UNIT: f64 = 4096.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Classical,
    Boundary(BoundaryVariant),
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::Classical,
        EstimatorKind::Boundary(BoundaryVariant::K1),
        EstimatorKind::Boundary(BoundaryVariant::K2),
        EstimatorKind::Boundary(BoundaryVariant::K3),
    ];

    pub fn boundary(self) -> Option<BoundaryVariant> {
        match self {
            EstimatorKind::Classical => None,
            EstimatorKind::Boundary(v) => Some(v),
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorKind::Classical => f.write_str("classical"),
            EstimatorKind::Boundary(v) => v.fmt(f),
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("classical") {
            Ok(EstimatorKind::Classical)
        } else {
            s.parse().map(EstimatorKind::Boundary)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandwidthRule {
    Fixed(f64),
    /// h₀ from the MISE leading terms of the true distribution.
    Optimal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dist: Distribution,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub base: BaseKernel,
    pub estimators: Vec<EstimatorKind>,
    pub bandwidth: BandwidthRule,
    /// Empty means [a, a+h], [b-h, b] and [a, b].
    pub regions: Vec<(f64, f64)>,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

impl SimConfig {
    pub fn new(dist: Distribution, n: usize, reps: usize, seed: u64, base: BaseKernel) -> Self {
        Self {
            dist,
            n,
            reps,
            seed,
            base,
            estimators: EstimatorKind::ALL.to_vec(),
            bandwidth: BandwidthRule::Optimal,
            regions: Vec::new(),
            threads: 1,
        }
    }

    pub fn resolve_bandwidth(&self) -> Result<f64> {
        match self.bandwidth {
            BandwidthRule::Fixed(h) => Ok(h),
            BandwidthRule::Optimal => Ok(mise_terms(&self.dist, self.base, self.n)?.h0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IseRecord {
    pub replicate: usize,
    pub estimator: EstimatorKind,
    pub region: (f64, f64),
    pub ise: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub seed: u64,
    pub n: usize,
    pub reps: usize,
    pub h: f64,
    pub base: BaseKernel,
    pub estimators: Vec<EstimatorKind>,
    pub regions: Vec<(f64, f64)>,
    /// Replicate-major, then estimator, then region.
    pub records: Vec<IseRecord>,
}

/// Composite Simpson integral of (F̂ - F)² over `region`.
pub fn ise(
    sample: &Sample,
    cfg: &EstimatorConfig,
    dist: &Distribution,
    region: (f64, f64),
) -> Result<f64> {
    let (lo, hi) = region;
    if !(lo <= hi) {
        return Err(Error::InvalidConfig(format!("empty region [{lo}, {hi}]")));
    }
    if hi == lo {
        return Ok(0.0);
    }
    let panels = ((hi - lo) * ISE_PANELS_PER_UNIT).ceil().max(1.0) as usize;
    let points = 2 * panels + 1;
    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect();
    let values = evaluate_grid(sample, cfg, &grid)?;
    let mut sum = 0.0;
    for (i, (x, v)) in grid.iter().zip(values.iter()).enumerate() {
        let e = v - dist.cdf(*x);
        let weight = if i == 0 || i == points - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * e * e;
    }
    Ok(sum * step / 3.0)
}

pub fn run_ise(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.n == 0 || cfg.reps == 0 {
        return Err(Error::InvalidConfig("n and reps must be at least 1".into()));
    }
    if cfg.estimators.is_empty() {
        return Err(Error::InvalidConfig("no estimators selected".into()));
    }
    let (a, b) = cfg.dist.support();
    let h = cfg.resolve_bandwidth()?;
    let configs = cfg
        .estimators
        .iter()
        .map(|kind| EstimatorConfig::new(a, b, h, cfg.base, kind.boundary()))
        .collect::<Result<Vec<_>>>()?;
    let regions = if cfg.regions.is_empty() {
        vec![(a, a + h), (b - h, b), (a, b)]
    } else {
        cfg.regions.clone()
    };
    for &(lo, hi) in &regions {
        if !(lo <= hi) || lo < a || hi > b {
            return Err(Error::InvalidConfig(format!(
                "region [{lo}, {hi}] is not inside [{a}, {b}]"
            )));
        }
    }

    let replicate = |r: usize| -> Result<Vec<f64>> {
        let mut stream = RandomStream::for_replicate(cfg.seed, r as u64);
        let sample = Sample::new(cfg.dist.sample(&mut stream, cfg.n)?)?;
        let mut out = Vec::with_capacity(configs.len() * regions.len());
        for est in &configs {
            for &region in &regions {
                out.push(ise(&sample, est, &cfg.dist, region)?);
            }
        }
        Ok(out)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let per_replicate: Vec<Vec<f64>> = pool.install(|| {
        (0..cfg.reps)
            .into_par_iter()
            .map(replicate)
            .collect::<Result<_>>()
    })?;

    let mut records = Vec::with_capacity(cfg.reps * configs.len() * regions.len());
    for (r, values) in per_replicate.into_iter().enumerate() {
        let mut it = values.into_iter();
        for &estimator in &cfg.estimators {
            for &region in &regions {
                records.push(IseRecord {
                    replicate: r,
                    estimator,
                    region,
                    ise: it.next().expect("one value per estimator and region"),
                });
            }
        }
    }

    Ok(SimResult {
        seed: cfg.seed,
        n: cfg.n,
        reps: cfg.reps,
        h,
        base: cfg.base,
        estimators: cfg.estimators.clone(),
        regions,
        records,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub estimator: EstimatorKind,
    pub region: (f64, f64),
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Five-number summary and mean per (estimator, region).
pub fn summarize(res: &SimResult) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for &estimator in &res.estimators {
        for &region in &res.regions {
            let mut values: Vec<f64> = res
                .records
                .iter()
                .filter(|r| r.estimator == estimator && r.region == region)
                .map(|r| r.ise)
                .collect();
            if values.is_empty() {
                continue;
            }
            values.sort_by(f64::total_cmp);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            rows.push(SummaryRow {
                estimator,
                region,
                count: values.len(),
                min: values[0],
                q1: quantile(&values, 0.25),
                median: quantile(&values, 0.5),
                q3: quantile(&values, 0.75),
                max: values[values.len() - 1],
                mean,
            });
        }
    }
    rows
}

/// Shortest round-trip representation; switches to exponent form for very
/// small or large magnitudes.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

pub fn region_label(region: (f64, f64)) -> String {
    format!("{}:{}", format_float(region.0), format_float(region.1))
}

pub fn write_records_csv<W: Write>(res: &SimResult, mut out: W) -> std::io::Result<()> {
    writeln!(out, "replicate,family,region,ise")?;
    for r in &res.records {
        writeln!(
            out,
            "{},{},{},{}",
            r.replicate,
            r.estimator,
            region_label(r.region),
            format_float(r.ise)
        )?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "family,region,count,min,q1,median,q3,max,mean")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.estimator,
            region_label(r.region),
            r.count,
            format_float(r.min),
            format_float(r.q1),
            format_float(r.median),
            format_float(r.q3),
            format_float(r.max),
            format_float(r.mean)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::BetaMixture;

    fn small_cfg() -> SimConfig {
        let d: Distribution = BetaMixture::new(0.75, 5.0).unwrap().into();
        let mut cfg = SimConfig::new(d, 30, 6, 42, BaseKernel::Epanechnikov);
        cfg.bandwidth = BandwidthRule::Fixed(0.2);
        cfg
    }

    #[test]
    fn same_seed_same_result() {
        let cfg = small_cfg();
        assert_eq!(run_ise(&cfg).unwrap(), run_ise(&cfg).unwrap());
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let mut cfg = small_cfg();
        let one = run_ise(&cfg).unwrap();
        cfg.threads = 3;
        assert_eq!(one, run_ise(&cfg).unwrap());
    }

    #[test]
    fn record_count_and_sign() {
        let res = run_ise(&small_cfg()).unwrap();
        assert_eq!(res.records.len(), 6 * 4 * 3);
        assert!(res.records.iter().all(|r| r.ise >= 0.0));
    }

    #[test]
    fn empty_region_has_zero_ise() {
        let mut cfg = small_cfg();
        cfg.regions = vec![(0.0, 0.0), (0.3, 0.3)];
        let res = run_ise(&cfg).unwrap();
        assert!(res.records.iter().all(|r| r.ise == 0.0));
    }

    #[test]
    fn regions_outside_support_rejected() {
        let mut cfg = small_cfg();
        cfg.regions = vec![(-0.1, 0.5)];
        assert!(run_ise(&cfg).is_err());
    }

    #[test]
    fn full_interval_dominates_subregions() {
        let res = run_ise(&small_cfg()).unwrap();
        for chunk in res.records.chunks(3) {
            assert!(chunk[2].ise >= chunk[0].ise);
            assert!(chunk[2].ise >= chunk[1].ise);
        }
    }

    #[test]
    fn more_reps_extend_the_same_stream() {
        let cfg = small_cfg();
        let mut longer = cfg.clone();
        longer.reps = 12;
        let a = run_ise(&cfg).unwrap();
        let b = run_ise(&longer).unwrap();
        assert_eq!(a.records[..], b.records[..a.records.len()]);
    }

    #[test]
    fn summary_quantiles() {
        let res = SimResult {
            seed: 0,
            n: 1,
            reps: 4,
            h: 0.1,
            base: BaseKernel::Epanechnikov,
            estimators: vec![EstimatorKind::Classical],
            regions: vec![(0.0, 1.0)],
            records: (0..4)
                .map(|r| IseRecord {
                    replicate: r,
                    estimator: EstimatorKind::Classical,
                    region: (0.0, 1.0),
                    ise: 0.25,
                })
                .collect(),
        };
        let rows = summarize(&res);
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(
            (r.min, r.q1, r.median, r.q3, r.max),
            (0.25, 0.25, 0.25, 0.25, 0.25)
        );

        let rows = summarize(&run_ise(&small_cfg()).unwrap());
        for r in rows {
            assert!(r.min <= r.q1 && r.q1 <= r.median && r.median <= r.q3 && r.q3 <= r.max);
        }
    }

    #[test]
    fn quantile_interpolates() {
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.25), 2.0);
    }

    #[test]
    fn estimator_names() {
        for k in EstimatorKind::ALL {
            assert_eq!(k.to_string().parse::<EstimatorKind>().unwrap(), k);
        }
    }
}
