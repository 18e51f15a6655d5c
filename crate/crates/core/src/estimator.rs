//! Kernel distribution function estimators.
//!
//! The classical estimator averages K̄((x - Xᵢ)/h) over the sample. The
//! boundary-modified estimator is 0 below `a`, 1 above `b`, and in the strips
//! (a, a+h) and (b-h, b) swaps K̄ for the left or right boundary
//! antiderivative at α = (x-a)/h or (b-x)/h.

use crate::boundary::{BoundaryKernelFamily, BoundaryVariant, LeftSection};
use crate::error::{Error, Result};
use crate::kernel::BaseKernel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub base: BaseKernel,
    /// `None` selects the classical estimator.
    pub boundary: Option<BoundaryVariant>,
}

impl EstimatorConfig {
    pub fn new(
        a: f64,
        b: f64,
        h: f64,
        base: BaseKernel,
        boundary: Option<BoundaryVariant>,
    ) -> Result<Self> {
        let cfg = Self {
            a,
            b,
            h,
            base,
            boundary,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a < self.b) || !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::InvalidSupport {
                a: self.a,
                b: self.b,
            });
        }
        let max = (self.b - self.a) / 2.0;
        if !(self.h > 0.0 && self.h <= max) {
            return Err(Error::InvalidBandwidth { h: self.h, max });
        }
        Ok(())
    }

    pub fn family(&self) -> Option<BoundaryKernelFamily> {
        self.boundary
            .map(|variant| BoundaryKernelFamily::new(variant, self.base))
    }

    /// Which antiderivative the estimator applies at `x`.
    pub fn smoother_at(&self, x: f64) -> Result<Smoother> {
        let Some(family) = self.family() else {
            return Ok(Smoother::Plain(self.base));
        };
        if x <= self.a {
            return Ok(Smoother::Zero);
        }
        if x >= self.b {
            return Ok(Smoother::One);
        }
        if x < self.a + self.h {
            let alpha = (x - self.a) / self.h;
            if alpha < 1.0 {
                return Ok(Smoother::Left(
                    family.section(alpha.max(f64::MIN_POSITIVE))?,
                ));
            }
        } else if x > self.b - self.h {
            let alpha = (self.b - x) / self.h;
            if alpha < 1.0 {
                return Ok(Smoother::Right(
                    family.section(alpha.max(f64::MIN_POSITIVE))?,
                ));
            }
        }
        Ok(Smoother::Plain(self.base))
    }
}

/// The function u ↦ K̄_{x,h}(u) used at one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoother {
    /// x ≤ a: the estimate is identically 0.
    Zero,
    /// x ≥ b: the estimate is identically 1.
    One,
    Plain(BaseKernel),
    Left(LeftSection),
    Right(LeftSection),
}

impl Smoother {
    pub fn antiderivative(&self, u: f64) -> f64 {
        match self {
            Smoother::Zero => 0.0,
            Smoother::One => 1.0,
            Smoother::Plain(k) => k.antiderivative(u),
            Smoother::Left(s) => s.antiderivative(u),
            Smoother::Right(s) => s.right_antiderivative(u),
        }
    }

    /// Derivative of [`Smoother::antiderivative`].
    pub fn density(&self, u: f64) -> f64 {
        match self {
            Smoother::Zero | Smoother::One => 0.0,
            Smoother::Plain(k) => k.density(u),
            Smoother::Left(s) => s.density(u),
            Smoother::Right(s) => s.right_density(u),
        }
    }

    /// Interval containing the support of the density.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Smoother::Zero | Smoother::One => (0.0, 0.0),
            Smoother::Plain(_) => (-1.0, 1.0),
            Smoother::Left(s) => s.support(),
            Smoother::Right(s) => {
                let (lo, hi) = s.support();
                (-hi, -lo)
            }
        }
    }

    fn estimate(&self, values: &[f64], x: f64, h: f64) -> f64 {
        match self {
            Smoother::Zero => 0.0,
            Smoother::One => 1.0,
            _ => {
                let sum: f64 = values
                    .iter()
                    .map(|xi| self.antiderivative((x - xi) / h))
                    .sum();
                sum / values.len() as f64
            }
        }
    }
}

/// Observations, kept sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "non-finite sample value {bad}"
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values exactly at `a` or `b` are accepted.
    pub fn check_support(&self, a: f64, b: f64) -> Result<()> {
        let (first, last) = (self.values[0], self.values[self.values.len() - 1]);
        for value in [first, last] {
            if value < a || value > b {
                return Err(Error::SampleOutOfSupport { value, a, b });
            }
        }
        Ok(())
    }
}

/// F̄(x) = n⁻¹ Σ K̄((x - Xᵢ)/h).
pub fn classical_cdf(sample: &Sample, base: BaseKernel, h: f64, x: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain {
            name: "h",
            value: h,
            expected: "> 0",
        });
    }
    Ok(Smoother::Plain(base).estimate(sample.values(), x, h))
}

/// The estimate at `x` under `cfg`; the classical estimator when the
/// config has no boundary family.
pub fn boundary_cdf(sample: &Sample, cfg: &EstimatorConfig, x: f64) -> Result<f64> {
    cfg.validate()?;
    if cfg.boundary.is_some() {
        sample.check_support(cfg.a, cfg.b)?;
    }
    Ok(cfg.smoother_at(x)?.estimate(sample.values(), x, cfg.h))
}

pub fn evaluate_grid(sample: &Sample, cfg: &EstimatorConfig, grid: &[f64]) -> Result<Vec<f64>> {
    cfg.validate()?;
    if cfg.boundary.is_some() {
        sample.check_support(cfg.a, cfg.b)?;
    }
    grid.iter()
        .map(|&x| Ok(cfg.smoother_at(x)?.estimate(sample.values(), x, cfg.h)))
        .collect()
}

/// True when every value lies in [-tol, 1+tol] and no step decreases by
/// more than `tol`.
pub fn is_proper(values: &[f64], tol: f64) -> bool {
    values.iter().all(|v| *v >= -tol && *v <= 1.0 + tol)
        && values.windows(2).all(|w| w[1] - w[0] >= -tol)
}

/// `m` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..m)
            .map(|i| {
                if i == m - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (m - 1) as f64
                }
            })
            .collect(),
    }
}
