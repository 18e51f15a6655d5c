//! Exact pointwise bias and variance of the kernel distribution function
//! estimators, their small-bandwidth approximations, MISE terms and the
//! MISE-optimal bandwidth.
//!
//! Every observation contributes K̄_{x,h}((x - X)/h), so integrating by
//! parts against F gives, for a smoother with K̄(-∞) = 0,
//!
//! ```text
//! E  F̂(x) = ∫ F(x - uh) k(u) du
//! nV F̂(x) = ∫ F(x - uh) 2K̄(u)k(u) du - (E F̂(x))²
//! ```
//!
//! The right strip is handled by reflecting the problem: with
//! G(y) = 1 - F(a + b - y), the right-boundary estimate at x equals one minus
//! the left-boundary estimate for G at a + b - x.

use std::cell::Cell;

use crate::boundary::{BoundaryKernelFamily, LeftSection};
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, Smoother};
use crate::kernel::BaseKernel;
use crate::numerics::{integrate_with_breaks, QuadSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseError {
    pub x: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
}

impl PointwiseError {
    pub fn new(x: f64, bias: f64, variance: f64) -> Self {
        Self {
            x,
            bias,
            variance,
            mse: variance + bias * bias,
        }
    }
}

/// Leading terms of the MISE expansion for a sample of size `n`:
/// MISE ≈ v0 - (h/n)·v1 + b4·h⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiseTerms {
    pub n: usize,
    /// n⁻¹ ∫ F(1 - F)
    pub v0: f64,
    /// ∫ u B(u) du
    pub v1: f64,
    /// (∫ u²K)² ∫ F''² / 4
    pub b4: f64,
    pub h0: f64,
    pub delta_k: f64,
    pub roughness: f64,
}

impl MiseTerms {
    pub fn leading(&self, h: f64) -> f64 {
        self.v0 - h * self.v1 / self.n as f64 + self.b4 * h.powi(4)
    }
}

/// Integrated variance and squared bias over a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratedError {
    pub variance: f64,
    pub bias_sq: f64,
}

impl IntegratedError {
    pub fn mise(&self) -> f64 {
        self.variance + self.bias_sq
    }
}

/// ∫ F(x - uh) k(u) du and ∫ F(x - uh) 2K̄(u)k(u) du for a smoother whose
/// antiderivative vanishes at -∞. The cdf is clamped outside [a, b], so
/// the points where x - uh crosses a or b become panel breaks.
fn expectations<C: Fn(f64) -> f64>(
    cdf: C,
    x: f64,
    h: f64,
    smoother: &Smoother,
    support: (f64, f64),
    spec: &QuadSpec,
) -> Result<(f64, f64)> {
    let (a, b) = support;
    let (lo, hi) = smoother.support();
    let mut breaks = vec![lo, hi];
    for u in [(x - a) / h, (x - b) / h] {
        if u > lo && u < hi {
            breaks.push(u);
        }
    }
    breaks.sort_by(f64::total_cmp);
    let mean = integrate_with_breaks(|u| cdf(x - u * h) * smoother.density(u), &breaks, spec)?;
    let second = integrate_with_breaks(
        |u| cdf(x - u * h) * 2.0 * smoother.antiderivative(u) * smoother.density(u),
        &breaks,
        spec,
    )?;
    Ok((mean, second))
}

/// (E F̂(x), n·Var F̂(x)) at any point under any config.
pub fn exact_moments(d: &Distribution, cfg: &EstimatorConfig, x: f64) -> Result<(f64, f64)> {
    cfg.validate()?;
    let spec = QuadSpec::default();
    let support = (cfg.a, cfg.b);
    match cfg.smoother_at(x)? {
        Smoother::Zero => Ok((0.0, 0.0)),
        Smoother::One => Ok((1.0, 0.0)),
        s @ (Smoother::Plain(_) | Smoother::Left(_)) => {
            let (m, m2) = expectations(|y| d.cdf(y), x, cfg.h, &s, support, &spec)?;
            Ok((m, (m2 - m * m).max(0.0)))
        }
        Smoother::Right(section) => {
            let (a, b) = support;
            let reflected = |y: f64| 1.0 - d.cdf(a + b - y);
            let left = Smoother::Left(section);
            let (m, m2) = expectations(reflected, a + b - x, cfg.h, &left, support, &spec)?;
            Ok((1.0 - m, (m2 - m * m).max(0.0)))
        }
    }
}

/// Exact bias, variance and MSE at `x` for a sample of size `n`.
pub fn exact_pointwise(
    d: &Distribution,
    cfg: &EstimatorConfig,
    x: f64,
    n: usize,
) -> Result<PointwiseError> {
    check_n(n)?;
    let (mean, n_var) = exact_moments(d, cfg, x)?;
    Ok(PointwiseError::new(x, mean - d.cdf(x), n_var / n as f64))
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptySample)
    } else {
        Ok(())
    }
}

fn left_section(cfg: &EstimatorConfig, alpha: f64) -> Result<LeftSection> {
    cfg.validate()?;
    let family = cfg.family().ok_or_else(|| {
        Error::InvalidConfig("boundary analysis needs a boundary kernel family".into())
    })?;
    family.section(alpha)
}

/// (E F̃(a+αh), n·Var F̃(a+αh)) in the left strip.
fn left_moments(d: &Distribution, cfg: &EstimatorConfig, alpha: f64) -> Result<(f64, f64)> {
    let section = left_section(cfg, alpha)?;
    let x = cfg.a + alpha * cfg.h;
    let (m, m2) = expectations(
        |y| d.cdf(y),
        x,
        cfg.h,
        &Smoother::Left(section),
        (cfg.a, cfg.b),
        &QuadSpec::default(),
    )?;
    Ok((m, (m2 - m * m).max(0.0)))
}

/// B(α) = E F̃(a+αh) - F(a+αh); independent of n.
pub fn exact_bias(d: &Distribution, cfg: &EstimatorConfig, alpha: f64) -> Result<f64> {
    let (mean, _) = left_moments(d, cfg, alpha)?;
    Ok(mean - d.cdf(cfg.a + alpha * cfg.h))
}

/// n·V(α), the n-free scaled variance in the left strip.
pub fn exact_n_variance(d: &Distribution, cfg: &EstimatorConfig, alpha: f64) -> Result<f64> {
    Ok(left_moments(d, cfg, alpha)?.1)
}

/// V(α) = Var F̃(a+αh) for a sample of size `n`.
pub fn exact_variance(
    d: &Distribution,
    cfg: &EstimatorConfig,
    alpha: f64,
    n: usize,
) -> Result<f64> {
    check_n(n)?;
    Ok(exact_n_variance(d, cfg, alpha)? / n as f64)
}

/// MSE(α) = V(α) + B(α)² at each α of the left strip.
pub fn exact_mse_curve(
    d: &Distribution,
    cfg: &EstimatorConfig,
    n: usize,
    alphas: &[f64],
) -> Result<Vec<PointwiseError>> {
    check_n(n)?;
    alphas
        .iter()
        .map(|&alpha| {
            let x = cfg.a + alpha * cfg.h;
            let (mean, n_var) = left_moments(d, cfg, alpha)?;
            Ok(PointwiseError::new(x, mean - d.cdf(x), n_var / n as f64))
        })
        .collect()
}

/// Small-bandwidth bias (h²/2)F''(x)μ_L(α) and scaled variance
/// F(x)(1 - F(x)) - hF'(x)ν_L(α) at x = a + αh.
pub fn asymptotic_terms(
    d: &Distribution,
    family: &BoundaryKernelFamily,
    h: f64,
    alpha: f64,
) -> Result<(f64, f64)> {
    let section = family.section(alpha)?;
    let (a, _) = d.support();
    let x = a + alpha * h;
    let f = d.cdf(x);
    let bias = 0.5 * h * h * d.d2(x) * section.mu_bias_coeff()?;
    let n_var = f * (1.0 - f) - h * d.pdf(x) * section.nu_var_coeff()?;
    Ok((bias, n_var))
}

pub fn asymptotic_pointwise(
    d: &Distribution,
    family: &BoundaryKernelFamily,
    h: f64,
    alpha: f64,
    n: usize,
) -> Result<PointwiseError> {
    check_n(n)?;
    let (a, _) = d.support();
    let (bias, n_var) = asymptotic_terms(d, family, h, alpha)?;
    Ok(PointwiseError::new(a + alpha * h, bias, n_var / n as f64))
}

pub fn mise_terms(d: &Distribution, base: BaseKernel, n: usize) -> Result<MiseTerms> {
    check_n(n)?;
    let roughness = d.roughness()?;
    if !(roughness > 0.0) {
        return Err(Error::NoOptimalBandwidth);
    }
    let (a, b) = d.support();
    let spread = integrate_with_breaks(
        |x| {
            let f = d.cdf(x);
            f * (1.0 - f)
        },
        &[a, b],
        &QuadSpec::default(),
    )?;
    let nf = n as f64;
    let delta_k = base.delta();
    Ok(MiseTerms {
        n,
        v0: spread / nf,
        v1: base.r_constant(),
        b4: base.second_moment().powi(2) / 4.0 * roughness,
        h0: delta_k * roughness.cbrt().recip() * nf.cbrt().recip(),
        delta_k,
        roughness,
    })
}

/// Integrated variance and squared bias over `region`, panels split at the
/// strip edges a + h and b - h.
pub fn exact_integrated_errors(
    d: &Distribution,
    cfg: &EstimatorConfig,
    n: usize,
    region: (f64, f64),
) -> Result<IntegratedError> {
    check_n(n)?;
    cfg.validate()?;
    let (lo, hi) = region;
    if !(lo <= hi) || lo < cfg.a || hi > cfg.b {
        return Err(Error::InvalidConfig(format!(
            "region [{lo}, {hi}] is not inside [{}, {}]",
            cfg.a, cfg.b
        )));
    }
    let mut breaks = vec![lo, hi];
    for edge in [cfg.a + cfg.h, cfg.b - cfg.h] {
        if edge > lo && edge < hi {
            breaks.push(edge);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let failure = Cell::new(None);
    let pointwise = |x: f64| match exact_moments(d, cfg, x) {
        Ok((mean, n_var)) => (mean - d.cdf(x), n_var / n as f64),
        Err(e) => {
            failure.set(Some(e));
            (f64::NAN, f64::NAN)
        }
    };
    let spec = QuadSpec::default();
    let variance = integrate_with_breaks(|x| pointwise(x).1, &breaks, &spec);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let bias_sq = integrate_with_breaks(|x| pointwise(x).0.powi(2), &breaks, &spec);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(IntegratedError {
        variance: variance?,
        bias_sq: bias_sq?,
    })
}

/// MISE = E ∫ (F̂ - F)² over `region`.
pub fn exact_mise(
    d: &Distribution,
    cfg: &EstimatorConfig,
    n: usize,
    region: (f64, f64),
) -> Result<f64> {
    Ok(exact_integrated_errors(d, cfg, n, region)?.mise())
}
