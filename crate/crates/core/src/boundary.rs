//! Left boundary kernels K1, K2, K3 built on a base kernel, their reflected
//! right versions, and the coefficient functions of the boundary bias and
//! variance expansions.
//!
//! For a fixed α the kernel is fully described by a [`LeftSection`], which
//! caches the normaliser and the support. Evaluating an estimator at a
//! point in the boundary strip builds one section and reuses it for every
//! observation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::BaseKernel;
use crate::numerics::{integrate, QuadSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryVariant {
    /// K(u) restricted to [-α, α] and renormalised.
    K1,
    /// K(u/α)/α, the base kernel squeezed into [-α, α].
    K2,
    /// αK(u) on [-1, α] divided by αμ_{0,α}(K) - μ_{1,α}(K).
    K3,
}

impl BoundaryVariant {
    pub const ALL: [BoundaryVariant; 3] = [
        BoundaryVariant::K1,
        BoundaryVariant::K2,
        BoundaryVariant::K3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryVariant::K1 => "k1",
            BoundaryVariant::K2 => "k2",
            BoundaryVariant::K3 => "k3",
        }
    }
}

impl fmt::Display for BoundaryVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k1" => Ok(BoundaryVariant::K1),
            "k2" => Ok(BoundaryVariant::K2),
            "k3" => Ok(BoundaryVariant::K3),
            other => Err(Error::InvalidConfig(format!(
                "unknown boundary family '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryKernelFamily {
    pub variant: BoundaryVariant,
    pub base: BaseKernel,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "alpha",
            value: alpha,
            expected: "(0, 1)",
        })
    }
}

impl BoundaryKernelFamily {
    pub fn new(variant: BoundaryVariant, base: BaseKernel) -> Self {
        Self { variant, base }
    }

    /// The kernel at a fixed α ∈ (0, 1).
    pub fn section(&self, alpha: f64) -> Result<LeftSection> {
        check_alpha(alpha)?;
        let base = self.base;
        let (normaliser, lo) = match self.variant {
            BoundaryVariant::K1 => (base.power_integral(0, -alpha, alpha), -alpha),
            BoundaryVariant::K2 => (1.0, -alpha),
            BoundaryVariant::K3 => {
                let m0 = base.power_integral(0, -1.0, alpha);
                let m1 = base.power_integral(1, -1.0, alpha);
                (alpha * m0 - m1, -1.0)
            }
        };
        if !(normaliser > 0.0) {
            return Err(Error::DegenerateKernel { alpha, normaliser });
        }
        Ok(LeftSection {
            variant: self.variant,
            base,
            alpha,
            normaliser,
            lo,
        })
    }

    pub fn left_density(&self, u: f64, alpha: f64) -> Result<f64> {
        Ok(self.section(alpha)?.density(u))
    }

    pub fn left_antiderivative(&self, u: f64, alpha: f64) -> Result<f64> {
        Ok(self.section(alpha)?.antiderivative(u))
    }

    /// Kᴿ(u;α) = Kᴸ(-u;α).
    pub fn right_density(&self, u: f64, alpha: f64) -> Result<f64> {
        Ok(self.section(alpha)?.right_density(u))
    }

    /// K̄ᴿ(u;α) = 1 - ∫_u^∞ Kᴿ(v;α) dv = 1 - K̄ᴸ(-u;α).
    pub fn right_antiderivative(&self, u: f64, alpha: f64) -> Result<f64> {
        Ok(self.section(alpha)?.right_antiderivative(u))
    }

    /// μ_{k,L}(α) = ∫ u^k Kᴸ(u;α) du, closed form.
    pub fn moment(&self, order: u32, alpha: f64) -> Result<f64> {
        self.section(alpha)?.moment(order)
    }

    /// μ_L(α) = μ_{2,L}(α) - α μ_{1,L}(α), the boundary bias coefficient.
    pub fn mu_bias_coeff(&self, alpha: f64) -> Result<f64> {
        self.section(alpha)?.mu_bias_coeff()
    }

    /// m_{1,L}(α) = ∫ u Bᴸ(u;α) du with Bᴸ = 2 K̄ᴸ Kᴸ.
    pub fn m1(&self, alpha: f64) -> Result<f64> {
        self.section(alpha)?.m1()
    }

    /// ν_L(α) = m_{1,L}(α) + α(1 - μ_{0,L}(α)²), the boundary variance coefficient.
    pub fn nu_var_coeff(&self, alpha: f64) -> Result<f64> {
        self.section(alpha)?.nu_var_coeff()
    }

    /// Residuals of the second-order conditions and of the weaker
    /// condition α(1 - μ₀) + μ₁ = 0 at each α.
    pub fn check_conditions(&self, alphas: &[f64], tol: f64) -> Result<ConditionReport> {
        let rows = alphas
            .iter()
            .map(|&alpha| {
                let s = self.section(alpha)?;
                let m0 = s.moment(0)?;
                let m1 = s.moment(1)?;
                let c1_residual = (m0 - 1.0).abs().max(m1.abs());
                let c2_residual = (alpha * (1.0 - m0) + m1).abs();
                Ok(ConditionRow {
                    alpha,
                    c1_residual,
                    c2_residual,
                    c1: c1_residual <= tol,
                    c2: c2_residual <= tol,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConditionReport {
            family: *self,
            tol,
            rows,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionRow {
    pub alpha: f64,
    /// max(|μ₀ - 1|, |μ₁|)
    pub c1_residual: f64,
    /// |α(1 - μ₀) + μ₁|
    pub c2_residual: f64,
    pub c1: bool,
    pub c2: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub family: BoundaryKernelFamily,
    pub tol: f64,
    pub rows: Vec<ConditionRow>,
}

impl ConditionReport {
    pub fn all_c1(&self) -> bool {
        self.rows.iter().all(|r| r.c1)
    }

    pub fn all_c2(&self) -> bool {
        self.rows.iter().all(|r| r.c2)
    }

    pub fn max_c2_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.c2_residual).fold(0.0, f64::max)
    }
}

/// A boundary kernel at one fixed α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeftSection {
    variant: BoundaryVariant,
    base: BaseKernel,
    alpha: f64,
    normaliser: f64,
    lo: f64,
}

impl LeftSection {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn variant(&self) -> BoundaryVariant {
        self.variant
    }

    /// 2K̄(α) - 1 for K1, 1 for K2, αμ_{0,α} - μ_{1,α} for K3.
    pub fn normaliser(&self) -> f64 {
        self.normaliser
    }

    /// Interval containing the support of Kᴸ(·;α).
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.alpha)
    }

    pub fn density(&self, u: f64) -> f64 {
        let alpha = self.alpha;
        match self.variant {
            BoundaryVariant::K1 => {
                if u < -alpha || u > alpha {
                    0.0
                } else {
                    self.base.density(u) / self.normaliser
                }
            }
            BoundaryVariant::K2 => self.base.density(u / alpha) / alpha,
            BoundaryVariant::K3 => {
                if u > alpha {
                    0.0
                } else {
                    alpha * self.base.density(u) / self.normaliser
                }
            }
        }
    }

    pub fn antiderivative(&self, u: f64) -> f64 {
        let alpha = self.alpha;
        match self.variant {
            BoundaryVariant::K1 => {
                if u <= -alpha {
                    0.0
                } else {
                    self.base.power_integral(0, -alpha, u.min(alpha)) / self.normaliser
                }
            }
            BoundaryVariant::K2 => self.base.antiderivative(u / alpha),
            BoundaryVariant::K3 => {
                if u <= -1.0 {
                    0.0
                } else {
                    alpha * self.base.power_integral(0, -1.0, u.min(alpha)) / self.normaliser
                }
            }
        }
    }

    pub fn right_density(&self, u: f64) -> f64 {
        self.density(-u)
    }

    pub fn right_antiderivative(&self, u: f64) -> f64 {
        1.0 - self.antiderivative(-u)
    }

    pub fn moment(&self, order: u32) -> Result<f64> {
        if order > 2 {
            return Err(Error::UnsupportedOrder(order));
        }
        let alpha = self.alpha;
        let base = self.base;
        Ok(match self.variant {
            BoundaryVariant::K1 => base.power_integral(order, -alpha, alpha) / self.normaliser,
            BoundaryVariant::K2 => match order {
                0 => 1.0,
                1 => 0.0,
                _ => alpha * alpha * base.second_moment(),
            },
            BoundaryVariant::K3 => {
                alpha * base.power_integral(order, -1.0, alpha) / self.normaliser
            }
        })
    }

    pub fn mu_bias_coeff(&self) -> Result<f64> {
        Ok(self.moment(2)? - self.alpha * self.moment(1)?)
    }

    pub fn m1(&self) -> Result<f64> {
        let (lo, hi) = self.support();
        integrate(
            |u| 2.0 * u * self.antiderivative(u) * self.density(u),
            lo,
            hi,
            &QuadSpec::default(),
        )
    }

    pub fn nu_var_coeff(&self) -> Result<f64> {
        let m0 = self.moment(0)?;
        Ok(self.m1()? + self.alpha * (1.0 - m0 * m0))
    }
}
