//! Symmetric polynomial kernels on [-1, 1].
//!
//! Each kernel is stored as the coefficients of its density polynomial, so
//! the antiderivative, partial moments and the constants entering the MISE
//! expansion all have exact closed forms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseKernel {
    Uniform,
    Epanechnikov,
    Biweight,
    Triweight,
}

impl BaseKernel {
    pub const ALL: [BaseKernel; 4] = [
        BaseKernel::Uniform,
        BaseKernel::Epanechnikov,
        BaseKernel::Biweight,
        BaseKernel::Triweight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseKernel::Uniform => "uniform",
            BaseKernel::Epanechnikov => "epanechnikov",
            BaseKernel::Biweight => "biweight",
            BaseKernel::Triweight => "triweight",
        }
    }

    /// Density coefficients in increasing powers of u, valid on [-1, 1].
    pub fn coefficients(self) -> &'static [f64] {
        const UNIFORM: [f64; 1] = [0.5];
        const EPANECHNIKOV: [f64; 3] = [0.75, 0.0, -0.75];
        const BIWEIGHT: [f64; 5] = [15.0 / 16.0, 0.0, -30.0 / 16.0, 0.0, 15.0 / 16.0];
        const TRIWEIGHT: [f64; 7] = [
            35.0 / 32.0,
            0.0,
            -105.0 / 32.0,
            0.0,
            105.0 / 32.0,
            0.0,
            -35.0 / 32.0,
        ];
        match self {
            BaseKernel::Uniform => &UNIFORM,
            BaseKernel::Epanechnikov => &EPANECHNIKOV,
            BaseKernel::Biweight => &BIWEIGHT,
            BaseKernel::Triweight => &TRIWEIGHT,
        }
    }

    /// K(t), zero outside [-1, 1].
    pub fn density(self, t: f64) -> f64 {
        if !(-1.0..=1.0).contains(&t) {
            return 0.0;
        }
        horner(self.coefficients(), t)
    }

    /// ∫_lo^hi u^k K(u) du with both limits clamped to [-1, 1].
    ///
    /// Symmetric limits produce no cancellation: for even density terms the
    /// difference `hi^m - lo^m` is exact when `lo = -hi`.
    pub fn power_integral(self, k: u32, lo: f64, hi: f64) -> f64 {
        let lo = lo.clamp(-1.0, 1.0);
        let hi = hi.clamp(-1.0, 1.0);
        if hi <= lo {
            return 0.0;
        }
        self.coefficients()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, c)| {
                let m = (j as u32 + k + 1) as i32;
                c * (hi.powi(m) - lo.powi(m)) / m as f64
            })
            .sum()
    }

    /// K̄(u) = ∫_{-∞}^u K, exactly 0 below -1 and 1 above 1.
    pub fn antiderivative(self, u: f64) -> f64 {
        if u <= -1.0 {
            0.0
        } else if u >= 1.0 {
            1.0
        } else {
            self.power_integral(0, -1.0, u)
        }
    }

    /// μ_{k,α}(K) = ∫_{-1}^α u^k K(u) du.
    pub fn partial_moment(self, order: u32, alpha: f64) -> Result<f64> {
        if order > 2 {
            return Err(Error::UnsupportedOrder(order));
        }
        if !(-1.0..=1.0).contains(&alpha) {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha,
                expected: "[-1, 1]",
            });
        }
        if order == 0 {
            return Ok(self.antiderivative(alpha));
        }
        Ok(self.power_integral(order, -1.0, alpha))
    }

    /// ∫ u² K(u) du.
    pub fn second_moment(self) -> f64 {
        self.power_integral(2, -1.0, 1.0)
    }

    /// ∫ u B(u) du with B = 2 K̄ K, evaluated as 1 - ∫ K̄² by parts.
    pub fn r_constant(self) -> f64 {
        1.0 - self.antiderivative_square_integral()
    }

    /// δ(K) = (∫ u B)^{1/3} (∫ u² K)^{-2/3}.
    pub fn delta(self) -> f64 {
        self.r_constant().cbrt() / self.second_moment().powf(2.0 / 3.0)
    }

    /// ∫_{-1}^1 K̄(u)² du, by expanding K̄ as a polynomial.
    fn antiderivative_square_integral(self) -> f64 {
        let poly = antiderivative_poly(self.coefficients());
        let sq = poly_mul(&poly, &poly);
        sq.iter()
            .enumerate()
            .map(|(j, c)| {
                let m = j as i32 + 1;
                c * (1.0 - (-1.0f64).powi(m)) / m as f64
            })
            .sum()
    }
}

impl fmt::Display for BaseKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(BaseKernel::Uniform),
            "epanechnikov" => Ok(BaseKernel::Epanechnikov),
            "biweight" => Ok(BaseKernel::Biweight),
            "triweight" => Ok(BaseKernel::Triweight),
            other => Err(Error::InvalidConfig(format!("unknown kernel '{other}'"))),
        }
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Coefficients of u ↦ ∫_{-1}^u p(v) dv.
fn antiderivative_poly(p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (j, c) in p.iter().enumerate() {
        out[j + 1] = c / (j + 1) as f64;
    }
    // constant term makes the value at -1 vanish
    out[0] = -horner(&out, -1.0);
    out
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}
