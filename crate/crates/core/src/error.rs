use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root finding did not converge after {iters} iterations, bracket [{lo}, {hi}]")]
    RootNonConvergence { iters: usize, lo: f64, hi: f64 },

    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("unsupported moment order {0}; only 0, 1 and 2 are available")]
    UnsupportedOrder(u32),

    #[error("boundary kernel normaliser is not positive at alpha = {alpha} (got {normaliser})")]
    DegenerateKernel { alpha: f64, normaliser: f64 },

    #[error("sample is empty")]
    EmptySample,

    #[error("sample value {value} lies outside the support [{a}, {b}]")]
    SampleOutOfSupport { value: f64, a: f64, b: f64 },

    #[error("bandwidth h = {h} must satisfy 0 < h <= (b - a)/2 = {max}")]
    InvalidBandwidth { h: f64, max: f64 },

    #[error("invalid support [{a}, {b}]")]
    InvalidSupport { a: f64, b: f64 },

    #[error("no optimal bandwidth: the distribution has zero curvature (uniform F)")]
    NoOptimalBandwidth,

    #[error("mixture weight w = 1 leaves F''(0) fixed at -2 and cannot match a target")]
    DegenerateMixture,

    #[error("solved shape parameter b = {0} is below 2, outside the beta-mixture family")]
    OutOfFamily(f64),

    #[error("{0}")]
    InvalidConfig(String),
}

impl Error {
    /// Errors raised by a numerical procedure rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::RootNonConvergence { .. }
                | Error::NoOptimalBandwidth
        )
    }
}
