//! Test distributions: the beta mixtures wB(1,2) + (1-w)B(2,b) on [0, 1]
//! and the uniform law on an interval.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate, QuadSpec, RootSpec};

/// (1 - x)^p for x in [0, 1], p >= 0, through log1p so that large shape
/// parameters keep their relative precision near x = 1.
fn pow_one_minus(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        (p * (-x).ln_1p()).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaMixture {
    w: f64,
    shape_b: f64,
}

impl BetaMixture {
    pub fn new(w: f64, shape_b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain {
                name: "w",
                value: w,
                expected: "[0, 1]",
            });
        }
        if !(shape_b >= 2.0) || !shape_b.is_finite() {
            return Err(Error::OutOfFamily(shape_b));
        }
        Ok(Self { w, shape_b })
    }

    /// The mixture with F'(0) = `target_d1` and F''(0) = `target_d2`.
    pub fn solve_params(target_d1: f64, target_d2: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&target_d1) {
            return Err(Error::Domain {
                name: "F'(0)",
                value: target_d1,
                expected: "[0, 2)",
            });
        }
        if !(target_d2 > 0.0) || !target_d2.is_finite() {
            return Err(Error::Domain {
                name: "F''(0)",
                value: target_d2,
                expected: "> 0",
            });
        }
        let w = target_d1 / 2.0;
        if w >= 1.0 {
            return Err(Error::DegenerateMixture);
        }
        // b(b + 1) = c  with  c = (F''(0) + 2w)/(1 - w)
        let c = (target_d2 + 2.0 * w) / (1.0 - w);
        let b = 2.0 * c / (1.0 + (1.0 + 4.0 * c).sqrt());
        if b < 2.0 {
            return Err(Error::OutOfFamily(b));
        }
        Ok(Self { w, shape_b: b })
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn shape_b(&self) -> f64 {
        self.shape_b
    }

    fn beta2_cdf(&self, x: f64) -> f64 {
        let b = self.shape_b;
        1.0 - pow_one_minus(x, b) * (1.0 + b * x)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        self.w * x * (2.0 - x) + (1.0 - self.w) * self.beta2_cdf(x)
    }

    fn pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        let b = self.shape_b;
        self.w * 2.0 * (1.0 - x) + (1.0 - self.w) * b * (b + 1.0) * x * pow_one_minus(x, b - 1.0)
    }

    fn d2(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        let b = self.shape_b;
        -2.0 * self.w
            + (1.0 - self.w)
                * b
                * (b + 1.0)
                * pow_one_minus(x, b - 2.0)
                * ((1.0 - x) - (b - 1.0) * x)
    }

    fn draw(&self, stream: &mut RandomStream) -> f64 {
        let pick = stream.uniform();
        let u = stream.uniform();
        if pick < self.w {
            // inverse of 2x - x² for B(1, 2)
            1.0 - (1.0 - u).sqrt()
        } else {
            let spec = RootSpec {
                x_tol: 1e-14,
                ..RootSpec::default()
            };
            // cdf - u changes sign on [0, 1] for u in [0, 1)
            find_root(|x| self.beta2_cdf(x) - u, 0.0, 1.0, &spec)
                .expect("B(2,b) quantile is bracketed by [0, 1]")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    lo: f64,
    hi: f64,
}

impl Uniform {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidSupport { a: lo, b: hi });
        }
        Ok(Self { lo, hi })
    }
}

/// A distribution with compact support and a twice differentiable cdf on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    BetaMixture(BetaMixture),
    Uniform(Uniform),
}

impl From<BetaMixture> for Distribution {
    fn from(m: BetaMixture) -> Self {
        Distribution::BetaMixture(m)
    }
}

impl From<Uniform> for Distribution {
    fn from(u: Uniform) -> Self {
        Distribution::Uniform(u)
    }
}

impl Distribution {
    pub fn support(&self) -> (f64, f64) {
        match self {
            Distribution::BetaMixture(_) => (0.0, 1.0),
            Distribution::Uniform(u) => (u.lo, u.hi),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Distribution::BetaMixture(m) => m.cdf(x),
            Distribution::Uniform(u) => ((x - u.lo) / (u.hi - u.lo)).clamp(0.0, 1.0),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Distribution::BetaMixture(m) => m.pdf(x),
            Distribution::Uniform(u) => {
                if (u.lo..=u.hi).contains(&x) {
                    1.0 / (u.hi - u.lo)
                } else {
                    0.0
                }
            }
        }
    }

    /// F''(x), zero outside the support.
    pub fn d2(&self, x: f64) -> f64 {
        match self {
            Distribution::BetaMixture(m) => m.d2(x),
            Distribution::Uniform(_) => 0.0,
        }
    }

    /// ∫ F''(x)² dx over the support.
    pub fn roughness(&self) -> Result<f64> {
        match self {
            Distribution::Uniform(_) => Ok(0.0),
            Distribution::BetaMixture(m) => {
                integrate(|x| m.d2(x).powi(2), 0.0, 1.0, &QuadSpec::default())
            }
        }
    }

    pub fn draw(&self, stream: &mut RandomStream) -> f64 {
        match self {
            Distribution::BetaMixture(m) => m.draw(stream),
            Distribution::Uniform(u) => u.lo + (u.hi - u.lo) * stream.uniform(),
        }
    }

    /// `n` independent draws, returned sorted.
    pub fn sample(&self, stream: &mut RandomStream, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let mut xs: Vec<f64> = (0..n).map(|_| self.draw(stream)).collect();
        xs.sort_by(f64::total_cmp);
        Ok(xs)
    }
}

/// Seeded random stream. Replicate `r` of a run with master seed `s` uses
/// ChaCha8 keyed by `s` on stream number `r`, so replicates never share
/// state and any replicate can be regenerated on its own.
#[derive(Debug, Clone)]
pub struct RandomStream(ChaCha8Rng);

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn for_replicate(seed: u64, replicate: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replicate);
        Self(rng)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }
}

/// The eight mixtures with F'(0) ∈ {0, 0.5, 1, 1.5} and F''(0) ∈ {6, 30}.
pub fn reference_mixtures() -> Vec<BetaMixture> {
    let mut out = Vec::with_capacity(8);
    for d1 in [0.0, 0.5, 1.0, 1.5] {
        for d2 in [6.0, 30.0] {
            out.push(BetaMixture::solve_params(d1, d2).expect("reference targets are in family"));
        }
    }
    out
}
