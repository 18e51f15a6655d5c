//! Deterministic quadrature and root finding.
//!
//! [`integrate`] is a globally adaptive scheme built on a 15-point
//! Gauss-Legendre rule: every panel is compared against the sum of its two
//! halves, and the panel with the largest discrepancy is bisected until the
//! summed discrepancy falls below the requested tolerance. Integrands with
//! known derivative discontinuities should go through
//! [`integrate_with_breaks`] so that every kink sits on a panel boundary.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const GL_ORDER: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 1 << 15,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::Domain {
                name: "rel_tol",
                value: self.rel_tol,
                expected: "> 0",
            });
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::Domain {
                name: "abs_tol",
                value: self.abs_tol,
                expected: "> 0",
            });
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    pub x_tol: f64,
    pub max_iters: usize,
}

impl Default for RootSpec {
    fn default() -> Self {
        Self {
            x_tol: 1e-12,
            max_iters: 200,
        }
    }
}

struct GaussLegendre {
    nodes: [f64; GL_ORDER],
    weights: [f64; GL_ORDER],
}

/// Nodes and weights on [-1, 1], by Newton iteration on the Legendre
/// polynomial from the Chebyshev-like initial guesses.
fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    })
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Returns (integral, integral of |f|) on one panel.
fn gl_panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let rule = gauss_legendre();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut sum = 0.0;
    let mut abs = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let v = f(mid + half * x);
        sum += w * v;
        abs += w * v.abs();
    }
    (sum * half, abs * half)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    abs_value: f64,
    error: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Self {
        let (whole, _) = gl_panel(f, lo, hi);
        let mid = 0.5 * (lo + hi);
        let (left, left_abs) = gl_panel(f, lo, mid);
        let (right, right_abs) = gl_panel(f, mid, hi);
        let value = left + right;
        Panel {
            lo,
            hi,
            value,
            abs_value: left_abs + right_abs,
            error: (whole - value).abs(),
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Max-heap on error; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// Adaptive integral of `f` over `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadSpec) -> Result<f64> {
    integrate_with_breaks(f, &[lo, hi], spec)
}

/// Adaptive integral over `[points[0], points[last]]` with every listed
/// point used as an initial panel boundary. Points must be nondecreasing.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    spec: &QuadSpec,
) -> Result<f64> {
    spec.validate()?;
    if points.len() < 2 {
        return Err(Error::InvalidConfig(
            "integration needs at least two endpoints".into(),
        ));
    }
    for pair in points.windows(2) {
        if !(pair[0] <= pair[1]) {
            return Err(Error::InvalidConfig(format!(
                "integration limits out of order: {} > {}",
                pair[0], pair[1]
            )));
        }
    }

    let mut heap = BinaryHeap::new();
    for pair in points.windows(2) {
        if pair[1] > pair[0] {
            heap.push(Panel::new(&f, pair[0], pair[1]));
        }
    }
    if heap.is_empty() {
        return Ok(0.0);
    }

    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut total_abs: f64 = heap.iter().map(|p| p.abs_value).sum();
    let mut total_err: f64 = heap.iter().map(|p| p.error).sum();

    loop {
        let roundoff = 50.0 * f64::EPSILON * total_abs;
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs()).max(roundoff);
        if total_err <= tol {
            break;
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error_bound: total_err,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Panel cannot be split further in floating point.
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error_bound: total_err,
            });
        }
        let left = Panel::new(&f, worst.lo, mid);
        let right = Panel::new(&f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Final sum in positional order so the result does not depend on the
    // refinement history.
    let mut panels = heap.into_vec();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    Ok(panels.iter().map(|p| p.value).sum())
}

/// Root of `f` in `[lo, hi]` by bisection with secant steps.
///
/// A secant step is only accepted when it lands strictly inside the current
/// bracket and the previous step at least halved the bracket; otherwise the
/// step is a plain bisection. The iterate never leaves `[lo, hi]`.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &RootSpec) -> Result<f64> {
    if !(spec.x_tol > 0.0) {
        return Err(Error::Domain {
            name: "x_tol",
            value: spec.x_tol,
            expected: "> 0",
        });
    }
    if !(lo <= hi) {
        return Err(Error::InvalidConfig(format!(
            "root bracket out of order: {lo} > {hi}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.signum() * fb.signum() < 0.0) {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut last_width = f64::INFINITY;
    for _ in 0..spec.max_iters {
        let width = b - a;
        if width <= spec.x_tol {
            return Ok(0.5 * (a + b));
        }
        let secant = b - fb * (b - a) / (fb - fa);
        let use_secant = width <= 0.5 * last_width && secant > a && secant < b;
        let x = if use_secant { secant } else { 0.5 * (a + b) };
        if !(x > a && x < b) {
            // Bracket has collapsed to adjacent floats.
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        last_width = width;
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    if b - a <= spec.x_tol {
        return Ok(0.5 * (a + b));
    }
    Err(Error::RootNonConvergence {
        iters: spec.max_iters,
        lo: a,
        hi: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadSpec {
        QuadSpec::default()
    }

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre();
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // degree 28 is within reach of a 15-point rule
        let v: f64 = rule
            .nodes
            .iter()
            .zip(rule.weights.iter())
            .map(|(x, w)| w * x.powi(28))
            .sum();
        assert!((v - 2.0 / 29.0).abs() < 1e-14);
    }

    #[test]
    fn constant_and_odd_examples() {
        assert!((integrate(|_| 1.0, 0.0, 1.0, &q()).unwrap() - 1.0).abs() < 1e-14);
        assert!(integrate(|u| u, -1.0, 1.0, &q()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn epanechnikov_mass() {
        let v = integrate(|u| 0.75 * (1.0 - u * u), -1.0, 1.0, &q()).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kinked_and_smooth_integrands() {
        let v = integrate_with_breaks(|u: f64| u.abs(), &[-1.0, 0.0, 2.0], &q()).unwrap();
        assert!((v - 2.5).abs() < 1e-13);
        // without the break the adaptive refinement still converges
        let v = integrate(|u: f64| u.abs(), -1.0, 2.0, &q()).unwrap();
        assert!((v - 2.5).abs() < 1e-10);
        let v = integrate(|u: f64| u.exp(), 0.0, 1.0, &q()).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        let v = integrate(|u: f64| u.sqrt(), 0.0, 1.0, &q()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_interval_is_zero() {
        assert_eq!(integrate(|u| u, 0.3, 0.3, &q()).unwrap(), 0.0);
    }

    #[test]
    fn reversed_limits_rejected() {
        assert!(integrate(|u| u, 1.0, 0.0, &q()).is_err());
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let spec = QuadSpec {
            max_subdivisions: 2,
            ..QuadSpec::default()
        };
        let err = integrate(|u: f64| (1.0 / u).sin(), 1e-4, 1.0, &spec).unwrap_err();
        match err {
            Error::QuadratureNonConvergence {
                estimate,
                error_bound,
            } => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn deterministic_output() {
        let f = |u: f64| (3.0 * u).sin() * u.exp();
        let a = integrate(f, -2.0, 3.0, &q()).unwrap();
        let b = integrate(f, -2.0, 3.0, &q()).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn root_examples() {
        let s = RootSpec::default();
        assert!((find_root(|x| x - 0.5, 0.0, 1.0, &s).unwrap() - 0.5).abs() < 1e-12);
        assert!((find_root(|x| x * x - 0.25, 0.0, 1.0, &s).unwrap() - 0.5).abs() < 1e-12);
        let r = find_root(|x| 3.0 * x * x - 2.0 * x * x * x - 0.5, 0.0, 1.0, &s).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn root_requires_sign_change() {
        let err = find_root(|x| x * x + 1.0, -1.0, 1.0, &RootSpec::default()).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn root_iteration_budget() {
        let s = RootSpec {
            x_tol: 1e-15,
            max_iters: 3,
        };
        let err = find_root(|x| x - 0.3, 0.0, 1.0, &s);
        // a linear function is solved by one secant step or fails on budget
        match err {
            Ok(x) => assert!((x - 0.3).abs() < 1e-15),
            Err(e) => assert!(matches!(e, Error::RootNonConvergence { .. })),
        }
        let err = find_root(|x: f64| x.powi(3) - 0.3, 0.0, 1.0, &s).unwrap_err();
        assert!(matches!(err, Error::RootNonConvergence { .. }));
    }
}
