use boundary_kdf::analysis::{asymptotic_terms, exact_bias, exact_n_variance};
use boundary_kdf::estimator::uniform_grid;
use boundary_kdf::numerics::{find_root, integrate, QuadSpec, RootSpec};
use boundary_kdf::simulation::ise;
use boundary_kdf::{
    evaluate_grid, is_proper, BaseKernel, BetaMixture, BoundaryKernelFamily, BoundaryVariant,
    Distribution, EstimatorConfig, RandomStream, Sample,
};
use proptest::prelude::*;

fn kernel() -> impl Strategy<Value = BaseKernel> {
    prop::sample::select(BaseKernel::ALL.to_vec())
}

fn variant() -> impl Strategy<Value = BoundaryVariant> {
    prop::sample::select(BoundaryVariant::ALL.to_vec())
}

fn mixture() -> impl Strategy<Value = Distribution> {
    (0.0..0.9f64, 2.0..10.0f64).prop_map(|(w, b)| BetaMixture::new(w, b).unwrap().into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_is_linear(c1 in -5.0..5.0f64, c2 in -5.0..5.0f64, lo in -2.0..0.0f64, len in 0.1..3.0f64) {
        let spec = QuadSpec::default();
        let f = |x: f64| (3.0 * x).sin();
        let g = |x: f64| (x * x).exp();
        let hi = lo + len;
        let lhs = integrate(|x| c1 * f(x) + c2 * g(x), lo, hi, &spec).unwrap();
        let rhs = c1 * integrate(f, lo, hi, &spec).unwrap() + c2 * integrate(g, lo, hi, &spec).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn quadrature_splits_additively(lo in -2.0..0.0f64, len in 0.1..3.0f64, t in 0.0..1.0f64) {
        let spec = QuadSpec::default();
        let f = |x: f64| 1.0 / (1.0 + 25.0 * x * x);
        let hi = lo + len;
        let mid = lo + t * len;
        let whole = integrate(f, lo, hi, &spec).unwrap();
        let parts = integrate(f, lo, mid, &spec).unwrap() + integrate(f, mid, hi, &spec).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-10);
    }

    #[test]
    fn root_has_small_residual(target in -7.0..7.0f64, shift in 0.0..1.0f64) {
        let f = |x: f64| x * x * x + shift * x - target;
        let root = find_root(f, -3.0, 3.0, &RootSpec::default()).unwrap();
        let slope = 3.0 * root * root + shift;
        prop_assert!(f(root).abs() <= 1e-11 * slope.max(1.0));
    }

    #[test]
    fn estimator_is_shift_invariant(
        ticks in prop::collection::vec(0u32..=64, 1..40),
        k in -8i32..8,
        family in prop::option::of(variant()),
        base in kernel(),
        h_ticks in 1u32..=4,
    ) {
        // Dyadic data, shift and bandwidth keep every subtraction exact.
        let values: Vec<f64> = ticks.iter().map(|&t| t as f64 / 64.0).collect();
        let c = k as f64 / 8.0;
        let h = h_ticks as f64 / 8.0;
        let grid = uniform_grid(0.0, 1.0, 129);
        let cfg = EstimatorConfig::new(0.0, 1.0, h, base, family).unwrap();
        let shifted_cfg = EstimatorConfig::new(c, 1.0 + c, h, base, family).unwrap();
        let base_vals = evaluate_grid(&Sample::new(values.clone()).unwrap(), &cfg, &grid).unwrap();
        let shifted_sample = Sample::new(values.iter().map(|v| v + c).collect()).unwrap();
        let shifted_grid: Vec<f64> = grid.iter().map(|x| x + c).collect();
        let shifted_vals = evaluate_grid(&shifted_sample, &shifted_cfg, &shifted_grid).unwrap();
        for (p, q) in base_vals.iter().zip(&shifted_vals) {
            prop_assert!((p - q).abs() <= 1e-12);
        }
    }

    #[test]
    fn exact_bias_follows_small_h_expansion(d in mixture(), family in variant(), alpha in 0.05..0.95f64) {
        let h = 1e-3;
        let fam = BoundaryKernelFamily::new(family, BaseKernel::Epanechnikov);
        let cfg = EstimatorConfig::new(0.0, 1.0, h, BaseKernel::Epanechnikov, Some(family)).unwrap();
        let (bias, n_var) = asymptotic_terms(&d, &fam, h, alpha).unwrap();
        let bias_err = (exact_bias(&d, &cfg, alpha).unwrap() - bias).abs();
        let var_err = (exact_n_variance(&d, &cfg, alpha).unwrap() - n_var).abs();
        prop_assert!(bias_err <= 0.05 * h * h, "bias remainder {bias_err:e}");
        prop_assert!(var_err <= 50.0 * h * h, "variance remainder {var_err:e}");
    }

    #[test]
    fn boundary_bias_vanishes_faster_than_h(d in mixture(), family in variant(), alpha in 0.05..0.95f64) {
        let cfg = |h| EstimatorConfig::new(0.0, 1.0, h, BaseKernel::Epanechnikov, Some(family)).unwrap();
        let coarse = exact_bias(&d, &cfg(0.02), alpha).unwrap().abs() / 0.02;
        let fine = exact_bias(&d, &cfg(0.002), alpha).unwrap().abs() / 0.002;
        prop_assert!(fine <= coarse + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn boundary_estimates_are_proper(
        d in mixture(),
        family in variant(),
        base in kernel(),
        n in prop::sample::select(vec![10usize, 50, 200]),
        h in 0.05..0.5f64,
        seed in any::<u64>(),
    ) {
        let mut stream = RandomStream::new(seed);
        let sample = Sample::new(d.sample(&mut stream, n).unwrap()).unwrap();
        let cfg = EstimatorConfig::new(0.0, 1.0, h, base, Some(family)).unwrap();
        let values = evaluate_grid(&sample, &cfg, &uniform_grid(0.0, 1.0, 1001)).unwrap();
        prop_assert!(is_proper(&values, 1e-12));
        prop_assert_eq!(values[0], 0.0);
        prop_assert_eq!(values[values.len() - 1], 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ise_is_additive_over_regions(d in mixture(), family in variant(), seed in any::<u64>(), cut in 0.1..0.9f64) {
        let mut stream = RandomStream::new(seed);
        let sample = Sample::new(d.sample(&mut stream, 50).unwrap()).unwrap();
        let cfg = EstimatorConfig::new(0.0, 1.0, 0.2, BaseKernel::Epanechnikov, Some(family)).unwrap();
        let whole = ise(&sample, &cfg, &d, (0.0, 1.0)).unwrap();
        let parts = ise(&sample, &cfg, &d, (0.0, cut)).unwrap() + ise(&sample, &cfg, &d, (cut, 1.0)).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-6 * whole + 1e-12);
    }
}

fn mean_sup_error(n: usize, reps: u64) -> f64 {
    let d: Distribution = BetaMixture::new(0.0, 2.0).unwrap().into();
    let h = (n as f64).powf(-0.5);
    let cfg = EstimatorConfig::new(
        0.0,
        1.0,
        h,
        BaseKernel::Epanechnikov,
        Some(BoundaryVariant::K3),
    )
    .unwrap();
    let grid = uniform_grid(0.0, 1.0, 1001);
    let mut total = 0.0;
    for r in 0..reps {
        let mut stream = RandomStream::for_replicate(77, r);
        let sample = Sample::new(d.sample(&mut stream, n).unwrap()).unwrap();
        let values = evaluate_grid(&sample, &cfg, &grid).unwrap();
        total += grid
            .iter()
            .zip(values)
            .map(|(x, v)| (v - d.cdf(*x)).abs())
            .fold(0.0, f64::max);
    }
    total / reps as f64
}

#[test]
fn sup_norm_error_shrinks_with_n() {
    let small = mean_sup_error(100, 100);
    let large = mean_sup_error(400, 100);
    // Roughly n^{-1/2}: quadrupling n should about halve the error.
    assert!(large < 0.75 * small, "n=100: {small}, n=400: {large}");
}
