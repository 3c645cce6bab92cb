mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vibstring::ambarzumyan::{self, CheckOptions, Extremum};
use vibstring::analysis::{self, SignClass, CURVE_TOL};
use vibstring::eigen::{self, EigenOptions, Weight};
use vibstring::ivp;
use vibstring::poly::Poly;
use vibstring::problem::{ratio, POSITIVITY_FLOOR};
use vibstring::{CoefficientFn, Error, SpectralProblem};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 1..=max_len)
}

/// Piecewise polynomial on `[0, 1]` with up to three pieces.
fn coefficient_fn() -> impl Strategy<Value = CoefficientFn> {
    (prop::collection::vec(0.1f64..0.9, 0..3), prop::collection::vec(coeffs(4), 3)).prop_map(|(mut cuts, polys)| {
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 0.05);
        let mut breakpoints = vec![0.0];
        breakpoints.extend(cuts);
        breakpoints.push(1.0);
        let segments = polys.into_iter().take(breakpoints.len() - 1).map(Poly::new).collect();
        CoefficientFn::new(breakpoints, segments).unwrap()
    })
}

fn away_from_breaks(f: &CoefficientFn, x: f64) -> bool {
    f.breakpoints().iter().all(|b| (b - x).abs() > 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn display_parse_round_trip(f in coefficient_fn(), x in 0.0f64..1.0) {
        let text = f.to_string();
        let g = CoefficientFn::parse(&text, (0.0, 1.0)).unwrap();
        prop_assert_eq!(g.breakpoints(), f.breakpoints());
        let (a, b) = (f.eval(x).unwrap(), g.eval(x).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{} vs {} for {}", a, b, text);
    }

    #[test]
    fn extremum_bounds_samples(f in coefficient_fn()) {
        let (lo, hi) = f.extremum();
        for i in 0..=200 {
            let v = f.eval(i as f64 / 200.0).unwrap();
            prop_assert!(lo - 1e-9 <= v && v <= hi + 1e-9, "{} outside [{}, {}]", v, lo, hi);
        }
    }

    #[test]
    fn ratio_of_density_with_itself_is_one(seed in any::<u64>()) {
        let p = common::random_density(&mut rng(seed));
        let r = ratio(&p, &p, 33).unwrap();
        prop_assert!((r.min - 1.0).abs() < 1e-14 && (r.max - 1.0).abs() < 1e-14);
        prop_assert!(r.samples.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn ratio_extrema_bound_samples(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (pa, pb) = (common::random_density(&mut g), common::random_density(&mut g));
        let r = ratio(&pa, &pb, 401).unwrap();
        for v in &r.samples.values {
            prop_assert!(r.min - 1e-12 <= *v && *v <= r.max + 1e-12);
        }
    }

    #[test]
    fn compose_affine_matches_evaluation(c in coeffs(6), a in -2.0f64..2.0, b in -2.0f64..2.0, x in -1.0f64..1.0) {
        let p = Poly::new(c);
        let direct = p.eval(a + b * x);
        let composed = p.compose_affine(a, b).eval(x);
        prop_assert!((direct - composed).abs() <= 1e-9 * direct.abs().max(1.0));
    }

    #[test]
    fn reflect_mirrors_values(f in coefficient_fn(), x in 0.0f64..1.0) {
        prop_assume!(away_from_breaks(&f, x) && away_from_breaks(&f, 1.0 - x));
        let r = f.reflect();
        prop_assert_eq!(r.interval(), f.interval());
        let (a, b) = (r.eval(x).unwrap(), f.eval(1.0 - x).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
        prop_assert_eq!(r.reflect().breakpoints().len(), f.breakpoints().len());
    }

    #[test]
    fn roots_are_zeros(c in coeffs(6)) {
        let p = Poly::new(c);
        prop_assume!(!p.is_zero());
        let dp = p.derivative();
        let scale: f64 = p.coeffs().iter().map(|c| c.abs()).sum();
        let roots = p.roots_in(-1.0, 1.0);
        for w in roots.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for r in roots {
            let slope = dp.eval(r).abs().max(1e-3 * scale);
            prop_assert!(p.eval(r).abs() <= 1e-9 * scale.max(slope), "p({}) = {}", r, p.eval(r));
        }
    }

    #[test]
    fn parse_density_enforces_floor(c in coeffs(3)) {
        let p = CoefficientFn::polynomial(c.clone(), 0.0, 1.0).unwrap();
        let text = p.to_string();
        let accepted = CoefficientFn::parse_density(&text, (0.0, 1.0), POSITIVITY_FLOOR).is_ok();
        prop_assert_eq!(accepted, p.extremum().0 >= POSITIVITY_FLOOR);
    }

    #[test]
    fn indicator_vanishes_on_curve(alpha in PI / 4.0..PI) {
        let beta = analysis::curve_beta(alpha).unwrap();
        prop_assert!((0.0..PI).contains(&beta));
        prop_assert!(analysis::curve_indicator(alpha, beta).abs() <= CURVE_TOL);
        prop_assert_eq!(analysis::classify_lambda0(alpha, beta).unwrap(), SignClass::Zero);
        let mode = analysis::zero_mode(alpha, beta).unwrap();
        let (left, right) = mode.boundary_residuals(alpha, beta);
        prop_assert!(left.abs() < 1e-14 && right.abs() < 1e-14);
        prop_assert!(analysis::distance_to_curve(alpha, beta) < 1e-9);
    }

    #[test]
    fn zero_mode_rejected_off_curve(alpha in 0.01f64..PI, beta in 0.0f64..PI - 0.01) {
        prop_assume!(analysis::distance_to_curve(alpha, beta) > 1e-3);
        prop_assert!(matches!(analysis::zero_mode(alpha, beta), Err(Error::Domain(_))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prufer_and_cartesian_agree(seed in any::<u64>(), lambda in -40.0f64..200.0) {
        let mut g = rng(seed);
        let p = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        let prob = SpectralProblem::string(p, alpha, beta).unwrap();
        let tol = EigenOptions::default().ivp;
        let cart = ivp::integrate_cartesian(&prob, lambda, tol).unwrap();
        let pruf = ivp::integrate_prufer(&prob, lambda, tol).unwrap().to_cartesian();
        let scale = cart.u.hypot(cart.du);
        prop_assert!((cart.u - pruf.u).abs() <= 1e-8 * scale);
        prop_assert!((cart.du - pruf.du).abs() <= 1e-8 * scale);
    }

    #[test]
    fn prufer_angle_never_falls_below_multiples_of_pi(seed in any::<u64>(), lambda in 0.0f64..300.0) {
        let mut g = rng(seed);
        let p = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        let prob = SpectralProblem::string(p, alpha, beta).unwrap();
        let trace = ivp::prufer_trace(&prob, lambda, 65, EigenOptions::default().ivp).unwrap();
        // theta' = 1 whenever sin(theta) = 0, so theta never crosses k*pi downwards
        let mut floor = (trace[0].theta / PI).floor();
        for s in &trace[1..] {
            let k = (s.theta / PI).floor();
            prop_assert!(k >= floor, "theta fell from sheet {} to {}", floor, k);
            floor = k;
        }
    }

    #[test]
    fn oscillation_count_is_monotone(seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        let prob = SpectralProblem::string(p, alpha, beta).unwrap();
        let o = EigenOptions::default();
        let counts: Vec<usize> = (0..40)
            .map(|i| eigen::oscillation_count(&prob, -50.0 + 10.0 * i as f64, &o).unwrap())
            .collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{:?}", counts);
    }

    #[test]
    fn spectrum_is_strictly_increasing(seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        let prob = SpectralProblem::string(p, alpha, beta).unwrap();
        let values = eigen::spectrum(&prob, 6, &EigenOptions::default()).unwrap();
        prop_assert!(values.windows(2).all(|w| w[0] < w[1]), "{:?}", values);
    }

    #[test]
    fn spectrum_is_mirror_invariant(seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        prop_assume!(beta > 1e-3);
        let prob = SpectralProblem::string(p, alpha, beta).unwrap();
        let o = EigenOptions::default();
        let direct = eigen::spectrum(&prob, 4, &o).unwrap();
        let mirrored = eigen::spectrum(&prob.reflected(), 4, &o).unwrap();
        for (a, b) in direct.iter().zip(&mirrored) {
            prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{} vs {}", a, b);
        }
    }

    #[test]
    fn scaling_the_density_scales_the_spectrum(seed in any::<u64>(), c in 0.2f64..5.0) {
        let mut g = rng(seed);
        let p = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        let o = EigenOptions::default();
        let base = eigen::spectrum(&SpectralProblem::string(p.clone(), alpha, beta).unwrap(), 3, &o).unwrap();
        let scaled = eigen::spectrum(&SpectralProblem::string(p.scale(c), alpha, beta).unwrap(), 3, &o).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!((a / c - b).abs() <= 1e-8 * a.abs().max(1.0), "{} / {} vs {}", a, c, b);
        }
    }

    #[test]
    fn eigenfunctions_are_orthonormal_with_n_zeros(seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = common::random_smooth_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        let prob = SpectralProblem::string(p.clone(), alpha, beta).unwrap();
        let o = EigenOptions::default();
        let pairs: Vec<_> = (0..4).map(|n| eigen::eigenfunction(&prob, n, 1025, &o).unwrap()).collect();
        for (i, a) in pairs.iter().enumerate() {
            prop_assert_eq!(a.interior_zeros(), i);
            for b in &pairs[i..] {
                let ip = eigen::inner_product(&a.u(), &b.u(), Weight::Coefficient(&p)).unwrap();
                let expected = if a.n == b.n { 1.0 } else { 0.0 };
                prop_assert!((ip - expected).abs() < 1e-6, "<u{}, u{}> = {}", a.n, b.n, ip);
            }
        }
    }

    #[test]
    fn eigenfunctions_satisfy_the_equation(seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = common::random_smooth_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        let prob = SpectralProblem::string(p.clone(), alpha, beta).unwrap();
        let pair = eigen::eigenfunction(&prob, 2, 2049, &EigenOptions::default()).unwrap();
        let s = &pair.samples;
        let h = s[1].x - s[0].x;
        let scale = pair.u().max_abs() * pair.value.abs().max(1.0) * p.extremum().1;
        for i in 1..s.len() - 1 {
            let second = (s[i + 1].u - 2.0 * s[i].u + s[i - 1].u) / (h * h);
            let rhs = -pair.value * p.eval(s[i].x).unwrap() * s[i].u;
            prop_assert!((second - rhs).abs() <= 1e-3 * scale, "x = {}: {} vs {}", s[i].x, second, rhs);
        }
        let (first, last) = (s[0], s[s.len() - 1]);
        prop_assert!((first.u * alpha.cos() + first.du * alpha.sin()).abs() < 1e-8 * scale);
        prop_assert!((last.u * beta.cos() + last.du * beta.sin()).abs() < 1e-8 * scale);
    }

    #[test]
    fn bounds_contain_ground_state(seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        let o = EigenOptions::default();
        let b = analysis::lambda0_bounds(&p, alpha, beta, &o).unwrap();
        let value = eigen::eigenvalue(&SpectralProblem::string(p, alpha, beta).unwrap(), 0, &o).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.contains(value, 1e-8 * value.abs().max(1.0)), "{} not in [{}, {}]", value, b.lower, b.upper);
    }

    #[test]
    fn classification_matches_ground_state_sign(seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        prop_assume!(analysis::distance_to_curve(alpha, beta) > 0.05);
        let class = analysis::classify_lambda0(alpha, beta).unwrap();
        let value = eigen::eigenvalue(&SpectralProblem::string(p, alpha, beta).unwrap(), 0, &EigenOptions::default()).unwrap();
        prop_assert!(class.agrees_with(value, 1e-9), "{} at ({}, {}) with lambda_0 = {}", class, alpha, beta, value);
    }

    #[test]
    fn ground_state_vanishes_on_curve(seed in any::<u64>(), alpha in PI / 4.0..PI) {
        let p = common::random_density(&mut rng(seed));
        let beta = analysis::curve_beta(alpha).unwrap();
        let value = eigen::eigenvalue(&SpectralProblem::string(p, alpha, beta).unwrap(), 0, &EigenOptions::default()).unwrap();
        prop_assert!(value.abs() < 1e-8, "{}", value);
    }

    #[test]
    fn proportional_densities_pass_extremal_check(seed in any::<u64>(), c in 0.3f64..4.0, max in any::<bool>()) {
        let mut g = rng(seed);
        let p_ref = common::random_density(&mut g);
        let (alpha, beta) = common::random_angles(&mut g);
        prop_assume!(analysis::distance_to_curve(alpha, beta) > 0.02);
        let which = if max { Extremum::Max } else { Extremum::Min };
        let v = ambarzumyan::check_extremal(&p_ref.scale(c), &p_ref, alpha, beta, which, &CheckOptions::default()).unwrap();
        prop_assert!(v.satisfied, "residual {} tolerance {}", v.residual, v.tolerance);
        prop_assert!((v.scale_factor - 1.0 / c).abs() < 1e-7 / c);
        prop_assert!(v.reconstruction_residual.unwrap() < 1e-6 * c);
    }

    #[test]
    fn shifted_potentials_pass_extremal_check(seed in any::<u64>(), shift in -3.0f64..3.0) {
        let mut g = rng(seed);
        let q_ref = common::random_potential(&mut g, 5.0);
        let (gamma, delta) = common::random_angles(&mut g);
        let v = ambarzumyan::sl_check_extremal(&q_ref.add_constant(shift), &q_ref, gamma, delta, Extremum::Max, &CheckOptions::default()).unwrap();
        prop_assert!(v.satisfied, "residual {} tolerance {}", v.residual, v.tolerance);
        prop_assert!((v.scale_factor - shift).abs() < 1e-7);
    }
}

#[test]
fn curve_pairs_are_excluded_from_checks() {
    let p = CoefficientFn::constant(2.0, 0.0, 1.0).unwrap();
    let p_ref = CoefficientFn::constant(1.0, 0.0, 1.0).unwrap();
    for alpha in [PI / 4.0, PI / 3.0, PI / 2.0, 2.0, 3.0] {
        let beta = analysis::curve_beta(alpha).unwrap();
        let o = CheckOptions::default();
        assert!(matches!(
            ambarzumyan::check_extremal(&p, &p_ref, alpha, beta, Extremum::Max, &o),
            Err(Error::CurveExcluded { .. })
        ));
        assert!(matches!(
            ambarzumyan::check_weighted_mean(&p, &p_ref, alpha, beta, &o),
            Err(Error::CurveExcluded { .. })
        ));
    }
}

#[test]
fn spliced_eigenfunction_far_below_the_potential() {
    // Robin end with cot(gamma) ~ 10 binds a ground state near -100.
    let q = CoefficientFn::zero(0.0, PI);
    let prob = SpectralProblem::sturm_liouville(q, 0.1, PI / 2.0).unwrap();
    let o = EigenOptions::default();
    let pair = eigen::eigenfunction(&prob, 0, 4097, &o).unwrap();
    assert!(pair.value < -90.0, "{}", pair.value);
    let kappa = (-pair.value).sqrt();
    // exact shape cosh(kappa (pi - s)), normalized in L2
    let exact: Vec<f64> = pair.samples.iter().map(|s| (kappa * (PI - s.x)).cosh()).collect();
    let norm = {
        let f = vibstring::sampled::SampledFn::new(0.0, PI, exact.iter().map(|v| v * v).collect()).unwrap();
        f.integrate().sqrt()
    };
    assert_eq!(pair.interior_zeros(), 0);
    for (s, e) in pair.samples.iter().zip(&exact) {
        assert!((s.u - e / norm).abs() < 1e-7 * pair.u().max_abs(), "x = {}: {} vs {}", s.x, s.u, e / norm);
    }
    let tail = pair.samples.last().unwrap();
    assert!(tail.du.abs() < 1e-7 * pair.du().max_abs());
}
