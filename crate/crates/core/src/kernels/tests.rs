use super::*;
use crate::numerics::airy::AIP0;
use crate::numerics::gauss_legendre;
use approx::assert_abs_diff_eq;
use proptest::prelude::*;

#[test]
fn sine_kernel_examples() {
    assert_eq!(sine_kernel(0.3, 0.3), 1.0);
    assert_abs_diff_eq!(sine_kernel(1.7, 0.7), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(sine_kernel(1.0, 0.5), 2.0 / PI, epsilon = 1e-15);
    // the series branch joins the closed form at |π(x − y)| = 1e−4
    for x in [0.999e-4, 1.001e-4] {
        let u = x / PI;
        assert_abs_diff_eq!(sine_kernel(u, 0.0), x.sin() / x, epsilon = 1e-15);
    }
}

#[test]
fn airy_kernel_examples() {
    assert_abs_diff_eq!(airy_kernel(0.0, 0.0), AIP0 * AIP0, epsilon = 1e-15);
    assert_abs_diff_eq!(airy_kernel(0.0, 0.0), 0.066987, epsilon = 1e-6);
    for (x, y) in [(0.3, -1.2), (2.0, 4.5), (-3.1, 0.7)] {
        assert_abs_diff_eq!(airy_kernel(x, y), airy_kernel(y, x), epsilon = 1e-14);
    }
    assert!(airy_kernel(30.0, 31.0).abs() < 1e-40);
    // near-diagonal branch is continuous with the quotient
    let (x, d) = (0.8, 1e-7);
    assert_abs_diff_eq!(airy_kernel(x, x + 0.99 * d), airy_kernel(x, x + 1.01 * d), epsilon = 1e-8);
}

#[test]
fn airy_kernel_diagonal_is_the_tail_integral() {
    // K(x, x) = ∫₀^∞ Ai(x + t)² dt
    for x in [-2.0, 0.0, 1.5] {
        let tail = gauss_legendre(80).integrate(0.0, 20.0, |t| airy_ai(x + t).ai.powi(2));
        assert_abs_diff_eq!(airy_kernel(x, x), tail, epsilon = 1e-12);
    }
}

#[test]
fn empty_interval_is_identity() {
    let r = fredholm_det(&GapProblem::sine(0.4, 0.4, 16)).unwrap();
    assert_eq!(r.value, 1.0);
    assert_eq!(r.err_estimate, 0.0);
}

#[test]
fn small_interval_trace_term() {
    // E(s) = 1 − s + O(s⁴)
    let mut prev = f64::INFINITY;
    for s in [1e-1, 1e-2, 1e-3] {
        let e = fredholm_det(&GapProblem::sine(0.0, s, 16)).unwrap().value;
        let ratio = (1.0 - e - s).abs() / (s * s);
        assert!(ratio < prev);
        prev = ratio;
    }
    assert!(prev < 1e-4);
}

#[test]
fn sine_self_convergence() {
    let r = fredholm_det(&GapProblem::sine(0.0, 1.0, 40)).unwrap();
    assert!(r.err_estimate < 1e-10, "{r:?}");
    let fine = fredholm_det(&GapProblem::sine(0.0, 1.0, 80)).unwrap();
    assert_abs_diff_eq!(r.value, fine.value, epsilon = 1e-10);
}

#[test]
fn airy_self_convergence() {
    let r = fredholm_det(&GapProblem::airy(0.0, 40)).unwrap();
    assert!(r.err_estimate < 1e-9, "{r:?}");
    // F₂(0) ≈ 0.96937
    assert_abs_diff_eq!(r.value, 0.969_372, epsilon = 1e-5);
}

#[test]
fn invalid_problems() {
    let bad = [
        GapProblem::sine(1.0, 0.0, 16),
        GapProblem::sine(0.0, f64::INFINITY, 16),
        GapProblem::sine(0.0, 1.0, 4),
        GapProblem::sine(0.0, 1.0, 16).with_lambda(1.5),
        GapProblem::sine(0.0, 1.0, 16).with_lambda(0.0),
    ];
    for p in bad {
        assert!(matches!(fredholm_det(&p), Err(KernelsError::InvalidProblem(_))), "{p:?}");
    }
}

#[test]
fn truncation_point() {
    let x = airy_truncation(0.0).unwrap();
    assert!(airy_ai(x).ai.powi(2) < AIRY_TAIL && airy_ai(x - 0.125).ai.powi(2) >= AIRY_TAIL);
    assert_eq!(airy_truncation(50.0).unwrap(), 50.0);
}

#[test]
fn monotone_in_interval() {
    let mut prev = 1.0;
    for k in 1..=20 {
        let v = fredholm_det(&GapProblem::sine(0.0, 0.15 * f64::from(k), 32)).unwrap().value;
        assert!(v <= prev + 1e-14);
        prev = v;
    }
    let mut prev = 0.0;
    for k in 0..=24 {
        let v = tw_cdf(-7.0 + 0.5 * f64::from(k)).unwrap();
        assert!(v >= prev - 1e-14);
        prev = v;
    }
}

#[test]
fn gaudin_examples() {
    assert_abs_diff_eq!(gaudin_density(0.0), 0.0, epsilon = 1e-6);
    // level repulsion: p(s) ≈ (π²/3) s² near 0
    let s = 0.05;
    assert_abs_diff_eq!(gaudin_density(s) / (s * s), PI * PI / 3.0, epsilon = 2e-2);
}

#[test]
fn gaudin_normalization_and_mean() {
    let rule = gauss_legendre(96);
    let (xs, ws) = rule.mapped(0.0, 6.0);
    let (mut mass, mut mean) = (0.0, 0.0);
    for (&s, &w) in xs.iter().zip(&ws) {
        let p = gaudin_density(s);
        assert!(p >= -1e-6, "p({s}) = {p}");
        mass += w * p;
        mean += w * s * p;
    }
    assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-4);
    assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-3);
}

#[test]
fn gaudin_cdf_matches_density() {
    for s in [0.5, 1.0, 2.0] {
        let int = gauss_legendre(40).integrate(0.0, s, gaudin_density);
        assert_abs_diff_eq!(gaudin_cdf(s), int, epsilon = 1e-6);
    }
    assert_eq!(gaudin_cdf(0.0), 0.0);
    assert_abs_diff_eq!(gaudin_cdf(5.0), 1.0, epsilon = 1e-8);
}

#[test]
fn painleve_v_matches_nystrom() {
    let mut worst: f64 = 0.0;
    for k in 0..=19 {
        let s = 0.1 + 0.1 * f64::from(k);
        let pv = painleve_v_sigma(s, 1.0).unwrap();
        let ny = fredholm_det(&GapProblem::sine(0.0, s, 40)).unwrap().value.ln();
        worst = worst.max((pv - ny).abs());
    }
    assert!(worst < 1e-6, "{worst}");
    let pv = painleve_v_sigma(1.0, 0.5).unwrap();
    let ny = fredholm_det(&GapProblem::sine(0.0, 1.0, 40).with_lambda(0.5)).unwrap().value.ln();
    assert_abs_diff_eq!(pv, ny, epsilon = 1e-6);
}

#[test]
fn painleve_v_small_interval() {
    assert!(painleve_v_sigma(1e-6, 1.0).unwrap().abs() < 1e-5);
    assert!(painleve_v_sigma(0.0, 1.0).is_err());
    assert!(painleve_v_sigma(1.0, 2.0).is_err());
}

#[test]
fn hastings_mcleod_examples() {
    assert_abs_diff_eq!(painleve_ii_hm(HM_START).unwrap(), airy_ai(HM_START).ai, epsilon = 0.0);
    for k in 0..=64 {
        let s = -8.0 + 0.25 * f64::from(k);
        assert!(painleve_ii_hm(s).unwrap() > 0.0, "q({s})");
    }
    let ratio = painleve_ii_hm(6.0).unwrap() / airy_ai(6.0).ai;
    assert_abs_diff_eq!(ratio, 1.0, epsilon = 1e-6);
    assert!(painleve_ii_hm(-9.0).is_err());
    // q(s) ~ sqrt(−s/2) for s → −∞
    let s = -8.0;
    assert_abs_diff_eq!(painleve_ii_hm(s).unwrap() / (-s / 2.0).sqrt(), 1.0, epsilon = 0.01);
}

#[test]
fn tracy_widom_routes_agree() {
    let mut worst: f64 = 0.0;
    for k in 0..=28 {
        let s = -5.0 + 0.25 * f64::from(k);
        let (f, p) = tw_cdf_both(s).unwrap();
        worst = worst.max((f - p).abs());
    }
    assert!(worst < 1e-5, "{worst}");
}

#[test]
fn tracy_widom_limits() {
    assert!(tw_cdf(-8.0).unwrap() < 1e-3);
    assert_abs_diff_eq!(tw_cdf(10.0).unwrap(), 1.0, epsilon = 1e-3);
    assert_abs_diff_eq!(tw_cdf_painleve(10.0).unwrap(), 1.0, epsilon = 1e-3);
    // mean of the β=2 law ≈ −1.7711
    let rule = gauss_legendre(80);
    let mean = -8.0 + rule.integrate(-8.0, 6.0, |s| 1.0 - tw_cdf(s).unwrap());
    assert_abs_diff_eq!(mean, -1.771_086_8, epsilon = 1e-4);
}

#[test]
fn wigner_surmise_moments() {
    let rule = gauss_legendre(80);
    assert_abs_diff_eq!(rule.integrate(0.0, 8.0, wigner_surmise), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(rule.integrate(0.0, 8.0, |x| x * wigner_surmise(x)), 1.0, epsilon = 1e-12);
    let mode = (2.0 / PI).sqrt();
    assert_abs_diff_eq!(mode, 0.79788, epsilon = 1e-5);
    let h = 1e-4;
    assert!(wigner_surmise(mode) > wigner_surmise(mode - h) && wigner_surmise(mode) > wigner_surmise(mode + h));
}

#[test]
fn cluster_examples() {
    assert_abs_diff_eq!(cluster_w2(1.0, Ensemble::Hermitian), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(cluster_w2(0.5, Ensemble::Hermitian), 1.0 - (2.0 / PI).powi(2), epsilon = 1e-15);
    assert_abs_diff_eq!(cluster_w2(0.5, Ensemble::Hermitian), 0.59472, epsilon = 1e-5);
    for e in [Ensemble::Hermitian, Ensemble::RealSymmetric, Ensemble::Quaternionic] {
        assert_abs_diff_eq!(cluster_w2(60.25, e), 1.0, epsilon = 1e-3);
        // all three vanish at coincidence
        assert!(cluster_w2(1e-3, e).abs() < 1e-2, "{e:?}");
    }
}

#[test]
fn cluster_small_r_powers() {
    // repulsion exponents: W₂ ~ r^β with β = 1, 2, 4
    let ratio = |e: Ensemble, p: i32| cluster_w2(0.02, e) / cluster_w2(0.01, e) / 2f64.powi(p);
    assert_abs_diff_eq!(ratio(Ensemble::RealSymmetric, 1), 1.0, epsilon = 0.02);
    assert_abs_diff_eq!(ratio(Ensemble::Hermitian, 2), 1.0, epsilon = 0.02);
    assert_abs_diff_eq!(ratio(Ensemble::Quaternionic, 4), 1.0, epsilon = 0.02);
}

#[test]
fn gap_problem_json() {
    let p = GapProblem::sine(0.0, 1.0, 40).with_lambda(0.5);
    let s = serde_json::to_string(&p).unwrap();
    assert_eq!(s, r#"{"kind":"sine","interval":[0.0,1.0],"lambda":0.5,"order":40}"#);
    assert_eq!(serde_json::from_str::<GapProblem>(&s).unwrap(), p);
}

proptest! {
    #[test]
    fn hermitian_identity(r in 1e-6f64..50.0) {
        prop_assert_eq!(cluster_w2(r, Ensemble::Hermitian) + sinc_pi(r).powi(2), 1.0);
    }

    #[test]
    fn sine_determinant_in_unit_interval(a in -3.0f64..3.0, len in 0.01f64..2.5) {
        let v = fredholm_det(&GapProblem::sine(a, a + len, 24)).unwrap().value;
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-12);
        // translation invariance of the sine kernel
        let w = fredholm_det(&GapProblem::sine(0.0, len, 24)).unwrap().value;
        prop_assert!((v - w).abs() < 1e-12);
    }
}
