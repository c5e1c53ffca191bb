mod common;

use std::f64::consts::PI;

use period_invariant::archimedean::{self, BesselEvalConfig, Regime};

#[test]
fn regimes_agree_in_crossover_window() {
    let mut worst = 0.0f64;
    for order in 0..=15u32 {
        let mut z = 14.0;
        while z <= 18.0 + 1e-12 {
            let s = archimedean::bessel_j_series(order, z, 500);
            let a = archimedean::bessel_j_asymptotic(order, z);
            worst = worst.max((s.value - a.value).abs());
            z += 0.05;
        }
    }
    assert!(worst < 1e-8, "largest disagreement {worst:e}");
}

#[test]
fn integer_order_matches_bessel_integral() {
    let cfg = BesselEvalConfig::default();
    let grid = [0u32, 1, 2, 5, 11, 20]
        .into_iter()
        .flat_map(|n| [0.3, 1.0, 4.0 * PI, 15.9, 16.1, 30.0, 55.0].map(|z| (n, z)))
        .chain([(40, 1.0), (40, 10.0), (40, 30.0), (100, 50.0)]);
    for (order, z) in grid {
        let got = archimedean::bessel_j(order, z, &cfg).unwrap();
        let want = common::bessel_j_integral(order, z, 400);
        assert!(
            (got.value - want).abs() < 1e-11,
            "J_{order}({z}): {} vs {want}",
            got.value
        );
        assert!((got.value - want).abs() <= got.error_bound + 1e-13);
    }
}

#[test]
fn archimedean_constant_matches_quadrature() {
    let v = archimedean::archimedean_constant(6).unwrap();
    let want = 2.0 * PI * common::bessel_j_integral(11, 4.0 * PI, 400);
    assert!((v.value - want).abs() < 1e-12);
    assert!((v.value - 1.8305).abs() < 1e-4);
}

#[test]
fn principal_series_matches_schlafli() {
    for r in [0.25, 0.5, 1.0, 1.5] {
        for x in [-0.6, -0.2, -0.01, 0.01, 0.2, 0.6, 1.5] {
            let got = archimedean::j_principal(r, x, 1e-8).unwrap();
            let want = common::j_principal_oracle(r, x);
            assert!(
                (got.value - want).abs() < 1e-7 * want.abs().max(1e-2),
                "r = {r}, x = {x}: {} vs {want}",
                got.value
            );
        }
    }
}

#[test]
fn principal_series_is_even_in_r() {
    for x in [-0.5, 0.3, 2.0] {
        let a = archimedean::j_principal(0.8, x, 1e-8).unwrap().value;
        let b = archimedean::j_principal(-0.8, x, 1e-8).unwrap().value;
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn large_argument_uses_asymptotic_regime() {
    let cfg = BesselEvalConfig::default();
    let v = archimedean::bessel_j(3, 80.0, &cfg).unwrap();
    assert_eq!(v.regime, Regime::Asymptotic);
    let want = common::bessel_j_integral(3, 80.0, 800);
    assert!((v.value - want).abs() < 1e-12);
}

/// |j_{π_d}(x)| <= C_d x^{(2d+1)/4} on (0, 1], with C_d = (2π)^{2d} / (2d-1)!
/// from the leading term bound |J_n(z)| <= (z/2)^n / n!.
#[test]
fn small_x_envelope() {
    let cfg = BesselEvalConfig::default();
    for d in 1..=8u32 {
        let n = 2 * d - 1;
        let ln_c = 2.0 * d as f64 * (2.0 * PI).ln() - (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
        let c = ln_c.exp();
        let exponent = (2.0 * d as f64 + 1.0) / 4.0;
        for i in 1..=200 {
            let x = i as f64 / 200.0;
            let j = archimedean::j_discrete(d, x, &cfg).unwrap().value;
            assert!(
                j.abs() <= c * x.powf(exponent) * (1.0 + 1e-12),
                "d = {d}, x = {x}"
            );
        }
    }
}

#[test]
fn j_eleven_changes_sign_past_four_pi() {
    let cfg = BesselEvalConfig::default();
    let at = |z: f64| archimedean::bessel_j(11, z, &cfg).unwrap().value;
    assert!(at(4.0 * PI) > 0.0);
    // First zero j_{11,1} = 15.5898...
    assert!(at(15.58) > 0.0 && at(15.60) < 0.0);
}
