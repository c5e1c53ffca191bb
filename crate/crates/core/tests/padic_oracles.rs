mod common;

use std::f64::consts::TAU;

use num_complex::Complex64;
use period_invariant::padic::{self, LocallyConstantFn, PAdicPoint, UnramCharacter};
use proptest::prelude::*;

fn unit_samples(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, TAU * (j as f64 + 0.37) / n as f64))
        .collect()
}

#[test]
fn bessel_oracle_closed_form_and_stability() {
    for p in [2u64, 3, 5, 7, 11] {
        for b in unit_samples(16) {
            let base = padic::bessel_j1_oracle(p, b, 1).unwrap();
            let closed = padic::bessel_j1_closed_form(p, b);
            assert!((base - closed).norm() < 1e-10, "p = {p}, b = {b}");
            for n in 2..=3 {
                let v = padic::bessel_j1_oracle(p, b, n).unwrap();
                assert!((v - base).norm() < 1e-12, "p = {p}, b = {b}, N = {n}");
            }
        }
    }
}

#[test]
fn bessel_oracle_without_outer_shell() {
    // N = 0 drops the |x| = p shell, whose contribution is -b^{-1}/p.
    for p in [3u64, 7] {
        let b = Complex64::from_polar(1.0, 0.9);
        let v0 = padic::bessel_j1_oracle(p, b, 0).unwrap();
        let v1 = padic::bessel_j1_oracle(p, b, 1).unwrap();
        assert!((v1 - v0 + b.inv() / p as f64).norm() < 1e-12);
    }
}

#[test]
fn composition_returns_value_at_one() {
    for p in [2u64, 3, 5] {
        let chis = [
            UnramCharacter::trivial(),
            UnramCharacter::from_log(p, 0.0, 1.1).unwrap(),
            UnramCharacter::from_log(p, 0.25, 0.0).unwrap(),
            UnramCharacter::from_log(p, -0.25, 2.0).unwrap(),
        ];
        for m in 1..=3u32 {
            let basis = LocallyConstantFn::basis(p, m, -1..=2).unwrap();
            for chi in &chis {
                for f in &basis {
                    let r = padic::kirillov_compose_report(f, chi, m).unwrap();
                    assert!(r.stabilized, "p = {p}, m = {m}, f = {:?}", f.support);
                    assert!((r.value - r.expected).norm() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn composition_is_stable_past_the_level() {
    let f = LocallyConstantFn::indicator(3, 2, 0, 1).unwrap();
    let chi = UnramCharacter::from_log(3, 0.25, 0.3).unwrap();
    let values: Vec<_> = (2..=5)
        .map(|l| padic::kirillov_compose_at(&f, &chi, l).unwrap())
        .collect();
    for v in &values {
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }
}

#[test]
fn composition_examples() {
    let chi = UnramCharacter::trivial();
    let f = LocallyConstantFn::indicator(5, 1, 0, 1).unwrap();
    assert!((padic::kirillov_compose_oracle(&f, &chi, 1).unwrap() - 1.0).norm() < 1e-10);
    let f = LocallyConstantFn::shell_indicator(5, 1, 2).unwrap();
    assert!(padic::kirillov_compose_oracle(&f, &chi, 1).unwrap().norm() < 1e-10);
    let f = LocallyConstantFn::shell_indicator(2, 1, 0).unwrap();
    assert!((padic::kirillov_compose_oracle(&f, &chi, 1).unwrap() - 1.0).norm() < 1e-10);
}

#[test]
fn hecke_kernel_examples() {
    let units = LocallyConstantFn::shell_indicator(7, 1, 0).unwrap();
    let v = padic::whittaker_to_hecke_kernel(&units, &UnramCharacter::trivial());
    assert!((v - Complex64::new(6.0 / 7.0, 0.0)).norm() < 1e-15);
    let chi = UnramCharacter::new(Complex64::new(1.5, -0.5)).unwrap();
    let shell = LocallyConstantFn::shell_indicator(3, 2, 1).unwrap();
    let want = chi.value_at_p.inv() * (2.0 / 3.0);
    assert!((padic::whittaker_to_hecke_kernel(&shell, &chi) - want).norm() < 1e-14);
}

fn level_fn(p: u64, m: u32) -> impl Strategy<Value = LocallyConstantFn> {
    let q = p.pow(m);
    prop::collection::vec(((-2i32..=2), 1..q, -3.0f64..3.0, -3.0f64..3.0), 1..6).prop_map(
        move |entries| {
            let mut f = LocallyConstantFn::zero(p, m).unwrap();
            for (v, u, re, im) in entries {
                if u % p != 0 {
                    f.set(v, u, Complex64::new(re, im)).unwrap();
                }
            }
            f
        },
    )
}

proptest! {
    #![proptest_config(common::proptest_config(64))]

    #[test]
    fn composition_of_combinations(f in level_fn(3, 2), c in -0.25f64..0.25, th in 0.0f64..6.2) {
        let chi = UnramCharacter::from_log(3, c, th).unwrap();
        let v = padic::kirillov_compose_oracle(&f, &chi, 2).unwrap();
        prop_assert!((v - f.value_at_one()).norm() < 1e-10);
    }

    #[test]
    fn additive_character_is_a_root_of_unity(v in -4i32..4, u in 1u64..625) {
        prop_assume!(u % 5 != 0);
        let x = PAdicPoint::new(5, v, u, 4).unwrap();
        let psi = padic::additive_character(&x).unwrap();
        let order = 5u64.pow((-v).max(0) as u32) as i32;
        prop_assert!((psi.powi(order) - 1.0).norm() < 1e-12);
        let neg = padic::additive_character(&x.neg()).unwrap();
        prop_assert!((psi * neg - 1.0).norm() < 1e-12);
    }
}
