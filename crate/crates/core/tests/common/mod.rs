//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// τ(1..=n_max) by multiplying out q ∏ (1 - q^n)^24 one binomial at a time.
pub fn brute_force_tau(n_max: usize) -> Vec<BigInt> {
    // c[i] is the coefficient of q^i in ∏(1 - q^n)^24, for i < n_max.
    let mut c = vec![BigInt::from(0); n_max];
    c[0] = BigInt::from(1);
    for n in 1..n_max {
        for _ in 0..24 {
            for i in (n..n_max).rev() {
                let prev = c[i - n].clone();
                c[i] -= prev;
            }
        }
    }
    c
}

/// Exponents m_{kl} for k <= 11, as tabulated in the literature (blanks read as 0).
pub const REFERENCE_MKL: [&[i64]; 11] = [
    &[0, 1],
    &[0, 1],
    &[0, 1, 1],
    &[0, 2, 1, 1],
    &[1, 3, 3, 2, 1],
    &[1, 7, 6, 5, 2, 1],
    &[5, 13, 15, 12, 7, 3, 1],
    &[9, 31, 33, 31, 18, 10, 3, 1],
    &[25, 67, 84, 74, 52, 29, 12, 4, 1],
    &[55, 163, 198, 192, 137, 85, 39, 16, 4, 1],
    &[144, 383, 500, 483, 375, 240, 127, 55, 19, 5, 1],
];

/// Composite Simpson rule on [a, b] with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += f(a + i as f64 * h) * w;
    }
    s * (h / 3.0)
}

/// J_n(z) for integer n by Bessel's integral (1/π) ∫_0^π cos(nτ - z sin τ) dτ.
/// The integrand is smooth and periodic, so the trapezoid rule converges
/// geometrically.
pub fn bessel_j_integral(n: u32, z: f64, points: usize) -> f64 {
    let h = PI / points as f64;
    let f = |t: f64| (n as f64 * t - z * t.sin()).cos();
    let mut s = 0.5 * (f(0.0) + f(PI));
    for i in 1..points {
        s += f(i as f64 * h);
    }
    s * h / PI
}

/// Schläfli's integral for complex order:
/// J_ν(z) = (1/π)∫_0^π cos(ντ - z sin τ)dτ - (sin νπ/π)∫_0^∞ e^{-z sinh t - νt} dt,
/// I_ν(z) = (1/π)∫_0^π e^{z cos τ} cos(ντ)dτ - (sin νπ/π)∫_0^∞ e^{-z cosh t - νt} dt.
pub fn bessel_schlafli(nu: Complex64, z: f64, modified: bool) -> Complex64 {
    let n = 20_000;
    let first = if modified {
        simpson(|t| (z * t.cos()).exp() * (nu * t).cos(), 0.0, PI, n)
    } else {
        simpson(|t| (nu * t - z * t.sin()).cos(), 0.0, PI, n)
    };
    let upper = if modified { 6.0 } else { 8.0 };
    let second = simpson(
        |t| {
            let e = if modified { z * t.cosh() } else { z * t.sinh() };
            (-e - nu * t).exp()
        },
        0.0,
        upper,
        n,
    );
    first / PI - (nu * PI).sin() / PI * second
}

/// j of the principal series π_{0,ir} from the Schläfli oracle.
pub fn j_principal_oracle(r: f64, x: f64) -> f64 {
    let root = x.abs().sqrt();
    let z = 4.0 * PI * root;
    let nu = Complex64::new(0.0, 2.0 * r);
    let modified = x < 0.0;
    let diff = bessel_schlafli(nu, z, modified) - bessel_schlafli(-nu, z, modified);
    let v = Complex64::new(-PI * root, 0.0) / Complex64::new(0.0, (PI * r).sinh()) * diff;
    v.re
}

/// Satake parameter α with α + 1/α = t.
pub fn alpha_from_t(t: f64) -> Complex64 {
    let disc = Complex64::new(t * t - 4.0, 0.0).sqrt();
    (Complex64::new(t, 0.0) + disc) / 2.0
}

/// L(s, π_p, Sym^{2l}) directly from α: ∏_{i=-l}^{l} (1 - α^{2i} p^{-s})^{-1}.
pub fn sym_power_from_alpha(alpha: Complex64, p: u64, l: usize, s: f64) -> Complex64 {
    let x = (p as f64).powf(-s);
    let mut prod = Complex64::new(1.0, 0.0);
    for i in -(l as i32)..=(l as i32) {
        prod *= Complex64::new(1.0, 0.0) - alpha.powi(2 * i) * x;
    }
    prod.inv()
}

/// Proptest settings for integration tests (no regression files next to sources).
pub fn proptest_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}
