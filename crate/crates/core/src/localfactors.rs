//! Unramified local data at a finite prime and the closed-form local factors.
//!
//! All quantities are evaluated through t = α + α^{-1} and
//! s2 = t^2 - 2 = α^2 + α^{-2}, so unitary parameters never need complex
//! arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::qseries;

/// Satake data (α_p, α_p^{-1}) at an unramified prime, stored as t and s2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatakeData {
    pub p: u64,
    /// t = α + α^{-1}
    pub t: f64,
    /// s2 = t^2 - 2 = α^2 + α^{-2}
    pub s2: f64,
}

impl SatakeData {
    /// Any real t is accepted; |t| > 2 (non-unitary) is allowed but see
    /// [`SatakeData::is_unitary`].
    pub fn new(p: u64, t: f64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if !t.is_finite() {
            return Err(Error::invalid("t must be finite"));
        }
        Ok(Self {
            p,
            t,
            s2: t * t - 2.0,
        })
    }

    /// Data with α = e^{iθ}, i.e. t = 2 cos θ.
    pub fn from_angle(p: u64, theta: f64) -> Result<Self> {
        Self::new(p, 2.0 * theta.cos())
    }

    /// Data with prescribed s2 = α^2 + α^{-2} (t taken nonnegative).
    pub fn from_s2(p: u64, s2: f64) -> Result<Self> {
        if s2 < -2.0 {
            return Err(Error::invalid(format!("s2 = {s2} < -2 has no real t")));
        }
        let mut d = Self::new(p, (s2 + 2.0).sqrt())?;
        d.s2 = s2;
        Ok(d)
    }

    /// Satake data of the Ramanujan cusp form Δ at p.
    pub fn delta(p: u64) -> Result<Self> {
        Self::new(p, qseries::normalized_eigenvalue(p)?)
    }

    pub fn is_unitary(&self) -> bool {
        self.t.abs() <= 2.0
    }

    fn inv_p(&self) -> f64 {
        1.0 / self.p as f64
    }
}

/// Satake data of Δ at each listed prime.
pub fn delta_satake(primes: &[u64]) -> Result<Vec<SatakeData>> {
    let ts = qseries::normalized_eigenvalues(primes)?;
    primes
        .iter()
        .zip(ts)
        .map(|(&p, t)| SatakeData::new(p, t))
        .collect()
}

/// Local constant λ_p = 1 - (1 + α^2 + α^{-2}) / p.
pub fn lambda_p(d: &SatakeData) -> f64 {
    1.0 - (1.0 + d.s2) * d.inv_p()
}

/// L(1, π_p, Ad) = 1 / [(1 - 1/p)(1 - α^2/p)(1 - α^{-2}/p)].
pub fn adjoint_l_local(d: &SatakeData) -> Result<f64> {
    let x = d.inv_p();
    let denom = (1.0 - x) * (1.0 - d.s2 * x + x * x);
    if denom.abs() < 1e-300 {
        return Err(Error::Singular(format!(
            "adjoint factor at p = {} has a pole (s2 = {})",
            d.p, d.s2
        )));
    }
    Ok(1.0 / denom)
}

/// λ_p together with L(1, π_p, Ad) and the correction term Q_p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFactorReport {
    pub p: u64,
    pub lambda_p: f64,
    #[serde(rename = "adjoint_L")]
    pub adjoint_l: f64,
    /// λ_p · L(1, π_p, Ad)
    pub normalized: f64,
    #[serde(rename = "Q_term")]
    pub q_term: f64,
}

/// Evaluates both sides of λ_p L(1, π_p, Ad) = 1 - Q_p, with
/// Q_p = p^{-2} (1 + s2 - 1/p) L(1, π_p, Ad).
pub fn normalized_factor(d: &SatakeData) -> Result<LocalFactorReport> {
    let lam = lambda_p(d);
    let l = adjoint_l_local(d)?;
    let x = d.inv_p();
    let q_term = x * x * (1.0 + d.s2 - x) * l;
    Ok(LocalFactorReport {
        p: d.p,
        lambda_p: lam,
        adjoint_l: l,
        normalized: lam * l,
        q_term,
    })
}

/// 2cos(nθ) for n = 0..=n_max, via the Chebyshev recurrence in t = 2cos θ.
/// Valid for any real t (hyperbolic angle when |t| > 2).
fn chebyshev_traces(t: f64, n_max: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(2.0);
    if n_max >= 1 {
        c.push(t);
    }
    for n in 2..=n_max {
        let next = t * c[n - 1] - c[n - 2];
        c.push(next);
    }
    c
}

/// L(s, π_p, Sym^{2l}) = ∏_{i=-l}^{l} (1 - α^{2i} p^{-s})^{-1}, with conjugate
/// factors paired: (1 - p^{-s})^{-1} ∏_{i=1}^{l} (1 - 2cos(2iθ) p^{-s} + p^{-2s})^{-1}.
pub fn sym_power_l_local(d: &SatakeData, l: usize, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::invalid(format!(
            "need s > 0 so that p^-s < 1, got {s}"
        )));
    }
    let x = 1.0 / (d.p as f64).powf(s);
    let traces = chebyshev_traces(d.t, 2 * l);
    let mut prod = 1.0 - x;
    for i in 1..=l {
        // traces[2] is recomputed as t*t - 2, the same expression as s2.
        let c = if i == 1 { d.s2 } else { traces[2 * i] };
        let f = 1.0 - c * x + x * x;
        if f <= 0.0 {
            return Err(Error::Singular(format!(
                "Sym^{} factor {i} at p = {}, s = {s} is {f}",
                2 * l,
                d.p
            )));
        }
        prod *= f;
    }
    Ok(1.0 / prod)
}

/// Unramified Whittaker values W_0(p^n) = p^{-n/2} U_n(t/2) for n = 0..=n_max.
///
/// This is the Casselman–Shalika formula
/// W_0(p^n) = p^{-n/2} (α^{n+1} - α^{-(n+1)}) / (α - α^{-1}).
pub fn whittaker_unramified(d: &SatakeData, n_max: usize) -> Vec<f64> {
    let r = (d.p as f64).sqrt().recip();
    let x = d.inv_p();
    let mut w = Vec::with_capacity(n_max + 1);
    w.push(1.0);
    if n_max >= 1 {
        w.push(d.t * r);
    }
    for n in 2..=n_max {
        let next = d.t * r * w[n - 1] - x * w[n - 2];
        w.push(next);
    }
    w
}

/// Σ_{n=0}^{terms} W_0(p^n) X^n, the partial local Hecke zeta sum.
///
/// Terms are generated as U_n(t/2) y^n with y = X p^{-1/2}, which keeps them
/// bounded where X^n alone would overflow.
pub fn local_hecke_zeta_sum(d: &SatakeData, x: f64, terms: usize) -> Result<f64> {
    check_hecke_convergence(d, x)?;
    let y = x / (d.p as f64).sqrt();
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = 1.0;
    for _ in 0..terms {
        let next = d.t * y * cur - y * y * prev;
        sum += next;
        prev = cur;
        cur = next;
    }
    Ok(sum)
}

/// [(1 - α X p^{-1/2})(1 - α^{-1} X p^{-1/2})]^{-1} = [1 - t X p^{-1/2} + X^2/p]^{-1}.
pub fn local_hecke_closed_form(d: &SatakeData, x: f64) -> Result<f64> {
    check_hecke_convergence(d, x)?;
    let y = x / (d.p as f64).sqrt();
    Ok(1.0 / (1.0 - d.t * y + y * y))
}

fn check_hecke_convergence(d: &SatakeData, x: f64) -> Result<()> {
    // Largest |α^{±1}|: 1 on the unitary locus, otherwise the real root of
    // a^2 - |t| a + 1 = 0 that exceeds one.
    let alpha_max = if d.is_unitary() {
        1.0
    } else {
        (d.t.abs() + (d.t * d.t - 4.0).sqrt()) / 2.0
    };
    let ratio = alpha_max * x.abs() / (d.p as f64).sqrt();
    if !(ratio < 1.0) {
        return Err(Error::Divergent(format!(
            "|α X| p^(-1/2) = {ratio} >= 1 at p = {}",
            d.p
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn alpha(d: &SatakeData) -> Complex64 {
        Complex64::from_polar(1.0, (d.t / 2.0).acos())
    }

    #[test]
    fn lambda_examples() {
        let d = SatakeData::from_s2(5, 2.0).unwrap();
        assert!(close(lambda_p(&d), 0.4, 1e-15));
        let d2 = SatakeData::delta(2).unwrap();
        // 1 - (576 * 2^-11 - 1)/2
        assert!(close(lambda_p(&d2), 1.359375, 1e-14));
        for p in [2, 3, 7, 101] {
            let d = SatakeData::from_s2(p, -2.0).unwrap();
            assert!(close(lambda_p(&d), 1.0 + 1.0 / p as f64, 1e-15));
        }
    }

    #[test]
    fn adjoint_examples() {
        let d = SatakeData::from_s2(2, 2.0).unwrap();
        assert!(close(adjoint_l_local(&d).unwrap(), 8.0, 1e-15));
        let d = SatakeData::from_s2(3, -2.0).unwrap();
        assert!(close(adjoint_l_local(&d).unwrap(), 27.0 / 32.0, 1e-15));
    }

    #[test]
    fn adjoint_matches_complex_triple_product() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let d = SatakeData::delta(p).unwrap();
            let a = alpha(&d);
            let x = 1.0 / p as f64;
            let one = Complex64::new(1.0, 0.0);
            let denom = (1.0 - x) * (one - a * a * x) * (one - a.inv() * a.inv() * x);
            let oracle = denom.inv();
            assert!(oracle.im.abs() < 1e-14);
            let got = adjoint_l_local(&d).unwrap();
            assert!(got > 0.0);
            assert!(
                close(got, oracle.re, 1e-14),
                "p={p}: {got} vs {}",
                oracle.re
            );
        }
    }

    #[test]
    fn singular_adjoint_is_reported() {
        // 1 - s2/p + 1/p^2 = 0 at s2 = p + 1/p: far off the unitary locus.
        let p = 2u64;
        let d = SatakeData { p, t: 0.0, s2: 2.5 };
        assert!(matches!(adjoint_l_local(&d), Err(Error::Singular(_))));
    }

    #[test]
    fn normalized_identity() {
        let d = SatakeData::from_s2(5, 2.0).unwrap();
        let r = normalized_factor(&d).unwrap();
        assert!(close(r.lambda_p, 0.4, 1e-15));
        assert!(close(r.adjoint_l, 1.0 / (0.8 * 0.64), 1e-15));
        assert!(close(r.normalized, 1.0 - r.q_term, 1e-14));

        let r = normalized_factor(&SatakeData::delta(2).unwrap()).unwrap();
        assert!(close(r.normalized, 1.0 - r.q_term, 1e-14));
    }

    #[test]
    fn report_json_field_names() {
        let r = normalized_factor(&SatakeData::from_s2(5, 2.0).unwrap()).unwrap();
        let v = serde_json::to_value(r).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["Q_term", "adjoint_L", "lambda_p", "normalized", "p"]);
    }

    #[test]
    fn sym_power_examples() {
        let d = SatakeData::delta(2).unwrap();
        let l0 = sym_power_l_local(&d, 0, 2.0).unwrap();
        assert!(close(l0, 1.0 / (1.0 - 0.25), 1e-15));
        assert_eq!(
            sym_power_l_local(&d, 1, 1.0).unwrap(),
            adjoint_l_local(&d).unwrap()
        );

        // Complex oracle over i = -2..=2 at s = 2.
        let a = alpha(&d);
        let x = 0.25;
        let mut prod = Complex64::new(1.0, 0.0);
        for i in -2i32..=2 {
            prod *= Complex64::new(1.0, 0.0) - a.powi(2 * i) * x;
        }
        let oracle = prod.inv();
        let got = sym_power_l_local(&d, 2, 2.0).unwrap();
        assert!(close(got, oracle.re, 1e-13));
        assert!(sym_power_l_local(&d, 2, 0.0).is_err());
    }

    #[test]
    fn hecke_zeta_examples() {
        let d = SatakeData::delta(2).unwrap();
        assert_eq!(local_hecke_zeta_sum(&d, 0.0, 10).unwrap(), 1.0);

        let sum = local_hecke_zeta_sum(&d, 0.5, 200).unwrap();
        // X p^{-1/2} = 2^{-3/2}, X^2 / p = 1/8
        let closed = 1.0 / (1.0 - d.t * 2f64.powf(-1.5) + 0.125);
        assert!(close(sum, closed, 1e-12));

        let d5 = SatakeData::new(5, 2.0).unwrap();
        let sum = local_hecke_zeta_sum(&d5, 0.5, 200).unwrap();
        let closed = (1.0 - 0.5 / 5f64.sqrt()).powi(-2);
        assert!(close(sum, closed, 1e-12));

        assert!(matches!(
            local_hecke_zeta_sum(&d, 1.5, 10),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn whittaker_matches_casselman_shalika() {
        let d = SatakeData::from_angle(7, 0.7).unwrap();
        let a = alpha(&d);
        let w = whittaker_unramified(&d, 12);
        for (n, wn) in w.iter().enumerate() {
            let num = a.powi(n as i32 + 1) - a.powi(-(n as i32) - 1);
            let cs = num / (a - a.inv()) * 7f64.powf(-(n as f64) / 2.0);
            assert!((cs.re - wn).abs() < 1e-13 && cs.im.abs() < 1e-13);
        }
    }
}
