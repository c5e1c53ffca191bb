//! Finite character-sum oracles over Q_p.
//!
//! Measures: dx with vol(Z_p) = 1 and d^×y = dy/|y|, so vol(Z_p^×) = 1 - 1/p.
//! Additive character ψ(x) = e^{2πi frac_p(x)}, conductor Z_p. Phases are kept
//! as exact integers over p^k and exponentiated once per distinct value.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Largest residue modulus p^m the oracles will enumerate.
pub const MODULUS_CAP: u64 = 1 << 26;

fn pow_checked(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|&q| q <= MODULUS_CAP)
        .ok_or_else(|| Error::Tolerance(format!("{p}^{k} exceeds the residue modulus cap")))
}

fn mod_inverse(u: u64, modulus: u64) -> Option<u64> {
    let g = (u as i128).extended_gcd(&(modulus as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(modulus as i128) as u64)
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

/// x = p^v u, with u a unit known modulo p^m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicPoint {
    pub p: u64,
    pub v: i32,
    pub u: u64,
    pub m: u32,
}

impl PAdicPoint {
    pub fn new(p: u64, v: i32, u: u64, m: u32) -> Result<Self> {
        check_prime(p)?;
        let q = pow_checked(p, m)?;
        if m == 0 {
            if u != 0 {
                return Err(Error::invalid(
                    "precision 0 carries no unit digits; use u = 0",
                ));
            }
        } else if u >= q || u.is_multiple_of(p) {
            return Err(Error::invalid(format!(
                "{u} is not a unit residue mod {p}^{m}"
            )));
        }
        Ok(Self { p, v, u, m })
    }

    /// |x|_p = p^{-v}.
    pub fn abs(&self) -> f64 {
        (self.p as f64).powi(-self.v)
    }

    /// x^{-1}, at the same precision.
    pub fn inverse(&self) -> Self {
        let u = if self.m == 0 {
            0
        } else {
            mod_inverse(self.u, self.p.pow(self.m)).expect("unit residue")
        };
        Self {
            v: -self.v,
            u,
            ..*self
        }
    }

    /// -x.
    pub fn neg(&self) -> Self {
        let u = if self.m == 0 {
            0
        } else {
            self.p.pow(self.m) - self.u
        };
        Self { u, ..*self }
    }

    /// frac_p(x) = n / p^k with k = max(0, -v) and 0 <= n < p^k.
    pub fn frac(&self) -> Result<(u64, u32)> {
        if self.v >= 0 {
            return Ok((0, 0));
        }
        let k = self.v.unsigned_abs();
        if self.m < k {
            return Err(Error::Tolerance(format!(
                "precision {} too small for valuation {}",
                self.m, self.v
            )));
        }
        Ok((self.u % self.p.pow(k), k))
    }
}

/// Sum of fractional parts n_i / p^{k_i}, reduced to a single n / p^k.
fn add_phases(p: u64, a: (u64, u32), b: (u64, u32)) -> (u64, u32) {
    let k = a.1.max(b.1);
    let q = p.pow(k);
    let n = (a.0 * p.pow(k - a.1) + b.0 * p.pow(k - b.1)) % q;
    (n, k)
}

fn phase_to_complex(n: u64, q: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * n as f64 / q as f64)
}

/// ψ(x) = e^{2πi frac_p(x)}.
pub fn additive_character(x: &PAdicPoint) -> Result<Complex64> {
    let (n, k) = x.frac()?;
    Ok(phase_to_complex(n, x.p.pow(k)))
}

/// Unramified character χ(p^v u) = χ(p)^v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnramCharacter {
    pub value_at_p: Complex64,
}

impl UnramCharacter {
    pub fn new(value_at_p: Complex64) -> Result<Self> {
        if !value_at_p.is_finite() || value_at_p.norm() == 0.0 {
            return Err(Error::invalid("χ(p) must be finite and nonzero"));
        }
        Ok(Self { value_at_p })
    }

    pub fn trivial() -> Self {
        Self {
            value_at_p: Complex64::new(1.0, 0.0),
        }
    }

    /// χ(p) = p^{c} e^{iθ}.
    pub fn from_log(p: u64, c: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar((p as f64).powf(c), theta))
    }

    pub fn at_valuation(&self, v: i32) -> Complex64 {
        self.value_at_p.powi(v)
    }
}

/// Compactly supported function on Q_p^×, constant on u(1 + p^m Z_p) within each shell.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantFn {
    pub p: u64,
    pub m: u32,
    pub support: BTreeMap<(i32, u64), Complex64>,
}

impl LocallyConstantFn {
    pub fn zero(p: u64, m: u32) -> Result<Self> {
        check_prime(p)?;
        if m == 0 {
            return Err(Error::invalid("level must be >= 1"));
        }
        pow_checked(p, m)?;
        Ok(Self {
            p,
            m,
            support: BTreeMap::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn set(&mut self, v: i32, u: u64, value: Complex64) -> Result<()> {
        let q = self.modulus();
        if u >= q || u.is_multiple_of(self.p) {
            return Err(Error::invalid(format!("{u} is not a unit residue mod {q}")));
        }
        if value == Complex64::new(0.0, 0.0) {
            self.support.remove(&(v, u));
        } else {
            self.support.insert((v, u), value);
        }
        Ok(())
    }

    /// Indicator of p^v u (1 + p^m Z_p).
    pub fn indicator(p: u64, m: u32, v: i32, u: u64) -> Result<Self> {
        let mut f = Self::zero(p, m)?;
        f.set(v, u, Complex64::new(1.0, 0.0))?;
        Ok(f)
    }

    /// Indicator of the shell p^v Z_p^×.
    pub fn shell_indicator(p: u64, m: u32, v: i32) -> Result<Self> {
        let mut f = Self::zero(p, m)?;
        for u in (1..f.modulus()).filter(|u| u % p != 0) {
            f.set(v, u, Complex64::new(1.0, 0.0))?;
        }
        Ok(f)
    }

    /// All basis indicators of level m on the shells in `valuations`.
    pub fn basis(p: u64, m: u32, valuations: impl IntoIterator<Item = i32>) -> Result<Vec<Self>> {
        let q = pow_checked(p, m)?;
        let mut out = Vec::new();
        for v in valuations {
            for u in (1..q).filter(|u| u % p != 0) {
                out.push(Self::indicator(p, m, v, u)?);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &PAdicPoint) -> Result<Complex64> {
        if x.p != self.p || x.m < self.m {
            return Err(Error::invalid("point precision below the function level"));
        }
        let key = (x.v, x.u % self.modulus());
        Ok(self.support.get(&key).copied().unwrap_or_default())
    }

    pub fn value_at_one(&self) -> Complex64 {
        self.support.get(&(0, 1)).copied().unwrap_or_default()
    }
}

/// Per-shell contribution to the unramified j(1) sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellTerm {
    pub v: i32,
    pub precision: u32,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BesselOracleReport {
    pub p: u64,
    pub b: Complex64,
    pub shells: u32,
    pub value: Complex64,
    pub closed_form: Complex64,
    pub terms: Vec<ShellTerm>,
}

/// Threshold below which a shell counts as cancelled.
pub const SHELL_ZERO: f64 = 1e-14;

/// One shell of ∫ b^{v(x)} ψ(x - x^{-1}) d^×x with x = p^v u.
fn bessel_shell(p: u64, b: Complex64, v: i32) -> Result<ShellTerm> {
    let precision = v.unsigned_abs().max(1) + 1;
    let q = pow_checked(p, precision)?;
    let kmax = v.unsigned_abs();
    let denom = p.pow(kmax);
    let mut hist = vec![0u64; denom as usize];
    for u in (1..q).filter(|u| u % p != 0) {
        let x = PAdicPoint {
            p,
            v,
            u,
            m: precision,
        };
        let phase = add_phases(p, x.frac()?, x.inverse().neg().frac()?);
        hist[(phase.0 * p.pow(kmax - phase.1)) as usize] += 1;
    }
    let weight = 1.0 / q as f64;
    let sum: Complex64 = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(n, &c)| phase_to_complex(n as u64, denom) * c as f64)
        .sum();
    Ok(ShellTerm {
        v,
        precision,
        value: sum * weight * b.powi(v),
    })
}

/// The unramified local value 1 - (1 + b + b^{-1})/p.
pub fn bessel_j1_closed_form(p: u64, b: Complex64) -> Complex64 {
    1.0 - (1.0 + b + b.inv()) / p as f64
}

/// Character sum for j(1) over shells |x| <= p^N, descending until two
/// consecutive shells vanish.
pub fn bessel_j1_report(p: u64, b: Complex64, shells: u32) -> Result<BesselOracleReport> {
    check_prime(p)?;
    if !b.is_finite() || (b.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("b must lie on the unit circle"));
    }
    let mut terms = Vec::new();
    let mut v = -(shells as i32);
    let mut quiet = 0;
    loop {
        let t = bessel_shell(p, b, v).map_err(|e| match e {
            Error::Tolerance(_) => {
                Error::Divergent(format!("shell {v} not cancelled before the precision cap"))
            }
            e => e,
        })?;
        let small = t.value.norm() <= SHELL_ZERO;
        terms.push(t);
        if v >= 1 {
            quiet = if small { quiet + 1 } else { 0 };
            if quiet == 2 {
                break;
            }
        }
        v += 1;
    }
    let value = terms.iter().map(|t| t.value).sum();
    Ok(BesselOracleReport {
        p,
        b,
        shells,
        value,
        closed_form: bessel_j1_closed_form(p, b),
        terms,
    })
}

pub fn bessel_j1_oracle(p: u64, b: Complex64, shells: u32) -> Result<Complex64> {
    Ok(bessel_j1_report(p, b, shells)?.value)
}

/// Σ χ^{-1}(y) f(y) d^×y.
pub fn whittaker_to_hecke_kernel(f: &LocallyConstantFn, chi: &UnramCharacter) -> Complex64 {
    let w = 1.0 / f.modulus() as f64;
    f.support
        .iter()
        .map(|(&(v, _), &c)| c * chi.at_valuation(-v) * w)
        .sum()
}

/// Direct double sum over x ∈ p^{-l}Z_p and y ∈ supp f, no stabilization check.
pub fn kirillov_compose_at(
    f: &LocallyConstantFn,
    chi: &UnramCharacter,
    l: u32,
) -> Result<Complex64> {
    let p = f.p;
    let entries: Vec<_> = f.support.iter().map(|(&k, &c)| (k, c)).collect();
    let parts: Vec<Complex64> = entries
        .par_iter()
        .map(|&((v, u0), c)| -> Result<Complex64> {
            // x = p^{-l} s with s mod p^qx; y = p^v u with u mod p^py.
            let e = v.min(0);
            let qx = l + e.unsigned_abs();
            let py = f.m.max((l as i64 - v as i64).max(0) as u32);
            let modx = pow_checked(p, qx)?;
            let mody = pow_checked(p, py)?;
            let step = f.p.pow(f.m);
            let lift = mody / step;
            let mut hist = vec![0u64; modx as usize];
            for j in 0..lift {
                let u = u0 + j * step;
                // x(y - 1) = p^{-qx} s A with A = p^{v-e} u - p^{-e}.
                let a = ((u % modx) * p.pow((v - e) as u32) % modx + modx
                    - p.pow(e.unsigned_abs()) % modx)
                    % modx;
                let mut phase = 0u64;
                for _ in 0..modx {
                    hist[phase as usize] += 1;
                    phase = (phase + a) % modx;
                }
            }
            let sum: Complex64 = hist
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(|(n, &cnt)| phase_to_complex(n as u64, modx) * cnt as f64)
                .sum();
            let wx = (p as f64).powi(l as i32 - qx as i32);
            let wy = 1.0 / mody as f64;
            Ok(sum * wx * wy * c * chi.at_valuation(-v))
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComposeReport {
    pub level: u32,
    pub value: Complex64,
    pub next_value: Complex64,
    pub expected: Complex64,
    pub stabilized: bool,
}

/// Tolerance for the l versus l + 1 comparison.
pub const STABILITY_TOL: f64 = 1e-10;

pub fn kirillov_compose_report(
    f: &LocallyConstantFn,
    chi: &UnramCharacter,
    l: u32,
) -> Result<ComposeReport> {
    if l < f.m {
        return Err(Error::invalid(format!(
            "ball exponent {l} below level {}",
            f.m
        )));
    }
    let value = kirillov_compose_at(f, chi, l)?;
    let next_value = kirillov_compose_at(f, chi, l + 1)?;
    let scale = value.norm().max(1.0);
    Ok(ComposeReport {
        level: l,
        value,
        next_value,
        expected: f.value_at_one(),
        stabilized: (value - next_value).norm() <= STABILITY_TOL * scale,
    })
}

/// ∫_{B_l} ψ^{-1}(x) ∫ χ^{-1}(y) ψ(xy) f(y) d^×y dx, checked against l + 1.
pub fn kirillov_compose_oracle(
    f: &LocallyConstantFn,
    chi: &UnramCharacter,
    l: u32,
) -> Result<Complex64> {
    let r = kirillov_compose_report(f, chi, l)?;
    if !r.stabilized {
        return Err(Error::Stabilization(format!(
            "ball B_{l} gives {} but B_{} gives {}",
            r.value,
            l + 1,
            r.next_value
        )));
    }
    Ok(r.value)
}
