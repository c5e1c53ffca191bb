//! Exact integer q-series and the Ramanujan tau function.
//!
//! Δ(q) = q ∏_{n≥1} (1 - q^n)^24 = Σ τ(n) q^n.
//!
//! The product is expanded from Jacobi's identity
//! ∏(1 - q^n)^3 = Σ_{k≥0} (-1)^k (2k+1) q^{k(k+1)/2}, whose eighth power is
//! taken with the power recurrence for a series with unit constant term:
//! if G = A^8 then n g_n = Σ_{j≥1} (9j - n) a_j g_{n-j}. Only the O(√n)
//! triangular-index coefficients of A are nonzero, so each new coefficient
//! costs O(√n) exact multiplications and the table extends in place.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Truncated power series with exact integer coefficients.
///
/// `coeffs.len()` is the truncation order: coefficients of q^n for
/// `n >= coeffs.len()` are discarded by every operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPowerSeries {
    coeffs: Vec<BigInt>,
}

impl IntPowerSeries {
    pub fn zero(trunc: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); trunc],
        }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if trunc > 0 {
            s.coeffs[0] = BigInt::one();
        }
        s
    }

    /// Builds a series from coefficients, padding with zeros or truncating.
    pub fn from_coeffs<I, T>(coeffs: I, trunc: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut c: Vec<BigInt> = coeffs.into_iter().take(trunc).map(Into::into).collect();
        c.resize(trunc, BigInt::zero());
        Self { coeffs: c }
    }

    /// `1 - q^n` truncated at `trunc`.
    pub fn one_minus_q_pow(n: usize, trunc: usize) -> Self {
        let mut s = Self::one(trunc);
        if n < trunc {
            s.coeffs[n] -= 1;
        }
        s
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    /// Truncated product. Both operands must share the truncation order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.trunc() != other.trunc() {
            return Err(Error::invalid(format!(
                "truncation mismatch: {} vs {}",
                self.trunc(),
                other.trunc()
            )));
        }
        let t = self.trunc();
        let mut out = vec![BigInt::zero(); t];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..t - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Truncated power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.trunc());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same truncation");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same truncation");
            }
        }
        acc
    }

    /// Multiplies by q (shifts coefficients up by one place).
    pub fn shift_up(&self) -> Self {
        let t = self.trunc();
        let mut out = vec![BigInt::zero(); t];
        if t > 0 {
            out[1..t].clone_from_slice(&self.coeffs[..t - 1]);
        }
        Self { coeffs: out }
    }
}

/// Coefficients of ∏_{n≥1}(1 - q^n)^24, extended on demand.
#[derive(Debug, Clone)]
pub struct EtaPowerTable {
    coeffs: Vec<BigInt>,
}

impl Default for EtaPowerTable {
    fn default() -> Self {
        Self::new()
    }
}

impl EtaPowerTable {
    pub fn new() -> Self {
        Self {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Ensures coefficients of q^0 .. q^{len-1} are present.
    pub fn extend_to(&mut self, len: usize) {
        let start = self.coeffs.len();
        if len <= start {
            return;
        }
        self.coeffs.reserve(len - start);
        for n in start..len {
            let mut sum = BigInt::zero();
            // Triangular exponents j = k(k+1)/2 with coefficient (-1)^k (2k+1).
            let mut k: i64 = 1;
            loop {
                let j = (k * (k + 1) / 2) as usize;
                if j > n {
                    break;
                }
                let a_j = if k % 2 == 0 { 2 * k + 1 } else { -(2 * k + 1) };
                let weight = (9 * j as i64 - n as i64) * a_j;
                if weight != 0 {
                    sum += &self.coeffs[n - j] * weight;
                }
                k += 1;
            }
            let (quot, rem) = (&sum / n as i64, &sum % n as i64);
            assert!(
                rem.is_zero(),
                "power recurrence must divide exactly at n = {n}"
            );
            self.coeffs.push(quot);
        }
    }
}

fn global_table() -> &'static RwLock<EtaPowerTable> {
    static TABLE: OnceLock<RwLock<EtaPowerTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(EtaPowerTable::new()))
}

/// Runs `f` on the shared table once it holds at least `len` coefficients.
fn with_table<R>(len: usize, f: impl FnOnce(&[BigInt]) -> R) -> R {
    {
        let guard = global_table().read().unwrap_or_else(|e| e.into_inner());
        if guard.len() >= len {
            return f(&guard.coeffs()[..len]);
        }
    }
    let mut guard = global_table().write().unwrap_or_else(|e| e.into_inner());
    if guard.len() < len {
        let target = len.max(2 * guard.len()).max(64);
        guard.extend_to(target);
    }
    f(&guard.coeffs()[..len])
}

/// Seeds the shared cache with known coefficients of ∏(1-q^n)^24, e.g. from
/// a table persisted on disk. Shorter seeds than the current cache are ignored.
pub fn seed_cache(eta24: Vec<BigInt>) -> Result<()> {
    if eta24.first().map(|c| !c.is_one()).unwrap_or(true) {
        return Err(Error::invalid("seed must start with the constant term 1"));
    }
    let mut guard = global_table().write().unwrap_or_else(|e| e.into_inner());
    if eta24.len() > guard.len() {
        // Only the overlap is checked; the rest is trusted.
        let n = guard.len();
        if guard.coeffs()[..n] != eta24[..n] {
            return Err(Error::Consistency(
                "seed disagrees with cached table".into(),
            ));
        }
        *guard = EtaPowerTable { coeffs: eta24 };
    }
    Ok(())
}

/// Copy of the cached coefficients of ∏(1-q^n)^24, for persisting.
pub fn cached_coeffs() -> Vec<BigInt> {
    global_table()
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .coeffs()
        .to_vec()
}

/// Number of cached coefficients of ∏(1-q^n)^24.
pub fn cached_len() -> usize {
    global_table()
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .len()
}

/// q ∏_{n≥1}(1 - q^n)^24 truncated at `trunc`; the q^n coefficient is τ(n).
pub fn delta_qexpansion(trunc: usize) -> Result<IntPowerSeries> {
    if trunc < 2 {
        return Err(Error::invalid(format!(
            "truncation must be at least 2, got {trunc}"
        )));
    }
    let mut coeffs = Vec::with_capacity(trunc);
    coeffs.push(BigInt::zero());
    with_table(trunc - 1, |c| coeffs.extend(c.iter().cloned()));
    Ok(IntPowerSeries { coeffs })
}

/// Ramanujan's τ(n).
pub fn tau(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("tau is defined for n >= 1"));
    }
    Ok(with_table(n as usize, |c| c[n as usize - 1].clone()))
}

/// τ(1), ..., τ(max_n).
pub fn tau_table(max_n: u64) -> Vec<BigInt> {
    with_table(max_n as usize, |c| c.to_vec())
}

/// t_p = τ(p) p^{-11/2} = α_p + α_p^{-1}.
pub fn normalized_eigenvalue(p: u64) -> Result<f64> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let t = tau(p)?;
    normalize_tau(p, &t)
}

pub(crate) fn normalize_tau(p: u64, tau_p: &BigInt) -> Result<f64> {
    let pf = p as f64;
    let t = tau_p.to_f64().unwrap_or(f64::INFINITY) / (pf.powi(5) * pf.sqrt());
    if t.abs() > 2.0 + 1e-12 || !t.is_finite() {
        return Err(Error::RamanujanBound { p, t: t.abs() });
    }
    Ok(t)
}

/// t_p for every listed prime, computed from a single table read.
pub fn normalized_eigenvalues(primes: &[u64]) -> Result<Vec<f64>> {
    let max = primes.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return Ok(Vec::new());
    }
    with_table(max as usize, |c| {
        primes
            .iter()
            .map(|&p| normalize_tau(p, &c[p as usize - 1]))
            .collect()
    })
}

/// |x| of a big integer as f64, for diagnostics.
pub fn abs_f64(x: &BigInt) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}
