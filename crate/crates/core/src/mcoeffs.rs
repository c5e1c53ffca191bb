//! Integer exponents m_{kl} with
//!
//! 1 - x - ax - a^{-1}x = ∏_{k≥1} ∏_l p_l(a, x^k)^{m_{kl}},  p_l(a, x) = ∏_{i=-l}^{l} (1 - a^i x),
//!
//! as a formal identity, and the numerical product it suggests for λ_p.
//!
//! Coefficients in x are symmetric Laurent polynomials in a. The solver
//! peels one power of x at a time: if the running residual is
//! 1 + r_k(a) x^k + O(x^{k+1}) then -r_k decomposes uniquely over the
//! characters c_l(a) = Σ_{i=-l}^{l} a^i, which gives row k.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localfactors::{lambda_p, sym_power_l_local, SatakeData};

/// Σ_i e_i (a^i + a^{-i}) for i > 0, plus e_0. Stored as `e[i]`, the common
/// coefficient of a^i and a^{-i}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymLaurentPoly {
    e: Vec<BigInt>,
}

impl SymLaurentPoly {
    pub fn zero() -> Self {
        Self { e: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// `e[i]` is the coefficient of both a^i and a^{-i}.
    pub fn from_coeffs(mut e: Vec<BigInt>) -> Self {
        while e.last().map(Zero::is_zero).unwrap_or(false) {
            e.pop();
        }
        Self { e }
    }

    /// a^i + a^{-i} (or 1 for i = 0).
    pub fn a_pair(i: usize) -> Self {
        let mut e = vec![BigInt::zero(); i + 1];
        e[i] = BigInt::one();
        Self::from_coeffs(e)
    }

    /// The character c_l(a) = Σ_{i=-l}^{l} a^i.
    pub fn character(l: usize) -> Self {
        Self::from_coeffs(vec![BigInt::one(); l + 1])
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.e.len() == 1 && self.e[0].is_one()
    }

    /// Highest power of a, or `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.e.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.e.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.e
    }

    /// Value at a = e^{iφ}: e_0 + Σ 2 e_i cos(iφ).
    pub fn eval_unit_circle(&self, phi: f64) -> f64 {
        self.e
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                if i == 0 {
                    c
                } else {
                    2.0 * c * (i as f64 * phi).cos()
                }
            })
            .sum()
    }

    /// Value at real a > 0.
    pub fn eval_real(&self, a: f64) -> f64 {
        self.e
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                if i == 0 {
                    c
                } else {
                    c * (a.powi(i as i32) + a.powi(-(i as i32)))
                }
            })
            .sum()
    }

    /// Coefficients m_l with self = Σ_l m_l c_l(a), found from the top degree
    /// down. Always exact since c_l has unit leading coefficient.
    pub fn character_decomposition(&self) -> Vec<BigInt> {
        let mut rest = self.e.clone();
        let mut m = vec![BigInt::zero(); rest.len()];
        for l in (0..rest.len()).rev() {
            let c = rest[l].clone();
            if c.is_zero() {
                continue;
            }
            for r in rest.iter_mut().take(l + 1) {
                *r -= &c;
            }
            m[l] = c;
        }
        m
    }

    /// Inverse of [`SymLaurentPoly::character_decomposition`].
    pub fn from_characters(m: &[BigInt]) -> Self {
        let mut e = vec![BigInt::zero(); m.len()];
        for (l, ml) in m.iter().enumerate() {
            for ei in e.iter_mut().take(l + 1) {
                *ei += ml;
            }
        }
        Self::from_coeffs(e)
    }
}

impl Add for &SymLaurentPoly {
    type Output = SymLaurentPoly;
    fn add(self, rhs: Self) -> SymLaurentPoly {
        let n = self.e.len().max(rhs.e.len());
        let e = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        SymLaurentPoly::from_coeffs(e)
    }
}

impl Sub for &SymLaurentPoly {
    type Output = SymLaurentPoly;
    fn sub(self, rhs: Self) -> SymLaurentPoly {
        let n = self.e.len().max(rhs.e.len());
        let e = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        SymLaurentPoly::from_coeffs(e)
    }
}

impl Neg for &SymLaurentPoly {
    type Output = SymLaurentPoly;
    fn neg(self) -> SymLaurentPoly {
        SymLaurentPoly {
            e: self.e.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &SymLaurentPoly {
    type Output = SymLaurentPoly;
    fn mul(self, rhs: Self) -> SymLaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return SymLaurentPoly::zero();
        }
        let (da, db) = (self.e.len() - 1, rhs.e.len() - 1);
        let mut e = vec![BigInt::zero(); da + db + 1];
        // Convolve over the full Laurent supports, keeping nonnegative degrees.
        for i in -(da as i64)..=(da as i64) {
            let a = &self.e[i.unsigned_abs() as usize];
            if a.is_zero() {
                continue;
            }
            for j in -(db as i64)..=(db as i64) {
                let n = i + j;
                if n < 0 {
                    continue;
                }
                let b = &rhs.e[j.unsigned_abs() as usize];
                if !b.is_zero() {
                    e[n as usize] += a * b;
                }
            }
        }
        SymLaurentPoly::from_coeffs(e)
    }
}

/// Power series in x, truncated at x^K, with symmetric Laurent coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateTruncSeries {
    terms: Vec<SymLaurentPoly>,
}

impl BivariateTruncSeries {
    /// Series holding x^0 .. x^order.
    pub fn one(order: usize) -> Self {
        let mut terms = vec![SymLaurentPoly::zero(); order + 1];
        terms[0] = SymLaurentPoly::one();
        Self { terms }
    }

    pub fn from_terms(mut terms: Vec<SymLaurentPoly>, order: usize) -> Self {
        terms.resize(order + 1, SymLaurentPoly::zero());
        Self { terms }
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, j: usize) -> &SymLaurentPoly {
        &self.terms[j]
    }

    pub fn terms(&self) -> &[SymLaurentPoly] {
        &self.terms
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        let mut out = vec![SymLaurentPoly::zero(); k + 1];
        for (i, a) in self.terms.iter().enumerate().take(k + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.terms.iter().enumerate().take(k + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self { terms: out }
    }

    /// Inverse of a series with constant term 1, by sequential solving.
    pub fn inverse(&self) -> Result<Self> {
        if !self.terms[0].is_one() {
            return Err(Error::invalid("series inverse needs constant term 1"));
        }
        let k = self.order();
        let mut inv = vec![SymLaurentPoly::zero(); k + 1];
        inv[0] = SymLaurentPoly::one();
        for n in 1..=k {
            let mut acc = SymLaurentPoly::zero();
            for j in 1..=n {
                if !self.terms[j].is_zero() && !inv[n - j].is_zero() {
                    acc = &acc + &(&self.terms[j] * &inv[n - j]);
                }
            }
            inv[n] = -&acc;
        }
        Ok(Self { terms: inv })
    }

    /// Integer power; negative exponents go through [`Self::inverse`].
    pub fn pow(&self, e: &BigInt) -> Result<Self> {
        let base = if e.is_negative() {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut n = e
            .abs()
            .to_u64()
            .ok_or_else(|| Error::invalid("exponent too large"))?;
        let mut acc = Self::one(self.order());
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Value at a = e^{iφ} and real x.
    pub fn eval(&self, phi: f64, x: f64) -> f64 {
        let mut xn = 1.0;
        let mut s = 0.0;
        for t in &self.terms {
            s += t.eval_unit_circle(phi) * xn;
            xn *= x;
        }
        s
    }
}

/// l(a, x) = 1 - x - ax - a^{-1}x.
pub fn l_series(order: usize) -> Result<BivariateTruncSeries> {
    if order < 1 {
        return Err(Error::invalid("truncation order must be >= 1"));
    }
    let mut s = BivariateTruncSeries::one(order);
    s.terms[1] = -&SymLaurentPoly::character(1);
    Ok(s)
}

/// p_l(a, x^k) = ∏_{i=-l}^{l}(1 - a^i x^k), built as
/// (1 - x^k) ∏_{i=1}^{l} (1 - (a^i + a^{-i}) x^k + x^{2k}).
pub fn p_l_series(l: usize, k: usize, order: usize) -> Result<BivariateTruncSeries> {
    if order < 1 || k < 1 {
        return Err(Error::invalid("need k >= 1 and order >= 1"));
    }
    let factor = |mid: SymLaurentPoly, with_square: bool| {
        let mut f = BivariateTruncSeries::one(order);
        if k <= order {
            f.terms[k] = mid;
        }
        if with_square && 2 * k <= order {
            f.terms[2 * k] = SymLaurentPoly::one();
        }
        f
    };
    let mut acc = factor(SymLaurentPoly::constant(-1), false);
    for i in 1..=l {
        acc = acc.mul(&factor(-&SymLaurentPoly::a_pair(i), true));
    }
    Ok(acc)
}

/// Rows m_{k,0..} for k = 1..=K.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MklTable {
    /// `rows[k-1][l]` = m_{kl}.
    pub rows: Vec<Vec<BigInt>>,
}

impl MklTable {
    pub fn max_k(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, k: usize, l: usize) -> BigInt {
        self.rows
            .get(k.wrapping_sub(1))
            .and_then(|r| r.get(l))
            .cloned()
            .unwrap_or_default()
    }

    /// Entries that are negative, as (k, l, m).
    pub fn negative_entries(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            for (l, m) in row.iter().enumerate() {
                if m.is_negative() {
                    out.push((k + 1, l, m.clone()));
                }
            }
        }
        out
    }

    /// max_l |m_{kl}|.
    pub fn row_max(&self, k: usize) -> f64 {
        self.rows[k - 1]
            .iter()
            .map(|m| m.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

fn stage_factor(k: usize, row: &[BigInt], order: usize) -> Result<BivariateTruncSeries> {
    let mut f = BivariateTruncSeries::one(order);
    for (l, m) in row.iter().enumerate() {
        if !m.is_zero() {
            f = f.mul(&p_l_series(l, k, order)?.pow(m)?);
        }
    }
    Ok(f)
}

/// Solves for m_{kl}, 1 <= k <= max_k.
pub fn solve_mkl(max_k: usize) -> Result<MklTable> {
    let mut residual = l_series(max_k)?;
    let mut rows = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let r_k = residual.term(k).clone();
        let mut row = (-&r_k).character_decomposition();
        // Rows carry at least the l = 0 and l = 1 columns.
        let width = k.max(2);
        if row.len() > width {
            return Err(Error::Consistency(format!(
                "row {k} needs characters up to l = {}",
                row.len() - 1
            )));
        }
        row.resize(width, BigInt::zero());
        let peel = stage_factor(k, &row, max_k)?.inverse()?;
        residual = residual.mul(&peel);
        for j in 1..=k {
            if !residual.term(j).is_zero() {
                return Err(Error::Consistency(format!(
                    "residual x^{j} coefficient nonzero after stage {k}"
                )));
            }
        }
        rows.push(row);
    }
    Ok(MklTable { rows })
}

/// Rebuilds ∏_{k<=K} ∏_l p_l(a, x^k)^{m_{kl}} mod x^{K+1} and compares with l(a, x).
pub fn reconstruct_check(table: &MklTable) -> Result<bool> {
    let order = table.max_k();
    if order < 1 {
        return Err(Error::invalid("empty m_kl table"));
    }
    let mut prod = BivariateTruncSeries::one(order);
    for (k, row) in table.rows.iter().enumerate() {
        prod = prod.mul(&stage_factor(k + 1, row, order)?);
    }
    Ok(prod == l_series(order)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub k: usize,
    pub partial: f64,
    pub target: f64,
    pub residual: f64,
}

/// Largest |m_{kl} log factor| tolerated before declaring overflow.
pub const EXPONENT_CAP: f64 = 700.0;

/// Partial products ∏_{k<=K} ∏_l L(k, π_p, Sym^{2l})^{-m_{kl}} for K = 1..=kmax,
/// each compared with λ_p. Exploratory: convergence is not known.
pub fn lambda_product_experiment(
    d: &SatakeData,
    table: &MklTable,
    kmax: usize,
) -> Result<Vec<ExperimentRow>> {
    if !d.is_unitary() {
        return Err(Error::invalid("experiment needs unitary Satake data"));
    }
    if kmax < 1 || kmax > table.max_k() {
        return Err(Error::invalid(format!(
            "kmax = {kmax} outside 1..={}",
            table.max_k()
        )));
    }
    let target = lambda_p(d);
    let mut log_partial = 0.0;
    let mut rows = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        for (l, m) in table.rows[k - 1].iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let mf = m.to_f64().unwrap_or(f64::INFINITY);
            let lf = sym_power_l_local(d, l, k as f64)?;
            let contrib = -mf * lf.ln();
            if !(contrib.abs() <= EXPONENT_CAP) {
                return Err(Error::Divergent(format!(
                    "exponent m_{{{k},{l}}} log L = {contrib} exceeds cap"
                )));
            }
            log_partial += contrib;
        }
        let partial = log_partial.exp();
        rows.push(ExperimentRow {
            k,
            partial,
            target,
            residual: (partial - target).abs(),
        });
    }
    Ok(rows)
}

/// Smallest K with p^{-K} max_l |m_{Kl}| (2K - 1) < 1e-12, if the table reaches it.
pub fn suggested_kmax(p: u64, table: &MklTable) -> Option<usize> {
    (1..=table.max_k())
        .find(|&k| (p as f64).powi(-(k as i32)) * table.row_max(k) * ((2 * k - 1) as f64) < 1e-12)
}
