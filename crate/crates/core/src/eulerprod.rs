//! Regularized Euler product for λ(π_Δ, ψ).
//!
//! λ(π, ψ) = L(1, π, Ad)^{-1} ∏_p λ_p L(1, π_p, Ad) · j_{π_∞}(1).
//!
//! The product over p converges absolutely because λ_p L(1, π_p, Ad) = 1 - Q_p
//! with Q_p = O(p^{-2}). Partial products are accumulated in log space over
//! primes in ascending order; per-prime factors may be computed in parallel
//! but the reduction order is fixed, so results are bitwise reproducible.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::archimedean;
use crate::error::{Error, Result};
use crate::localfactors::{adjoint_l_local, delta_satake, normalized_factor};
use crate::primes::{first_primes, primes_up_to};

/// L(1, π_Δ, Ad) to 11 digits, from an independent high-precision evaluation.
pub const ADJOINT_L_REFERENCE: f64 = 0.631_792_945_73;

/// Published value of the undivided finite product over the first hundred primes.
pub const REPORTED_FINITE_PARTIAL: f64 = 1.49154;

/// Published value of the archimedean factor 2π J_11(4π).
pub const REPORTED_ARCHIMEDEAN: f64 = 1.8305;

/// Published value of λ(Δ, e^{2πix}).
pub const REPORTED_INVARIANT: f64 = 4.32145;

/// Envelope constant C with |Q_p| <= C p^{-3/2} for Δ; the supremum of
/// |Q_p| p^{3/2} over p <= 10^4 is 0.8171 (attained at p = 2), rounded up.
pub const Q_ENVELOPE_CONST: f64 = 0.82;

/// Discrete series parameter of the real component of π_Δ (weight 12 = 2d).
pub const DELTA_REAL_PARAMETER: u32 = 6;

/// Rosser–Schoenfeld: π(x) < 1.25506 x / ln x for x > 1.
const PRIME_COUNT_CONST: f64 = 1.25506;

/// Upper bound for Σ_{p > n} p^{-s}, s > 1, n >= 2, by partial summation
/// against π(x) < 1.25506 x / ln x.
pub fn prime_power_tail(n: u64, s: f64) -> f64 {
    let n = n.max(2) as f64;
    PRIME_COUNT_CONST * s * n.powf(1.0 - s) / ((s - 1.0) * n.ln())
}

/// Log-space bound on Σ_{p > n} |log(1 - Q_p)| from |Q_p| <= C p^{-3/2}.
pub fn absolute_tail(n: u64) -> f64 {
    let q_max = Q_ENVELOPE_CONST * (n.max(2) as f64).powf(-1.5);
    if q_max >= 1.0 {
        return f64::INFINITY;
    }
    Q_ENVELOPE_CONST * prime_power_tail(n, 1.5) / (1.0 - q_max)
}

/// One-sigma log-space estimate of the tail of ∏_{p > n} L(1, π_p, Ad).
///
/// log L(1, π_p, Ad) = (t_p^2 - 1)/p + O(p^{-2}); the first-order part only
/// converges conditionally. With t_p Sato–Tate distributed, t_p^2 - 1 has
/// mean 0 and variance 1, so the tail has standard deviation
/// √(Σ_{p>n} p^{-2}); the second-order coefficient is at most 3/2 in size.
pub fn adjoint_tail(n: u64) -> f64 {
    let s2 = prime_power_tail(n, 2.0);
    s2.sqrt() + 3.0 * s2
}

/// Which tail model applies to an accumulated product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModel {
    /// Absolutely convergent product of 1 - Q_p.
    AbsoluteEnvelope,
    /// Conditionally convergent adjoint product.
    SatoTate,
}

/// Ordered partial product over primes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerAccumulator {
    pub prime_bound: u64,
    pub log_partial: f64,
    pub n_terms: usize,
    /// Log-space bound on the neglected primes p > prime_bound.
    pub tail_estimate: f64,
    model: TailModel,
    last_prime: u64,
}

impl EulerAccumulator {
    pub fn new(model: TailModel) -> Self {
        Self {
            prime_bound: 0,
            log_partial: 0.0,
            n_terms: 0,
            tail_estimate: f64::INFINITY,
            model,
            last_prime: 0,
        }
    }

    /// Adds the factor at prime `p`; primes must arrive in ascending order.
    pub fn push(&mut self, p: u64, log_factor: f64) -> Result<()> {
        if p <= self.last_prime {
            return Err(Error::invalid(format!(
                "primes must be ascending: {p} after {}",
                self.last_prime
            )));
        }
        if !log_factor.is_finite() {
            return Err(Error::Consistency(format!(
                "non-finite log factor at p = {p}"
            )));
        }
        self.log_partial += log_factor;
        self.n_terms += 1;
        self.last_prime = p;
        self.set_bound(p);
        Ok(())
    }

    /// Declares that every prime up to `bound` has been pushed.
    pub fn set_bound(&mut self, bound: u64) {
        self.prime_bound = bound.max(self.last_prime);
        self.tail_estimate = match self.model {
            TailModel::AbsoluteEnvelope => absolute_tail(self.prime_bound),
            TailModel::SatoTate => adjoint_tail(self.prime_bound),
        };
    }

    pub fn value(&self) -> f64 {
        self.log_partial.exp()
    }

    /// Absolute uncertainty of [`EulerAccumulator::value`] implied by the tail.
    pub fn value_tail(&self) -> f64 {
        self.value() * self.tail_estimate.exp_m1()
    }
}

/// Prime set for a partial product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeSelection {
    PrimeBound(u64),
    FirstPrimes(usize),
}

impl PrimeSelection {
    pub fn primes(&self) -> Result<Vec<u64>> {
        match *self {
            PrimeSelection::PrimeBound(n) if n >= 2 => Ok(primes_up_to(n)),
            PrimeSelection::FirstPrimes(k) if k >= 1 => Ok(first_primes(k)),
            other => Err(Error::invalid(format!("empty prime selection {other:?}"))),
        }
    }

    fn declared_bound(&self, primes: &[u64]) -> u64 {
        match *self {
            PrimeSelection::PrimeBound(n) => n,
            PrimeSelection::FirstPrimes(_) => primes.last().copied().unwrap_or(0),
        }
    }
}

/// log(λ_p L(1, π_p, Ad)) for Δ at each prime, computed in parallel.
fn normalized_log_factors(primes: &[u64]) -> Result<Vec<f64>> {
    let data = delta_satake(primes)?;
    data.par_iter()
        .map(|d| {
            let r = normalized_factor(d)?;
            if !(r.normalized > 0.0) {
                return Err(Error::Consistency(format!(
                    "λ_p L(1,π_p,Ad) = {} is not positive at p = {}",
                    r.normalized, d.p
                )));
            }
            Ok(r.normalized.ln())
        })
        .collect()
}

fn adjoint_log_factors(primes: &[u64]) -> Result<Vec<f64>> {
    let data = delta_satake(primes)?;
    data.par_iter()
        .map(|d| {
            let l = adjoint_l_local(d)?;
            if !(l > 0.0) {
                return Err(Error::Consistency(format!(
                    "L(1,π_p,Ad) = {l} is not positive at p = {}",
                    d.p
                )));
            }
            Ok(l.ln())
        })
        .collect()
}

fn accumulate(
    primes: &[u64],
    logs: &[f64],
    model: TailModel,
    bound: u64,
) -> Result<EulerAccumulator> {
    let mut acc = EulerAccumulator::new(model);
    for (&p, &l) in primes.iter().zip(logs) {
        acc.push(p, l)?;
    }
    acc.set_bound(bound);
    Ok(acc)
}

/// ∏ λ_p L(1, π_p, Ad) over the selected primes, with its tail bound.
pub fn tilde_lambda_accumulator(sel: PrimeSelection) -> Result<EulerAccumulator> {
    let primes = sel.primes()?;
    let logs = normalized_log_factors(&primes)?;
    accumulate(
        &primes,
        &logs,
        TailModel::AbsoluteEnvelope,
        sel.declared_bound(&primes),
    )
}

/// λ̃^f: the undivided partial product ∏ λ_p L(1, π_p, Ad).
pub fn tilde_lambda_partial(sel: PrimeSelection) -> Result<f64> {
    Ok(tilde_lambda_accumulator(sel)?.value())
}

/// ∏_{p <= n} L(1, π_p, Ad) for Δ.
pub fn partial_adjoint_l(n: u64) -> Result<EulerAccumulator> {
    let sel = PrimeSelection::PrimeBound(n);
    let primes = sel.primes()?;
    let logs = adjoint_log_factors(&primes)?;
    accumulate(&primes, &logs, TailModel::SatoTate, n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub prime_bound: u64,
    pub n_primes: usize,
    /// λ̃^f_N, the undivided product.
    pub tilde_partial: f64,
    /// λ^f_N = λ̃^f_N / L(1, π, Ad).
    pub finite_part: f64,
    /// j_{π_6}(1) = 2π J_11(4π).
    pub archimedean_part: f64,
    pub value: f64,
    /// Absolute bound on the contribution of primes above the bound.
    pub tail_estimate: f64,
}

/// λ(Δ, e^{2πix}) from primes up to `n`. Fails with [`Error::Tolerance`] if
/// the tail bound exceeds `tolerance`.
pub fn invariant_lambda(n: u64, tolerance: Option<f64>) -> Result<InvariantReport> {
    if n < 100 {
        return Err(Error::invalid(format!(
            "prime bound must be >= 100, got {n}"
        )));
    }
    let acc = tilde_lambda_accumulator(PrimeSelection::PrimeBound(n))?;
    let arch = archimedean::archimedean_constant(DELTA_REAL_PARAMETER)?.value;
    let report = assemble(&acc, arch);
    if let Some(tol) = tolerance {
        if report.tail_estimate > tol {
            return Err(Error::Tolerance(format!(
                "tail estimate {:e} exceeds tolerance {tol:e} at N = {n}",
                report.tail_estimate
            )));
        }
    }
    Ok(report)
}

fn assemble(acc: &EulerAccumulator, arch: f64) -> InvariantReport {
    let tilde = acc.value();
    let finite = tilde / ADJOINT_L_REFERENCE;
    let value = finite * arch;
    InvariantReport {
        prime_bound: acc.prime_bound,
        n_primes: acc.n_terms,
        tilde_partial: tilde,
        finite_part: finite,
        archimedean_part: arch,
        value,
        tail_estimate: value.abs() * acc.tail_estimate.exp_m1(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub prime_bound: u64,
    pub n_primes: usize,
    pub tilde_partial: f64,
    pub running_value: f64,
    pub tail_estimate: f64,
}

/// One pass over the primes up to the largest bound, emitting a row at each
/// (ascending) checkpoint.
pub fn convergence_table(bounds: &[u64]) -> Result<Vec<ConvergenceRow>> {
    if bounds.is_empty() {
        return Ok(Vec::new());
    }
    if bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "checkpoint bounds must be strictly ascending",
        ));
    }
    if bounds[0] < 2 {
        return Err(Error::invalid("checkpoint bounds must be >= 2"));
    }
    let max = *bounds.last().unwrap();
    let primes = primes_up_to(max);
    let logs = normalized_log_factors(&primes)?;
    let arch = archimedean::archimedean_constant(DELTA_REAL_PARAMETER)?.value;

    let mut acc = EulerAccumulator::new(TailModel::AbsoluteEnvelope);
    let mut rows = Vec::with_capacity(bounds.len());
    let mut next = 0;
    for &bound in bounds {
        while next < primes.len() && primes[next] <= bound {
            acc.push(primes[next], logs[next])?;
            next += 1;
        }
        acc.set_bound(bound);
        let r = assemble(&acc, arch);
        rows.push(ConvergenceRow {
            prime_bound: bound,
            n_primes: acc.n_terms,
            tilde_partial: r.tilde_partial,
            running_value: r.value,
            tail_estimate: r.tail_estimate,
        });
    }
    Ok(rows)
}

/// Prime-set conventions for "the first hundred primes".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    FirstHundredPrimes,
    PrimesUpToHundred,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionMatch {
    pub first_hundred_primes: f64,
    pub primes_up_to_hundred: f64,
    pub matched: Convention,
    pub deviation: f64,
}

/// Evaluates λ̃^f under both readings and reports the one closest to `target`.
pub fn match_reported_partial(target: f64) -> Result<ConventionMatch> {
    let first = tilde_lambda_partial(PrimeSelection::FirstPrimes(100))?;
    let upto = tilde_lambda_partial(PrimeSelection::PrimeBound(100))?;
    let (matched, deviation) = if (first - target).abs() <= (upto - target).abs() {
        (Convention::FirstHundredPrimes, (first - target).abs())
    } else {
        (Convention::PrimesUpToHundred, (upto - target).abs())
    };
    Ok(ConventionMatch {
        first_hundred_primes: first,
        primes_up_to_hundred: upto,
        matched,
        deviation,
    })
}
