//! Global period invariant of the Ramanujan cusp form Δ.
//!
//! The crate computes λ(Δ, e^{2πix}) from first principles:
//!
//! - [`qseries`]: exact q-expansion of Δ and the tau function,
//! - [`localfactors`]: Satake data, the local constants λ_p and the local
//!   adjoint / symmetric-power / Hecke L-factors,
//! - [`eulerprod`]: the regularized Euler product and the final invariant,
//! - [`archimedean`]: J-Bessel evaluation and the Bessel functions of real
//!   discrete and principal series representations,
//! - [`mcoeffs`]: the integer exponents m_{kl} of the product expansion of
//!   `1 - x - ax - a^{-1}x` into symmetric-power Euler polynomials,
//! - [`padic`]: finite character-sum oracles for the unramified local
//!   integrals over Q_p.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod archimedean;
pub mod error;
pub mod eulerprod;
pub mod localfactors;
pub mod mcoeffs;
pub mod padic;
pub mod primes;
pub mod qseries;

pub use error::{Error, Result};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
