//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::report::Format;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "periodinv",
    version,
    about = "Period invariant of the Ramanujan cusp form Δ"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,

    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the result to a file and a manifest to `<file>.manifest.json`.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Ramanujan τ(n) for n = 1..=max_n.
    Tau {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
    },
    /// Normalized Hecke eigenvalues and Satake angles of Δ.
    Satake(PrimeArgs),
    /// Local constants λ_p and the local adjoint factors.
    Local(PrimeArgs),
    /// The global invariant λ(Δ, e^{2πix}) from a truncated Euler product.
    Invariant(InvariantArgs),
    /// Integer-order Bessel function J_k(z).
    Bessel {
        #[arg(long)]
        order: u32,
        /// Argument; accepts multiples of π such as `4pi`.
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        arg: f64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Bessel function of a real discrete or principal series representation.
    Jfun {
        #[arg(long, value_enum)]
        family: Family,
        /// d for the discrete series, r for the principal series.
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        param: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Integer exponents m_{kl} of the symmetric-power product expansion.
    Mcoeffs {
        #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u64).range(1..=64))]
        max_k: u64,
    },
    /// Character-sum oracles over Q_p.
    PadicOracle {
        #[command(subcommand)]
        oracle: PadicOracle,
    },
    /// Full chain of published constants with a pass/fail report.
    ReproduceAppendixA {
        #[arg(long, default_value_t = 100_000)]
        prime_bound: u64,
        /// Largest K for the symmetric-power product experiment.
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct PrimeArgs {
    /// Explicit primes, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "max_p")]
    pub primes: Vec<u64>,
    /// All primes up to this bound.
    #[arg(long)]
    pub max_p: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct InvariantArgs {
    #[arg(long, default_value_t = 100_000)]
    pub prime_bound: u64,
    /// Shorthand for `--format json`.
    #[arg(long)]
    pub json: bool,
    /// Convergence table at the given ascending prime bounds.
    #[arg(long, value_delimiter = ',')]
    pub table: Vec<u64>,
    /// Fail (exit 3) if the tail estimate exceeds this.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Disc,
    Princ,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PadicOracle {
    /// j(1) for unramified data with b = e^{iθ}.
    Bessel {
        #[arg(short)]
        p: u64,
        #[arg(long, default_value_t = 0.0, value_parser = parse_real, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 1)]
        shells: u32,
    },
    /// Whittaker-Hecke composition on every basis indicator of a level.
    Compose {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        level: u32,
        /// χ(p) = p^{c} e^{iθ}.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        chi_log: f64,
        #[arg(long, default_value_t = 0.0, value_parser = parse_real, allow_hyphen_values = true)]
        chi_theta: f64,
        /// Ball exponent l (default: the level).
        #[arg(long)]
        ball: Option<u32>,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        min_shell: i32,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        max_shell: i32,
    },
}

/// Real number, optionally a multiple of π (`pi`, `4pi`, `0.5*pi`, `2π`).
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let stripped = t
        .strip_suffix("pi")
        .or_else(|| t.strip_suffix('π'))
        .map(|r| r.trim_end_matches('*').trim());
    match stripped {
        Some("") => Ok(std::f64::consts::PI),
        Some("-") => Ok(-std::f64::consts::PI),
        Some(c) => c
            .parse::<f64>()
            .map(|c| c * std::f64::consts::PI)
            .map_err(|e| format!("invalid multiple of π `{s}`: {e}")),
        None => t
            .parse::<f64>()
            .map_err(|e| format!("invalid number `{s}`: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parses_multiples_of_pi() {
        assert_eq!(parse_real("4pi").unwrap(), 4.0 * PI);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_real("2π").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("1.5").unwrap(), 1.5);
        assert!(parse_real("xpi").is_err());
    }

    #[test]
    fn cli_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
