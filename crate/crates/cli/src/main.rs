//! `periodinv`: command-line front end for the period-invariant library.
//!
//! Exit codes: 0 success, 2 usage, 3 numerical tolerance, 4 internal consistency.

mod args;
mod cache;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use period_invariant::Error;

use args::{Cli, Command};
use cache::RunManifest;
use report::{Format, Report};

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidInput(_)) => 2,
        Some(Error::Tolerance(_) | Error::Divergent(_) | Error::Singular(_)) => 3,
        Some(Error::Consistency(_) | Error::Stabilization(_) | Error::RamanujanBound { .. }) => 4,
        None => 1,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Tau { .. } => "tau",
        Command::Satake(_) => "satake",
        Command::Local(_) => "local",
        Command::Invariant(_) => "invariant",
        Command::Bessel { .. } => "bessel",
        Command::Jfun { .. } => "jfun",
        Command::Mcoeffs { .. } => "mcoeffs",
        Command::PadicOracle { .. } => "padic-oracle",
        Command::ReproduceAppendixA { .. } => "reproduce-appendix-a",
    }
}

fn prime_bound(c: &Command) -> Option<u64> {
    match c {
        Command::Invariant(a) => Some(a.table.last().copied().unwrap_or(a.prime_bound)),
        Command::ReproduceAppendixA { prime_bound, .. } => Some(*prime_bound),
        Command::Satake(a) | Command::Local(a) => a.max_p,
        _ => None,
    }
}

fn dispatch(c: &Command) -> Result<Report> {
    match c {
        Command::Tau { max_n } => commands::tau(*max_n),
        Command::Satake(a) => commands::satake(a),
        Command::Local(a) => commands::local(a),
        Command::Invariant(a) => commands::invariant(a),
        Command::Bessel {
            order,
            arg,
            tolerance,
        } => commands::bessel(*order, *arg, *tolerance),
        Command::Jfun {
            family,
            param,
            x,
            tolerance,
        } => commands::jfun(*family, *param, *x, *tolerance),
        Command::Mcoeffs { max_k } => commands::mcoeffs(*max_k as usize),
        Command::PadicOracle { oracle } => commands::padic(oracle),
        Command::ReproduceAppendixA { prime_bound, kmax } => {
            commands::reproduce(*prime_bound, *kmax)
        }
    }
}

fn run(cli: &Cli) -> Result<Option<Error>> {
    let start = Instant::now();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let cache_dir = cache::cache_dir();
    let loaded = match &cache_dir {
        Some(d) => cache::load(d)?,
        None => 0,
    };

    let report = dispatch(&cli.command)?;
    let format = match &cli.command {
        Command::Invariant(a) if a.json => Format::Json,
        _ => cli.format,
    };
    let text = report.render(format)?;

    if let Some(d) = &cache_dir {
        cache::store(d, loaded)?;
    }

    match &cli.output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            let mut manifest = RunManifest::new(
                command_name(&cli.command),
                serde_json::to_value(cli)?,
                prime_bound(&cli.command),
            );
            manifest.outputs.push(path.display().to_string());
            manifest.finish(start.elapsed());
            manifest.write(&RunManifest::path_for(path))?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(report.failure)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("error: {failure}");
            ExitCode::from(exit_code(&failure.into()))
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
