//! On-disk cache of the ∏(1-q^n)^24 coefficients and run manifests.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use period_invariant::qseries;
use serde::Serialize;
use serde_json::Value;

/// Directory holding `eta24.txt`; unset disables the cache.
pub const CACHE_ENV: &str = "PERIODINV_CACHE_DIR";

const ETA_FILE: &str = "eta24.txt";

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Loads a persisted coefficient table, if any. Returns the number of terms seeded.
pub fn load(dir: &Path) -> Result<usize> {
    let path = dir.join(ETA_FILE);
    if !path.exists() {
        return Ok(0);
    }
    let file = fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
    let mut coeffs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let c = line
            .trim()
            .parse()
            .with_context(|| format!("{}:{}: not an integer", path.display(), i + 1))?;
        coeffs.push(c);
    }
    let n = coeffs.len();
    qseries::seed_cache(coeffs)?;
    Ok(n)
}

/// Writes the in-memory table if it grew past what was loaded.
pub fn store(dir: &Path, loaded: usize) -> Result<()> {
    if qseries::cached_len() <= loaded {
        return Ok(());
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let tmp = dir.join(format!("{ETA_FILE}.tmp"));
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        for c in qseries::cached_coeffs() {
            writeln!(w, "{c}")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, dir.join(ETA_FILE))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub periodinv: &'static str,
    pub period_invariant: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
    pub threads: usize,
}

/// Provenance record written next to every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub versions: Versions,
    pub prime_bound: Option<u64>,
    pub outputs: Vec<String>,
    pub timing: Timing,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, prime_bound: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            versions: Versions {
                periodinv: env!("CARGO_PKG_VERSION"),
                period_invariant: period_invariant::VERSION,
            },
            prime_bound,
            outputs: Vec::new(),
            timing: Timing {
                elapsed_seconds: 0.0,
                threads: rayon::current_num_threads(),
            },
        }
    }

    pub fn finish(&mut self, elapsed: Duration) {
        self.timing.elapsed_seconds = elapsed.as_secs_f64();
    }

    /// `<output>.manifest.json`.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        fs::write(path, s).with_context(|| format!("writing {}", path.display()))
    }
}
