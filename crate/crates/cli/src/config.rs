//! Optional TOML experiment files. Every key mirrors a command-line flag;
//! flags win over the file.
//!
//! ```toml
//! seed = 42
//! threads = 4
//! preset = "detect"
//!
//! [phase-sweep]
//! n = 100
//! degrees = "1..24"
//!
//! [hopdist]
//! topologies = 50
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub preset: Option<String>,
    #[serde(default)]
    pub phase_sweep: SweepFile,
    #[serde(default)]
    pub counterexample: CounterexampleFile,
    #[serde(default)]
    pub dominance: DominanceFile,
    #[serde(default)]
    pub hopdist: HopdistFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepFile {
    pub n: Option<usize>,
    pub r0: Option<f64>,
    pub degrees: Option<String>,
    pub trials: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CounterexampleFile {
    pub family: Option<String>,
    pub p: Option<f64>,
    pub p_grid: Option<String>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DominanceFile {
    pub model: Option<PathBuf>,
    pub a1: Option<u32>,
    pub runs: Option<u64>,
    pub require_monotone: Option<bool>,
    pub exact_horizon: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct HopdistFile {
    pub r0: Option<f64>,
    pub density: Option<f64>,
    pub radius: Option<f64>,
    pub bins: Option<usize>,
    pub topologies: Option<usize>,
    pub pairs: Option<usize>,
    pub distance_samples: Option<u64>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Grid syntax: `lo..hi` (unit steps, inclusive), `lo:hi:step`
/// (inclusive), or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("invalid grid {spec:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let grid: Vec<f64> = if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        let steps = (hi - lo).floor();
        if !(steps >= 0.0) {
            return Err(bad());
        }
        (0..=steps as usize).map(|i| lo + i as f64).collect()
    } else if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(bad());
        };
        let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
        if !(step > 0.0) || !(hi >= lo) {
            return Err(bad());
        }
        let steps = ((hi - lo) / step + 1e-9).floor() as usize;
        // Round away accumulated binary error so 0.05 * 12 prints as 0.6.
        (0..=steps)
            .map(|i| ((lo + step * i as f64) * 1e12).round() / 1e12)
            .collect()
    } else {
        spec.split(',').map(num).collect::<Result<_, _>>()?
    };
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(grid)
}
