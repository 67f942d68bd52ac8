//! Resolved per-command settings.
//!
//! Each setting comes from the command-line flag if given, otherwise from the
//! `--config` JSON document (keys mirror the flag names), otherwise from the
//! defaults below. The resolved struct is what goes into the manifest.

use std::path::Path;

use purify_core::feedback::Strategy;
use purify_core::sde::{NoiseKind, Scheme};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Everything a config file may set. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub gamma: Option<f64>,
    pub dt: Option<f64>,
    pub time: Option<f64>,
    pub trajectories: Option<usize>,
    pub seed: Option<u64>,
    pub strategy: Option<Strategy>,
    pub p0: Option<f64>,
    pub b: Option<f64>,
    pub steps: Option<usize>,
    pub rel_tol: Option<f64>,
    pub record_every: Option<usize>,
    pub noise: Option<NoiseKind>,
    pub scheme: Option<Scheme>,
    pub points: Option<usize>,
    pub targets: Option<Vec<f64>>,
    pub grid: Option<usize>,
    pub theta0: Option<f64>,
    pub budget: Option<u64>,
    pub format: Option<Format>,
}

/// Reads a config file. A run manifest is accepted too, in which case its
/// `config` block is used and its command must match `command`.
pub fn load_file_config(path: &Path, command: &str) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let config = match (value.get("command"), value.get("config")) {
        (Some(Value::String(recorded)), Some(inner)) => {
            if recorded != command {
                return Err(CliError::Config(format!(
                    "manifest {} was written by `{recorded}`, not `{command}`",
                    path.display()
                )));
            }
            inner.clone()
        }
        _ => value,
    };
    serde_json::from_value(config).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DiscreteConfig {
    pub p0: f64,
    pub b: f64,
    pub steps: usize,
    pub strategy: Strategy,
    pub seed: u64,
}

impl Default for DiscreteConfig {
    fn default() -> Self {
        Self {
            p0: 0.5,
            b: 0.2,
            steps: 10,
            strategy: Strategy::Optimal,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SdeRunConfig {
    pub gamma: f64,
    pub dt: f64,
    pub time: f64,
    pub trajectories: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub p0: f64,
    pub record_every: usize,
    pub noise: NoiseKind,
    pub scheme: Scheme,
    pub rel_tol: f64,
}

impl Default for SdeRunConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            dt: 1e-4,
            time: 1.0,
            trajectories: 1000,
            seed: 0,
            strategy: Strategy::Optimal,
            p0: 0.5,
            record_every: 100,
            noise: NoiseKind::TwoPoint,
            scheme: Scheme::Kraus,
            rel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClassicalConfig {
    pub gamma: f64,
    pub time: f64,
    pub points: usize,
    pub rel_tol: f64,
}

impl Default for ClassicalConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            time: 2.0,
            points: 41,
            rel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SpeedupConfig {
    pub gamma: f64,
    pub targets: Vec<f64>,
    pub rel_tol: f64,
}

/// Final entropies from 0.45 down to 1e-6, log-spaced.
pub fn default_targets() -> Vec<f64> {
    let (hi, lo): (f64, f64) = (0.45f64.ln(), 1e-6f64.ln());
    let n = 40;
    (0..n)
        .map(|i| (hi + (lo - hi) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

impl Default for SpeedupConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            targets: default_targets(),
            rel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OptimalityRunConfig {
    pub steps: usize,
    pub b: f64,
    pub grid: usize,
    pub p0: f64,
    pub theta0: f64,
    pub budget: u64,
}

impl Default for OptimalityRunConfig {
    fn default() -> Self {
        Self {
            steps: 3,
            b: 0.2,
            grid: 37,
            p0: 0.25,
            theta0: 0.0,
            budget: 100_000_000,
        }
    }
}

/// `flag`, else `file`, else `default`.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick(None, None, 3), 3);
    }

    #[test]
    fn file_keys_mirror_flags() {
        let cfg: FileConfig = serde_json::from_str(
            r#"{"gamma": 2.0, "rel-tol": 1e-9, "strategy": "fixed-theta=0.5", "record-every": 4, "noise": "gaussian"}"#,
        )
        .unwrap();
        assert_eq!(cfg.gamma, Some(2.0));
        assert_eq!(cfg.rel_tol, Some(1e-9));
        assert_eq!(cfg.strategy, Some(Strategy::FixedTheta(0.5)));
        assert_eq!(cfg.record_every, Some(4));
        assert_eq!(cfg.noise, Some(NoiseKind::Gaussian));
        assert!(serde_json::from_str::<FileConfig>(r#"{"gama": 2.0}"#).is_err());
        assert!(serde_json::from_str::<FileConfig>(r#"{"strategy": "best"}"#).is_err());
    }

    #[test]
    fn default_targets_decrease() {
        let t = default_targets();
        assert!(t.windows(2).all(|w| w[1] < w[0]));
        assert!((t[0] - 0.45).abs() < 1e-12 && (t[t.len() - 1] - 1e-6).abs() < 1e-18);
    }
}
