use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Weights {
    #[default]
    Quantum,
    Classical,
}

/// Every setting a command can read. Filled from flags and from an optional
/// TOML file; a flag always wins over the file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spec: Option<String>,
    pub radius: Option<usize>,
    pub count: Option<usize>,
    pub cap: Option<usize>,
    pub tolerance: Option<String>,
    pub mode: Option<Mode>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub kmax: Option<usize>,
    pub n_max: Option<usize>,
    pub s: Option<String>,
    pub r: Option<String>,
    pub dimq: Option<String>,
    pub a: Option<String>,
    pub size: Option<usize>,
    pub max_len: Option<usize>,
    pub profile: Option<Profile>,
    pub weights: Option<Weights>,
}

macro_rules! merge_fields {
    ($flags:ident, $file:ident; $($field:ident),*) => {
        RunConfig { $($field: $flags.$field.or($file.$field)),* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))
    }

    /// Field-wise `flags.or(file)`.
    pub fn merge(flags: RunConfig, file: RunConfig) -> RunConfig {
        merge_fields!(flags, file; spec, radius, count, cap, tolerance, mode, format, output, seed,
            kmax, n_max, s, r, dimq, a, size, max_len, profile, weights)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or_default()
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn require_spec(&self) -> Result<&str, UsageError> {
        self.spec.as_deref().ok_or_else(|| UsageError("--spec is required".into()))
    }
}
