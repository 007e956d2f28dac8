use std::path::PathBuf;

use clap::ValueEnum;
use dqm_core::algebra::{FieldDesc, Fq, GaloisField};
use dqm_core::forms::NuPolicy;
use dqm_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Everything a command needs besides its own arguments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobConfig {
    pub p: u32,
    pub e: u32,
    /// Modulus coefficients over `F_p`, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    pub precision_cap: usize,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub progress: bool,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            p: 3,
            e: 1,
            modulus: None,
            cache_dir: None,
            precision_cap: NuPolicy::DEFAULT_CAP,
            format: Format::Text,
            jobs: None,
            progress: false,
        }
    }
}

impl JobConfig {
    pub fn field_desc(&self) -> Result<FieldDesc> {
        match &self.modulus {
            Some(m) => FieldDesc::with_modulus(self.p, self.e, m.clone()),
            None => FieldDesc::new(self.p, self.e),
        }
    }

    /// Validates the field parameters and returns the interned field.
    pub fn field(&self) -> Result<Fq> {
        GaloisField::get(&self.field_desc()?)
    }

    pub fn validate(&self) -> Result<()> {
        self.field()?;
        if self.precision_cap == 0 {
            return Err(Error::InvalidArgument("--precision-cap must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("--jobs must be positive".into()));
        }
        Ok(())
    }
}

/// Parses `1,1,1` into modulus coefficients.
pub fn parse_modulus(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidField(format!("bad modulus coefficient `{}`", c.trim())))
        })
        .collect()
}

/// `$DQM_CACHE_DIR` is handled by the argument parser; this is the fallback.
pub fn default_cache_dir() -> Option<PathBuf> {
    dirs::data_dir().map(|d| d.join("dqm"))
}
