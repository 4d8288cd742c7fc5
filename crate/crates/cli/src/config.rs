//! Config-file support: a flat TOML table may pre-set any flag, and
//! explicit command-line flags win over file entries.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliResult;

/// Optional flag values loadable from a TOML file. List-valued keys use
/// `n_list` / `eps_list` to stay distinct from the scalar `n`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub format: Option<String>,
    pub output: Option<PathBuf>,
    pub n: Option<usize>,
    pub bit: Option<u8>,
    pub separation: Option<f64>,
    pub noise: Option<f64>,
    pub loss: Option<f64>,
    pub tolerance: Option<f64>,
    pub max_loss: Option<f64>,
    pub strategy: Option<String>,
    pub n_max: Option<u32>,
    pub azuma: Option<Vec<String>>,
    pub n_list: Option<Vec<u32>>,
    pub eps_list: Option<Vec<f64>>,
    pub perturb: Option<f64>,
    pub tol: Option<f64>,
    pub corrupt: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|err| format!("cannot read {}: {err}", path.display()))?;
        Ok(toml::from_str(&text)?)
    }
}
