//! Optional defaults file: `key = value` lines (TOML syntax).
//!
//! ```toml
//! threads = 4
//! brute_cap = 5000
//! table_cap = 100000000
//! sieve_guard = 100000000
//! out_dir = "results"
//! format = "csv"
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDefaults {
    pub threads: Option<usize>,
    pub brute_cap: Option<u64>,
    pub table_cap: Option<u64>,
    pub sieve_guard: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<String>,
}

impl FileDefaults {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
