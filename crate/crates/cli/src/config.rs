//! Run configuration, read from TOML or JSON and overridden by flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct RunConfig {
    pub k_max: i64,
    pub j_max: u32,
    pub n_max: u32,
    pub m_max: u32,
    /// Levels used to separate degenerate zeroth-order eigenvalues.
    pub k_set: Vec<i64>,
    pub cache_dir: PathBuf,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    /// Truncation order of q-series.
    pub q_trunc: u32,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k_max: 6,
            j_max: 3,
            n_max: 6,
            m_max: 1,
            k_set: vec![1, 2, 3],
            cache_dir: PathBuf::from(".qkdv-cache"),
            out_dir: PathBuf::from("qkdv-out"),
            format: OutputFormat::Json,
            q_trunc: 40,
            jobs: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_max < 0 {
            bail!("kMax must be nonnegative, got {}", self.k_max);
        }
        if self.j_max as i64 > self.k_max + 1 {
            bail!("jMax = {} exceeds kMax + 1 = {}", self.j_max, self.k_max + 1);
        }
        if self.m_max > self.j_max {
            bail!("mMax = {} needs Hamiltonians to order jMax >= mMax, got jMax = {}", self.m_max, self.j_max);
        }
        if self.k_set.is_empty() {
            bail!("kSet is empty");
        }
        if let Some(k) = self.k_set.iter().find(|&&k| k < 0 || k > self.k_max) {
            bail!("kSet level {k} outside 0..={}", self.k_max);
        }
        if self.q_trunc == 0 {
            bail!("the q-series truncation must be positive");
        }
        Ok(())
    }

    /// Reads a `.toml` or `.json` file; missing keys take their defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text)?,
            Some("toml") => toml::from_str(&text)?,
            _ => bail!("config file must end in .toml or .json: {}", path.display()),
        };
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Levels reported by the spectral commands.
    pub fn levels(&self) -> Vec<i64> {
        (0..=self.k_max).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let cfg = RunConfig { k_max: 9, k_set: vec![1, 2], format: OutputFormat::Csv, ..Default::default() };
        assert_eq!(toml::from_str::<RunConfig>(&cfg.to_toml()).unwrap(), cfg);
        assert_eq!(serde_json::from_str::<RunConfig>(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        assert!(RunConfig { j_max: 9, k_max: 2, ..Default::default() }.validate().is_err());
        assert!(RunConfig { m_max: 4, ..Default::default() }.validate().is_err());
        assert!(RunConfig { k_set: vec![], ..Default::default() }.validate().is_err());
        assert!(RunConfig { k_set: vec![7], ..Default::default() }.validate().is_err());
    }

    #[test]
    fn partial_file() {
        let cfg: RunConfig = toml::from_str("kMax = 3\njMax = 2").unwrap();
        assert_eq!(cfg.k_max, 3);
        assert_eq!(cfg.n_max, RunConfig::default().n_max);
    }
}
