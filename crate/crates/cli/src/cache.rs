//! On-disk cache of hierarchy tables.
//!
//! Each build is stored as one JSON file named by a key derived from the
//! engine version and the `(kMax, jMax)` range. The manifest records, per
//! file, the engine version, the range and a SHA-256 of the contents. A
//! request is served by any entry of the current engine version covering the
//! range; a changed engine version therefore never reuses old files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use log::{info, warn};
use qkdv::hierarchy::{GTable, GTableJson, Hierarchy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub key: String,
    pub engine_version: String,
    pub k_max: i64,
    pub j_max: u32,
    pub file: String,
    pub sha256: String,
}

/// Whether a request was served from disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Hit,
    Built,
}

pub struct Cache {
    dir: PathBuf,
    version: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Cache { dir: dir.into(), version: version.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(version: &str, k_max: i64, j_max: u32) -> String {
        sha256_hex(format!("{version}|{k_max}|{j_max}").as_bytes())
    }

    pub fn manifest(&self) -> Result<Manifest> {
        let p = self.dir.join(MANIFEST);
        if !p.exists() {
            return Ok(Manifest::default());
        }
        let text = fs::read_to_string(&p)?;
        match serde_json::from_str(&text) {
            Ok(m) => Ok(m),
            Err(e) => {
                warn!("unreadable cache manifest ({e}); starting a fresh one");
                Ok(Manifest::default())
            }
        }
    }

    fn write_atomic(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let tmp = self.dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, self.dir.join(name))?;
        Ok(())
    }

    fn load(&self, e: &ManifestEntry) -> Result<Hierarchy> {
        let bytes = fs::read(self.dir.join(&e.file))?;
        anyhow::ensure!(sha256_hex(&bytes) == e.sha256, "content hash mismatch for {}", e.file);
        let json: Vec<Vec<GTableJson>> = serde_json::from_slice(&bytes)?;
        let tables: Vec<Vec<GTable>> = json.iter().map(|row| row.iter().map(GTable::from_json).collect()).collect();
        Ok(Hierarchy::from_tables(tables)?)
    }

    /// Tables covering `(k_max, j_max)`, from disk when possible.
    pub fn hierarchy(&self, k_max: i64, j_max: u32) -> Result<(Hierarchy, Source)> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let mut manifest = self.manifest()?;
        let mut candidates: Vec<ManifestEntry> = manifest
            .entries
            .iter()
            .filter(|e| e.engine_version == self.version && e.k_max >= k_max && e.j_max >= j_max)
            .cloned()
            .collect();
        candidates.sort_by_key(|e| (e.k_max, e.j_max));
        for e in &candidates {
            match self.load(e) {
                Ok(h) => {
                    info!("cache hit: {} (kMax {}, jMax {})", e.file, e.k_max, e.j_max);
                    return Ok((h, Source::Hit));
                }
                Err(err) => {
                    warn!("discarding corrupt cache entry {}: {err:#}; rebuilding", e.file);
                    manifest.entries.retain(|x| x.key != e.key);
                }
            }
        }
        info!("building tables for kMax {k_max}, jMax {j_max}");
        let h = Hierarchy::build(k_max, j_max)?;
        let json: Vec<Vec<GTableJson>> = h.tables().iter().map(|row| row.iter().map(GTable::to_json).collect()).collect();
        let bytes = serde_json::to_vec(&json)?;
        let key = Self::key(&self.version, k_max, j_max);
        let file = format!("hierarchy-{}.json", &key[..16]);
        self.write_atomic(&file, &bytes)?;
        manifest.entries.retain(|x| x.key != key);
        manifest.entries.push(ManifestEntry {
            key,
            engine_version: self.version.clone(),
            k_max,
            j_max,
            file,
            sha256: sha256_hex(&bytes),
        });
        manifest.entries.sort_by(|a, b| (&a.engine_version, a.k_max, a.j_max).cmp(&(&b.engine_version, b.k_max, b.j_max)));
        self.write_atomic(MANIFEST, &serde_json::to_vec_pretty(&manifest)?)?;
        Ok((h, Source::Built))
    }
}
