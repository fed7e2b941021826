//! On-disk reference solutions.
//!
//! A reference is stored as `<key>.csv` (the `fields.csv` format) next to
//! `<key>.sha256`, the SHA-256 of the CSV bytes. The key itself is derived
//! from the configuration, so changing any parameter selects a new file.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::phase_grid::MacroFields;

use super::config::SolverConfig;
use super::output::{read_fields, write_fields};
use super::run::run;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Short stable key of a configuration (output directory excluded).
pub fn config_key(cfg: &SolverConfig) -> Result<String> {
    let mut c = cfg.clone();
    c.output_dir = PathBuf::new();
    c.parallel = false;
    let text = c.to_toml_string()?;
    Ok(format!(
        "{}_{}_nx{}_{}",
        c.scheme,
        format!("{:?}", c.test).to_lowercase(),
        c.n_x,
        &sha256_hex(text.as_bytes())[..12]
    ))
}

fn serialize(x: &[f64], fields: &MacroFields) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_fields(&mut buf, x, fields)?;
    Ok(buf)
}

#[derive(Debug, Clone)]
pub struct ReferenceStore {
    dir: PathBuf,
}

impl ReferenceStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn paths(&self, key: &str) -> (PathBuf, PathBuf) {
        (
            self.dir.join(format!("{key}.csv")),
            self.dir.join(format!("{key}.sha256")),
        )
    }

    /// Load a stored reference, checking the CSV against its recorded hash.
    pub fn load(&self, key: &str) -> Result<Option<(Vec<f64>, MacroFields)>> {
        let (csv, sum) = self.paths(key);
        if !csv.exists() {
            return Ok(None);
        }
        let bytes = std::fs::read(&csv)?;
        let expected = std::fs::read_to_string(&sum)?;
        let actual = sha256_hex(&bytes);
        if expected.trim() != actual {
            return Err(Error::ReferenceDrift(format!(
                "{} hashes to {actual}, recorded {}",
                csv.display(),
                expected.trim()
            )));
        }
        Ok(Some(read_fields(&bytes[..])?))
    }

    pub fn store(&self, key: &str, x: &[f64], fields: &MacroFields) -> Result<String> {
        std::fs::create_dir_all(&self.dir)?;
        let (csv, sum) = self.paths(key);
        let bytes = serialize(x, fields)?;
        let hash = sha256_hex(&bytes);
        std::fs::write(&csv, &bytes)?;
        std::fs::write(&sum, format!("{hash}\n"))?;
        Ok(hash)
    }

    /// Stored reference for `cfg`, computing and storing it on first use.
    pub fn get_or_compute(&self, cfg: &SolverConfig) -> Result<MacroFields> {
        let key = config_key(cfg)?;
        if let Some((_, fields)) = self.load(&key)? {
            return Ok(fields);
        }
        let report = run(cfg)?;
        self.store(&key, &report.x, &report.fields)?;
        Ok(report.fields)
    }

    /// Recompute `cfg` and compare the result's hash with the stored one.
    /// Stores the result when nothing is stored yet.
    pub fn verify(&self, cfg: &SolverConfig) -> Result<String> {
        let key = config_key(cfg)?;
        let report = run(cfg)?;
        let bytes = serialize(&report.x, &report.fields)?;
        let actual = sha256_hex(&bytes);
        let (_, sum) = self.paths(&key);
        if !sum.exists() {
            return self.store(&key, &report.x, &report.fields);
        }
        let expected = std::fs::read_to_string(&sum)?;
        if expected.trim() != actual {
            return Err(Error::ReferenceDrift(format!(
                "recomputed {key} hashes to {actual}, recorded {}",
                expected.trim()
            )));
        }
        Ok(actual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_grid::MacroState;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let store = ReferenceStore::new(dir.path());
        let mut f = MacroFields::default();
        f.push(MacroState::new(1.0, 0.0, 1.0));
        f.push(MacroState::new(0.5, 0.1, 2.0));
        store.store("k", &[0.0, 0.5], &f).unwrap();
        assert_eq!(store.load("k").unwrap().unwrap().1, f);
        assert!(store.load("missing").unwrap().is_none());

        let csv = dir.path().join("k.csv");
        let text = std::fs::read_to_string(&csv).unwrap().replace("5.0000000000000000e-1", "5.0000000000000001e-1");
        std::fs::write(&csv, text).unwrap();
        assert!(matches!(store.load("k"), Err(Error::ReferenceDrift(_))));
    }

    #[test]
    fn key_depends_on_parameters() {
        let a = SolverConfig::default();
        let mut b = a.clone();
        b.tau = 1e-6;
        let mut c = a.clone();
        c.output_dir = "elsewhere".into();
        assert_ne!(config_key(&a).unwrap(), config_key(&b).unwrap());
        assert_eq!(config_key(&a).unwrap(), config_key(&c).unwrap());
    }
}
