//! Provenance record written next to every output file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    /// SHA-256 of the compact JSON encoding of `config`.
    pub config_hash: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: impl Into<String>,
        timestamp: impl Into<String>,
        seed: Option<u64>,
        config: serde_json::Value,
        outputs: Vec<String>,
    ) -> Self {
        let config_hash = hash_config(&config);
        Self {
            tool: "qdce".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            timestamp: timestamp.into(),
            seed,
            config,
            config_hash,
            outputs,
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

pub fn hash_config(config: &serde_json::Value) -> String {
    let digest = Sha256::digest(config.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// `out/sweep.csv` becomes `out/sweep.manifest.json`.
pub fn manifest_path(output: impl AsRef<Path>) -> PathBuf {
    let output = output.as_ref();
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.manifest.json"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_next_to_output() {
        assert_eq!(manifest_path("out/sweep.csv"), PathBuf::from("out/sweep.manifest.json"));
        assert_eq!(manifest_path("x"), PathBuf::from("x.manifest.json"));
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = serde_json::json!({"seed": 1, "scheme": "QDCE"});
        let b = serde_json::json!({"seed": 2, "scheme": "QDCE"});
        assert_eq!(hash_config(&a), hash_config(&a.clone()));
        assert_ne!(hash_config(&a), hash_config(&b));
        assert_eq!(hash_config(&a).len(), 64);
    }

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let m = RunManifest::new(
            "qdce",
            "2026-01-01T00:00:00Z",
            Some(7),
            serde_json::json!({"shots": 8192}),
            vec!["a.csv".into()],
        );
        m.write(&path).unwrap();
        assert_eq!(RunManifest::read(&path).unwrap(), m);
    }
}
