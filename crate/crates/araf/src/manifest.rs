//! Run manifests: what was run, with which parameters, on which inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::AppError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Every parameter after defaults and implications are resolved.
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub rng: String,
    pub inputs: Vec<InputDigest>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            rng: araf_core::RNG_ALGORITHM.to_string(),
            inputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self, AppError> {
        let bytes = std::fs::read(path).map_err(|e| AppError::io(path, e))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex(&Sha256::digest(&bytes)),
        });
        Ok(self)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// `out.csv` -> `out.csv.manifest.json`, unless `explicit` is given.
pub fn manifest_path(primary: &Path, explicit: Option<&Path>) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let mut s = primary.as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_digest_of_empty_input() {
        assert_eq!(
            hex(&Sha256::digest(b"")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(
            manifest_path(Path::new("out/rules.json"), None),
            PathBuf::from("out/rules.json.manifest.json")
        );
        assert_eq!(
            manifest_path(Path::new("a"), Some(Path::new("b.json"))),
            PathBuf::from("b.json")
        );
    }
}
