//! Report cache. Entries are keyed by a canonical description of the
//! computation; the stored value is the exact JSON text of the report, so a
//! cache hit is byte-identical to recomputation by construction. The digest
//! covers the value text: a tampered or truncated entry fails the check and
//! is recomputed and rewritten, with a warning on stderr.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Serialize, Deserialize)]
struct Entry {
    key_desc: String,
    digest: String,
    value: String,
}

fn hex_sha256(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir }
    }

    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    fn entry_path(dir: &Path, key_desc: &str) -> PathBuf {
        dir.join(format!("{}.json", hex_sha256(key_desc.as_bytes())))
    }

    fn load(path: &Path, key_desc: &str) -> Option<String> {
        let raw = fs::read_to_string(path).ok()?;
        let entry: Entry = serde_json::from_str(&raw).ok()?;
        if entry.key_desc != key_desc || entry.digest != hex_sha256(entry.value.as_bytes()) {
            return None;
        }
        Some(entry.value)
    }

    fn store(path: &Path, key_desc: &str, value: &str) {
        let entry = Entry {
            key_desc: key_desc.to_string(),
            digest: hex_sha256(value.as_bytes()),
            value: value.to_string(),
        };
        // failures to persist are not failures to answer
        if let Ok(text) = serde_json::to_string(&entry) {
            let _ = fs::write(path, text);
        }
    }

    /// Returns the cached report text for `key_desc`, or computes, stores
    /// and returns it. Errors from `compute` are never cached.
    pub fn get_or_compute(
        &self,
        key_desc: &str,
        compute: impl FnOnce() -> Result<String, CliError>,
    ) -> Result<String, CliError> {
        let Some(dir) = &self.dir else {
            return compute();
        };
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("warning: cannot create cache directory {}: {e}; caching disabled", dir.display());
            return compute();
        }
        let path = Self::entry_path(dir, key_desc);
        if path.exists() {
            match Self::load(&path, key_desc) {
                Some(value) => return Ok(value),
                None => {
                    eprintln!(
                        "warning: discarding corrupt cache entry {}; recomputing",
                        path.display()
                    );
                }
            }
        }
        let value = compute()?;
        Self::store(&path, key_desc, &value);
        Ok(value)
    }
}
