//! Result cache keyed by a content hash of the operation and its parameters.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Self { dir: dir.to_path_buf() }
    }

    pub fn key(operation: &str, params: &Value) -> String {
        let canonical = serde_json::json!({ "operation": operation, "params": params });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Write atomically via a temporary file so concurrent runs never see partial JSON.
    pub fn store(&self, key: &str, value: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.json.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(value).expect("JSON values serialize"))?;
        fs::rename(tmp, self.path(key))
    }
}
