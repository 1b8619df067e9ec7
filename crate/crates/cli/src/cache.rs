//! Persistent cache of command output, keyed by a content hash of the
//! operation, its parameters and the code version.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

/// Bumped whenever the entry layout or any cached output format changes.
pub const FORMAT_VERSION: u32 = 1;

const CODE_TAG: &str = concat!("swcalc-", env!("CARGO_PKG_VERSION"));

pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { root: dir.into() }
    }

    /// `flag`, else `$SWCALC_CACHE`, else the per-user cache directory.
    pub fn resolve(flag: Option<&Path>) -> Option<Cache> {
        if let Some(p) = flag {
            return Some(Cache::at(p));
        }
        if let Some(p) = std::env::var_os("SWCALC_CACHE").filter(|p| !p.is_empty()) {
            return Some(Cache::at(PathBuf::from(p)));
        }
        if let Some(p) = std::env::var_os("XDG_CACHE_HOME").filter(|p| !p.is_empty()) {
            return Some(Cache::at(PathBuf::from(p).join("swcalc")));
        }
        std::env::var_os("HOME").map(|h| Cache::at(PathBuf::from(h).join(".cache").join("swcalc")))
    }

    fn dir(&self) -> PathBuf {
        self.root.join(format!("v{FORMAT_VERSION}"))
    }

    pub fn key(op: &str, params: &[(&str, String)]) -> String {
        let mut h = Sha256::new();
        h.update(CODE_TAG.as_bytes());
        h.update(b"\0");
        h.update(op.as_bytes());
        for (k, v) in params {
            h.update(b"\0");
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir().join(format!("{key}.json"))
    }

    /// The stored payload, or `None` for a miss or an entry written by
    /// another format version.
    pub fn get(&self, key: &str) -> Option<String> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let doc: serde_json::Value = serde_json::from_str(&text).ok()?;
        if doc["version"].as_u64() != Some(FORMAT_VERSION as u64) || doc["key"].as_str() != Some(key) {
            return None;
        }
        doc["payload"].as_str().map(str::to_string)
    }

    /// Writes an entry atomically: temp file in the same directory, then
    /// rename.
    pub fn put(&self, key: &str, payload: &str) -> std::io::Result<()> {
        let dir = self.dir();
        fs::create_dir_all(&dir)?;
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let doc = serde_json::json!({
            "version": FORMAT_VERSION,
            "key": key,
            "code": CODE_TAG,
            "created": created,
            "payload": payload,
        });
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        tmp.write_all(doc.to_string().as_bytes())?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_stale_entries() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = Cache::key("ring", &[("n", "10".into())]);
        assert_eq!(cache.get(&key), None);
        cache.put(&key, "payload\nwith lines").unwrap();
        assert_eq!(cache.get(&key).as_deref(), Some("payload\nwith lines"));
        // An entry from another format version is ignored.
        let stale = serde_json::json!({"version": FORMAT_VERSION + 1, "key": key, "payload": "old"});
        fs::write(cache.path(&key), stale.to_string()).unwrap();
        assert_eq!(cache.get(&key), None);
    }

    #[test]
    fn keys_depend_on_parameters() {
        let a = Cache::key("sw", &[("n", "9".into())]);
        let b = Cache::key("sw", &[("n", "10".into())]);
        assert_ne!(a, b);
        assert_eq!(a, Cache::key("sw", &[("n", "9".into())]));
    }
}
