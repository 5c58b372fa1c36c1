//! Content-addressed JSON cache on disk.
//!
//! Each entry is one file named by the SHA-256 of its canonical key JSON. The
//! file carries the schema version, the namespace and the key itself, so hash
//! collisions, stale schemas and truncated writes all read back as misses.
//! Writes go to a temporary sibling first and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable that overrides the cache directory.
pub const CACHE_DIR_ENV: &str = "OGW_CACHE_DIR";

const DEFAULT_DIR: &str = ".ogw-cache";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache i/o at {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cache encoding: {0}")]
    Encode(#[from] serde_json::Error),
}

#[derive(Serialize)]
struct EnvelopeOut<'a, K, V> {
    schema: u32,
    namespace: &'a str,
    key: &'a K,
    value: &'a V,
}

#[derive(Deserialize)]
struct EnvelopeIn {
    schema: u32,
    namespace: String,
    key: serde_json::Value,
    value: serde_json::Value,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The directory named by the environment override, else a project-local one.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Cache::new(d),
            _ => Cache::new(DEFAULT_DIR),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for<K: Serialize>(&self, namespace: &str, key: &K) -> Result<PathBuf, CacheError> {
        let canonical = serde_json::to_vec(key)?;
        let mut h = Sha256::new();
        h.update(namespace.as_bytes());
        h.update([0u8]);
        h.update(&canonical);
        let digest: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        Ok(self.dir.join(namespace).join(format!("{digest}.json")))
    }

    /// A stored value, or None when absent, unreadable, corrupt or from another schema.
    pub fn get<K: Serialize, V: DeserializeOwned>(&self, namespace: &str, key: &K) -> Option<V> {
        let path = self.path_for(namespace, key).ok()?;
        let bytes = fs::read(&path).ok()?;
        let env: EnvelopeIn = serde_json::from_slice(&bytes).ok()?;
        if env.schema != SCHEMA_VERSION || env.namespace != namespace || env.key != serde_json::to_value(key).ok()? {
            return None;
        }
        serde_json::from_value(env.value).ok()
    }

    pub fn put<K: Serialize, V: Serialize>(&self, namespace: &str, key: &K, value: &V) -> Result<(), CacheError> {
        static COUNTER: AtomicU64 = AtomicU64::new(0);
        let path = self.path_for(namespace, key)?;
        let parent = path.parent().expect("cache paths have a parent");
        let io = |source| CacheError::Io { path: path.clone(), source };
        fs::create_dir_all(parent).map_err(io)?;
        let body = serde_json::to_vec(&EnvelopeOut { schema: SCHEMA_VERSION, namespace, key, value })?;
        let tmp = parent.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&body)?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        };
        write().map_err(|e| {
            let _ = fs::remove_file(&tmp);
            io(e)
        })
    }

    /// Cached value if valid, else compute and store. Store failures are not fatal.
    pub fn get_or_compute<K, V, E>(&self, namespace: &str, key: &K, compute: impl FnOnce() -> Result<V, E>) -> Result<V, E>
    where
        K: Serialize,
        V: Serialize + DeserializeOwned,
    {
        if let Some(v) = self.get(namespace, key) {
            return Ok(v);
        }
        let v = compute()?;
        let _ = self.put(namespace, key, &v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert_eq!(cache.get::<_, String>("ns", &(1, 2)), None);
        cache.put("ns", &(1, 2), &"3/4".to_string()).unwrap();
        assert_eq!(cache.get::<_, String>("ns", &(1, 2)), Some("3/4".to_string()));
        assert_eq!(cache.get::<_, String>("other", &(1, 2)), None);
    }

    #[test]
    fn corrupt_and_stale_entries_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let path = cache.path_for("ns", &7u32).unwrap();
        cache.put("ns", &7u32, &1u32).unwrap();
        fs::write(&path, b"{\"schema\": 1, \"namesp").unwrap();
        assert_eq!(cache.get::<_, u32>("ns", &7u32), None);
        let stale = serde_json::json!({"schema": SCHEMA_VERSION + 1, "namespace": "ns", "key": 7, "value": 1});
        fs::write(&path, stale.to_string()).unwrap();
        assert_eq!(cache.get::<_, u32>("ns", &7u32), None);
        let v: Result<u32, ()> = cache.get_or_compute("ns", &7u32, || Ok(5));
        assert_eq!(v, Ok(5));
        assert_eq!(cache.get::<_, u32>("ns", &7u32), Some(5));
    }

    #[test]
    fn no_temporaries_left_behind() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        for i in 0..5u32 {
            cache.put("ns", &i, &i).unwrap();
        }
        let names: Vec<_> = fs::read_dir(dir.path().join("ns")).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 5);
        assert!(names.iter().all(|n| !n.to_string_lossy().starts_with(".tmp")));
    }
}
