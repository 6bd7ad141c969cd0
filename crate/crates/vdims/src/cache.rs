//! Human-readable result cache. One JSON file per cell, named by a content
//! hash of the full key so that convention or prime changes never resurrect
//! stale numbers.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub case: String,
    pub n: usize,
    /// `w` for weight systems, `p/<mode>` for truncated-algebra dimensions.
    pub space: String,
    pub primes: Vec<u64>,
    pub version: String,
}

impl CacheKey {
    fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.case.as_bytes());
        h.update([0]);
        h.update(self.n.to_le_bytes());
        h.update(self.space.as_bytes());
        h.update([0]);
        for p in &self.primes {
            h.update(p.to_le_bytes());
        }
        h.update(self.version.as_bytes());
        let out = h.finalize();
        out.iter().take(16).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    key: CacheKey,
    timestamp: u64,
    value: T,
}

pub struct Cache {
    dir: PathBuf,
    write_lock: Mutex<()>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Cache {
            dir,
            write_lock: Mutex::new(()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        let path = self.path_for(key);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                return None;
            }
        };
        let entry: Entry<T> = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(_) => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                return None;
            }
        };
        if &entry.key != key {
            self.misses.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        self.hits.fetch_add(1, Ordering::Relaxed);
        Some(entry.value)
    }

    pub fn put<T: Serialize>(&self, key: &CacheKey, value: &T) -> std::io::Result<()> {
        let entry = Entry {
            key: key.clone(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            value,
        };
        let text = serde_json::to_string_pretty(&entry)?;
        let _guard = self.write_lock.lock().unwrap();
        let tmp = self.path_for(key).with_extension("json.tmp");
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, self.path_for(key))
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }
}

/// Cache directory: `VDIMS_CACHE_DIR` override or `.vdims-cache`.
pub fn default_cache_dir() -> PathBuf {
    match std::env::var_os("VDIMS_CACHE_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(".vdims-cache"),
    }
}
