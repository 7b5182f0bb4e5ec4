//! On-disk JSON cache for expensive per-(Cartan data, key) results.
//!
//! Entries are written atomically (temp file then rename) and never mutated.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "ORESET_CACHE_DIR";

#[derive(Clone, Debug, Default)]
pub struct DiskCache {
    dir: Option<PathBuf>,
}

impl DiskCache {
    /// A cache that never touches the filesystem.
    pub fn disabled() -> Self {
        DiskCache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: Some(dir.into()) }
    }

    /// Uses `ORESET_CACHE_DIR` when set, otherwise disabled.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => DiskCache::at(d),
            _ => DiskCache::disabled(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, namespace: &str, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(namespace).join(format!("{key}.json")))
    }

    pub fn load<T: DeserializeOwned>(&self, namespace: &str, key: &str) -> Option<T> {
        let p = self.path(namespace, key)?;
        let text = fs::read_to_string(p).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store<T: Serialize>(&self, namespace: &str, key: &str, value: &T) -> Result<()> {
        let Some(p) = self.path(namespace, key) else {
            return Ok(());
        };
        if p.exists() {
            return Ok(());
        }
        let parent = p.parent().expect("cache path has a parent");
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!(".{}.{}.tmp", key, std::process::id()));
        fs::write(&tmp, serde_json::to_string(value)?)?;
        fs::rename(&tmp, &p)?;
        Ok(())
    }
}

/// Filesystem-safe rendering of a small integer vector, e.g. `1_0_2`.
pub fn key_of(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
}
