//! Memo table for oracle values, optionally persisted as a JSON map
//! `{"manifold-key|a,b": "num/den"}`.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::RwLock;

use crate::rational::ExactRational;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cache file is not a JSON string map: {0}")]
    Format(#[from] serde_json::Error),
    #[error("cache entry `{key}` has malformed value `{value}`")]
    BadValue { key: String, value: String },
    #[error("cache entry `{key}` is already {existing}, refusing {new}")]
    Conflict {
        key: String,
        existing: Box<ExactRational>,
        new: Box<ExactRational>,
    },
}

/// Cache key for a class on a manifold, e.g. `BlP2|3,-1`.
pub fn memo_key(manifold_key: &str, coefficients: &[i64]) -> String {
    let coeffs: Vec<String> = coefficients.iter().map(|c| c.to_string()).collect();
    format!("{manifold_key}|{}", coeffs.join(","))
}

/// Write-once map from class keys to exact values. Readers share the lock;
/// writers are serialized.
#[derive(Debug, Default)]
pub struct MemoTable {
    entries: RwLock<BTreeMap<String, ExactRational>>,
    dirty: AtomicBool,
    path: Option<PathBuf>,
}

impl Clone for MemoTable {
    fn clone(&self) -> Self {
        Self {
            entries: RwLock::new(self.snapshot()),
            dirty: AtomicBool::new(self.is_dirty()),
            path: self.path.clone(),
        }
    }
}

impl MemoTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Opens the table backed by `path`. A missing file gives an empty
    /// table; an unreadable or malformed file is an error.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let path = path.into();
        let entries = read_file(&path)?.unwrap_or_default();
        Ok(Self {
            entries: RwLock::new(entries),
            dirty: AtomicBool::new(false),
            path: Some(path),
        })
    }

    /// An empty table that will persist to `path` without reading it first.
    pub fn cold(path: impl Into<PathBuf>) -> Self {
        Self {
            path: Some(path.into()),
            ..Self::default()
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, key: &str) -> Option<ExactRational> {
        self.entries.read().expect("memo lock").get(key).cloned()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.read().expect("memo lock").contains_key(key)
    }

    /// Inserts a value. Re-inserting the same value is a no-op; a different
    /// value for an existing key is refused.
    pub fn insert(&self, key: String, value: ExactRational) -> Result<(), CacheError> {
        let mut entries = self.entries.write().expect("memo lock");
        match entries.get(&key) {
            Some(existing) if *existing == value => Ok(()),
            Some(existing) => Err(CacheError::Conflict {
                existing: Box::new(existing.clone()),
                key,
                new: Box::new(value),
            }),
            None => {
                entries.insert(key, value);
                self.dirty.store(true, Ordering::Release);
                Ok(())
            }
        }
    }

    /// Copies every entry of `other` into this table.
    pub fn merge(&self, other: &MemoTable) -> Result<(), CacheError> {
        for (k, v) in other.snapshot() {
            self.insert(k, v)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty.load(Ordering::Acquire)
    }

    pub fn snapshot(&self) -> BTreeMap<String, ExactRational> {
        self.entries.read().expect("memo lock").clone()
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, String> = self
            .snapshot()
            .into_iter()
            .map(|(k, v)| (k, v.to_fraction_string()))
            .collect();
        serde_json::to_string_pretty(&map).expect("string map serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CacheError> {
        let table = Self::new();
        for (k, v) in parse_entries(text)? {
            table.insert(k, v)?;
        }
        table.dirty.store(false, Ordering::Release);
        Ok(table)
    }

    /// Load-merge-save: entries already in the file are kept, entries of
    /// this table overwrite them, and the whole file is replaced atomically.
    pub fn save(&self) -> Result<(), CacheError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut merged = match read_file(path) {
            Ok(Some(existing)) => existing,
            // an unreadable old file is replaced rather than merged
            Ok(None) | Err(_) => BTreeMap::new(),
        };
        merged.extend(self.snapshot());
        let out: BTreeMap<String, String> = merged
            .into_iter()
            .map(|(k, v)| (k, v.to_fraction_string()))
            .collect();
        let text = serde_json::to_string_pretty(&out).expect("string map serializes");
        let io_err = |source| CacheError::Io {
            path: path.clone(),
            source,
        };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(io_err)?;
        }
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text + "\n").map_err(io_err)?;
        fs::rename(&tmp, path).map_err(io_err)?;
        self.dirty.store(false, Ordering::Release);
        Ok(())
    }
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, ExactRational>, CacheError> {
    let raw: BTreeMap<String, String> = serde_json::from_str(text)?;
    raw.into_iter()
        .map(|(k, v)| match v.parse() {
            Ok(r) => Ok((k, r)),
            Err(_) => Err(CacheError::BadValue { key: k, value: v }),
        })
        .collect()
}

fn read_file(path: &Path) -> Result<Option<BTreeMap<String, ExactRational>>, CacheError> {
    match fs::read_to_string(path) {
        Ok(text) => parse_entries(&text).map(Some),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(source) => Err(CacheError::Io {
            path: path.to_path_buf(),
            source,
        }),
    }
}
