//! File-backed match store.
//!
//! ```text
//! <root>/matches/<match_id>/match.json      canonical match document
//! <root>/matches/<match_id>/match.sha256    hex digest of match.json
//! <root>/matches/<match_id>/models/<key>.json
//! ```

use std::collections::HashMap;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use passflow_core::match_data::{parse_match, to_json, MatchRecord};
use sha2::{Digest, Sha256};
use tokio::fs;

use crate::error::ApiError;

/// Outcome of storing a match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stored {
    pub match_id: String,
    /// False when identical content was already present.
    pub created: bool,
}

/// Ids and model keys become directory and file names.
pub fn is_safe_name(s: &str) -> bool {
    !s.is_empty()
        && s.len() <= 128
        && !s.starts_with('.')
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

pub struct Store {
    root: PathBuf,
    locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
    cache: RwLock<HashMap<String, Arc<MatchRecord>>>,
}

impl Store {
    pub async fn open(root: impl Into<PathBuf>) -> std::io::Result<Store> {
        let root = root.into();
        fs::create_dir_all(root.join("matches")).await?;
        Ok(Store {
            root,
            locks: Mutex::new(HashMap::new()),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn match_dir(&self, id: &str) -> PathBuf {
        self.root.join("matches").join(id)
    }

    fn model_path(&self, id: &str, key: &str) -> PathBuf {
        self.match_dir(id)
            .join("models")
            .join(format!("{key}.json"))
    }

    fn lock_for(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        let mut locks = self.locks.lock().expect("lock table poisoned");
        locks.entry(id.to_string()).or_default().clone()
    }

    /// Persist `record` under its match id. Re-uploading identical content is
    /// a no-op; different content under a taken id is a conflict.
    pub async fn put_match(&self, record: MatchRecord) -> Result<Stored, ApiError> {
        let id = record.match_id.clone();
        if !is_safe_name(&id) {
            let mut e = ApiError::bad_request(format!(
                "match_id `{id}` must be 1-128 characters from [A-Za-z0-9._-] and not start with a dot"
            ));
            e.path = Some("match_id".into());
            return Err(e);
        }
        let canonical = to_json(&record);
        let digest = hex::encode(Sha256::digest(canonical.as_bytes()));

        let lock = self.lock_for(&id);
        let _guard = lock.lock().await;
        let dir = self.match_dir(&id);
        match fs::read_to_string(dir.join("match.sha256")).await {
            Ok(existing) if existing.trim() == digest => {
                return Ok(Stored {
                    match_id: id,
                    created: false,
                })
            }
            Ok(_) => {
                return Err(ApiError::new(
                    axum::http::StatusCode::CONFLICT,
                    "conflict",
                    format!("match `{id}` already exists with different content"),
                ))
            }
            Err(e) if e.kind() == ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        fs::create_dir_all(dir.join("models")).await?;
        write_atomic(&dir.join("match.json"), canonical.as_bytes()).await?;
        write_atomic(&dir.join("match.sha256"), digest.as_bytes()).await?;
        self.cache
            .write()
            .expect("cache poisoned")
            .insert(id.clone(), Arc::new(record));
        tracing::info!(match_id = %id, "stored match");
        Ok(Stored {
            match_id: id,
            created: true,
        })
    }

    pub async fn get_match(&self, id: &str) -> Result<Arc<MatchRecord>, ApiError> {
        if let Some(m) = self.cache.read().expect("cache poisoned").get(id) {
            return Ok(m.clone());
        }
        let missing = || ApiError::not_found(format!("no match `{id}`"));
        if !is_safe_name(id) {
            return Err(missing());
        }
        let raw = match fs::read(self.match_dir(id).join("match.json")).await {
            Ok(raw) => raw,
            Err(e) if e.kind() == ErrorKind::NotFound => return Err(missing()),
            Err(e) => return Err(e.into()),
        };
        let record = parse_match(&raw)
            .map_err(|e| ApiError::internal(format!("stored match `{id}` is unreadable: {e}")))?;
        let record = Arc::new(record);
        self.cache
            .write()
            .expect("cache poisoned")
            .insert(id.to_string(), record.clone());
        Ok(record)
    }

    /// Stored model export bytes, if any.
    pub async fn get_model(&self, id: &str, key: &str) -> Result<Option<Vec<u8>>, ApiError> {
        if !is_safe_name(key) {
            return Ok(None);
        }
        match fs::read(self.model_path(id, key)).await {
            Ok(b) => Ok(Some(b)),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Write a model export unless one is already stored under `key`; model
    /// files are immutable. Returns the bytes now on disk.
    pub async fn put_model(&self, id: &str, key: &str, bytes: &[u8]) -> Result<Vec<u8>, ApiError> {
        let lock = self.lock_for(id);
        let _guard = lock.lock().await;
        if let Some(existing) = self.get_model(id, key).await? {
            return Ok(existing);
        }
        let path = self.model_path(id, key);
        fs::create_dir_all(path.parent().expect("model path has a parent")).await?;
        write_atomic(&path, bytes).await?;
        tracing::info!(match_id = %id, model = %key, "stored model");
        Ok(bytes.to_vec())
    }

    pub async fn model_keys(&self, id: &str) -> Result<Vec<String>, ApiError> {
        let mut keys = Vec::new();
        let mut dir = match fs::read_dir(self.match_dir(id).join("models")).await {
            Ok(d) => d,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(keys),
            Err(e) => return Err(e.into()),
        };
        while let Some(entry) = dir.next_entry().await? {
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(key) = name.strip_suffix(".json") {
                keys.push(key.to_string());
            }
        }
        keys.sort();
        Ok(keys)
    }
}

async fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).await?;
    fs::rename(&tmp, path).await
}
