//! Fetch-and-cache client for public bulk CSV downloads. Files land in a
//! cache directory keyed by the sha256 of the URL, next to a sidecar
//! recording provenance, and are reused while younger than `max_age`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime};

use sha2::{Digest, Sha256};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

#[derive(Debug)]
pub enum FetchError {
    /// Transport-level failure (DNS, refused connection, interrupted body).
    Network(String),
    HttpStatus(u16),
    CacheWrite(std::io::Error),
}

impl fmt::Display for FetchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FetchError::Network(e) => write!(f, "network error: {e}"),
            FetchError::HttpStatus(code) => write!(f, "server returned HTTP {code}"),
            FetchError::CacheWrite(e) => write!(f, "cache write failed: {e}"),
        }
    }
}

impl std::error::Error for FetchError {}

/// Cache directory: `FSCI_CACHE_DIR` if set, else `fsci-cache` under the
/// system temp directory.
pub fn default_cache_dir() -> PathBuf {
    match std::env::var_os("FSCI_CACHE_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => std::env::temp_dir().join("fsci-cache"),
    }
}

/// Path the URL caches to (without consulting the network).
pub fn cache_path(url: &str, cache_dir: &Path) -> PathBuf {
    let digest = Sha256::digest(url.as_bytes());
    cache_dir.join(format!("{}.csv", hex::encode(digest)))
}

/// Returns a local path for `url`, downloading at most once per `max_age`.
///
/// Downloads are atomic (temp file, then rename) and leave a `.meta` sidecar
/// of exactly three LF-terminated lines: `url=`, `fetched_at=` (RFC 3339),
/// and `sha256=` of the content.
pub fn fetch_source(url: &str, cache_dir: &Path, max_age: Duration) -> Result<PathBuf, FetchError> {
    let path = cache_path(url, cache_dir);
    if let Ok(meta) = fs::metadata(&path) {
        let age = meta
            .modified()
            .ok()
            .and_then(|m| SystemTime::now().duration_since(m).ok());
        if let Some(age) = age {
            if age <= max_age {
                return Ok(path);
            }
        }
    }

    let mut response = ureq::get(url).call().map_err(|e| match e {
        ureq::Error::StatusCode(code) => FetchError::HttpStatus(code),
        other => FetchError::Network(other.to_string()),
    })?;
    let body = response
        .body_mut()
        .read_to_vec()
        .map_err(|e| FetchError::Network(e.to_string()))?;

    fs::create_dir_all(cache_dir).map_err(FetchError::CacheWrite)?;
    let tmp = path.with_extension(format!("tmp-{}", std::process::id()));
    fs::write(&tmp, &body).map_err(FetchError::CacheWrite)?;
    fs::rename(&tmp, &path).map_err(FetchError::CacheWrite)?;

    let fetched_at = OffsetDateTime::now_utc()
        .format(&Rfc3339)
        .expect("RFC 3339 formatting");
    let content_hash = hex::encode(Sha256::digest(&body));
    let sidecar = format!("url={url}\nfetched_at={fetched_at}\nsha256={content_hash}\n");
    fs::write(path.with_extension("meta"), sidecar).map_err(FetchError::CacheWrite)?;
    Ok(path)
}
