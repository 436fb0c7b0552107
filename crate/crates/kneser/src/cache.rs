//! Content-addressed store for genus files.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "NEIGHBOR_CACHE_DIR";

/// Hex SHA-256 of the canonical input text.
pub fn input_hash(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn entry_path(dir: &Path, hash: &str) -> PathBuf {
    dir.join(format!("{hash}.genus.json"))
}

pub fn load(dir: &Path, hash: &str) -> Option<String> {
    fs::read_to_string(entry_path(dir, hash)).ok()
}

/// Writes through a temporary file so readers never see a partial entry.
pub fn store(dir: &Path, hash: &str, text: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let path = entry_path(dir, hash);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(tmp, path)
}
