//! Reading inputs with JSON-pointer diagnostics and writing reports atomically.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_path_to_error::Segment;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const DEFAULT_MAX_DIM: usize = 2000;

/// A parsed input document and the digest of its bytes.
pub struct Loaded<T> {
    pub value: T,
    pub name: String,
    pub sha256: String,
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<Loaded<T>, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let value = parse(path, &bytes)?;
    Ok(Loaded {
        value,
        name: path.file_name().map_or_else(
            || path.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        ),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

pub fn parse<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| CliError::Malformed {
        path: path.to_path_buf(),
        pointer: json_pointer(e.path()),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| CliError::Malformed {
        path: path.to_path_buf(),
        pointer: String::new(),
        message: e.to_string(),
    })?;
    Ok(value)
}

/// RFC 6901 pointer for a serde path; the empty string is the root.
pub fn json_pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Cap on any matrix side, from `LHL_MAX_DIM`.
pub fn max_dim() -> Result<usize, CliError> {
    match std::env::var("LHL_MAX_DIM") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Option {
            option: "LHL_MAX_DIM".into(),
            message: format!("expected a positive integer, got {v:?}"),
        }),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

pub fn check_dim(found: usize) -> Result<(), CliError> {
    let cap = max_dim()?;
    if found > cap {
        return Err(CliError::TooLarge { found, cap });
    }
    Ok(())
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir: PathBuf = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, serde::Deserialize)]
    #[allow(dead_code)]
    struct Doc {
        items: Vec<Inner>,
    }

    #[derive(Debug, serde::Deserialize)]
    #[allow(dead_code)]
    struct Inner {
        count: u32,
    }

    #[test]
    fn pointer_names_the_field() {
        let err =
            parse::<Doc>(Path::new("x.json"), br#"{"items":[{"count":1},{"count":"two"}]}"#).unwrap_err();
        match err {
            CliError::Malformed { pointer, .. } => assert_eq!(pointer, "/items/1/count"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, "a").unwrap();
        write_atomic(&path, "b").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b");
    }
}
