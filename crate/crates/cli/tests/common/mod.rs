#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> PathBuf {
    root().join("tests/fixtures").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary from the crate directory so fixture paths are stable.
pub fn lhl(args: &[&str]) -> Run {
    lhl_env(args, &[])
}

pub fn lhl_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lhl"));
    cmd.current_dir(root()).args(args).env_remove("LHL_MAX_DIM");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Compares `actual` with `tests/golden/<name>`; `LHL_BLESS=1` rewrites it.
pub fn golden(name: &str, actual: &str) -> Result<(), String> {
    let path: PathBuf = root().join("tests/golden").join(name);
    if std::env::var_os("LHL_BLESS").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!(
            "{} differs from the emitted report:\n{actual}",
            path.display()
        ))
    }
}

pub fn schema(name: &str) -> serde_json::Value {
    let path = root().join("schemas").join(name);
    read_json(&path)
}

pub fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("readable")).expect("valid JSON")
}
