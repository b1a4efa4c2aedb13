#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn configs() -> Vec<(String, PathBuf)> {
    let mut v: Vec<(String, PathBuf)> = std::fs::read_dir(golden_dir().join("configs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), p))
        .collect();
    v.sort();
    v
}

pub fn command_of(config: &Path) -> String {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(config).unwrap()).unwrap();
    v["command"].as_str().unwrap().to_string()
}

pub fn scratch(name: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&p);
    std::fs::create_dir_all(&p).unwrap();
    p
}

pub fn nilbohr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilbohr"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs a config and returns the raw bytes of the result JSON.
pub fn run_config(config: &Path, out: &Path, workers: usize) -> Vec<u8> {
    let cmd = command_of(config);
    let o = nilbohr(&[
        &cmd,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--workers",
        &workers.to_string(),
    ]);
    assert!(
        o.status.success(),
        "{cmd} on {} failed: {}",
        config.display(),
        String::from_utf8_lossy(&o.stderr)
    );
    std::fs::read(out.join(format!("{cmd}.json"))).unwrap()
}
