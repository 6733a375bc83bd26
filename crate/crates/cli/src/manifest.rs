use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use neutralflow_core::output::{to_json, Artifact};

#[derive(Debug, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Everything written by one invocation. `wall_time_seconds` is the only
/// field that varies between identical runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: Option<String>,
    pub config_echo: Option<String>,
    pub out_dir: String,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    pub files: Vec<FileEntry>,
}

/// `NEUTRALFLOW_OUT` takes precedence over `--out`.
pub fn resolve_out(flag: &Path) -> PathBuf {
    match std::env::var_os("NEUTRALFLOW_OUT") {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => flag.to_path_buf(),
    }
}

pub fn write_all(
    out: &Path,
    command: &str,
    config: Option<(&Path, &str)>,
    artifacts: &[Artifact],
    start: Instant,
) -> io::Result<()> {
    fs::create_dir_all(out)?;
    let mut files = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        fs::write(out.join(&a.name), &a.bytes)?;
        files.push(FileEntry {
            name: a.name.clone(),
            sha256: hex::encode(Sha256::digest(&a.bytes)),
            bytes: a.bytes.len(),
        });
    }
    let m = RunManifest {
        command: command.to_string(),
        config_path: config.map(|c| c.0.display().to_string()),
        config_echo: config.map(|c| c.1.to_string()),
        out_dir: out.display().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        files,
    };
    fs::write(out.join("manifest.json"), to_json(&m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lists_hashes() {
        let dir = tempfile::tempdir().unwrap();
        let a = vec![Artifact::new("a.csv", "x\n1\n".into())];
        write_all(dir.path(), "solve", None, &a, Instant::now()).unwrap();
        let m: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
                .unwrap();
        let f = &m["files"][0];
        assert_eq!(f["name"], "a.csv");
        assert_eq!(f["sha256"], hex::encode(Sha256::digest(b"x\n1\n")));
    }
}
