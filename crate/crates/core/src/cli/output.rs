use super::{CliError, RunConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Contents of `manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub wall_time_seconds: f64,
    pub outputs: Vec<OutputRecord>,
}

pub(crate) fn version_string() -> String {
    match option_env!("LQG_GIT_DESCRIBE") {
        Some(d) => format!("v{}-{d}", env!("CARGO_PKG_VERSION")),
        None => format!("v{}", env!("CARGO_PKG_VERSION")),
    }
}

pub(crate) fn io_error(path: &Path, e: std::io::Error) -> CliError {
    let msg = format!("{}: {e}", path.display());
    match e.kind() {
        ErrorKind::StorageFull | ErrorKind::QuotaExceeded | ErrorKind::OutOfMemory | ErrorKind::FileTooLarge => {
            CliError::resource(msg)
        }
        _ => CliError::usage(Some("--out"), msg),
    }
}

/// Writes run outputs and remembers them so a failed run can be undone.
pub(crate) struct Emitter {
    /// `None` discards everything.
    dir: Option<PathBuf>,
    created: Vec<PathBuf>,
    written: Vec<PathBuf>,
    records: Vec<OutputRecord>,
}

impl Emitter {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        let mut created = Vec::new();
        let mut missing = Vec::new();
        let mut p = dir.to_path_buf();
        while !p.as_os_str().is_empty() && !p.exists() {
            missing.push(p.clone());
            match p.parent() {
                Some(parent) => p = parent.to_path_buf(),
                None => break,
            }
        }
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        created.extend(missing);
        Ok(Self { dir: Some(dir.to_path_buf()), created, written: Vec::new(), records: Vec::new() })
    }

    pub fn discard() -> Self {
        Self { dir: None, created: Vec::new(), written: Vec::new(), records: Vec::new() }
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = dir.join(name);
        self.written.push(path.clone());
        fs::write(&path, bytes).map_err(|e| io_error(&path, e))?;
        self.records.push(OutputRecord {
            file: name.to_owned(),
            bytes: bytes.len(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    pub fn finish(mut self, config: &RunConfig, wall_time_seconds: f64) -> Result<Vec<OutputRecord>, CliError> {
        let manifest = Manifest {
            version: version_string(),
            command: config.command.name().to_owned(),
            config: serde_json::to_value(&config.params).expect("params serialize"),
            wall_time_seconds,
            outputs: self.records.clone(),
        };
        let Some(dir) = self.dir.clone() else { return Ok(self.records) };
        let body = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        let path = dir.join("manifest.json");
        self.written.push(path.clone());
        if let Err(e) = fs::write(&path, body) {
            let err = io_error(&path, e);
            self.abort();
            return Err(err);
        }
        Ok(self.records)
    }

    /// Removes every file written so far and any directory this run created.
    pub fn abort(&mut self) {
        for p in self.written.drain(..) {
            let _ = fs::remove_file(p);
        }
        for d in self.created.drain(..) {
            let _ = fs::remove_dir(d);
        }
    }
}
