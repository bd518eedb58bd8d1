//! Run manifests written beside every output file.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub version: String,
    /// Wall-clock milliseconds per phase, in execution order.
    pub timings_ms: Vec<(String, f64)>,
}

impl RunManifest {
    pub fn new(command: &str, params: Value) -> Self {
        Self {
            command: command.to_owned(),
            params,
            inputs: Vec::new(),
            outputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            timings_ms: Vec::new(),
        }
    }

    /// Runs `f` and records its duration under `phase`.
    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms.push((phase.to_owned(), start.elapsed().as_secs_f64() * 1e3));
        out
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self, output: &Path) -> Result<PathBuf, CliError> {
        let path = Self::path_for(output);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
