use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::Result;
use crate::rng;

/// Everything needed to rerun a command and reproduce its output files.
///
/// Serialized as flat `key=value` lines. Only `timestamp` varies between
/// otherwise identical runs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub seeds: Vec<u64>,
    pub constants: Vec<(String, f64)>,
    pub version: String,
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            params: Vec::new(),
            seeds: Vec::new(),
            constants: Vec::new(),
            version: crate::VERSION.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seeds.push(seed);
        self
    }

    pub fn constant(mut self, name: impl Into<String>, value: f64) -> Self {
        self.constants.push((name.into(), value));
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command={}", self.command);
        let _ = writeln!(out, "version={}", self.version);
        for (k, v) in &self.params {
            let _ = writeln!(out, "param.{k}={v}");
        }
        for s in &self.seeds {
            let _ = writeln!(out, "seed={s}");
        }
        for (k, v) in &self.constants {
            let _ = writeln!(out, "const.{k}={v:?}");
        }
        let _ = writeln!(out, "generator={}", rng::GENERATOR);
        let _ = writeln!(out, "normal_sampler={}", rng::NORMAL_SAMPLER);
        let _ = writeln!(out, "timestamp={}", self.timestamp);
        out
    }

    /// Writes the manifest next to `output` and returns its path.
    pub fn write_alongside(&self, output: &Path) -> Result<PathBuf> {
        let path = manifest_path(output);
        fs::write(&path, self.to_text())?;
        Ok(path)
    }
}

/// `<output>.manifest`
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}
