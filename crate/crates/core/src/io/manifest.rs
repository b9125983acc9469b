//! Run manifests: everything needed to repeat a run and the files it wrote.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// `(q₊, q₋, β)` when the command has a single model.
    pub params: Option<[f64; 3]>,
    pub command: String,
    /// Every effective flag, keyed by its long name; usable as a config file.
    pub args: Map<String, Value>,
    pub seed: u64,
    pub version: String,
    pub tolerances: BTreeMap<String, f64>,
    /// RFC 3339, UTC.
    pub timestamp: String,
    /// Paths relative to the output directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, args: Map<String, Value>, seed: u64) -> Self {
        RunManifest {
            params: None,
            command: command.to_string(),
            args,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: BTreeMap::new(),
            timestamp: now_rfc3339(),
            outputs: Vec::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub fn now_rfc3339() -> String {
    humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string()
}

/// Writes files into one directory and remembers them for the manifest.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.root.join(name);
        fs::write(&path, contents)?;
        self.written.push(name.to_string());
        Ok(path)
    }

    /// Lists every written file, then writes `manifest.json` itself.
    pub fn finish(self, mut manifest: RunManifest) -> Result<PathBuf> {
        manifest.outputs = self.written;
        let path = self.root.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(path)
    }
}
