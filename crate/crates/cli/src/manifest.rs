use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const MANIFEST: &str = "manifest.json";

/// Provenance record written next to every set of outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub threads: usize,
    pub version: String,
    /// unix time at start, seconds
    pub started: f64,
    pub wall_clock_seconds: f64,
    pub passed: bool,
    /// file name to hex SHA-256
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Output directory that remembers what was written to it.
#[derive(Debug)]
pub struct OutDir {
    dir: Option<PathBuf>,
    written: BTreeMap<String, String>,
}

impl OutDir {
    pub fn new(dir: Option<PathBuf>) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d).map_err(|e| CliError::Io(format!("{}: {e}", d.display())))?;
        }
        Ok(Self { dir, written: BTreeMap::new() })
    }

    pub fn path(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Writes `name` when an output directory was given; a no-op otherwise.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        if name == MANIFEST {
            return Err(CliError::Io(format!("{MANIFEST} is reserved")));
        }
        if let Some(d) = &self.dir {
            let p = d.join(name);
            std::fs::write(&p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            self.written.insert(name.to_string(), sha256_hex(bytes));
        }
        Ok(())
    }

    pub fn finish(self, mut manifest: RunManifest) -> Result<(), CliError> {
        if let Some(d) = &self.dir {
            manifest.outputs = self.written;
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            let p = d.join(MANIFEST);
            std::fs::write(&p, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        Ok(())
    }
}
