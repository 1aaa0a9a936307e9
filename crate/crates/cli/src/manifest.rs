//! One manifest per run: what was asked, what was written, and digests of it.
//!
//! Everything except `timing` is a function of the command line and the code
//! version, so two runs with the same flags produce identical manifests once
//! `timing` is removed.

use std::path::Path;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::output::{sha256_hex, Emitted};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix_ms: u64,
    /// Decimal seconds.
    pub wall_seconds: String,
}

impl Timing {
    pub fn new(started: SystemTime, wall: Duration) -> Self {
        let started_unix_ms =
            started.duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
        Timing { started_unix_ms, wall_seconds: format!("{:.3}", wall.as_secs_f64()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl From<Emitted> for OutputDigest {
    fn from(e: Emitted) -> Self {
        OutputDigest { path: e.path, sha256: e.sha256, bytes: e.bytes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config: Value,
    pub version: String,
    pub jobs: usize,
    pub exit_code: i32,
    pub outputs: Vec<OutputDigest>,
    /// Command-specific results worth keeping next to the outputs, e.g. fitted constants.
    pub metadata: Value,
    pub timing: Timing,
}

impl RunManifest {
    /// The manifest with `timing` zeroed, for comparing runs.
    pub fn without_timing(&self) -> RunManifest {
        RunManifest {
            timing: Timing { started_unix_ms: 0, wall_seconds: String::new() },
            ..self.clone()
        }
    }

    /// Recompute each file digest; returns the paths that do not match.
    /// Standard output (`-`) is skipped. Relative paths resolve against `base`.
    pub fn stale_outputs(&self, base: &Path) -> Vec<String> {
        self.outputs
            .iter()
            .filter(|o| o.path != "-")
            .filter(|o| {
                let p = Path::new(&o.path);
                let full = if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
                std::fs::read(full).map(|b| sha256_hex(&b) != o.sha256).unwrap_or(true)
            })
            .map(|o| o.path.clone())
            .collect()
    }
}
