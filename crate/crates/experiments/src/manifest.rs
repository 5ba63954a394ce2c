//! JSON run manifests.

use serde::Serialize;
use sha2::{Digest, Sha256};

use optomech_core::params::{ReducedParams, SystemParams};

use crate::config::Config;

/// Git-style object hash (SHA-256 object format): sha256("blob <len>\0" + content).
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    pub points: usize,
    pub failed: usize,
    pub rwa_violations: usize,
    pub max_steady_iterations: usize,
    pub max_steady_residual: f64,
    /// First few failure messages.
    pub errors: Vec<String>,
}

impl Diagnostics {
    const MAX_ERRORS: usize = 20;

    pub fn record_ok(&mut self, rwa_ok: bool) {
        self.points += 1;
        if !rwa_ok {
            self.rwa_violations += 1;
        }
    }

    pub fn record_failure(&mut self, message: &str) {
        self.points += 1;
        self.failed += 1;
        if self.errors.len() < Self::MAX_ERRORS {
            self.errors.push(message.to_string());
        }
    }

    pub fn record_steady(&mut self, iterations: usize, residual: f64) {
        self.max_steady_iterations = self.max_steady_iterations.max(iterations);
        self.max_steady_residual = self.max_steady_residual.max(residual);
    }

    pub fn merge(&mut self, other: &Diagnostics) {
        self.points += other.points;
        self.failed += other.failed;
        self.rwa_violations += other.rwa_violations;
        self.max_steady_iterations = self.max_steady_iterations.max(other.max_steady_iterations);
        self.max_steady_residual = self.max_steady_residual.max(other.max_steady_residual);
        for e in &other.errors {
            if self.errors.len() < Self::MAX_ERRORS {
                self.errors.push(e.clone());
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableEntry {
    pub name: String,
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: String,
    pub config_path: Option<String>,
    pub config_hash: String,
    pub config: Config,
    pub params_si: SystemParams,
    pub params_reduced: ReducedParams,
    pub workers: usize,
    pub include_nt: bool,
    pub frame: String,
    pub grids: serde_json::Value,
    pub tables: Vec<TableEntry>,
    pub diagnostics: Diagnostics,
    pub started_unix: f64,
    pub wall_seconds: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_git_blob_layout() {
        // sha256 of "blob 0\0", the empty blob id in git's SHA-256 object format.
        assert_eq!(
            content_hash(b""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }
}
