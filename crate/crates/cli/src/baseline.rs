//! The published reference values, shipped as data and pinned by digest.

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::exit::{CliError, ExitCode};

pub const EMBEDDED: &[u8] = include_bytes!("../data/s0_paper.json");
/// SHA-256 of `data/s0_paper.json`.
pub const DIGEST: &str = "fbcfd31b4f908f40f7516ad4b0feab94f2ac2a34a08d7f4ba4281a28e3292d47";

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair {
    pub a: i64,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiatFamily {
    pub citation: String,
    pub p_min: u64,
    pub p_max: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListedSet {
    pub citation: String,
    pub pairs: Vec<Pair>,
    pub fiat: FiatFamily,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnownSolution {
    pub citation: String,
    pub n: u64,
    pub a: i64,
    pub b: u64,
    pub m: u32,
    pub n_max: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositivityRange {
    pub citation: String,
    pub values: Vec<u64>,
    pub ranges: Vec<(u64, u64)>,
}

impl PositivityRange {
    pub fn contains(&self, m: u64) -> bool {
        self.values.contains(&m) || self.ranges.iter().any(|&(lo, hi)| (lo..=hi).contains(&m))
    }

    pub fn max(&self) -> u64 {
        let v = self.values.iter().copied().max().unwrap_or(0);
        self.ranges.iter().map(|r| r.1).fold(v, u64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperBaseline {
    pub s0: ListedSet,
    pub known_solution: KnownSolution,
    pub lhs6_positive: PositivityRange,
}

impl PaperBaseline {
    pub fn embedded() -> Result<Self, CliError> {
        Self::from_bytes(EMBEDDED)
    }

    /// Read a baseline file; its digest must match the shipped one.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Self::embedded(),
            Some(p) => {
                let bytes = std::fs::read(p).map_err(|e| {
                    CliError::new(ExitCode::Io, format!("cannot read baseline {}: {e}", p.display()))
                })?;
                Self::from_bytes(&bytes)
            }
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CliError> {
        let digest = hex::encode(Sha256::digest(bytes));
        if digest != DIGEST {
            return Err(CliError::new(
                ExitCode::Io,
                format!("baseline checksum mismatch: expected {DIGEST}, got {digest}"),
            ));
        }
        serde_json::from_slice(bytes)
            .map_err(|e| CliError::new(ExitCode::Io, format!("baseline is malformed: {e}")))
    }

    /// Listed non-fiat pairs, sorted.
    pub fn listed_pairs(&self) -> Vec<(i64, u64)> {
        let mut v: Vec<(i64, u64)> = self.s0.pairs.iter().map(|p| (p.a, p.p)).collect();
        v.sort_unstable();
        v
    }
}
