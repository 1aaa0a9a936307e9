//! Rendering records as JSON lines, CSV or plain text, and writing them with a digest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::exit::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

/// A record type with JSON, CSV and one-line text renderings.
pub trait Row: Serialize {
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;

    fn text(&self) -> String {
        self.cells().join(" ")
    }
}

pub fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn jsonl<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    for r in rows {
        serde_json::to_writer(&mut buf, r)?;
        buf.push(b'\n');
    }
    Ok(buf)
}

pub fn csv<R: Row>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(R::header())?;
    for r in rows {
        w.write_record(r.cells())?;
    }
    w.into_inner().map_err(|e| CliError::from(e.into_error()))
}

pub fn text<R: Row>(rows: &[R]) -> Vec<u8> {
    let mut s = String::new();
    for r in rows {
        s.push_str(&r.text());
        s.push('\n');
    }
    s.into_bytes()
}

/// One written output, as recorded in the run manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Emitted {
    /// File path, or `-` for standard output.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<Emitted, CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, bytes)
        .map_err(|e| CliError::new(crate::exit::ExitCode::Io, format!("{}: {e}", path.display())))?;
    Ok(Emitted { path: path.display().to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 })
}

pub fn write_stdout(bytes: &[u8]) -> Result<Emitted, CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()?;
    Ok(Emitted { path: "-".into(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 })
}

/// Where a single-output command writes, and in which format.
#[derive(Debug, Clone)]
pub struct Target {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Target {
    /// Text on a terminal unless a format is given; JSON lines into files by default.
    pub fn render<R: Row>(&self, rows: &[R]) -> Result<Vec<u8>, CliError> {
        match (self.format, &self.path) {
            (Some(Format::Csv), _) => csv(rows),
            (Some(Format::Jsonl), _) | (None, Some(_)) => jsonl(rows),
            (None, None) => Ok(text(rows)),
        }
    }

    pub fn write(&self, bytes: &[u8]) -> Result<Emitted, CliError> {
        match &self.path {
            Some(p) => write_file(p, bytes),
            None => write_stdout(bytes),
        }
    }
}
