//! Run-directory writer.
//!
//! Layout: `report.json` (command, resolved config, results, claims),
//! `config.resolved`, `tables/*.csv` (comma delimiter, `.` decimal
//! separator, LF endings), optional images with their JSON sidecars, and
//! `meta.json` holding the wall-clock data excluded from determinism
//! comparisons.

use std::path::{Path, PathBuf};

use serde::Serialize;

use randquad::suite::Claim;

use crate::config::Config;
use crate::Result;

/// The primary machine-readable result of a run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: std::collections::BTreeMap<String, String>,
    pub results: serde_json::Value,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

/// Everything a command produces.
#[derive(Debug, Default)]
pub struct Artifacts {
    /// `(file stem, CSV text)` written under `tables/`.
    pub tables: Vec<(String, String)>,
    /// `(file name, bytes)` written at the run root (e.g. PGM images).
    pub files: Vec<(String, Vec<u8>)>,
}

pub struct RunWriter {
    pub dir: PathBuf,
}

impl RunWriter {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(RunWriter {
            dir: dir.to_path_buf(),
        })
    }

    pub fn write(
        &self,
        report: &Report,
        resolved: &Config,
        artifacts: &Artifacts,
        started: std::time::SystemTime,
        duration: std::time::Duration,
        threads: usize,
    ) -> Result<PathBuf> {
        let report_path = self.dir.join("report.json");
        let mut json = serde_json::to_string_pretty(report).expect("report serializes");
        json.push('\n');
        std::fs::write(&report_path, json)?;
        std::fs::write(self.dir.join("config.resolved"), resolved.serialize())?;
        if !artifacts.tables.is_empty() {
            let tables = self.dir.join("tables");
            std::fs::create_dir_all(&tables)?;
            for (name, csv) in &artifacts.tables {
                std::fs::write(tables.join(format!("{name}.csv")), csv)?;
            }
        }
        for (name, bytes) in &artifacts.files {
            std::fs::write(self.dir.join(name), bytes)?;
        }
        let meta = Meta {
            started_unix_ms: started
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
            duration_ms: duration.as_millis() as u64,
            threads,
        };
        let mut meta_json = serde_json::to_string_pretty(&meta).expect("meta serializes");
        meta_json.push('\n');
        std::fs::write(self.dir.join("meta.json"), meta_json)?;
        Ok(report_path)
    }
}

/// Wall-clock sidecar, deliberately outside `report.json`.
#[derive(Debug, Serialize)]
struct Meta {
    started_unix_ms: u64,
    duration_ms: u64,
    threads: usize,
}

/// Build a CSV table from a header and rows of already-formatted cells.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Format a float with Rust's shortest round-trip representation.
pub fn fmt(value: f64) -> String {
    if value.is_finite() {
        value.to_string()
    } else if value.is_nan() {
        "nan".into()
    } else if value > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
