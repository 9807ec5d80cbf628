//! Command-line experiment harness: configuration, orchestration, and
//! reproducible artifact output for the random-quadratic-dynamics library.
//!
//! Every run writes one directory containing `report.json` (results, the
//! resolved configuration, and per-claim pass/fail booleans), `tables/*.csv`,
//! the resolved `config.resolved` key-value file, optional images, and a
//! `meta.json` sidecar that isolates timestamps so the primary artifacts
//! stay byte-identical across reruns and worker counts.

pub mod config;
pub mod output;
pub mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

/// Exit codes: 0 success, 1 assertion failure, 2 config error, 3 I/O error.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {path}:{line}: {message}")]
    ConfigLine {
        path: String,
        line: usize,
        message: String,
    },
    #[error("config error in field `{field}`: {message}")]
    ConfigField { field: String, message: String },
    #[error("assertion failure: {0}")]
    Assertion(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn field(field: &str, message: impl std::fmt::Display) -> Self {
        CliError::ConfigField {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::ConfigLine { .. } | CliError::ConfigField { .. } => ExitCode::from(2),
            CliError::Assertion(_) => ExitCode::from(1),
            CliError::Io(_) => ExitCode::from(3),
        }
    }
}

impl From<randquad::Error> for CliError {
    fn from(err: randquad::Error) -> Self {
        match err {
            randquad::Error::LawParse(_) | randquad::Error::EmptyList => {
                CliError::field("law", err)
            }
            other => CliError::Assertion(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Load a `list(file.csv)` parameter law: one `re,im` pair per line, with an
/// optional `re,im` header.
pub fn load_parameter_list(path: &str) -> randquad::Result<Vec<randquad::Complex64>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        randquad::Error::LawParse(format!("cannot read parameter list `{path}`: {e}"))
    })?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (idx == 0 && line.eq_ignore_ascii_case("re,im")) {
            continue;
        }
        let mut parts = line.split(',');
        let parse = |part: Option<&str>| -> randquad::Result<f64> {
            part.map(str::trim)
                .and_then(|p| p.parse::<f64>().ok())
                .ok_or_else(|| {
                    randquad::Error::LawParse(format!(
                        "bad parameter list row {} in `{path}`: `{line}`",
                        idx + 1
                    ))
                })
        };
        let re = parse(parts.next())?;
        let im = parse(parts.next())?;
        values.push(randquad::Complex64::new(re, im));
    }
    if values.is_empty() {
        return Err(randquad::Error::EmptyList);
    }
    Ok(values)
}

/// Parse a law specification, resolving `list(...)` through the filesystem.
pub fn parse_law(text: &str) -> randquad::Result<randquad::ParameterLaw64> {
    randquad::law::parse_law_with_lists(text, load_parameter_list)
}

/// Default output directory for a command.
pub fn default_out_dir(command: &str) -> PathBuf {
    PathBuf::from(format!("run-{command}"))
}

/// Thread count resolution: flag value, else the `RANDQUAD_THREADS`
/// environment variable, else the hardware default (0 lets rayon decide).
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("RANDQUAD_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}
