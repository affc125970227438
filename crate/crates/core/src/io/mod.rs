//! File formats: network JSON, edge-list CSV, and report artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::amount::ParseRationalError;
use crate::network::ModelError;

mod network_file;
mod report;

pub use network_file::{read_edges_csv, CsvDefaults, EdgeEntry, NetworkFile, NodeEntry};
pub use report::{
    balance_csv, format_amount, format_decimal, trace_to_dot, DualReport, StabilityReport, StepEntry,
    TraceFile, TransmissionEntry,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("field {field}: {source}")]
    Rational {
        field: String,
        #[source]
        source: ParseRationalError,
    },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl IoError {
    /// Whether the failure is about reaching the file rather than its content.
    pub fn is_file_error(&self) -> bool {
        matches!(self, IoError::File { .. })
    }
}

pub fn read_to_string(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_string(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), IoError> {
    write_string(path, &to_json(value)?)
}

/// Read and validate a network JSON file.
pub fn read_network(path: &Path) -> Result<crate::network::NetworkSpec, IoError> {
    NetworkFile::parse(&read_to_string(path)?)?.to_spec()
}

pub fn write_network(path: &Path, spec: &crate::network::NetworkSpec) -> Result<(), IoError> {
    write_json(path, &NetworkFile::from_spec(spec))
}
