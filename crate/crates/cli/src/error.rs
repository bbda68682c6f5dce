use std::path::{Path, PathBuf};

use sdooop::{GenError, MetricError, ModelError, SnapshotError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: u64, msg: String },
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::Data(_) => 4,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn parse(path: &Path, line: u64, msg: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            line,
            msg: msg.into(),
        }
    }

    /// Maps a CSV library error, keeping the line number when it has one.
    pub fn csv(path: &Path, err: csv::Error) -> Self {
        let line = err.position().map_or(0, |p| p.line());
        match err.kind() {
            csv::ErrorKind::Io(_) => match err.into_kind() {
                csv::ErrorKind::Io(e) => CliError::io(path, e),
                _ => unreachable!(),
            },
            csv::ErrorKind::UnequalLengths { expected_len, len, .. } => CliError::Data(format!(
                "{}:{line}: row has {len} columns, header has {expected_len}",
                path.display()
            )),
            _ => CliError::parse(path, line, err.to_string()),
        }
    }
}

/// Flag that corresponds to a model parameter name.
fn flag_for(name: &str) -> &str {
    match name {
        "k" => "--k",
        "x" => "--x",
        "T" => "--T",
        "T0" => "--T0",
        "n_bins" => "--bins",
        "q_id" => "--qid",
        "window" => "--window",
        "k_nn" => "--knn",
        "ensemble" => "--ensemble",
        other => other,
    }
}

pub fn invalid_params(err: ModelError) -> CliError {
    match err {
        ModelError::InvalidParameter { name, reason } => {
            CliError::Usage(format!("invalid value for {}: {reason}", flag_for(name)))
        }
        other => CliError::Usage(other.to_string()),
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        CliError::Data(e.to_string())
    }
}

pub fn snapshot_error(path: &Path, err: SnapshotError) -> CliError {
    match err {
        SnapshotError::Json(e) if e.is_io() => CliError::io(path, e.into()),
        SnapshotError::Json(e) => CliError::parse(path, e.line() as u64, e.to_string()),
        other => CliError::Data(format!("{}: {other}", path.display())),
    }
}
