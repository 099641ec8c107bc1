use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{path}: no data rows")]
    EmptyFile { path: PathBuf },

    #[error("{path}: line {line} has {found} fields, expected {expected}")]
    RaggedRow {
        path: PathBuf,
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("{path}: line {line}, column {column}: `{value}` is not a number")]
    NonNumeric {
        path: PathBuf,
        line: u64,
        column: usize,
        value: String,
    },

    #[error("{path}: label column `{column}` not found")]
    MissingLabelColumn { path: PathBuf, column: String },

    #[error(transparent)]
    Core(#[from] active_medoids::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("manifest: {0}")]
    Manifest(#[from] toml::de::Error),

    #[error("{0}")]
    Config(String),
}

impl CliError {
    /// Stable identifier used in the machine-readable error line.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Csv(_) => "csv",
            CliError::EmptyFile { .. } => "empty_file",
            CliError::RaggedRow { .. } => "ragged_row",
            CliError::NonNumeric { .. } => "non_numeric",
            CliError::MissingLabelColumn { .. } => "missing_label_column",
            CliError::Core(_) => "algorithm",
            CliError::Json(_) => "json",
            CliError::Manifest(_) => "manifest",
            CliError::Config(_) => "config",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
