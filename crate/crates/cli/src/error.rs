//! CLI error type and process exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Transform(#[from] rtm_core::TransformError),
    #[error(transparent)]
    Miner(#[from] rtm_core::miner::MinerError),
    #[error(transparent)]
    Oracle(#[from] rtm_core::oracle::OracleError),
    #[error(transparent)]
    Model(#[from] rtm_core::ModelError),
    #[error("mined patterns diverge from the oracle:\n{}", .0.join("\n"))]
    OracleMismatch(Vec<String>),
    #[error("pruning modes disagree ({left} vs {right}):\n{}", diffs.join("\n"))]
    ModeMismatch {
        left: String,
        right: String,
        diffs: Vec<String>,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// Process exit code: 2 configuration, 3 input parsing, 4 I/O,
    /// 5 internal, 6 oracle mismatch, 7 mode mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Miner(_) => 2,
            CliError::Parse(_) | CliError::Csv(_) | CliError::Json(_) => 3,
            CliError::Io(_) => 4,
            CliError::Transform(_)
            | CliError::Model(_)
            | CliError::Oracle(_)
            | CliError::Internal(_) => 5,
            CliError::OracleMismatch(_) => 6,
            CliError::ModeMismatch { .. } => 7,
        }
    }
}
