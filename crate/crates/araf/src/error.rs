use std::path::PathBuf;

use araf_core::bench::BenchError;
use araf_core::dataset::DataError;
use araf_core::discretize::DiscretizeError;
use araf_core::features::FeatureError;
use araf_core::miner::MiningError;
use araf_core::pipeline::PipelineError;
use araf_core::rules::RuleError;
use thiserror::Error;

use crate::csv_io::LoadError;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const DATA: i32 = 3;
    pub const INTERNAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("conflicting flags: {0}")]
    ConflictingFlags(String),
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::ConflictingFlags(_) => exit::USAGE,
            AppError::Data(_) | AppError::Io { .. } | AppError::Format { .. } => exit::DATA,
            AppError::Internal(_) => exit::INTERNAL,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        AppError::Format {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl From<LoadError> for AppError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io { path, source } => AppError::Io { path, source },
            other => AppError::Data(other.to_string()),
        }
    }
}

impl From<DataError> for AppError {
    fn from(e: DataError) -> Self {
        AppError::Data(e.to_string())
    }
}

impl From<DiscretizeError> for AppError {
    fn from(e: DiscretizeError) -> Self {
        match e {
            DiscretizeError::InvalidParameter(m) => AppError::Usage(m),
            other => AppError::Data(other.to_string()),
        }
    }
}

impl From<FeatureError> for AppError {
    fn from(e: FeatureError) -> Self {
        AppError::Data(e.to_string())
    }
}

impl From<RuleError> for AppError {
    fn from(e: RuleError) -> Self {
        AppError::Internal(e.to_string())
    }
}

impl From<MiningError> for AppError {
    fn from(e: MiningError) -> Self {
        match e {
            MiningError::InvalidConfig(m) => AppError::Usage(m),
            MiningError::Rule(r) => r.into(),
            other => AppError::Data(other.to_string()),
        }
    }
}

impl From<PipelineError> for AppError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Mining(m) => m.into(),
            PipelineError::Rule(r) => r.into(),
            PipelineError::Sample(s) => AppError::Usage(s.to_string()),
        }
    }
}

impl From<BenchError> for AppError {
    fn from(e: BenchError) -> Self {
        AppError::Internal(e.to_string())
    }
}
