//! Command-line front end for `bellwave-core`: single points, sweeps, CHSH
//! evaluation, oracle validation reports and the two-curve figure.

pub mod args;
pub mod commands;
pub mod config;
pub mod format;
pub mod resolve;
pub mod svg;

use thiserror::Error;

/// Bad flags, bad config, or inconsistent parameters. Exit code 2.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error(transparent)]
    Core(#[from] bellwave_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for usage errors and rejected inputs, 1 for everything at run time.
    pub fn exit_code(&self) -> u8 {
        use bellwave_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                E::InvalidParameter { .. }
                | E::Relativistic(_)
                | E::UndefinedDetectionTime(_)
                | E::NotUnit(..)
                | E::ZeroVector
                | E::RuleSize(_)
                | E::QuadratureSpec(_),
            ) => 2,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(UsageError(msg.into()))
}
