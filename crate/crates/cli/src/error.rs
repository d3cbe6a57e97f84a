use std::path::PathBuf;

use gchtw_core::Error as CoreError;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_NO_SADDLE: u8 = 2;
pub const EXIT_NO_CONTINUITY_ROOT: u8 = 3;
pub const EXIT_RESONANCE: u8 = 4;
pub const EXIT_VERIFICATION: u8 = 5;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("no saddle found: {0}")]
    NoSaddle(String),

    #[error("{0}\nhint: rerun with --strategy matched --a1 <value>, or choose another --target")]
    NoContinuityRoot(CoreError),

    #[error("{0}")]
    Resonance(CoreError),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Core(CoreError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NoSaddle(_) => EXIT_NO_SADDLE,
            CliError::NoContinuityRoot(_) => EXIT_NO_CONTINUITY_ROOT,
            CliError::Resonance(_) => EXIT_RESONANCE,
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::Core(_) | CliError::Io { .. } | CliError::Json { .. } | CliError::Csv(_) => EXIT_FAILURE,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NoContinuousAssembly { .. } => CliError::NoContinuityRoot(e),
            CoreError::Resonance { .. } => CliError::Resonance(e),
            CoreError::NotASaddle { .. } | CoreError::SingularDegeneracy { .. } => CliError::NoSaddle(e.to_string()),
            CoreError::ZeroSpeed(_)
            | CoreError::NonFinite(_)
            | CoreError::InvalidOrder(_)
            | CoreError::InvalidFamily(_)
            | CoreError::InvalidInput(_)
            | CoreError::UnsupportedEquation(_)
            | CoreError::ExactRequiresG0 => CliError::Usage(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
