use std::path::PathBuf;

use cmc_core::CmcError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Core(#[from] CmcError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("point within {distance:e} of the projection pole")]
    PoleProximity { distance: f64 },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for inputs outside a contract, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidInput(_) | CliError::Parse { .. } => EXIT_INVALID_INPUT,
            CliError::Core(e) => match e {
                CmcError::Domain(_)
                | CmcError::InvalidInput(_)
                | CmcError::OutOfRange { .. }
                | CmcError::AxisCase { .. }
                | CmcError::Degenerate { .. }
                | CmcError::Straddle => EXIT_INVALID_INPUT,
                CmcError::Singularity { .. }
                | CmcError::NonConvergence(_)
                | CmcError::PoleProximity { .. }
                | CmcError::NonFinite(_)
                | CmcError::DegenerateSegment(..) => EXIT_NUMERICAL,
            },
            CliError::Io { .. } | CliError::PoleProximity { .. } | CliError::Verification(_) => {
                EXIT_NUMERICAL
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
