use std::fmt;
use std::process::ExitCode;

use qgame::equilibrium::EquilibriumError;
use qgame::game::GameError;
use qgame::kraus::KrausError;
use qgame::linalg::LinalgError;

/// Failure classes with disjoint exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Computed results disagree with reference values.
    Mismatch(String),
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Mismatch(_) => 1,
            Self::Usage(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 4,
        }
    }

    pub fn to_exit(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }

    pub fn io(context: impl fmt::Display, err: std::io::Error) -> Self {
        Self::Io(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mismatch(m) => write!(f, "mismatch: {m}"),
            Self::Usage(m) => write!(f, "invalid arguments: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::Io(m) => write!(f, "i/o failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Dimension(_) => Self::Usage(e.to_string()),
            _ => Self::Numerical(e.to_string()),
        }
    }
}

impl From<KrausError> for CliError {
    fn from(e: KrausError) -> Self {
        match e {
            KrausError::InvalidArgument(m) => Self::Usage(m),
            KrausError::Linalg(inner) => inner.into(),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::InvalidArgument(m) => Self::Usage(m),
            GameError::Linalg(inner) => inner.into(),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<EquilibriumError> for CliError {
    fn from(e: EquilibriumError) -> Self {
        match e {
            EquilibriumError::InvalidArgument(m) => Self::Usage(m),
            EquilibriumError::Game(inner) => inner.into(),
            other => Self::Numerical(other.to_string()),
        }
    }
}
