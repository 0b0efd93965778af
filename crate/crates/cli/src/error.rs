use std::fmt;
use std::path::Path;

/// Failure classes, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Io(_) => 4,
            CliError::Infeasible(_) => 5,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible schedule: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<polar_mcsc::Error> for CliError {
    fn from(e: polar_mcsc::Error) -> Self {
        match e {
            polar_mcsc::Error::Parameter(_) => CliError::Usage(e.to_string()),
            polar_mcsc::Error::Config(_) => CliError::Config(e.to_string()),
            polar_mcsc::Error::Infeasible { .. } => CliError::Infeasible(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
