use thiserror::Error;

/// Errors produced by the library.
///
/// The variants line up with the CLI exit-code classes: parameter and
/// configuration problems, and schedules that cannot meet a clock budget.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside its valid domain (length mismatch, K > N, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A configuration object (schedule, delay model, shortcut list) is inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A single graph node is slower than the clock budget.
    #[error("node {node} ({kind}) has delay {delay} exceeding clock budget {budget}")]
    Infeasible {
        node: usize,
        kind: String,
        delay: f64,
        budget: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
