//! Command-line front end for the isochrone crate: declarative potential
//! configs in, reproducible CSV tables out.

pub mod commands;
pub mod config;
pub mod table;

/// Outcome of a command: whether every requested cell could be computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    Full,
    Partial,
}

/// Run-level failures, mapped onto exit codes by the binary.
#[derive(Debug)]
pub enum RunError {
    /// bad config file, unknown key, missing or malformed parameter (exit 2)
    Config(String),
    /// the computation itself failed outright (exit 3)
    Numerical(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;
