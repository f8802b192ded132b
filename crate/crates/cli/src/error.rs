use std::fmt;

/// Failure of a CLI run, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent configuration (exit code 2).
    Config(String),
    /// Numerical failure inside the toolkit (exit code 3).
    Numerical(String),
    /// Filesystem failure (exit code 4).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<microcanon::Error> for CliError {
    fn from(e: microcanon::Error) -> Self {
        use microcanon::Error as E;
        match e {
            E::Positivity { .. } | E::Convergence { .. } => CliError::Numerical(e.to_string()),
            E::Validation(_) | E::Dimension { .. } | E::Contract(_) | E::Config(_) => CliError::Config(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
