use std::path::PathBuf;

use thiserror::Error;

/// Everything that can stop a subcommand.
#[derive(Debug, Error)]
pub enum CliError {
    /// Missing or contradictory arguments.
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: tomosym::Error },

    #[error(transparent)]
    Core(#[from] tomosym::Error),

    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for rejected input, 3 when the numerics cannot deliver, 1 for
    /// failures writing results.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => 2,
            CliError::Core(e) => core_exit_code(e),
            CliError::Output { .. } => 1,
        }
    }
}

fn core_exit_code(e: &tomosym::Error) -> u8 {
    use tomosym::Error as E;
    match e {
        E::InformationallyIncomplete { .. } | E::ZeroProbability { .. } | E::Degenerate(_) | E::Numerical(_) => 3,
        _ => 2,
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}
