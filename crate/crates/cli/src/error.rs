use std::fmt;
use std::path::Path;

use meshfree_transfer::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable inputs, invalid parameters.
    Usage(String),
    /// The computation itself failed.
    Runtime(String),
    /// clap already reported the problem; exit with its code.
    Exit(i32),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
            CliError::Exit(c) => *c as u8,
        }
    }

    /// Error from reading an input file, naming the file.
    pub fn input(path: &Path, e: Error) -> Self {
        let msg = format!("{}: {e}", path.display());
        match e {
            Error::Io(ref io) if io.kind() != std::io::ErrorKind::NotFound => CliError::Runtime(msg),
            _ => CliError::Usage(msg),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
            CliError::Exit(c) => write!(f, "exit {c}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::PointOutsideDomain { .. }
            | Error::TargetOutsideDomain { .. }
            | Error::Parse { .. } => CliError::Usage(msg),
            _ => CliError::Runtime(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
