use std::fmt;

use primetree::Error;

#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Bounds(String),
    Parse(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Bounds(_) => 3,
            CliError::Parse(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(m) | CliError::Bounds(m) | CliError::Parse(m) | CliError::Io(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Domain(_) | Error::NotPrime(_) | Error::UndefinedLogarithm(_) => {
                CliError::Domain(msg)
            }
            Error::Bounds(_) | Error::Overflow(_) => CliError::Bounds(msg),
            Error::Parse(_) => CliError::Parse(msg),
        }
    }
}
