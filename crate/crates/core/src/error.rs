//! Crate-wide error type and config diagnostics.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument violated a documented precondition.
    #[error("invalid {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
    /// An operation was called in a state that violates its contract,
    /// e.g. querying the blinded response of an unblinded detector or
    /// feeding gates to a detector out of time order.
    #[error("contract violation: {0}")]
    Contract(String),
    /// Scenario configuration rejected before any simulation work.
    #[error("invalid scenario config:\n{0}")]
    Config(ConfigErrors),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}

/// Field-level diagnostics collected during scenario validation. Every
/// offending field is reported at once, using the key names of the
/// config file format.
#[derive(Debug, Default)]
pub struct ConfigErrors {
    pub errors: Vec<FieldError>,
}

#[derive(Debug)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl ConfigErrors {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.errors.push(FieldError {
            field: field.into(),
            message: message.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    /// Returns `Err(Error::Config)` if any diagnostic was recorded.
    pub fn into_result(self) -> Result<(), Error> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(self))
        }
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {}: {}", e.field, e.message)?;
        }
        Ok(())
    }
}
