use thiserror::Error;

/// Errors raised while configuring or running the optimizer.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is missing, malformed or out of range.
    #[error("invalid parameter `{key}`: {message}")]
    InvalidParameter { key: String, message: String },

    #[error("unknown component role `{0}`")]
    UnknownRole(String),

    #[error("unknown {role} component `{name}` (available: {available})")]
    UnknownComponent {
        role: String,
        name: String,
        available: String,
    },

    #[error("{role} component `{name}` is already registered")]
    DuplicateComponent { role: String, name: String },

    #[error("unknown preset `{name}` (available: {available})")]
    UnknownPreset { name: String, available: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite {what} for subproblem {subproblem} at iteration {iteration}")]
    NonFinite {
        what: &'static str,
        subproblem: usize,
        iteration: usize,
    },

    /// A generator would produce more rows or candidates than allowed.
    #[error("{0}")]
    TooLarge(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn param(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by a bad configuration rather than by the run itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::UnknownRole(_)
                | Error::UnknownComponent { .. }
                | Error::DuplicateComponent { .. }
                | Error::UnknownPreset { .. }
                | Error::TooLarge(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
