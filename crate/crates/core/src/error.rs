use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A document could not be read against its schema.
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    /// A value parsed cleanly but breaks an invariant of its type.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("insufficient points: {found} data points, at least {required} required")]
    InsufficientPoints { found: usize, required: usize },

    /// The best fit sits on an edge of the search bracket.
    #[error("minimum at bracket edge ({edge} Å³) of [{lo}, {hi}] Å³; widen the bracket")]
    Bracket { edge: f64, lo: f64, hi: f64 },

    #[error("series did not converge: {0}")]
    Convergence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical quality error: {0}")]
    NumericalQuality(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by user input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Parse { .. }
                | Error::Validation(_)
                | Error::InsufficientPoints { .. }
                | Error::Config(_)
                | Error::NotApplicable(_)
                | Error::Io { .. }
        )
    }
}
