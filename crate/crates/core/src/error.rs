use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An elementary function was applied outside its domain (log/sqrt of a
    /// non-positive value, division by zero, overflow to a non-finite value).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("derivative of order {requested} requested from a jet of order {available}")]
    Order { requested: usize, available: usize },

    #[error("jets over {left} and {right} variables cannot be combined")]
    VariableMismatch { left: usize, right: usize },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("metric is singular at the point (det g = {det:e})")]
    SingularMetric { det: f64 },

    #[error("metric is not positive definite at the point")]
    NotPositiveDefinite,

    #[error("dimension {got} is too small, at least {needed} is required")]
    Dimension { needed: usize, got: usize },

    #[error("no soliton function lambda was supplied")]
    MissingLambda,

    #[error("vector field vanishes at the point")]
    ZeroVectorField,

    #[error("vector field is not torse-forming at the point (residual {residual:e})")]
    NotTorseForming { residual: f64 },

    #[error("vector field is not concircular at the point")]
    NotConcircular,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for failures caused by the numbers at a particular point rather
    /// than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::SingularMetric { .. }
                | Error::NotPositiveDefinite
                | Error::ZeroVectorField
                | Error::NotTorseForming { .. }
                | Error::NotConcircular
        )
    }
}
