use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Descriptor or configuration failed validation.
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    /// The Orlicz function failed one of the structural checks.
    #[error("invalid Orlicz function: {0}")]
    InvalidOrlicz(String),

    /// The function does not belong to the Orlicz space: its modular is
    /// infinite for every scaling.
    #[error("function is not in the Orlicz space: {0}")]
    NotInSpace(String),

    /// `sup_x (x*y - phi(x))` is unbounded at this `y`.
    #[error("conjugate is unbounded at y = {y}")]
    UnboundedConjugate { y: f64 },

    /// A set that should lie in the nonatomic segment has atomic parts.
    #[error("set is not nonatomic: {0}")]
    NotNonatomic(String),

    /// Dyadic refinement would exceed the depth budget.
    #[error("dyadic depth exhausted: depth {required} required, limit is {limit}")]
    DepthExhausted { required: u32, limit: u32 },

    /// A theorem hypothesis does not hold on the given inputs.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// The result cannot be expressed by the piecewise/rule representation.
    #[error("not representable: {0}")]
    Unrepresentable(String),

    /// A value rule kind that the classifier cannot decide.
    #[error("unsupported rule: {0}")]
    UnsupportedRule(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
