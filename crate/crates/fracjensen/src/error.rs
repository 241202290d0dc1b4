use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at byte offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("kernel is singular at s = t")]
    SingularKernel,

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("integral failed to converge (divergent or too close to divergence)")]
    DivergentIntegral,

    #[error("maximum number of subdivisions reached")]
    MaxSubdivisions,

    #[error("integrand is not finite at x = {0}")]
    NonFiniteIntegrand(f64),

    #[error("f is not in L^1_T: quadrature of |f|/T does not converge")]
    L1Violation,

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("derivative step leaves the working interval")]
    StepTooLarge,

    #[error("range error: {0}")]
    Range(String),

    #[error("points cannot be ordered (NaN present)")]
    UnsortedPoints,

    #[error("no m in [tol, 1] passes the m-convexity check")]
    ReturnsZero,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
