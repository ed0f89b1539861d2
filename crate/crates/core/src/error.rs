use thiserror::Error;

/// Errors raised by the library. Numerical checks that merely fail (a
/// residual above tolerance) are reported in result structs, not here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported dimension n = {n} for {what}")]
    UnsupportedDimension { n: usize, what: &'static str },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("point with |x| = {radius} lies outside the valid radial range [{lo}, {hi}]")]
    OutsideRange { radius: f64, lo: f64, hi: f64 },

    #[error("quadrature rule has degree {have}, at least {needed} required")]
    InsufficientDegree { needed: usize, have: usize },

    #[error("variant {variant} is not available in dimension n = {n}")]
    IncompatibleVariant { variant: String, n: usize },

    #[error("series is already Kelvin-transformed")]
    DoubleKelvin,

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("cannot serialize: {0}")]
    NotSerializable(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
