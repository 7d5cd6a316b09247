use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("missing required field `{0}`")]
    MissingField(String),

    #[error("unknown unit `{unit}` for field `{field}`")]
    UnknownUnit { field: String, unit: String },

    #[error("config parse error: {0}")]
    Config(String),

    #[error("quadrature did not converge: achieved {achieved:.3e} > requested {requested:.3e} after {subdivisions} subdivisions")]
    NonConvergence {
        achieved: f64,
        requested: f64,
        subdivisions: usize,
    },

    #[error("non-finite integrand value at x = {at}")]
    NonFinite { at: f64 },

    #[error("complex logarithm branch violation at t = {t}, y = {y}: 1 - r^2 e^(-Y) = {re} + {im}i")]
    BranchViolation { t: f64, y: f64, re: f64, im: f64 },

    #[error("no interior maximum of G in [{lo}, {hi}] K (best at {at} K)")]
    NoInteriorMaximum { lo: f64, hi: f64, at: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
