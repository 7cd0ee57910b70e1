use core::fmt;

/// Errors reported by the numerical kernels and estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// Beta shape parameters must be finite and strictly positive.
    InvalidShape { alpha: f64, beta: f64 },
    /// An iterative method hit its iteration cap.
    NoConvergence { what: &'static str },
    /// Estimation was requested on a sample with no observations.
    EmptySample,
    /// A sample contained NaN or an infinity.
    NonFinite { index: usize },
    /// `p` is 0 or 1, where the weight-generating beta distribution is undefined.
    BoundaryProbability { p: f64 },
    /// A distribution parameter is outside its family's domain.
    InvalidParameter { family: &'static str, name: &'static str, value: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::Domain { what, value } => write!(f, "{what}: argument {value} out of domain"),
            Error::InvalidShape { alpha, beta } => {
                write!(f, "invalid beta shape parameters alpha={alpha}, beta={beta}")
            }
            Error::NoConvergence { what } => write!(f, "{what}: iteration cap reached"),
            Error::EmptySample => f.write_str("sample is empty"),
            Error::NonFinite { index } => write!(f, "sample value at index {index} is not finite"),
            Error::BoundaryProbability { p } => {
                write!(f, "p={p} is a boundary probability; use the sample extreme")
            }
            Error::InvalidParameter { family, name, value } => {
                write!(f, "{family}: parameter {name}={value} out of range")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
