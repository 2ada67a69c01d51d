use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "quadrature did not reach the requested tolerance: value {value:e}, \
         estimated error {error_estimate:e} after {subdivisions} subdivisions"
    )]
    NotConverged {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("per-period contributions do not decay (partial sum {partial:e})")]
    Divergent { partial: f64 },

    #[error("s = {re}{im:+}i lies in the singular set {set}")]
    Singular { re: f64, im: f64, set: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no zig-zag function satisfies the constraints")]
    EmptyFamily,

    #[error("grid resolution: {0}")]
    Resolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite, got {x}")))
    }
}

pub(crate) fn ensure_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {x}")))
    }
}
