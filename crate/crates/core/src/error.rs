use thiserror::Error;

/// Errors raised by the numerical kernels and exporters.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} is outside its domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("{what} requires {requirement} (got {value})")]
    Regime {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("quadrature order {requested} exceeds the node-table capacity of {capacity}")]
    QuadratureOrder { requested: usize, capacity: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("covariance matrix is not physical: {0}")]
    Unphysical(String),

    #[error("Fock cutoff {cutoff} is too small for intensity {intensity}: need at least {required} (Poisson tail {tail:e})")]
    CutoffTooSmall {
        cutoff: usize,
        intensity: f64,
        required: usize,
        tail: f64,
    },

    #[error("grid sampling failed at node ({i}, {j}, {k}): {reason}")]
    GridSample {
        i: usize,
        j: usize,
        k: usize,
        reason: String,
    },

    #[error("iso level {level} is not strictly between the grid extremes {min} and {max}")]
    LevelOutOfRange { level: f64, min: f64, max: f64 },

    #[error("grids are not congruent: {0}")]
    GridMismatch(String),

    #[error("malformed grid file: {0}")]
    GridFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        what,
        detail: detail.into(),
    }
}

/// Rejects NaN and infinities with a domain error naming the argument.
pub(crate) fn finite(what: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(domain(what, format!("non-finite value {x}")))
    }
}

/// Rejects negative, NaN and infinite values.
pub(crate) fn non_negative(what: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(domain(
            what,
            format!("expected a finite non-negative value, got {x}"),
        ))
    }
}
