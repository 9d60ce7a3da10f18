use thiserror::Error;

/// Errors raised by the spectral and quadrature routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spectrum{}: {reason}", fmt_index(*.index))]
    InvalidSpectrum { index: Option<usize>, reason: String },

    #[error("invalid trace at record {index}: |trace| = {trace_abs} exceeds multiplicity {multiplicity}")]
    InvalidTrace {
        index: usize,
        trace_abs: f64,
        multiplicity: u32,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (partial {partial:e}, error estimate {est_error:e})")]
    QuadratureFailure {
        partial: f64,
        est_error: f64,
        subdivisions: usize,
    },

    #[error("numerical instability: {0}")]
    Instability(String),
}

fn fmt_index(index: Option<usize>) -> String {
    match index {
        Some(i) => format!(" (record {i})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
