use thiserror::Error;

/// Failures shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested bound is below what the working precision can certify.
    #[error("precision error: bound {requested:e} needs more than {precision_bits} bits (rounding alone contributes {rounding:e})")]
    Precision {
        requested: f64,
        rounding: f64,
        precision_bits: usize,
    },

    /// A term, sample, or subdivision budget was exhausted before the bound was met.
    #[error("capacity error: {what} (achieved bound {achieved:e})")]
    Capacity { what: String, achieved: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
