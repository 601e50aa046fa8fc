use thiserror::Error;

/// Errors shared across the crate. Estimators and oracles are strict about
/// their preconditions: dimension mismatches and invalid parameters are
/// reported rather than silently coerced.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}{}", context_suffix(.context))]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("invalid network shape: {0}")]
    InvalidShape(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate half-plane: the two output units coincide, so the decision boundary is empty and every input is a tie")]
    DegenerateHalfPlane,

    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

pub type Result<T> = std::result::Result<T, Error>;
