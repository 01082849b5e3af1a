use thiserror::Error;

/// Errors raised at the kernel boundary.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SoftmaxError {
    #[error("input vector is empty")]
    EmptyInput,

    #[error("input element {index} is not finite")]
    NonFiniteInput { index: usize },

    #[error("invalid top-k width {k} for a vector of length {len}")]
    InvalidK { k: usize, len: usize },

    #[error("chunk size must be at least 1")]
    InvalidChunk,
}

pub type Result<T, E = SoftmaxError> = std::result::Result<T, E>;

/// Rejects empty or non-finite input.
pub(crate) fn check_input(x: &[f32]) -> Result<()> {
    if x.is_empty() {
        return Err(SoftmaxError::EmptyInput);
    }
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(SoftmaxError::NonFiniteInput { index }),
        None => Ok(()),
    }
}

pub(crate) fn check_k(k: usize, len: usize) -> Result<()> {
    if k == 0 || k > len {
        return Err(SoftmaxError::InvalidK { k, len });
    }
    Ok(())
}
