use thiserror::Error;

/// Errors produced by the solver and its supporting routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum SveError {
    #[error("invalid cell state: {0}")]
    InvalidState(String),

    #[error(
        "pressure Riemann solver failed for left=(h={h_left}, q={q_left}, eta={eta_left}), \
         right=(h={h_right}, q={q_right}, eta={eta_right}): {reason}"
    )]
    StarFailure {
        h_left: f64,
        q_left: f64,
        eta_left: f64,
        h_right: f64,
        q_right: f64,
        eta_right: f64,
        reason: String,
    },

    #[error("non-positive depth h={depth} in cell {cell} at t={time}")]
    PositivityFailure { cell: usize, time: f64, depth: f64 },

    #[error("eigenvalue diagnostic failure: {0}")]
    EigenvalueFailure(String),

    #[error("invalid configuration: {0}")]
    ConfigError(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
}

pub type Result<T> = std::result::Result<T, SveError>;
