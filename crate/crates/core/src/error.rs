use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right} in {context}")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("requested {rows}x{cols} exceeds the entry budget of {max} (see QUDIT_GROVER_MAX_DIM)")]
    SizeExceeded { rows: usize, cols: usize, max: usize },

    #[error("arity {d} outside the supported range 2..={max}")]
    ArityOutOfRange { d: usize, max: usize },

    #[error("gate {gate} is not defined at arity {d}")]
    UnsupportedGate { gate: &'static str, d: usize },

    #[error("operator norm {norm:.3e} exceeds the exponential guard {limit}")]
    NormTooLarge { norm: f64, limit: f64 },

    #[error("Gram system is rank deficient (basis vectors are linearly dependent)")]
    RankDeficient,

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("basis does not span an invariant subspace: worst off-span residual {residual:.3e}")]
    InvarianceViolated { residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("repeated-run protocol exceeded {limit} runs without a repeated outcome")]
    ProtocolRunaway { limit: usize },
}
