use thiserror::Error;

#[derive(Debug, Error)]
pub enum So3Error {
    #[error("invalid band-limits L={l}, M={m}, N={n}: require 1 <= M <= L and 1 <= N <= L")]
    InvalidBandLimits { l: usize, m: usize, n: usize },

    #[error("{what} index {index} outside [{lo}, {hi}]")]
    IndexOutOfRange {
        what: &'static str,
        index: i64,
        lo: i64,
        hi: i64,
    },

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("Δ-table covers ℓ < {available} but band-limit L={required} is needed")]
    DeltaTooSmall { available: usize, required: usize },

    #[error("table for ell_max={ell_max} needs {entries} entries, exceeding the addressable size")]
    SizeTooLarge { ell_max: usize, entries: u128 },

    #[error("d-function recursion produced a non-finite value at ℓ={ell}")]
    NonFinite { ell: usize },

    #[error("{what}: imaginary residue {residue:e} exceeds {tolerance:e}")]
    ImaginaryResidue {
        what: &'static str,
        residue: f64,
        tolerance: f64,
    },

    #[error("conjugate symmetry violated by {residual:e} (tolerance {tolerance:e})")]
    SymmetryViolation { residual: f64, tolerance: f64 },

    #[error("naive transform capped at L <= {cap} (requested L={l}); set the override to proceed")]
    NaiveCapExceeded { l: usize, cap: usize },

    #[error("expected {expected} data, got {found}")]
    RealityMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, So3Error>;
