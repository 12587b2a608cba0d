use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        got: usize,
    },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    SizeMismatch(String),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not antisymmetric (defect {defect:.3e})")]
    NotAntisymmetric { defect: f64 },

    #[error("tuple coordinates do not commute (coordinates {i} and {j}, defect {defect:.3e})")]
    NotCommuting { i: usize, j: usize, defect: f64 },

    #[error("coordinate {index} is not normal (defect {defect:.3e})")]
    NotNormal { index: usize, defect: f64 },

    #[error("coordinate {index} is not a contraction (norm {norm})")]
    NotContraction { index: usize, norm: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("{0} is not matrix-shaped")]
    NotMatrixShaped(String),

    #[error("point is not on the Shilov boundary (defect {defect:.3e})")]
    NotOnShilov { defect: f64 },

    #[error("arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("{0}")]
    CapExceeded(String),

    #[error("subspace is not invariant (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("measure has no atoms")]
    EmptyMeasure,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("operator is not an intertwiner (residual {residual:.3e})")]
    NotIntertwiner { residual: f64 },

    #[error("no lift exists within tolerance (existence residual {residual:.3e})")]
    NoLiftExists { residual: f64 },

    #[error("cannot parse descriptor at `{token}`: {reason}")]
    Parse { token: String, reason: String },
}
