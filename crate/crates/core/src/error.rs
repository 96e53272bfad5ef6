use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {re}+{im}i is not in the upper half-plane")]
    NotInHalfPlane { re: f64, im: f64 },

    #[error("Möbius map has non-positive determinant {det}")]
    BadDeterminant { det: f64 },

    #[error("geodesic endpoints coincide")]
    DegeneratePath,

    #[error("at least 2 samples required, got {0}")]
    TooFewSamples(usize),

    #[error("path parameters must be strictly increasing")]
    NonMonotoneParameters,

    #[error("weight parameter t = {0} outside [0, 1]")]
    BadWeight(f64),

    #[error("foliation vector must be nonzero")]
    ZeroFoliation,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid with {cells} cells cannot carry a kernel for {dim} constraints")]
    GridTooSmall { cells: usize, dim: usize },

    #[error("basis is numerically degenerate (Gram condition number {0:e})")]
    DegenerateBasis(f64),

    #[error("quadratic differential vanishes on the grid")]
    VanishingDifferential,

    #[error("cometric undefined: ‖ψ‖₁ = {0} ≥ 1")]
    CometricUndefined(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
