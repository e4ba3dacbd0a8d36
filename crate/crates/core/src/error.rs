use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("expected {expected} entries, got {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: |M - M^H|_F = {deviation:e} exceeds {allowed:e}")]
    NotHermitian { deviation: f64, allowed: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("trace {trace} is not 1")]
    NotUnitTrace { trace: f64 },

    #[error("smallest eigenvalue {min_eigenvalue:e} is below the positivity floor")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary: |U^H U - I|_F = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("state vector has zero norm")]
    ZeroVector,

    #[error("rank {rank} is outside 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("invalid partition {dims:?}: every part needs dimension >= 2")]
    InvalidPartition { dims: Vec<usize> },

    #[error("index {index} out of range for extent {extent}")]
    IndexOutOfRange { index: usize, extent: usize },

    #[error("operator dimension {found} does not match partition total {expected}")]
    PartitionMismatch { expected: usize, found: usize },

    #[error("partial trace needs at least one kept part")]
    EmptyKeepSet,

    #[error("at least one factor is required")]
    EmptyFactorList,

    #[error("partition has {parts} parts, a bipartition is required")]
    NotBipartite { parts: usize },

    #[error("dimension mismatch: {expected} vs {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis columns are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("input must be positive, got {value}")]
    NonPositiveInput { value: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("weight {index} must be positive, got {value}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("probability {index} must be positive, got {value}")]
    NonPositiveProbability { index: usize, value: f64 },

    #[error("table entry ({row}, {col}) must be positive, got {value}")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },

    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("{axis} {index} sums to {sum}, expected 1")]
    NotDoublyStochastic {
        axis: &'static str,
        index: usize,
        sum: f64,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("second-law check needs at least two measurement events, got {found}")]
    TooFewEvents { found: usize },
}
