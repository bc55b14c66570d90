use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("matrix is not unitary (max |U†U - I| = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid oracle: {0}")]
    InvalidOracle(String),

    #[error("oracle phase {oracle} and origin phase {origin} differ; both phase gates must share one sign")]
    PhaseMismatch { oracle: f64, origin: f64 },

    #[error("recursion order {requested} exceeds the configured maximum {max}")]
    DepthExceeded { requested: u32, max: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("virtual z rotation at event {index} is not allowed in a physical sequence")]
    VirtualZInPhysical { index: usize },

    #[error("unitarity breach at pulse {index} (max |U†U - I| = {defect:e})")]
    PulseNotUnitary { index: usize, defect: f64 },

    #[error("invalid pulse event: {0}")]
    InvalidEvent(String),

    #[error("invalid spin system: {0}")]
    InvalidSpinSystem(String),

    #[error("invalid error model: {0}")]
    InvalidErrorModel(String),

    #[error("density matrix is not diagonal; apply crush first")]
    NotDiagonal,

    #[error("no signal expected for oracle {0}; probability cannot be estimated")]
    NoSignalExpected(String),

    #[error("reference spectrum has zero intensity for the selected combination")]
    ZeroReference,

    #[error("numerical invariant violated: {0}")]
    Invariant(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
