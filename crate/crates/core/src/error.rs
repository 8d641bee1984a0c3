use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix has rank {rank}, expected at least {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("index ({row}, {other}) out of range for {rows} rows")]
    IndexOutOfRange { row: usize, other: usize, rows: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("value outside the domain of the potential: {0}")]
    DomainError(String),

    #[error("index r = {r} must lie in [0, {max}]")]
    BadIndex { r: usize, max: usize },

    #[error("trace target t = {t} is below the trace {trace} of the spectrum")]
    BadTrace { t: f64, trace: f64 },

    #[error("m = {m} is outside the admissible range for d = {d}")]
    BadM { m: i64, d: usize },

    #[error("target vector is not majorized by the spectrum")]
    NotMajorized,

    #[error("operator rank {rank} exceeds the number of vectors {k}")]
    RankTooLarge { rank: usize, k: usize },

    #[error("frame does not span the space")]
    NotSpanning,

    #[error("frame operator is singular")]
    SingularFrameOperator,

    #[error("completion problem is infeasible")]
    Infeasible,

    #[error("kernel of the synthesis operator has dimension {available}, need {needed}")]
    InsufficientCorank { needed: usize, available: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;
