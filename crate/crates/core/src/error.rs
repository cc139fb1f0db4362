use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("all performance components are zero")]
    AllZero,
    #[error("component {index} is negative or not finite ({value})")]
    NegativeInput { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("importance ({a}, {b}) is outside [0, 1]^2")]
    InvalidImportance { a: f64, b: f64 },
    #[error("parameter {name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("score is undefined (zero denominator)")]
    Undefined,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("recovered component {index} is negative ({value})")]
    InfeasibleSolution { index: usize, value: f64 },
    #[error("invalid constraint set: {0}")]
    InvalidConstraints(&'static str),
    #[error("corner score {0} is undefined")]
    UndefinedCorner(&'static str),
    #[error("entity set is empty")]
    EmptyEntitySet,
    #[error("entity id is empty")]
    EmptyEntityId,
    #[error("duplicate entity id {0:?}")]
    DuplicateEntity(String),
    #[error("unknown entity {0:?}")]
    UnknownEntity(String),
    #[error("too many entities ({0}); at most 65535 are supported")]
    TooManyEntities(usize),
    #[error("grid size {0} is invalid; it must be at least 2")]
    InvalidGridSize(usize),
    #[error("tiles are defined on different grids")]
    GridMismatch,
    #[error("rank {rank} is outside [1, {count}]")]
    RankOutOfRange { rank: usize, count: usize },
    #[error("input vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("degenerate input (constant vector or fewer than 2 values)")]
    DegenerateInput,
    #[error("at least 3 entities with reference scores are required, found {0}")]
    TooFewEntities(usize),
    #[error("ROC rates of {0:?} are undefined (a class has zero prior)")]
    UndefinedRate(String),
    #[error("at least {min} samples are required, got {got}")]
    TooFewSamples { got: usize, min: usize },
}
