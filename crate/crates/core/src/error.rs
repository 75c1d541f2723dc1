use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("non-conforming mesh: {0}")]
    NonConforming(String),

    #[error("degenerate element {element}: area {area:e}")]
    DegenerateElement { element: usize, area: f64 },

    #[error("duplicate node {second} coincides with node {first}")]
    DuplicateNode { first: usize, second: usize },

    #[error("edge [{0}, {1}] is not an interior edge")]
    NotInterior(usize, usize),

    #[error("edge [{0}, {1}] does not exist")]
    NoSuchEdge(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("wave number must be nonzero")]
    ZeroWaveNumber,

    #[error("matrix dimension {dim} exceeds the dense cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("bisection cap of {cap} exceeded on transmission edge [{a}, {b}]")]
    BisectionCap { a: usize, b: usize, cap: usize },

    #[error("stale flip candidate: {0}")]
    StaleCandidate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no positive critical wave number: {0}")]
    NoCriticalWaveNumber(String),

    #[error("root bracketing failed: {0}")]
    CapTooSmall(String),

    #[error("trace does not match mesh: {0}")]
    MismatchedTrace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
