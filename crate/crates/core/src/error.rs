use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("path is not composable at position {0}")]
    NonComposablePath(usize),
    #[error("empty path")]
    EmptyPath,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (only 1 and 2 are supported)")]
    UnsupportedDimension(usize),
    #[error("contraction ratio {0} outside (0, 1)")]
    RatioOutOfRange(f64),
    #[error("coincident source points")]
    CoincidentPoints,
    #[error("not a contraction: largest singular value {0} ≥ 1")]
    NotContracting(f64),
    #[error("singular linear part (smallest singular value is zero)")]
    SingularMatrix,
    #[error("map on edge `{edge}` is not a contraction (largest singular value {sigma_max})")]
    NonContraction { edge: String, sigma_max: f64 },
    #[error("edge `{edge}`: {reason}")]
    InvalidEdgeMap { edge: String, reason: String },
    #[error("seed boxes are not forward invariant within {max_depth} iterations")]
    SeedBoxNotInvariant { max_depth: usize },
    #[error("invalid seed box for vertex `{0}`")]
    InvalidSeedBox(String),
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("empty point set")]
    EmptyPointSet,
    #[error("point budget exceeded: depth {depth} needs {required} points, budget is {budget}")]
    PointBudget { depth: usize, required: u128, budget: u64 },
    #[error("sampling resolution {resolution:e} is too coarse for tolerance {tol:e}; try depth {suggested_depth}")]
    ResolutionInsufficient { resolution: f64, tol: f64, suggested_depth: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions do not match: {0}")]
    ShapeMismatch(String),
    #[error("homomorphism {0} is not well defined on the presented groups")]
    IllDefinedHom(usize),
    #[error("homomorphisms {0} and {1} are not composable")]
    NonComposableHoms(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
