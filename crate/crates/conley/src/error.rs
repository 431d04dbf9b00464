use thiserror::Error;

pub type Result<T> = std::result::Result<T, ConleyError>;

#[derive(Debug, Error)]
pub enum ConleyError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("hull of empty cell collection")]
    EmptyHull,

    #[error("hull ambiguous on periodic axis {axis}: input spreads over at least half the period")]
    HullAmbiguous { axis: usize },

    #[error("no coarse cell contains any sample")]
    EmptyCover,

    #[error("no isolating collar of the seed within k <= {max_k}")]
    NoIsolatingCollar { max_k: u32 },

    #[error("no weak index pair at the current refinement: {0}; refine the grid")]
    ResolutionTooCoarse(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("not a weak index pair: {0}")]
    NotWeakPair(String),

    #[error("pair shapes do not match: neither component equal")]
    ShapeMismatch,

    #[error("squeeze iteration exceeded the cell-count cap (implementation bug)")]
    NoTermination,

    #[error("graph fiber does not match the point map at cube {0}")]
    FiberMismatch(String),

    #[error("graph projection not invertible in degree {degree} (ranks {src} -> {dst})")]
    ProjectionNotIso { degree: usize, src: usize, dst: usize },

    #[error("excision inclusion not invertible in degree {degree} (ranks {src} -> {dst})")]
    ExcisionFailure { degree: usize, src: usize, dst: usize },

    #[error("Leray reduction requires field coefficients")]
    NotAField,

    #[error("no strict index pair found in the given neighbourhood")]
    NoStrictPairFound,

    #[error("figure output supports dimension 1 only (got {0})")]
    UnsupportedDimension(usize),

    #[error("isolation failure: {0}")]
    IsolationFailure(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
