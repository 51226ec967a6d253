use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular to rank tolerance (smallest/largest singular value {ratio:e})")]
    Singular { ratio: f64 },

    #[error("element {index} is not unitary (defect {defect:e} exceeds tolerance)")]
    NotUnitary { index: usize, defect: f64 },

    #[error("matrix is not hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("all eigenvalues below null threshold; fit is degenerate")]
    DegenerateFit,

    #[error("matrix is not orthogonal (defect {defect:e})")]
    NotOrthogonal { defect: f64 },

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("invalid permutation set: {0}")]
    Permutations(String),

    #[error("group element count {elements} does not match table order {order}")]
    OrderMismatch { elements: usize, order: usize },

    #[error("symmetry permutations not closed under composition at tol {tol} (found {found} permutations)")]
    SymmetryClosure { tol: f64, found: usize },

    #[error("permutation search exceeded node limit {limit}")]
    SearchLimit { limit: usize },

    #[error("degenerate geometry: moment matrix rank {rank} < 3")]
    DegenerateGeometry { rank: usize },

    #[error("xyz parse error on line {line}: {message}")]
    Xyz { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
