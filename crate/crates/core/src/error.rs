use thiserror::Error;

/// Errors from the set calculus and the generalized-equation layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("unsupported dimension {0} (expected 1..=4)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("rows do not describe a symmetric matrix")]
    NotSymmetric,
    #[error("spectrum layouts differ")]
    LayoutMismatch,
    #[error("primitive `{prim}` is not defined for this layout: {reason}")]
    BadPrimitive { prim: String, reason: String },
    #[error("matrix is not trace-free (trace {0})")]
    NotTraceFree(f64),
    #[error("no sign change of the level within |t| <= 1e6; the set is empty or full")]
    BracketOverflow,
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Errors from grid-function checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("node ({i}, {j}) is closer than {radius} nodes to the boundary or mask")]
    NodeOutOfRange { i: usize, j: usize, radius: usize },
    #[error("grid functions live on different domains")]
    DomainMismatch,
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// Errors from the Dirichlet solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("set cannot be compiled to a monotone stencil operator: {0}")]
    NonCompilable(String),
    #[error("residual grew over {checkpoints} consecutive checkpoints (last {residual:e})")]
    Diverged { checkpoints: usize, residual: f64 },
    #[error("no interior witness: Int H is empty for this equation")]
    NoInteriorWitness,
    #[error("bad domain: {0}")]
    Domain(String),
    #[error("boundary data: {0}")]
    Formula(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Errors from figure rendering.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FigureError {
    #[error("not renderable: {0}")]
    NotRenderable(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
}
