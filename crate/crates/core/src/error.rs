use alloc::string::String;

/// Errors raised by constructions and input validation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("instance has no points")]
    Empty,
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge ({u},{v}) has invalid weight {w}; weights must be positive and finite")]
    InvalidWeight { u: usize, v: usize, w: f64 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("matrix is not {n}x{n}")]
    MatrixShape { n: usize },
    #[error("matrix diagonal entry ({0},{0}) is not zero")]
    NonzeroDiagonal(usize),
    #[error("matrix is asymmetric at ({u},{v})")]
    Asymmetric { u: usize, v: usize },
    #[error("distance ({u},{v}) = {w} must be positive and finite")]
    InvalidDistance { u: usize, v: usize, w: f64 },
    #[error("triangle inequality violated: d({u},{w}) > d({u},{v}) + d({v},{w})")]
    Triangle { u: usize, v: usize, w: usize },
    #[error("invalid HST: {0}")]
    Hst(String),
    #[error("HST label order violated at node {0}: child label exceeds parent label")]
    LabelOrder(usize),
    #[error("HST separation violated at node {node}: child label exceeds parent label / {k}")]
    Separation { node: usize, k: f64 },
    #[error("leaf node {0} has a nonzero label")]
    LeafLabel(usize),
    #[error("parameter {name} = {value} out of range: {expected}")]
    Parameter { name: &'static str, value: f64, expected: &'static str },
    #[error("input is not a tree")]
    NotATree,
    #[error("k = {k} is below the required 8*rho/eps = {required}")]
    KTooSmall { k: f64, required: f64 },
    #[error("partition cover provider has no cover at scale {0}")]
    MissingScale(f64),
    #[error("partition cover lacks cluster centers")]
    MissingCenters,
    #[error("gave up after {0} attempts")]
    BudgetExhausted(usize),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Parameter { name, value, expected }
}
