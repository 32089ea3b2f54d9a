use thiserror::Error;

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is singular (det = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("immersion is degenerate at {point:?}: jacobian rank {rank} < {expected}")]
    DegenerateImmersion {
        point: Vec<f64>,
        rank: usize,
        expected: usize,
    },

    #[error("direction is normal to the tangent space (|d^T| = {tangent_norm:e}); T is undefined")]
    VerticalDirection { tangent_norm: f64 },

    #[error("tangent spaces are not J-invariant (residual {residual:e})")]
    NonComplexSubmanifold { residual: f64 },

    #[error("offset immersion degenerates at t = {t}: det(1 - t A) = {det:e}")]
    ImmersionDegeneratesAtT { t: f64, det: f64 },

    #[error("offset metric is singular (det = {det:e})")]
    SingularOffsetMetric { det: f64 },

    #[error("rational trace function has a pole at s = {s} (det = {det:e})")]
    PoleAt { s: f64, det: f64 },

    #[error("grid has {got} pole-free points, need at least {needed}")]
    InsufficientGrid { needed: usize, got: usize },

    #[error("function is not eikonal (gradient-norm spread {spread:e})")]
    NotEikonal { spread: f64 },

    #[error("metric is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NonPositiveDefinite { min_eigenvalue: f64 },

    #[error("chart is not a hypersurface (m = {m}, n = {n})")]
    NotHypersurface { m: usize, n: usize },

    #[error("unknown chart `{0}`")]
    UnknownChart(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },

    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("evaluation failed: {0}")]
    Evaluation(String),
}

impl GeomError {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        GeomError::ContractViolation(msg.into())
    }

    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        GeomError::InvalidParam {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
