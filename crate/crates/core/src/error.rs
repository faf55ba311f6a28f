use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseScalarError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable x{index} at byte {offset} is out of range for dimension {dim}")]
    VariableOutOfRange {
        index: usize,
        dim: usize,
        offset: usize,
    },
    #[error("singular point: {0}")]
    Singular(String),
    #[error("point has {found} coordinates, expression expects {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("metric is singular")]
    SingularMetric,
    #[error("metric is not symmetric at ({0}, {1})")]
    AsymmetricMetric(usize, usize),
    #[error("slot {slot} out of range for rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },
    #[error("slot {0} has the wrong variance for this operation")]
    WrongVariance(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("structure constants are not antisymmetric at C^{k}_({i},{j})")]
    NonAntisymmetric { i: usize, j: usize, k: usize },
    #[error("dimension {0} is not odd")]
    EvenDimension(usize),
    #[error("almost contact B-metric axioms fail: {0}")]
    InvalidStructure(String),
    #[error("this branch requires a {expected} source manifold")]
    WrongBranch { expected: &'static str },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("malformed manifest JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported manifest schema {0:?}")]
    Schema(String),
    #[error("manifest field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error("expression `{name}`: {source}")]
    Expr {
        name: String,
        #[source]
        source: ExprError,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl ManifestError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ManifestError::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Errors that stop a command before it can produce a report.
#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}
