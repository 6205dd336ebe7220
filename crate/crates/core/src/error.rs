use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("incidence entry ({vertex}, {edge}) is {value}, expected 0 or 1")]
    NonBinaryIncidence { vertex: usize, edge: usize, value: f64 },
    #[error("vertex index {vertex} out of range for {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("hyperedge {edge} has {size} vertices, at least 2 are required")]
    EdgeTooSmall { edge: usize, size: usize },
    #[error("hyperedge {edge} has weight {weight}, weights must be strictly positive")]
    NonPositiveWeight { edge: usize, weight: f64 },
    #[error("vertex {vertex} belongs to no hyperedge")]
    IsolatedVertex { vertex: usize },
    #[error("operator of kind {found} passed where {expected} is required")]
    WrongOperator {
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("matrix is not positive definite (pivot {pivot} is {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("input is empty")]
    EmptyInput,
    #[error("expression value at ({row}, {column}) is not finite")]
    NonFiniteValue { row: usize, column: usize },
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("clustering collapsed to {clusters} usable cluster(s), at least 2 are required")]
    DegenerateClustering { clusters: usize },
    #[error("malformed coordinate list at line {line}: {reason}")]
    CoordinateList { line: usize, reason: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
