use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("malformed rational `{0}`")]
    MalformedRational(String),

    #[error("edge `{edge}`: non-positive capacity {value}")]
    NonPositiveCapacity { edge: String, value: String },

    #[error("cannot infer {0}: no node qualifies")]
    MissingTerminal(&'static str),

    #[error(
        "{what}: {actual} exceeds the limit of {limit} (raise FLOWMECH_MAX_EDGES to override)"
    )]
    SizeGuard {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("report vector has {actual} entries, network has {expected} edges")]
    ReportLength { expected: usize, actual: usize },

    #[error("edge `{edge}`: report {report} outside [0, {truth}]")]
    ReportOutOfRange {
        edge: String,
        report: String,
        truth: String,
    },

    #[error("edges `{0}` and `{1}` are not parallel")]
    NotParallel(String, String),

    #[error("split parts {a} + {b} do not sum to the report {total}")]
    SplitMismatch { a: String, b: String, total: String },

    #[error("edge `{0}` is a source-sink edge")]
    SourceSinkEdge(String),

    #[error("{0}")]
    Precondition(String),

    #[error("second difference changes sign for ({i}, {j}): {detail}")]
    SignConflict {
        i: String,
        j: String,
        detail: String,
    },
}

pub type Result<T, E = FlowError> = std::result::Result<T, E>;
