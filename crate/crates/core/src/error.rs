use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, token {token}: malformed integer {text:?}")]
    MalformedInteger {
        line: usize,
        token: usize,
        text: String,
    },
    #[error("line {line}: expected {expected} entries, found {found}")]
    LengthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: missing {what}")]
    MissingLine { line: usize, what: &'static str },
    #[error("line {line}: unexpected trailing content")]
    TrailingContent { line: usize },
    #[error("parent of vertex {vertex} is {parent}, must be smaller than {vertex}")]
    ParentNotLess { vertex: usize, parent: usize },
    #[error("parent array has no root")]
    NoRoot,
    #[error("input describes no vertices")]
    EmptyGraph,
    #[error("expected a single tree, found {} roots", roots.len())]
    MultipleRoots { roots: Vec<usize> },
    #[error("line {line}: malformed edge, expected two labels")]
    MalformedPair { line: usize },
    #[error("line {line}: label {label} outside 1..={n}")]
    LabelOutOfRange { line: usize, label: usize, n: usize },
    #[error("line {line}: self-loop on vertex {label}")]
    SelfLoop { line: usize, label: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("tree on {n} vertices needs {} edges, found {found}", n.saturating_sub(1))]
    WrongEdgeCount { n: usize, found: usize },
    #[error("edge list is disconnected: reached {reached} of {n} vertices")]
    Disconnected { n: usize, reached: usize },
    #[error("vertex {label} outside 1..={n}")]
    VertexOutOfRange { label: usize, n: usize },
    #[error("leaf set does not match the tree")]
    InconsistentLeaves,
    #[error("operation requires a nontrivial tree (n >= 2)")]
    TrivialTree,
    #[error("vertex set must be non-empty")]
    EmptySet,
    #[error("{what}: n = {n} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("benchmark needs at least 3 repetitions, got {0}")]
    TooFewRepetitions(usize),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
