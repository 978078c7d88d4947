use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("edge {edge}: non-positive weight {weight}")]
    NonPositiveWeight { edge: usize, weight: f64 },

    #[error("edge {edge}: dangling endpoint {vertex:?}")]
    DanglingEndpoint { edge: usize, vertex: String },

    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),

    #[error("duplicate edge id {0}")]
    DuplicateEdge(usize),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("unknown edge id {0}")]
    UnknownEdge(usize),

    #[error("path is empty")]
    EmptyPath,

    #[error("path broken between edge {0} and edge {1}")]
    BrokenPath(usize, usize),

    #[error("invalid Markov matrix: {0}")]
    InvalidMatrix(String),

    #[error("unsupported input: probability-1 cycle through state {0:?}")]
    ProbabilityOneCycle(String),

    #[error("no path from {from:?} to {to:?}")]
    NoPath { from: String, to: String },

    #[error("component has no closed walk")]
    TrivialComponent,

    #[error("component is not a cycle")]
    NotACycle,

    #[error("component is a cycle; decay matrix never reaches spectral radius 1")]
    CycleComponent,

    #[error("no itinerary variant dwells in a component")]
    NoDwell,

    #[error("{what} guard exceeded (limit {limit})")]
    GuardExceeded { what: &'static str, limit: usize },

    #[error("count overflow while counting {0}")]
    CountOverflow(&'static str),

    #[error("power iteration hit the cap of {iterations} steps (estimate {estimate}, gap {gap})")]
    NoConvergence {
        iterations: usize,
        estimate: f64,
        gap: f64,
    },

    #[error("base {base} is not admissible (must satisfy 0 < b < {min_weight})")]
    InadmissibleBase { base: f64, min_weight: f64 },

    #[error("empty descriptor list")]
    EmptyList,

    #[error("stream shorter than window: needed {needed}, got {got}")]
    ShortStream { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
