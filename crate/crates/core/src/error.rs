use thiserror::Error;

/// Everything that can go wrong in the library. Solver phases wrap their
/// failures in [`Error::Phase`] so callers can tell which stage gave up.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },

    #[error("vertex ids must be dense: vertex {vertex} has no incident edge")]
    SparseIds { vertex: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("minimum degree {actual} is below the required {required}")]
    MinDegree { required: usize, actual: usize },

    #[error("graph is not {d}-regular (vertex {vertex} has degree {degree})")]
    NotRegular { d: usize, vertex: usize, degree: usize },

    #[error("d = {d} is below the minimum {min} for this pipeline")]
    DegreeTooSmall { d: usize, min: usize },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("graph is not a regular bipartite graph: {0}")]
    NotBipartiteRegular(String),

    #[error("no simple graph after {retries} pairing attempts")]
    RetriesExhausted { retries: usize },

    #[error("resampling gave up after {rounds} rounds; {} events still violated (first: {:?})", .violated.len(), .violated.iter().take(8).collect::<Vec<_>>())]
    RoundsExhausted { rounds: usize, violated: Vec<usize> },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{phase}: {source}")]
    Phase {
        phase: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_phase(self, phase: &'static str) -> Error {
        Error::Phase {
            phase,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
