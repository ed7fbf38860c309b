use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge #{position} ({u}, {v}) references a node outside 0..{num_nodes}")]
    NodeOutOfRange {
        position: usize,
        u: usize,
        v: usize,
        num_nodes: usize,
    },

    #[error("node {node} is outside 0..{num_nodes}")]
    InvalidNode { node: usize, num_nodes: usize },

    #[error("no measurable pairs: every component is a single node")]
    NoMeasurablePairs,

    #[error("invalid decay series: {0}")]
    InvalidSeries(String),

    #[error("nodes {u} and {v} lie in different components (infinite resistance)")]
    InfiniteResistance { u: usize, v: usize },

    #[error("no candidate non-edges in the operative component")]
    NoCandidateEdges,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node-count mismatch: expected {expected}, found {found}")]
    NodeCountMismatch { expected: usize, found: usize },

    #[error("graph-id mismatch: {0} vs {1}")]
    GraphIdMismatch(String, String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("edge ({u}, {v}) crosses graphs {graph_u} and {graph_v}")]
    CrossGraphEdge {
        u: usize,
        v: usize,
        graph_u: usize,
        graph_v: usize,
    },

    #[error("all graphs lack measurable pairs")]
    AllGraphsSkipped,

    #[error("{0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
