use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges")]
    EmptyGraph,

    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("edge ({0}, {1}) is not present in the graph")]
    MissingEdge(usize, usize),

    #[error("curvature kind `none` has no curvature values")]
    NoCurvature,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("every node is isolated; homophily is undefined")]
    AllIsolated,

    #[error(
        "graph has {zero_eigenvalues} zero eigenvalues (disconnected); extract the largest connected component first"
    )]
    Disconnected { zero_eigenvalues: usize },

    #[error("normalized Laplacian has no non-zero eigenvalue")]
    NoSpectralGap,

    #[error("bound hypotheses not met for edge ({i}, {j}): {reason}")]
    ConditionNotMet { i: usize, j: usize, reason: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
