use crate::graph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex pair ({0}, {1}) appears more than once")]
    DuplicateEdge(VertexId, VertexId),
    #[error("graph contains a directed cycle")]
    Cycle,
    #[error("arc {0} -> {1} is not in the graph")]
    MissingArc(VertexId, VertexId),
    #[error("edge {0} ~ {1} is not in the skeleton")]
    MissingEdge(VertexId, VertexId),
    #[error("Meek rules orient {0} ~ {1} both ways; input has no consistent extension")]
    InconsistentOrientation(VertexId, VertexId),
    #[error("graph is not chordal")]
    NotChordal,
    #[error("graph is not connected")]
    Disconnected,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no verifying set of size <= {0} exists")]
    BoundExceeded(usize),
    #[error("target mean is not realizable: {0}")]
    NotRealizable(String),
    #[error("{0}: no data rows")]
    EmptyInput(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
