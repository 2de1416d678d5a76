use thiserror::Error;

/// Errors raised by graph construction, transformations, covers, digitization and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),

    #[error("edge ({0}, {1}) has an endpoint that is not a vertex")]
    UnknownEndpoint(String, String),

    #[error("self-loop ({0}, {0}) is not allowed in a simple graph")]
    SelfLoop(String),

    #[error("vertex {0:?} is not in the graph")]
    MissingVertex(String),

    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(String, String),

    #[error("({0}, {1}) is already an edge")]
    AlreadyAdjacent(String, String),

    #[error("label {0:?} is already in use")]
    LabelInUse(String),

    /// A contractible transformation was refused; the message names the failed check.
    #[error("transformation rejected: {0}")]
    Rejected(String),

    #[error("clique of more than {0} vertices exceeds the enumeration cap")]
    CliqueCap(usize),

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("cells have mixed ambient dimensions ({0} vs {1})")]
    MixedDimensions(usize, usize),

    #[error("intersection is not a single box: {0}")]
    NonBoxIntersection(String),

    #[error("cell {0} has no neighbours")]
    IsolatedCell(usize),

    #[error("merge rejected ({clause}): {detail}")]
    MergeRejected { clause: String, detail: String },

    #[error("invalid digitization input: {0}")]
    Digitize(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
}

impl Error {
    pub(crate) fn parse(position: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            position: position.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
