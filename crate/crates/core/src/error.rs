use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name} line {line}: {message}")]
    Parse {
        source_name: &'static str,
        line: usize,
        message: String,
    },

    #[error("{source_name} line {line}: vertex identifier `{token}` does not fit in 64 bits")]
    VertexOverflow {
        source_name: &'static str,
        line: usize,
        token: String,
    },

    #[error("too many distinct vertices ({0}); at most u32::MAX are supported")]
    TooManyVertices(usize),

    #[error("vertex {0} is not part of the graph")]
    UnknownVertex(VertexId),

    #[error("vertex list must be strictly ascending")]
    UnsortedMembers,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quasi-clique search exceeded the candidate ceiling of {limit} expansions")]
    CandidateOverflow { limit: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
