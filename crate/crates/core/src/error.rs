use alloc::boxed::Box;
use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    /// An exponential enumeration would exceed a configured limit.
    #[error("{what}: {required} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        required: String,
        limit: String,
    },
    #[error(
        "graph has {components} components; P_DP is multiplicative over components, \
         minimize each component separately and multiply"
    )]
    Disconnected { components: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn capacity(
        what: &'static str,
        required: impl core::fmt::Display,
        limit: impl core::fmt::Display,
    ) -> Self {
        use alloc::string::ToString;
        Error::Capacity {
            what,
            required: required.to_string(),
            limit: limit.to_string(),
        }
    }

    pub(crate) fn at_line(self, line: usize) -> Self {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// True for errors caused by resource limits rather than bad input.
    pub fn is_capacity(&self) -> bool {
        match self {
            Error::Capacity { .. } => true,
            Error::AtLine { source, .. } => source.is_capacity(),
            _ => false,
        }
    }
}
