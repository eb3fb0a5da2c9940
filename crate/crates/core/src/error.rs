use thiserror::Error;

use crate::dyngraph::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a graph needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: u32, n: usize },

    #[error("self-loop at vertex {0} is not a simple-graph edge")]
    SelfLoop(u32),

    #[error("edge {0} is already present")]
    DuplicateEdge(Edge),

    #[error("edge {0} is not present")]
    AbsentEdge(Edge),

    #[error("no candidate vertex pairs to sample from")]
    NoCandidates,

    #[error("{name} must lie in [0, 1], got {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("edge count {m} exceeds the {max} pairs available on {n} vertices")]
    TooManyEdges { m: usize, n: usize, max: usize },

    #[error("observed summaries requested but the trajectory was simulated without noise")]
    ObservedUnavailable,

    #[error("quantile level {0} outside [0, 1]")]
    InvalidQuantileLevel(f64),

    #[error("quantile levels must satisfy x1 < x2, got ({0}, {1})")]
    QuantileOrder(f64, f64),

    #[error("automatic bandwidth is undefined for a zero-variance sample; pass one explicitly")]
    BandwidthUndefined,

    #[error("bandwidth must be positive and finite, got {0}")]
    InvalidBandwidth(f64),

    #[error("sample is empty")]
    EmptySample,

    #[error("unknown ROC orientation {0:?}")]
    UnknownOrientation(String),

    #[error("unknown {what} {value:?}")]
    UnknownName { what: &'static str, value: String },

    /// `line` is 1-based; 0 marks a whole-input problem.
    #[error("parse error{}: {msg}", if *line > 0 { format!(" at line {line}") } else { String::new() })]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}
