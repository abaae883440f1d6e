use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Node index outside the graph or element outside a disjoint-set universe.
    InvalidNode(usize),
    InvalidGeoPoint { lat: f64, lon: f64 },
    InvalidWeight { weight: f64 },
    SelfLoop(usize),
    /// Text or XML input that could not be parsed; `line` is 1-based.
    Parse { line: usize, message: String },
    /// An OSM way references a node that is not in the document.
    MissingNodeRef { way: i64, node: i64 },
    UnknownId(i64),
    DuplicateDestination(i64),
    Scenario(String),
    Config(String),
    /// The destination graph does not connect every required destination.
    NoSequence,
    /// A required destination cannot be reached from any sequence member.
    NoInsertion { destination: usize },
    OracleTooLarge { destinations: usize, limit: usize },
    EmptyBatch,
    NoPath { explored: usize },
    NoPathYet { explored: usize },
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidNode(i) => write!(f, "index {i} is out of range"),
            Error::InvalidGeoPoint { lat, lon } => {
                write!(f, "invalid coordinate (lat {lat}, lon {lon})")
            }
            Error::InvalidWeight { weight } => {
                write!(f, "edge weight {weight} must be positive and finite")
            }
            Error::SelfLoop(i) => write!(f, "self-loop on node {i}"),
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::MissingNodeRef { way, node } => {
                write!(f, "way {way} references missing node {node}")
            }
            Error::UnknownId(id) => write!(f, "unknown node id {id}"),
            Error::DuplicateDestination(id) => write!(f, "node {id} is listed as a destination twice"),
            Error::Scenario(msg) => write!(f, "scenario: {msg}"),
            Error::Config(msg) => write!(f, "config: {msg}"),
            Error::NoSequence => write!(f, "required destinations are not connected"),
            Error::NoInsertion { destination } => {
                write!(f, "destination {destination} cannot be inserted into the sequence")
            }
            Error::OracleTooLarge { destinations, limit } => write!(
                f,
                "brute-force oracle refuses {destinations} destinations (limit {limit})"
            ),
            Error::EmptyBatch => write!(f, "empty benchmark batch"),
            Error::NoPath { explored } => write!(f, "no path exists ({explored} nodes explored)"),
            Error::NoPathYet { explored } => {
                write!(f, "budget exhausted before a path was found ({explored} nodes explored)")
            }
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
