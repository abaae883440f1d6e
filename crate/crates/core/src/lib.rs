pub mod baselines;
pub mod bench;
pub mod destinations;
pub mod error;
pub mod gen;
pub mod graph;
pub mod imomd;
pub mod ingest;
pub mod report;
pub mod rtsp;

pub use destinations::{Destination, DestinationKind, DestinationSet};
pub use error::{Error, Result};
