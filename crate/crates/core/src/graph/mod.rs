//! Graph representation, geographic distance, shortest paths, and
//! disjoint-set connectivity.

mod dijkstra;
mod dsu;
mod geo;
mod routing;

pub(crate) use dijkstra::HeapEntry;
pub use dijkstra::{dijkstra, ShortestPaths};
pub use dsu::{connectivity_check, DisjointSet};
pub use geo::{haversine, GeoPoint, EARTH_RADIUS_M};
pub use routing::{GraphBuilder, NodeId, RoutingGraph};
