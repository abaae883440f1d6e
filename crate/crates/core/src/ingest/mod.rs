//! Loading maps and scenarios from text formats.
//!
//! Two map formats are understood: a subset of OpenStreetMap XML and a
//! line-oriented edge list (`graph v1`). Scenarios live in their own file so
//! one map can serve many of them.

mod edgelist;
mod osm;
mod scenario;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::NodeId;

pub use edgelist::{parse_edgelist, write_edgelist};
pub use osm::parse_osm_xml;
pub use scenario::{parse_scenario, resolve_scenario, PseudoSpec, ScenarioSpec};

/// Bijection between external 64-bit node ids and dense [`NodeId`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    to_internal: HashMap<i64, NodeId>,
    to_external: Vec<i64>,
}

impl IdMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Identity mapping `i <-> i` for graphs built in memory.
    pub fn identity(n: usize) -> Self {
        let mut ids = Self::new();
        for i in 0..n {
            ids.insert(i as i64).expect("distinct");
        }
        ids
    }

    pub(crate) fn insert(&mut self, external: i64) -> Result<NodeId> {
        let next = NodeId::from(self.to_external.len());
        if self.to_internal.insert(external, next).is_some() {
            return Err(Error::DuplicateDestination(external));
        }
        self.to_external.push(external);
        Ok(next)
    }

    pub fn internal(&self, external: i64) -> Option<NodeId> {
        self.to_internal.get(&external).copied()
    }

    pub fn resolve(&self, external: i64) -> Result<NodeId> {
        self.internal(external).ok_or(Error::UnknownId(external))
    }

    pub fn external(&self, id: NodeId) -> i64 {
        self.to_external[id.index()]
    }

    pub fn len(&self) -> usize {
        self.to_external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_external.is_empty()
    }
}

/// Parses by file name: `.osm`/`.xml` as OSM XML, anything else as an edge list.
pub fn load_graph_bytes(
    name: &str,
    bytes: &[u8],
) -> Result<(crate::graph::RoutingGraph, IdMap)> {
    let lower = name.to_ascii_lowercase();
    if lower.ends_with(".osm") || lower.ends_with(".xml") {
        parse_osm_xml(bytes)
    } else {
        parse_edgelist(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_map_is_bijective() {
        let mut m = IdMap::new();
        let a = m.insert(42).unwrap();
        let b = m.insert(-7).unwrap();
        assert_eq!(m.internal(42), Some(a));
        assert_eq!(m.external(b), -7);
        assert!(m.insert(42).is_err());
        assert_eq!(m.resolve(5), Err(Error::UnknownId(5)));
    }
}
