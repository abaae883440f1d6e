use std::collections::BTreeMap;
use std::fmt;

use super::geo::{haversine, GeoPoint};
use crate::error::{Error, Result};

/// Dense index of a node inside a [`RoutingGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected, simple, positively weighted graph over geographic nodes.
///
/// Immutable once built. Adjacency lists are sorted by neighbor id, so edge
/// lookups are a binary search and iteration order is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingGraph {
    points: Vec<GeoPoint>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    edge_count: usize,
    heuristic_scale: f64,
}

impl RoutingGraph {
    pub fn node_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.points.len()
    }

    pub fn check(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::InvalidNode(v.index()))
        }
    }

    pub fn point(&self, v: NodeId) -> GeoPoint {
        self.points[v.index()]
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[v.index()]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v.index()].len()
    }

    pub fn edge_weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let adj = &self.adjacency[u.index()];
        adj.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| adj[i].1)
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.points.len() as u32).map(NodeId)
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, adj)| {
            let u = NodeId::from(u);
            adj.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> f64 {
        haversine(self.point(u), self.point(v))
    }

    /// Largest `k <= 1` with `k * haversine(u, v) <= w(u, v)` on every edge.
    ///
    /// Scaling the haversine distance by this factor gives an admissible and
    /// consistent heuristic even when explicit weights undercut geometry.
    pub fn heuristic_scale(&self) -> f64 {
        self.heuristic_scale
    }

    /// Sum of edge weights along `path`; `None` if two consecutive nodes are
    /// not adjacent.
    pub fn path_cost(&self, path: &[NodeId]) -> Option<f64> {
        path.windows(2)
            .map(|w| self.edge_weight(w[0], w[1]))
            .sum::<Option<f64>>()
    }
}

/// Accumulates nodes and edges, then freezes them into a [`RoutingGraph`].
///
/// Duplicate edges collapse to the smallest weight; missing weights default
/// to the haversine length of the edge.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    points: Vec<GeoPoint>,
    edges: BTreeMap<(u32, u32), f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(nodes: usize) -> Self {
        Self {
            points: Vec::with_capacity(nodes),
            edges: BTreeMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.points.len()
    }

    pub fn add_node(&mut self, p: GeoPoint) -> NodeId {
        self.points.push(p);
        NodeId::from(self.points.len() - 1)
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, weight: Option<f64>) -> Result<()> {
        for n in [u, v] {
            if n.index() >= self.points.len() {
                return Err(Error::InvalidNode(n.index()));
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u.index()));
        }
        let w = weight.unwrap_or_else(|| haversine(self.points[u.index()], self.points[v.index()]));
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidWeight { weight: w });
        }
        let key = (u.0.min(v.0), u.0.max(v.0));
        self.edges
            .entry(key)
            .and_modify(|old| *old = old.min(w))
            .or_insert(w);
        Ok(())
    }

    pub fn build(self) -> RoutingGraph {
        let mut adjacency = vec![Vec::new(); self.points.len()];
        let mut scale = 1.0f64;
        for (&(u, v), &w) in &self.edges {
            adjacency[u as usize].push((NodeId(v), w));
            adjacency[v as usize].push((NodeId(u), w));
            let h = haversine(self.points[u as usize], self.points[v as usize]);
            if h > 0.0 {
                scale = scale.min(w / h);
            }
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|&(n, _)| n);
        }
        RoutingGraph {
            points: self.points,
            adjacency,
            edge_count: self.edges.len(),
            heuristic_scale: scale,
        }
    }
}
