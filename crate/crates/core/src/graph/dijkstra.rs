use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::routing::{NodeId, RoutingGraph};
use crate::error::Result;

/// Min-heap entry ordered by cost, then by smaller node id.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HeapEntry {
    pub cost: f64,
    pub node: NodeId,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Single-source shortest-path tree.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    source: NodeId,
    cost: Vec<f64>,
    parent: Vec<Option<NodeId>>,
}

impl ShortestPaths {
    pub fn source(&self) -> NodeId {
        self.source
    }

    /// `None` when `v` is unreachable.
    pub fn cost(&self, v: NodeId) -> Option<f64> {
        let c = self.cost[v.index()];
        c.is_finite().then_some(c)
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v.index()]
    }

    pub fn path_to(&self, v: NodeId) -> Option<Vec<NodeId>> {
        self.cost(v)?;
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur.index()] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Exact shortest paths from `src`.
///
/// Equal-cost ties settle the smaller node id first, and a parent only
/// changes on a strict improvement, so the tree is deterministic.
pub fn dijkstra(g: &RoutingGraph, src: NodeId) -> Result<ShortestPaths> {
    g.check(src)?;
    let n = g.node_count();
    let mut cost = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    cost[src.index()] = 0.0;
    heap.push(HeapEntry { cost: 0.0, node: src });

    while let Some(HeapEntry { cost: c, node: u }) = heap.pop() {
        if done[u.index()] {
            continue;
        }
        done[u.index()] = true;
        for &(v, w) in g.neighbors(u) {
            let nc = c + w;
            if nc < cost[v.index()] {
                cost[v.index()] = nc;
                parent[v.index()] = Some(u);
                heap.push(HeapEntry { cost: nc, node: v });
            }
        }
    }
    Ok(ShortestPaths { source: src, cost, parent })
}
