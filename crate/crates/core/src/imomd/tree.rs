use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{haversine, NodeId, RoutingGraph};

#[derive(Debug, Clone)]
struct Slot {
    parent: Option<NodeId>,
    cost: f64,
    children: Vec<NodeId>,
    /// Graph neighbors not yet in the tree.
    open: usize,
}

/// Outcome of [`SearchTree::rewire`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Rewired {
    /// Neighbors that switched parent.
    pub reparented: usize,
    /// Every node whose cost-to-come dropped, rewired neighbors and their
    /// descendants alike.
    pub decreased: Vec<NodeId>,
}

/// Shortest-path tree grown from one destination.
///
/// Lookups go through a hash map, but nothing that affects output ever
/// iterates it, so results are deterministic.
#[derive(Debug, Clone)]
pub struct SearchTree {
    root: NodeId,
    slots: HashMap<NodeId, Slot>,
    expandable: Vec<NodeId>,
    position: HashMap<NodeId, usize>,
}

impl SearchTree {
    pub fn new(graph: &RoutingGraph, root: NodeId) -> Result<Self> {
        graph.check(root)?;
        let mut tree = Self {
            root,
            slots: HashMap::new(),
            expandable: Vec::new(),
            position: HashMap::new(),
        };
        tree.attach(graph, root, None, 0.0);
        Ok(tree)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.slots.contains_key(&v)
    }

    pub fn cost(&self, v: NodeId) -> Option<f64> {
        self.slots.get(&v).map(|s| s.cost)
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.slots.get(&v).and_then(|s| s.parent)
    }

    /// Nodes with at least one graph neighbor outside the tree.
    pub fn expandable(&self) -> &[NodeId] {
        &self.expandable
    }

    pub fn is_saturated(&self) -> bool {
        self.expandable.is_empty()
    }

    /// `v` up to the root, inclusive.
    pub fn branch(&self, v: NodeId) -> Option<Vec<NodeId>> {
        let mut out = vec![v];
        let mut cur = self.slots.get(&v)?;
        while let Some(p) = cur.parent {
            out.push(p);
            cur = &self.slots[&p];
        }
        Some(out)
    }

    fn mark_expandable(&mut self, v: NodeId) {
        self.position.insert(v, self.expandable.len());
        self.expandable.push(v);
    }

    fn unmark_expandable(&mut self, v: NodeId) {
        if let Some(i) = self.position.remove(&v) {
            self.expandable.swap_remove(i);
            if let Some(&moved) = self.expandable.get(i) {
                self.position.insert(moved, i);
            }
        }
    }

    fn attach(&mut self, graph: &RoutingGraph, v: NodeId, parent: Option<NodeId>, cost: f64) {
        let mut open = 0;
        for &(n, _) in graph.neighbors(v) {
            match self.slots.get_mut(&n) {
                Some(slot) => {
                    slot.open -= 1;
                    if slot.open == 0 {
                        self.unmark_expandable(n);
                    }
                }
                None => open += 1,
            }
        }
        self.slots.insert(v, Slot { parent, cost, children: Vec::new(), open });
        if let Some(p) = parent {
            self.slots.get_mut(&p).expect("parent in tree").children.push(v);
        }
        if open > 0 {
            self.mark_expandable(v);
        }
    }

    /// Frontier node closest to `v_rand` by great-circle distance; ties go to
    /// the smaller id.
    pub fn nearest_expandable(&self, graph: &RoutingGraph, v_rand: NodeId) -> Option<NodeId> {
        let target = graph.point(v_rand);
        let mut best: Option<(f64, NodeId)> = None;
        for &v in &self.expandable {
            let d = haversine(graph.point(v), target);
            if best.is_none_or(|(bd, bv)| d < bd || (d == bd && v < bv)) {
                best = Some((d, v));
            }
        }
        best.map(|(_, v)| v)
    }

    /// Cheapest in-tree neighbor to hang `v` from, with the resulting cost.
    pub fn choose_parent(&self, graph: &RoutingGraph, v: NodeId) -> Result<(NodeId, f64)> {
        let mut best: Option<(f64, NodeId)> = None;
        for &(n, w) in graph.neighbors(v) {
            if let Some(slot) = self.slots.get(&n) {
                let c = slot.cost + w;
                if best.is_none_or(|(bc, bn)| c < bc || (c == bc && n < bn)) {
                    best = Some((c, n));
                }
            }
        }
        best.map(|(c, n)| (n, c))
            .ok_or_else(|| Error::Internal(format!("node {v} has no neighbor in the tree")))
    }

    /// Grows the tree from `anchor` toward `v_rand`.
    ///
    /// Adds the outside neighbor of `anchor` closest to `v_rand`, then keeps
    /// following while the newest node has exactly one outside neighbor,
    /// stopping at a branch point, a dead end or `v_rand`. Every added node
    /// takes its cheapest in-tree neighbor as parent.
    pub fn extend(&mut self, graph: &RoutingGraph, anchor: NodeId, v_rand: NodeId) -> Result<Vec<NodeId>> {
        if !self.position.contains_key(&anchor) {
            return Err(Error::Internal(format!("anchor {anchor} is not expandable")));
        }
        let target = graph.point(v_rand);
        let mut next = None;
        let mut best_d = f64::INFINITY;
        for &(n, _) in graph.neighbors(anchor) {
            if self.contains(n) {
                continue;
            }
            let d = haversine(graph.point(n), target);
            if next.is_none() || d < best_d || (d == best_d && Some(n) < next) {
                next = Some(n);
                best_d = d;
            }
        }
        let mut added = Vec::new();
        while let Some(v) = next {
            let (p, c) = self.choose_parent(graph, v)?;
            self.attach(graph, v, Some(p), c);
            added.push(v);
            if v == v_rand || self.slots[&v].open != 1 {
                break;
            }
            next = graph.neighbors(v).iter().map(|&(n, _)| n).find(|n| !self.contains(*n));
        }
        Ok(added)
    }

    /// Reparents in-tree graph neighbors of `v` that get cheaper through it
    /// and pushes the decrease down their subtrees.
    pub fn rewire(&mut self, graph: &RoutingGraph, v: NodeId) -> Rewired {
        let mut out = Rewired::default();
        let Some(base) = self.cost(v) else { return out };
        let parent = self.parent(v);
        for &(n, w) in graph.neighbors(v) {
            if Some(n) == parent {
                continue;
            }
            let Some(cur) = self.cost(n) else { continue };
            let c = base + w;
            if c >= cur {
                continue;
            }
            let old = self.slots[&n].parent.expect("only the root lacks a parent, and it has cost 0");
            let siblings = &mut self.slots.get_mut(&old).unwrap().children;
            siblings.retain(|&x| x != n);
            self.slots.get_mut(&v).unwrap().children.push(n);
            let slot = self.slots.get_mut(&n).unwrap();
            slot.parent = Some(v);
            slot.cost = c;
            out.reparented += 1;
            out.decreased.push(n);
            self.propagate(graph, n, &mut out.decreased);
        }
        out
    }

    fn propagate(&mut self, graph: &RoutingGraph, from: NodeId, decreased: &mut Vec<NodeId>) {
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            let cu = self.slots[&u].cost;
            let children = self.slots[&u].children.clone();
            for c in children {
                let w = graph.edge_weight(u, c).expect("tree edge in graph");
                self.slots.get_mut(&c).unwrap().cost = cu + w;
                decreased.push(c);
                stack.push(c);
            }
        }
    }

    /// Full invariant check: parent links reach the root, costs follow the
    /// recurrence, and the frontier is exactly the nodes with an outside
    /// neighbor.
    pub fn validate(&self, graph: &RoutingGraph) -> std::result::Result<(), String> {
        let root = self.slots.get(&self.root).ok_or("root missing")?;
        if root.parent.is_some() || root.cost != 0.0 {
            return Err("root has a parent or nonzero cost".into());
        }
        for (&v, slot) in &self.slots {
            let branch = self.branch(v).ok_or("broken branch")?;
            if branch.len() > self.slots.len() || *branch.last().unwrap() != self.root {
                return Err(format!("node {v} does not reach the root"));
            }
            if let Some(p) = slot.parent {
                let w = graph.edge_weight(p, v).ok_or_else(|| format!("tree edge {p}-{v} not in graph"))?;
                let expect = self.slots[&p].cost + w;
                if (expect - slot.cost).abs() > 1e-9 * expect.max(1.0) {
                    return Err(format!("cost of {v} is {}, recurrence gives {expect}", slot.cost));
                }
                if !self.slots[&p].children.contains(&v) {
                    return Err(format!("{v} missing from children of {p}"));
                }
            }
            let open = graph.neighbors(v).iter().filter(|(n, _)| !self.contains(*n)).count();
            if open != slot.open || (open > 0) != self.position.contains_key(&v) {
                return Err(format!("frontier bookkeeping wrong at {v}"));
            }
        }
        if self.position.len() != self.expandable.len()
            || self.expandable.iter().enumerate().any(|(i, v)| self.position.get(v) != Some(&i))
        {
            return Err("frontier index out of sync".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{grid_graph, random_geometric};
    use crate::graph::{dijkstra, GeoPoint, GraphBuilder};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Nodes along a parallel, `spacing` degrees of longitude apart.
    fn builder_line(n: usize, spacing: f64) -> (GraphBuilder, Vec<NodeId>) {
        let mut b = GraphBuilder::new();
        let ids = (0..n).map(|i| b.add_node(GeoPoint::new(0.0, i as f64 * spacing).unwrap())).collect();
        (b, ids)
    }

    #[test]
    fn path_graph_single_extend() {
        let (mut b, v) = builder_line(10, 0.001);
        for i in 0..9 {
            b.add_edge(v[i], v[i + 1], None).unwrap();
        }
        let g = b.build();
        let mut t = SearchTree::new(&g, v[0]).unwrap();
        let added = t.extend(&g, v[0], v[9]).unwrap();
        assert_eq!(added, v[1..].to_vec());
        assert!(t.is_saturated());
        t.validate(&g).unwrap();
    }

    #[test]
    fn dead_end_corridor_compressed() {
        // 0 - 1 - 2 with 0 also joined to 3 and 4
        let (mut b, v) = builder_line(5, 0.001);
        for (x, y) in [(0, 1), (1, 2), (0, 3), (0, 4)] {
            b.add_edge(v[x], v[y], None).unwrap();
        }
        let g = b.build();
        let mut t = SearchTree::new(&g, v[0]).unwrap();
        assert_eq!(t.extend(&g, v[0], v[2]).unwrap(), vec![v[1], v[2]]);
        t.validate(&g).unwrap();
    }

    #[test]
    fn intersection_stops_compression() {
        // center 0 of a grid; its neighbor toward v_rand is itself a 4-way node
        let g = grid_graph(5, 5, 0.001);
        let center = NodeId(12);
        let mut t = SearchTree::new(&g, NodeId(7)).unwrap();
        let added = t.extend(&g, NodeId(7), center).unwrap();
        assert_eq!(added, vec![center]);
        let mut t = SearchTree::new(&g, center).unwrap();
        assert_eq!(t.extend(&g, center, NodeId(0)).unwrap().len(), 1);
        t.validate(&g).unwrap();
    }

    #[test]
    fn nearest_expandable_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_geometric(30, 0.3, &mut rng);
        let mut t = SearchTree::new(&g, NodeId(0)).unwrap();
        for _ in 0..8 {
            let v_rand = NodeId(rng.random_range(0..30));
            let Some(anchor) = t.nearest_expandable(&g, v_rand) else { break };
            let scan = t
                .expandable()
                .iter()
                .copied()
                .min_by(|a, b| {
                    let da = haversine(g.point(*a), g.point(v_rand));
                    let db = haversine(g.point(*b), g.point(v_rand));
                    da.total_cmp(&db).then(a.cmp(b))
                })
                .unwrap();
            assert_eq!(anchor, scan);
            t.extend(&g, anchor, v_rand).unwrap();
        }
        let single = SearchTree::new(&g, NodeId(0)).unwrap();
        assert_eq!(single.nearest_expandable(&g, NodeId(5)), Some(NodeId(0)));
    }

    #[test]
    fn saturated_has_no_nearest() {
        let (mut b, v) = builder_line(2, 0.001);
        b.add_edge(v[0], v[1], None).unwrap();
        let g = b.build();
        let mut t = SearchTree::new(&g, v[0]).unwrap();
        t.extend(&g, v[0], v[1]).unwrap();
        assert_eq!(t.nearest_expandable(&g, v[0]), None);
    }

    #[test]
    fn parent_minimizes_cost_to_come() {
        // root r; a at cost 5, b at cost 4; x joined to a (1) and b (3)
        let (mut b, v) = builder_line(4, 0.001);
        let (r, a, bb, x) = (v[0], v[1], v[2], v[3]);
        b.add_edge(r, a, Some(5.0)).unwrap();
        b.add_edge(r, bb, Some(4.0)).unwrap();
        b.add_edge(a, x, Some(1.0)).unwrap();
        b.add_edge(bb, x, Some(3.0)).unwrap();
        let g = b.build();
        let mut t = SearchTree::new(&g, r).unwrap();
        t.extend(&g, r, a).unwrap();
        t.extend(&g, r, bb).unwrap();
        assert_eq!(t.choose_parent(&g, x).unwrap(), (a, 6.0));
        // single in-tree neighbor
        let t = SearchTree::new(&g, r).unwrap();
        assert_eq!(t.choose_parent(&g, a).unwrap(), (r, 5.0));
        assert!(t.choose_parent(&g, x).is_err());
    }

    #[test]
    fn triangle_rewire() {
        // r-a = 10 added first, then b with r-b = 2, b-a = 3 shortcuts a
        let (mut b, v) = builder_line(3, 0.001);
        let (r, a, c) = (v[0], v[1], v[2]);
        b.add_edge(r, a, Some(10.0)).unwrap();
        b.add_edge(r, c, Some(2.0)).unwrap();
        b.add_edge(c, a, Some(3.0)).unwrap();
        let g = b.build();
        let mut t = SearchTree::new(&g, r).unwrap();
        assert_eq!(t.extend(&g, r, a).unwrap(), vec![a]);
        // c has a and r in the tree, so it is a single-node extension
        assert_eq!(t.extend(&g, r, c).unwrap(), vec![c]);
        assert_eq!(t.rewire(&g, c).reparented, 1);
        assert_eq!(t.cost(a), Some(5.0));
        assert_eq!(t.parent(a), Some(c));
        assert_eq!(t.rewire(&g, c), Rewired::default());
        t.validate(&g).unwrap();
    }

    #[test]
    fn random_growth_keeps_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let g = random_geometric(120, 0.13, &mut rng);
            let mut t = SearchTree::new(&g, NodeId(0)).unwrap();
            for step in 0..400 {
                let v_rand = NodeId(rng.random_range(0..120));
                match t.nearest_expandable(&g, v_rand) {
                    Some(anchor) => {
                        for v in t.extend(&g, anchor, v_rand).unwrap() {
                            t.rewire(&g, v);
                        }
                    }
                    None => {
                        t.rewire(&g, v_rand);
                    }
                }
                if step % 50 == 0 {
                    t.validate(&g).unwrap();
                }
            }
            t.validate(&g).unwrap();
        }
    }

    #[test]
    fn costs_bounded_below_by_dijkstra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_geometric(200, 0.1, &mut rng);
        let exact = dijkstra(&g, NodeId(0)).unwrap();
        let mut t = SearchTree::new(&g, NodeId(0)).unwrap();
        for _ in 0..10_000 {
            let v_rand = NodeId(rng.random_range(0..200));
            match t.nearest_expandable(&g, v_rand) {
                Some(anchor) => {
                    for v in t.extend(&g, anchor, v_rand).unwrap() {
                        t.rewire(&g, v);
                    }
                }
                None => {
                    t.rewire(&g, v_rand);
                }
            }
        }
        t.validate(&g).unwrap();
        let mut equal = 0;
        for v in g.nodes() {
            let (c, d) = (t.cost(v).unwrap(), exact.cost(v).unwrap());
            assert!(c >= d - 1e-9);
            equal += ((c - d).abs() <= 1e-9 * d.max(1.0)) as usize;
        }
        println!("cost-to-come equals Dijkstra on {equal}/200 nodes");
        assert!(equal >= 190, "{equal}");
    }
}
