//! Single-pair reference planners: bidirectional A* and ANA*.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{HeapEntry, NodeId, RoutingGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult {
    pub node_path: Vec<NodeId>,
    pub cost: f64,
    /// Distinct node expansions, counted per direction for bidirectional
    /// search.
    pub explored_nodes: usize,
    pub wall_time: f64,
    /// `(seconds, cost)` per improvement; a single row for one-shot planners.
    pub trace: Vec<(f64, f64)>,
}

/// Haversine heuristic scaled to stay below every edge weight. The extra
/// factor absorbs rounding so consistency holds in floating point too.
fn heuristic(graph: &RoutingGraph, goal: NodeId) -> impl Fn(NodeId) -> f64 + '_ {
    let k = graph.heuristic_scale() * (1.0 - 1e-12);
    move |v| k * graph.distance(v, goal)
}

fn unwind(parent: &[Option<NodeId>], from: NodeId) -> Vec<NodeId> {
    let mut out = vec![from];
    let mut cur = from;
    while let Some(p) = parent[cur.index()] {
        out.push(p);
        cur = p;
    }
    out
}

struct Side {
    g: Vec<f64>,
    parent: Vec<Option<NodeId>>,
    closed: Vec<bool>,
    open: BinaryHeap<HeapEntry>,
    expanded: usize,
}

impl Side {
    fn new(n: usize, root: NodeId, h: f64) -> Self {
        let mut g = vec![f64::INFINITY; n];
        g[root.index()] = 0.0;
        Self {
            g,
            parent: vec![None; n],
            closed: vec![false; n],
            open: BinaryHeap::from([HeapEntry { cost: h, node: root }]),
            expanded: 0,
        }
    }

    /// Smallest live f-value, dropping stale entries.
    fn min_f(&mut self) -> f64 {
        while let Some(top) = self.open.peek() {
            if self.closed[top.node.index()] {
                self.open.pop();
            } else {
                return top.cost;
            }
        }
        f64::INFINITY
    }
}

/// Bidirectional A* with the haversine heuristic in both directions.
///
/// Stops once either frontier's smallest f-value reaches the best meeting
/// cost, which is exact for consistent heuristics.
pub fn bidirectional_astar(graph: &RoutingGraph, s: NodeId, t: NodeId) -> Result<BaselineResult> {
    graph.check(s)?;
    graph.check(t)?;
    let start = Instant::now();
    if s == t {
        return Ok(BaselineResult { node_path: vec![s], cost: 0.0, explored_nodes: 0, wall_time: 0.0, trace: vec![(0.0, 0.0)] });
    }
    let n = graph.node_count();
    let hf = heuristic(graph, t);
    let hb = heuristic(graph, s);
    let mut sides = [Side::new(n, s, hf(s)), Side::new(n, t, hb(t))];
    let mut mu = f64::INFINITY;
    let mut meet: Option<NodeId> = None;
    let mut turn = 0;
    loop {
        let (ff, fb) = (sides[0].min_f(), sides[1].min_f());
        if ff.max(fb) >= mu || (ff.is_infinite() && fb.is_infinite()) {
            break;
        }
        // alternate, unless one side is exhausted
        let d = if [ff, fb][turn].is_infinite() { 1 - turn } else { turn };
        turn = 1 - turn;
        let h = if d == 0 { &hf } else { &hb };
        let [a, b] = &mut sides;
        let (me, other) = if d == 0 { (a, b) } else { (b, a) };
        let HeapEntry { node: u, .. } = me.open.pop().expect("finite min_f");
        me.closed[u.index()] = true;
        me.expanded += 1;
        let gu = me.g[u.index()];
        for &(v, w) in graph.neighbors(u) {
            let gv = gu + w;
            if gv < me.g[v.index()] {
                me.g[v.index()] = gv;
                me.parent[v.index()] = Some(u);
                me.closed[v.index()] = false;
                me.open.push(HeapEntry { cost: gv + h(v), node: v });
            }
            let through = me.g[v.index()] + other.g[v.index()];
            if through < mu {
                mu = through;
                meet = Some(v);
            }
        }
    }
    let explored = sides[0].expanded + sides[1].expanded;
    let Some(m) = meet else { return Err(Error::NoPath { explored }) };
    let mut path = unwind(&sides[0].parent, m);
    path.reverse();
    path.extend(unwind(&sides[1].parent, m).into_iter().skip(1));
    let cost = graph.path_cost(&path).ok_or_else(|| Error::Internal("bidirectional path broken".into()))?;
    let wall = start.elapsed().as_secs_f64();
    Ok(BaselineResult { node_path: path, cost, explored_nodes: explored, wall_time: wall, trace: vec![(wall, cost)] })
}

/// Max-heap entry for ANA*: larger key first, then smaller node.
#[derive(Debug, Clone, Copy)]
struct KeyEntry {
    key: f64,
    g: f64,
    node: NodeId,
}

impl PartialEq for KeyEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for KeyEntry {}

impl PartialOrd for KeyEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KeyEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key).then_with(|| other.node.cmp(&self.node))
    }
}

/// `(G - g) / h`; before the first solution (`G` infinite) this degenerates
/// to greedy best-first on `h`.
fn ana_key(big_g: f64, g: f64, h: f64) -> f64 {
    if big_g.is_infinite() {
        -h
    } else if h == 0.0 {
        f64::INFINITY
    } else {
        (big_g - g) / h
    }
}

/// Anytime nonparametric A*.
///
/// Repeatedly expands the open node maximizing `(G - g) / h` until the goal
/// is reached, tightens `G` to the new solution cost, prunes and repeats. The
/// last solution is optimal once the open list runs dry.
pub fn anastar(graph: &RoutingGraph, s: NodeId, t: NodeId, budget_secs: f64) -> Result<BaselineResult> {
    graph.check(s)?;
    graph.check(t)?;
    let start = Instant::now();
    let n = graph.node_count();
    let h = heuristic(graph, t);
    let mut g = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut expanded = vec![false; n];
    let mut explored = 0;
    let mut big_g = f64::INFINITY;
    let mut best_path: Option<Vec<NodeId>> = None;
    let mut trace = Vec::new();
    g[s.index()] = 0.0;
    let mut open = BinaryHeap::from([KeyEntry { key: ana_key(big_g, 0.0, h(s)), g: 0.0, node: s }]);

    'outer: while !open.is_empty() {
        while let Some(KeyEntry { g: ge, node: u, .. }) = open.pop() {
            if ge != g[u.index()] {
                continue;
            }
            if start.elapsed().as_secs_f64() >= budget_secs {
                break 'outer;
            }
            if !expanded[u.index()] {
                expanded[u.index()] = true;
                explored += 1;
            }
            if u == t {
                let mut path = unwind(&parent, t);
                path.reverse();
                // parents may have improved since g[t] was set, so the
                // unwound path can be cheaper than g[t]; G tracks the path
                let cost = graph.path_cost(&path).expect("tree path");
                big_g = cost.min(g[u.index()]);
                trace.push((start.elapsed().as_secs_f64(), cost));
                best_path = Some(path);
                break;
            }
            for &(v, w) in graph.neighbors(u) {
                let gv = g[u.index()] + w;
                if gv < g[v.index()] {
                    g[v.index()] = gv;
                    parent[v.index()] = Some(u);
                    if gv + h(v) < big_g {
                        open.push(KeyEntry { key: ana_key(big_g, gv, h(v)), g: gv, node: v });
                    }
                }
            }
        }
        // re-key under the new G and prune what cannot beat it
        open = open
            .into_iter()
            .filter(|e| e.g == g[e.node.index()] && e.g + h(e.node) < big_g)
            .map(|e| KeyEntry { key: ana_key(big_g, e.g, h(e.node)), ..e })
            .collect();
    }

    let Some(path) = best_path else {
        return Err(Error::NoPathYet { explored });
    };
    let cost = trace.last().expect("solution recorded").1;
    Ok(BaselineResult {
        node_path: path,
        cost,
        explored_nodes: explored,
        wall_time: start.elapsed().as_secs_f64(),
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    BidirectionalAstar,
    AnaStar,
}

/// Runs a baseline on every consecutive pair of `stops` and concatenates the
/// legs. The trace holds one row for the combined route.
pub fn solve_legs(graph: &RoutingGraph, stops: &[NodeId], algo: Baseline, budget_secs: f64) -> Result<BaselineResult> {
    let start = Instant::now();
    let mut path = vec![*stops.first().ok_or_else(|| Error::Config("no stops".into()))?];
    let mut explored = 0;
    for w in stops.windows(2) {
        let remaining = budget_secs - start.elapsed().as_secs_f64();
        let leg = match algo {
            Baseline::BidirectionalAstar => bidirectional_astar(graph, w[0], w[1])?,
            Baseline::AnaStar => anastar(graph, w[0], w[1], remaining.max(0.0))?,
        };
        explored += leg.explored_nodes;
        path.extend_from_slice(&leg.node_path[1..]);
    }
    let cost = graph.path_cost(&path).ok_or_else(|| Error::Internal("legs do not join".into()))?;
    let wall = start.elapsed().as_secs_f64();
    Ok(BaselineResult { node_path: path, cost, explored_nodes: explored, wall_time: wall, trace: vec![(wall, cost)] })
}
