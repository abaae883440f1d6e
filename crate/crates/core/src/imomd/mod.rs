//! Multi-directional sampling planner.
//!
//! One [`SearchTree`] grows from every destination. Nodes reached by two
//! trees are connection nodes; the cheapest one per pair gives the entry of
//! the [`DistanceMatrix`]. Once the required destinations are connected, the
//! matrix is handed to [`crate::rtsp::solve`] and every cheaper visit order
//! is stitched into a node path and emitted.

mod tree;

use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::destinations::DestinationSet;
use crate::error::{Error, Result};
use crate::graph::{dijkstra, DisjointSet, NodeId, RoutingGraph};
use crate::rtsp::{self, DestGraph, GaConfig, VisitSequence};

pub use tree::{Rewired, SearchTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeSelection {
    RoundRobin,
    UniformRandom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    /// Probability of sampling a destination node instead of any node.
    pub goal_bias: f64,
    pub rng_seed: u64,
    /// Wall-clock budget in seconds.
    pub time_budget: f64,
    pub max_iterations: u64,
    pub tree_selection: TreeSelection,
    /// Visit-order solver settings used on every re-solve.
    pub ga: GaConfig,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            goal_bias: 0.2,
            rng_seed: 0,
            time_budget: 10.0,
            max_iterations: u64::MAX,
            tree_selection: TreeSelection::RoundRobin,
            ga: GaConfig { mutation_count: 300, crossover_count: 300, generations: 5, ..GaConfig::default() },
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.goal_bias) {
            return Err(Error::Config(format!("goal bias {} outside [0, 1]", self.goal_bias)));
        }
        if !(self.time_budget > 0.0) {
            return Err(Error::Config("time budget must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        self.ga.validate()
    }
}

/// Draws the next sample: a destination node with probability `goal_bias`,
/// otherwise any graph node, both uniformly.
pub fn sample<R: Rng + ?Sized>(cfg: &PlannerConfig, graph: &RoutingGraph, dests: &DestinationSet, rng: &mut R) -> NodeId {
    if rng.random_bool(cfg.goal_bias) {
        dests.node(rng.random_range(0..dests.len()))
    } else {
        NodeId::from(rng.random_range(0..graph.node_count()))
    }
}

/// Best known path cost between every pair of destinations, with the
/// connection nodes that realize it.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    a: Vec<f64>,
    best: Vec<Option<NodeId>>,
    members: Vec<Vec<NodeId>>,
}

impl DistanceMatrix {
    pub fn new(n: usize) -> Self {
        let mut a = vec![f64::INFINITY; n * n];
        for i in 0..n {
            a[i * n + i] = 0.0;
        }
        Self { n, a, best: vec![None; n * n], members: vec![Vec::new(); n * n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.a[i * self.n + k]
    }

    /// Cheapest connection node of the pair.
    pub fn connection(&self, i: usize, k: usize) -> Option<NodeId> {
        self.best[i * self.n + k]
    }

    /// Every node shared by the two trees, in discovery order.
    pub fn members(&self, i: usize, k: usize) -> &[NodeId] {
        let (lo, hi) = (i.min(k), i.max(k));
        &self.members[lo * self.n + hi]
    }

    fn add_member(&mut self, i: usize, k: usize, v: NodeId) {
        let (lo, hi) = (i.min(k), i.max(k));
        self.members[lo * self.n + hi].push(v);
    }

    /// Records `v` as a connection of cost `cost`; true if it beat the entry.
    fn offer(&mut self, i: usize, k: usize, v: NodeId, cost: f64) -> bool {
        if cost >= self.get(i, k) {
            return false;
        }
        for (x, y) in [(i, k), (k, i)] {
            self.a[x * self.n + y] = cost;
            self.best[x * self.n + y] = Some(v);
        }
        true
    }

    pub fn to_dest_graph(&self, dests: &DestinationSet) -> Result<DestGraph> {
        DestGraph::new(self.a.clone(), dests.source_index(), dests.target_index(), dests.required_flags())
    }
}

/// Registers `v` (just added to, or made cheaper in, tree `owner`) with every
/// other tree holding it. Returns the pairs whose entry improved.
pub fn update_connections(
    trees: &[SearchTree],
    matrix: &mut DistanceMatrix,
    v: NodeId,
    owner: usize,
    newly_added: bool,
) -> Vec<(usize, usize)> {
    let Some(own) = trees[owner].cost(v) else { return Vec::new() };
    let mut improved = Vec::new();
    for (k, other) in trees.iter().enumerate() {
        if k == owner {
            continue;
        }
        let Some(theirs) = other.cost(v) else { continue };
        if newly_added {
            matrix.add_member(owner, k, v);
        }
        if matrix.offer(owner, k, v, own + theirs) {
            improved.push((owner.min(k), owner.max(k)));
        }
    }
    improved
}

/// True when the finite entries connect every required destination.
pub fn destinations_connected(matrix: &DistanceMatrix, required: &[bool]) -> bool {
    let n = matrix.len();
    let mut ds = DisjointSet::new(n);
    for i in 0..n {
        for k in i + 1..n {
            if matrix.get(i, k).is_finite() {
                ds.union(i, k).expect("in range");
            }
        }
    }
    let mut req = (0..n).filter(|&i| required[i]);
    let Some(first) = req.next() else { return true };
    req.all(|i| ds.same(first, i).expect("in range"))
}

/// Destination graph of exact shortest-path distances, the reference the
/// planner's matrix converges to. Unreachable pairs are infinite.
pub fn exact_dest_graph(graph: &RoutingGraph, dests: &DestinationSet) -> Result<DestGraph> {
    let n = dests.len();
    let mut theta = vec![f64::INFINITY; n * n];
    for i in 0..n {
        let sp = dijkstra(graph, dests.node(i))?;
        for k in 0..n {
            if let Some(c) = sp.cost(dests.node(k)) {
                theta[i * n + k] = c;
            }
        }
    }
    // the two directions can differ in the last bits
    for i in 0..n {
        for k in i + 1..n {
            let c = theta[i * n + k].min(theta[k * n + i]);
            theta[i * n + k] = c;
            theta[k * n + i] = c;
        }
    }
    DestGraph::new(theta, dests.source_index(), dests.target_index(), dests.required_flags())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnytimeSolution {
    pub node_path: Vec<NodeId>,
    pub visit_order: VisitSequence,
    pub total_cost: f64,
    /// Seconds since the start of the run.
    pub wall_time: f64,
    pub iteration: u64,
    pub explored_nodes: usize,
}

/// Checks an emitted path: endpoints, adjacency, cost and coverage of every
/// required destination.
pub fn validate_path(
    graph: &RoutingGraph,
    dests: &DestinationSet,
    path: &[NodeId],
    total_cost: f64,
) -> std::result::Result<(), String> {
    if path.first() != Some(&dests.source_node()) || path.last() != Some(&dests.target_node()) {
        return Err("path does not run from source to target".into());
    }
    let cost = graph.path_cost(path).ok_or("consecutive path nodes are not adjacent")?;
    if !rtsp::close(cost, total_cost) {
        return Err(format!("reported cost {total_cost} but edges sum to {cost}"));
    }
    for d in dests.iter().filter(|d| d.is_required()) {
        if !path.contains(&d.node) {
            return Err(format!("required destination at node {} not visited", d.node));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct PlanReport {
    /// Every emitted solution, strictly improving.
    pub solutions: Vec<AnytimeSolution>,
    pub iterations: u64,
    pub explored_nodes: usize,
    pub wall_time: f64,
    pub matrix: DistanceMatrix,
}

impl PlanReport {
    pub fn best(&self) -> Option<&AnytimeSolution> {
        self.solutions.last()
    }

    /// The final solution, or [`Error::NoPathYet`] if none was found.
    pub fn into_result(mut self) -> Result<AnytimeSolution> {
        self.solutions.pop().ok_or(Error::NoPathYet { explored: self.explored_nodes })
    }
}

/// Planner state, advanced one iteration at a time by [`Planner::step`].
pub struct Planner<'g> {
    graph: &'g RoutingGraph,
    dests: DestinationSet,
    cfg: PlannerConfig,
    trees: Vec<SearchTree>,
    matrix: DistanceMatrix,
    rng: ChaCha8Rng,
    cursor: usize,
    iteration: u64,
    explored: usize,
    best: Option<AnytimeSolution>,
    start: Instant,
}

impl<'g> Planner<'g> {
    pub fn new(graph: &'g RoutingGraph, dests: &DestinationSet, cfg: &PlannerConfig) -> Result<Self> {
        cfg.validate()?;
        dests.validate_against(graph)?;
        let trees = dests
            .iter()
            .map(|d| SearchTree::new(graph, d.node))
            .collect::<Result<Vec<_>>>()?;
        let explored = trees.len();
        Ok(Self {
            graph,
            dests: dests.clone(),
            cfg: cfg.clone(),
            matrix: DistanceMatrix::new(trees.len()),
            trees,
            rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
            cursor: 0,
            iteration: 0,
            explored,
            best: None,
            start: Instant::now(),
        })
    }

    pub fn trees(&self) -> &[SearchTree] {
        &self.trees
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.matrix
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Distinct (tree, node) insertions so far.
    pub fn explored_nodes(&self) -> usize {
        self.explored
    }

    pub fn best(&self) -> Option<&AnytimeSolution> {
        self.best.as_ref()
    }

    /// An optional pseudo destination whose tree filled its component without
    /// meeting anyone cannot contribute anymore.
    fn dormant(&self, i: usize) -> bool {
        !self.dests.get(i).is_required()
            && self.trees[i].is_saturated()
            && (0..self.trees.len()).all(|k| k == i || !self.matrix.get(i, k).is_finite())
    }

    fn select_tree(&mut self) -> usize {
        let n = self.trees.len();
        match self.cfg.tree_selection {
            TreeSelection::RoundRobin => {
                for _ in 0..n {
                    let i = self.cursor;
                    self.cursor = (self.cursor + 1) % n;
                    if !self.dormant(i) {
                        return i;
                    }
                }
                self.dests.source_index()
            }
            TreeSelection::UniformRandom => {
                let live: Vec<usize> = (0..n).filter(|&i| !self.dormant(i)).collect();
                *live.choose(&mut self.rng).expect("required trees never go dormant")
            }
        }
    }

    /// One grow-rewire-connect iteration. Returns the new solution if this
    /// iteration produced one.
    pub fn step(&mut self) -> Result<Option<&AnytimeSolution>> {
        let i = self.select_tree();
        let v_rand = sample(&self.cfg, self.graph, &self.dests, &mut self.rng);
        let tree = &mut self.trees[i];
        let mut touched = Vec::new();
        match tree.nearest_expandable(self.graph, v_rand) {
            Some(anchor) => {
                let added = tree.extend(self.graph, anchor, v_rand)?;
                self.explored += added.len();
                for v in added {
                    touched.push((v, true));
                    touched.extend(tree.rewire(self.graph, v).decreased.into_iter().map(|d| (d, false)));
                }
            }
            // A saturated tree keeps refining its costs around the samples.
            None => {
                touched.extend(tree.rewire(self.graph, v_rand).decreased.into_iter().map(|d| (d, false)));
            }
        }
        let mut improved = false;
        for (v, new) in touched {
            improved |= !update_connections(&self.trees, &mut self.matrix, v, i, new).is_empty();
        }
        self.iteration += 1;
        if improved && destinations_connected(&self.matrix, &self.dests.required_flags()) {
            return self.try_emit();
        }
        Ok(None)
    }

    fn try_emit(&mut self) -> Result<Option<&AnytimeSolution>> {
        let dg = self.matrix.to_dest_graph(&self.dests)?;
        let mut cand = match rtsp::solve(&dg, &self.cfg.ga) {
            Ok(seq) => seq,
            Err(Error::NoSequence | Error::NoInsertion { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        if let Some(prev) = self.best.as_ref().and_then(|b| b.visit_order.recost(&dg)) {
            if prev.total_cost() < cand.total_cost() {
                cand = prev;
            }
        }
        if self.best.as_ref().is_some_and(|b| cand.total_cost() >= b.total_cost) {
            return Ok(None);
        }
        let node_path = self.stitch(cand.order())?;
        let total_cost = self
            .graph
            .path_cost(&node_path)
            .ok_or_else(|| Error::Internal("stitched path is not connected".into()))?;
        if self.best.as_ref().is_some_and(|b| total_cost >= b.total_cost) {
            return Ok(None);
        }
        self.best = Some(AnytimeSolution {
            node_path,
            visit_order: cand,
            total_cost,
            wall_time: self.start.elapsed().as_secs_f64(),
            iteration: self.iteration,
            explored_nodes: self.explored,
        });
        Ok(self.best.as_ref())
    }

    /// Node path through the trees for a destination visit order.
    pub fn stitch(&self, order: &[usize]) -> Result<Vec<NodeId>> {
        let mut path = vec![self.dests.node(order[0])];
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == b {
                continue;
            }
            let c = self
                .matrix
                .connection(a, b)
                .ok_or_else(|| Error::Internal(format!("destinations {a} and {b} are not connected")))?;
            let mut left = self.trees[a].branch(c).expect("connection node in tree");
            left.reverse();
            let right = self.trees[b].branch(c).expect("connection node in tree");
            // left starts at the junction already on the path, right repeats c
            path.extend_from_slice(&left[1..]);
            path.extend_from_slice(&right[1..]);
        }
        Ok(path)
    }

    pub fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    pub fn finish(self, solutions: Vec<AnytimeSolution>) -> PlanReport {
        PlanReport {
            solutions,
            iterations: self.iteration,
            explored_nodes: self.explored,
            wall_time: self.start.elapsed().as_secs_f64(),
            matrix: self.matrix,
        }
    }
}

/// Runs the planner until the time budget or iteration cap, calling
/// `on_solution` for every improvement.
pub fn plan(
    graph: &RoutingGraph,
    dests: &DestinationSet,
    cfg: &PlannerConfig,
    mut on_solution: impl FnMut(&AnytimeSolution),
) -> Result<PlanReport> {
    let mut planner = Planner::new(graph, dests, cfg)?;
    let mut solutions = Vec::new();
    while planner.iteration() < cfg.max_iterations && planner.elapsed() < cfg.time_budget {
        if let Some(sol) = planner.step()? {
            on_solution(sol);
            solutions.push(sol.clone());
        }
    }
    Ok(planner.finish(solutions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_geometric, random_scenario, BugTrapSpec};
    use crate::graph::{GeoPoint, GraphBuilder};
    use crate::ingest::{resolve_scenario, IdMap};
    use rand::SeedableRng;

    fn line_points(b: &mut GraphBuilder, n: usize) -> Vec<NodeId> {
        (0..n).map(|i| b.add_node(GeoPoint::new(0.0, i as f64 * 0.001).unwrap())).collect()
    }

    /// Source, objective and target with theta(s, o) = 2, theta(s, t) = 3
    /// and theta(o, t) = 10.
    fn revisit_triangle() -> (RoutingGraph, DestinationSet) {
        let mut b = GraphBuilder::new();
        let v = line_points(&mut b, 3);
        let (s, o, t) = (v[0], v[1], v[2]);
        b.add_edge(s, o, Some(2.0)).unwrap();
        b.add_edge(s, t, Some(3.0)).unwrap();
        b.add_edge(o, t, Some(10.0)).unwrap();
        (b.build(), DestinationSet::new(s, t, &[o]).unwrap())
    }

    fn quick(seed: u64, iterations: u64) -> PlannerConfig {
        PlannerConfig { rng_seed: seed, max_iterations: iterations, ..PlannerConfig::default() }
    }

    #[test]
    fn config_ranges() {
        assert!(PlannerConfig { goal_bias: 1.5, ..Default::default() }.validate().is_err());
        assert!(PlannerConfig { time_budget: 0.0, ..Default::default() }.validate().is_err());
        assert!(PlannerConfig::default().validate().is_ok());
    }

    #[test]
    fn full_goal_bias_samples_destinations() {
        let (g, d) = revisit_triangle();
        let cfg = PlannerConfig { goal_bias: 1.0, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            assert!(d.index_of(sample(&cfg, &g, &d, &mut rng)).is_some());
        }
    }

    #[test]
    fn unbiased_sampling_is_uniform() {
        let g = random_geometric(50, 0.2, &mut ChaCha8Rng::seed_from_u64(1));
        let d = DestinationSet::new(NodeId(0), NodeId(1), &[]).unwrap();
        let cfg = PlannerConfig { goal_bias: 0.0, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut counts = [0f64; 50];
        let draws = 100_000;
        for _ in 0..draws {
            counts[sample(&cfg, &g, &d, &mut rng).index()] += 1.0;
        }
        let e = draws as f64 / 50.0;
        let chi2: f64 = counts.iter().map(|c| (c - e).powi(2) / e).sum();
        // 99.9th percentile of chi-square with 49 degrees of freedom
        assert!(chi2 < 85.35, "{chi2}");
    }

    #[test]
    fn seeded_samples_repeat() {
        let (g, d) = revisit_triangle();
        let cfg = PlannerConfig::default();
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            (0..100).map(|_| sample(&cfg, &g, &d, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn connectivity_over_matrix() {
        let mut m = DistanceMatrix::new(2);
        assert!(!destinations_connected(&m, &[true, true]));
        m.offer(0, 1, NodeId(0), 4.0);
        assert!(destinations_connected(&m, &[true, true]));

        let mut m = DistanceMatrix::new(4);
        m.offer(0, 1, NodeId(0), 1.0);
        m.offer(1, 3, NodeId(0), 1.0);
        // 2 isolated
        assert!(!destinations_connected(&m, &[true, true, true, true]));
        assert!(destinations_connected(&m, &[true, true, false, true]));
    }

    #[test]
    fn connectivity_matches_bfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.random_range(2..9);
            let mut m = DistanceMatrix::new(n);
            for i in 0..n {
                for k in i + 1..n {
                    if rng.random_bool(0.25) {
                        m.offer(i, k, NodeId(0), 1.0);
                    }
                }
            }
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if !seen[v] && m.get(u, v).is_finite() {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            assert_eq!(destinations_connected(&m, &vec![true; n]), seen.iter().all(|&x| x));
        }
    }

    #[test]
    fn single_tree_membership_changes_nothing() {
        let (g, _) = revisit_triangle();
        let mut t0 = SearchTree::new(&g, NodeId(0)).unwrap();
        let t2 = SearchTree::new(&g, NodeId(2)).unwrap();
        let mut m = DistanceMatrix::new(2);
        let added = t0.extend(&g, NodeId(0), NodeId(1)).unwrap();
        assert_eq!(added, vec![NodeId(1)]);
        let trees = [t0, t2];
        assert!(update_connections(&trees, &mut m, NodeId(1), 0, true).is_empty());
        assert_eq!(m.get(0, 1), f64::INFINITY);
    }

    #[test]
    fn first_shared_node_makes_entry_finite() {
        let (g, _) = revisit_triangle();
        let mut t0 = SearchTree::new(&g, NodeId(0)).unwrap();
        let t2 = SearchTree::new(&g, NodeId(2)).unwrap();
        t0.extend(&g, NodeId(0), NodeId(2)).unwrap();
        let trees = [t0, t2];
        let mut m = DistanceMatrix::new(2);
        assert_eq!(update_connections(&trees, &mut m, NodeId(2), 0, true), vec![(0, 1)]);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.connection(0, 1), Some(NodeId(2)));
        assert_eq!(m.members(1, 0), &[NodeId(2)]);
    }

    #[test]
    fn one_edge_apart() {
        let mut b = GraphBuilder::new();
        let v = line_points(&mut b, 2);
        b.add_edge(v[0], v[1], None).unwrap();
        let g = b.build();
        let d = DestinationSet::new(v[0], v[1], &[]).unwrap();
        let report = plan(&g, &d, &quick(0, 50), |_| {}).unwrap();
        let first = &report.solutions[0];
        assert_eq!(first.node_path, v);
        assert_eq!(first.total_cost, g.edge_weight(v[0], v[1]).unwrap());
    }

    #[test]
    fn triangle_plan_revisits_source() {
        let (g, d) = revisit_triangle();
        let report = plan(&g, &d, &quick(1, 200), |_| {}).unwrap();
        let best = report.best().unwrap();
        assert_eq!(best.total_cost, 7.0);
        assert_eq!(best.node_path, vec![NodeId(0), NodeId(1), NodeId(0), NodeId(2)]);
    }

    #[test]
    fn no_path_yet_when_disconnected() {
        let mut b = GraphBuilder::new();
        let v = line_points(&mut b, 4);
        b.add_edge(v[0], v[1], None).unwrap();
        b.add_edge(v[2], v[3], None).unwrap();
        let g = b.build();
        let d = DestinationSet::new(v[0], v[3], &[]).unwrap();
        let report = plan(&g, &d, &quick(0, 100), |_| {}).unwrap();
        assert_eq!(report.explored_nodes, 4);
        assert_eq!(report.into_result(), Err(Error::NoPathYet { explored: 4 }));
    }

    fn random_case(seed: u64, objectives: usize) -> (RoutingGraph, DestinationSet) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_geometric(200, 0.1, &mut rng);
        let spec = random_scenario(&g, objectives, &mut rng).unwrap();
        let d = resolve_scenario(&spec, &IdMap::identity(g.node_count())).unwrap();
        (g, d)
    }

    #[test]
    fn emissions_valid_and_improving() {
        for seed in 0..5 {
            let (g, d) = random_case(seed, 5);
            let mut seen = Vec::new();
            let report = plan(&g, &d, &quick(seed, 3000), |s| seen.push(s.total_cost)).unwrap();
            assert!(!report.solutions.is_empty());
            assert_eq!(seen.len(), report.solutions.len());
            for s in &report.solutions {
                validate_path(&g, &d, &s.node_path, s.total_cost).unwrap();
                assert!(rtsp::close(s.total_cost, s.visit_order.total_cost()));
            }
            assert!(report.solutions.windows(2).all(|w| w[1].total_cost < w[0].total_cost));
        }
    }

    #[test]
    fn matrix_dominates_dijkstra_and_never_grows() {
        let (g, d) = random_case(11, 4);
        let exact: Vec<_> = d.iter().map(|x| dijkstra(&g, x.node).unwrap()).collect();
        let mut p = Planner::new(&g, &d, &quick(11, u64::MAX)).unwrap();
        let mut prev = p.matrix().clone();
        for it in 0..4000 {
            p.step().unwrap();
            let m = p.matrix();
            for i in 0..d.len() {
                for k in 0..d.len() {
                    assert!(m.get(i, k) <= prev.get(i, k));
                    if let Some(c) = m.connection(i, k) {
                        let sum = p.trees()[i].cost(c).unwrap() + p.trees()[k].cost(c).unwrap();
                        assert!(rtsp::close(sum, m.get(i, k)));
                    }
                    assert!(m.get(i, k) >= exact[i].cost(d.node(k)).unwrap() - 1e-9);
                }
            }
            if it % 500 == 0 {
                for t in p.trees() {
                    t.validate(&g).unwrap();
                }
                // cached best equals a fresh scan of the members
                for i in 0..d.len() {
                    for k in i + 1..d.len() {
                        let scan = m
                            .members(i, k)
                            .iter()
                            .map(|&c| p.trees()[i].cost(c).unwrap() + p.trees()[k].cost(c).unwrap())
                            .fold(f64::INFINITY, f64::min);
                        assert_eq!(scan, m.get(i, k));
                    }
                }
            }
            prev = m.clone();
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let (g, d) = random_case(12, 5);
        let strip = |r: PlanReport| {
            r.solutions
                .into_iter()
                .map(|s| (s.node_path, s.visit_order, s.total_cost.to_bits(), s.iteration, s.explored_nodes))
                .collect::<Vec<_>>()
        };
        let a = strip(plan(&g, &d, &quick(12, 2000), |_| {}).unwrap());
        let b = strip(plan(&g, &d, &quick(12, 2000), |_| {}).unwrap());
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_tree_selection_works() {
        let (g, d) = random_case(13, 3);
        let cfg = PlannerConfig { tree_selection: TreeSelection::UniformRandom, ..quick(13, 3000) };
        let r = plan(&g, &d, &cfg, |_| {}).unwrap();
        let best = r.best().unwrap();
        validate_path(&g, &d, &best.node_path, best.total_cost).unwrap();
    }

    #[test]
    fn must_visit_pseudo_on_path() {
        let (g, d) = random_case(14, 2);
        let spare = g.nodes().find(|&v| d.index_of(v).is_none()).unwrap();
        let d = d.add_pseudo_destinations(&[(spare, true)]).unwrap();
        let r = plan(&g, &d, &quick(14, 3000), |_| {}).unwrap();
        assert!(r.best().unwrap().node_path.contains(&spare));
    }

    #[test]
    fn unreachable_pseudo_is_ignored() {
        // an isolated pseudo node beside a 3-node line
        let mut b = GraphBuilder::new();
        let v = line_points(&mut b, 4);
        b.add_edge(v[0], v[1], None).unwrap();
        b.add_edge(v[1], v[2], None).unwrap();
        let g = b.build();
        let d = DestinationSet::new(v[0], v[2], &[]).unwrap().add_pseudo_destinations(&[(v[3], false)]).unwrap();
        let r = plan(&g, &d, &quick(0, 200), |_| {}).unwrap();
        let best = r.best().unwrap();
        assert_eq!(best.node_path, v[..3].to_vec());
    }

    #[test]
    fn bridge_pseudo_helps() {
        let trap = BugTrapSpec { chamber: 30, corridor: 5, entry_width: 1, water_gap: false }.generate().unwrap();
        let ids = IdMap::identity(trap.graph.node_count());
        let first = |with: bool| {
            let d = resolve_scenario(&trap.scenario(with), &ids).unwrap();
            let r = plan(&trap.graph, &d, &quick(5, 50_000), |_| {}).unwrap();
            r.solutions[0].iteration
        };
        let (informed, plain) = (first(true), first(false));
        println!("first solution at iteration {informed} with the pseudo, {plain} without");
        assert!(informed < plain);
    }
}
