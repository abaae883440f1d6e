use super::insertion::{apply_insertion, best_insertion, InsertionPlan};
use super::{DestGraph, VisitSequence};
use crate::error::{Error, Result};

/// Dense O(n^2) Dijkstra over the destination graph.
pub(crate) fn dest_dijkstra(dg: &DestGraph, from: usize) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = dg.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![None; n];
    let mut done = vec![false; n];
    dist[from] = 0.0;
    for _ in 0..n {
        let mut u = None;
        for v in 0..n {
            if !done[v] && dist[v].is_finite() && u.is_none_or(|u: usize| dist[v] < dist[u]) {
                u = Some(v);
            }
        }
        let Some(u) = u else { break };
        done[u] = true;
        for v in 0..n {
            let w = dg.theta(u, v);
            if v != u && w.is_finite() && dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                prev[v] = Some(u);
            }
        }
    }
    (dist, prev)
}

pub(crate) fn dest_path(prev: &[Option<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur].expect("reachable");
        path.push(cur);
    }
    path.reverse();
    path
}

/// Shortest source-to-target route over the destination graph; any
/// destination on it counts as visited.
pub fn initial_sequence(dg: &DestGraph) -> Result<VisitSequence> {
    let (dist, prev) = dest_dijkstra(dg, dg.source());
    let all_reached = (0..dg.len()).all(|d| !dg.is_required(d) || dist[d].is_finite());
    if !all_reached {
        return Err(Error::NoSequence);
    }
    let order = dest_path(&prev, dg.source(), dg.target());
    VisitSequence::new(dg, order).ok_or(Error::NoSequence)
}

/// Enhanced cheapest insertion from the [`initial_sequence`], followed by
/// [`refine`].
pub fn eci(dg: &DestGraph) -> Result<VisitSequence> {
    eci_from(dg, initial_sequence(dg)?)
}

pub(crate) fn eci_from(dg: &DestGraph, seed: VisitSequence) -> Result<VisitSequence> {
    let mut seq = seed;
    loop {
        let missing: Vec<usize> = (0..dg.len())
            .filter(|&d| dg.is_required(d) && !seq.contains(d))
            .collect();
        if missing.is_empty() {
            break;
        }
        let plan = cheapest(dg, &seq, missing.iter().copied()).or_else(|| {
            // Every missing destination is cut off from the sequence by
            // optional ones; pull in the cheapest reachable optional one.
            let optional = (0..dg.len()).filter(|&d| !dg.is_required(d) && !seq.contains(d));
            cheapest(dg, &seq, optional)
        });
        let Some(plan) = plan else {
            return Err(Error::NoInsertion { destination: missing[0] });
        };
        let order = apply_insertion(seq.order(), &plan);
        seq = VisitSequence::new(dg, order).ok_or_else(|| Error::Internal("insertion used a missing edge".into()))?;
    }
    Ok(refine(&seq, dg))
}

fn cheapest(dg: &DestGraph, seq: &VisitSequence, candidates: impl Iterator<Item = usize>) -> Option<InsertionPlan> {
    let mut best: Option<InsertionPlan> = None;
    for d in candidates {
        if let Ok(plan) = best_insertion(dg, seq, d) {
            if best.is_none_or(|b| plan.delta_cost < b.delta_cost) {
                best = Some(plan);
            }
        }
    }
    best
}

/// Drops interior entries whose neighbors connect directly, as long as the
/// total cost does not grow and no required destination loses its last
/// occurrence. Runs to a fixpoint.
pub fn refine(seq: &VisitSequence, dg: &DestGraph) -> VisitSequence {
    let mut order = seq.order().to_vec();
    let mut counts = vec![0usize; dg.len()];
    for &d in &order {
        counts[d] += 1;
    }
    loop {
        let mut changed = false;
        let mut i = 1;
        while i + 1 < order.len() {
            let (prev, cur, next) = (order[i - 1], order[i], order[i + 1]);
            let bypass = dg.theta(prev, next);
            let keep_needed = dg.is_required(cur) && counts[cur] == 1;
            if !keep_needed && bypass.is_finite() && bypass <= dg.theta(prev, cur) + dg.theta(cur, next) {
                order.remove(i);
                counts[cur] -= 1;
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    VisitSequence::new(dg, order).expect("refinement keeps every hop finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rtsp::fixtures::*;
    use crate::rtsp::{close, instances};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seed_two_destinations() {
        let dg = DestGraph::from_matrix(&[vec![0.0, 5.0], vec![5.0, 0.0]], 0, 1).unwrap();
        let s = initial_sequence(&dg).unwrap();
        assert_eq!(s.order(), &[0, 1]);
        assert_eq!(s.total_cost(), 5.0);
    }

    #[test]
    fn seed_star_routes_through_center() {
        // center 1; source 0, target 2, leaf 3
        let dg = DestGraph::from_matrix(
            &[
                vec![0.0, 1.0, INF, INF],
                vec![1.0, 0.0, 1.0, 1.0],
                vec![INF, 1.0, 0.0, INF],
                vec![INF, 1.0, INF, 0.0],
            ],
            0,
            2,
        )
        .unwrap();
        assert_eq!(initial_sequence(&dg).unwrap().order(), &[0, 1, 2]);
    }

    /// Plain Bellman-Ford over the dense matrix; independent of `dest_dijkstra`.
    fn bellman_ford(dg: &DestGraph, from: usize) -> Vec<f64> {
        let n = dg.len();
        let mut d = vec![f64::INFINITY; n];
        d[from] = 0.0;
        for _ in 0..n {
            for u in 0..n {
                for v in 0..n {
                    if u != v && d[u] + dg.theta(u, v) < d[v] {
                        d[v] = d[u] + dg.theta(u, v);
                    }
                }
            }
        }
        d
    }

    #[test]
    fn seed_cost_is_shortest_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let dg = instances::random_incomplete(8, 0.3, &mut rng);
            let s = initial_sequence(&dg).unwrap();
            assert_eq!((s.order()[0], *s.order().last().unwrap()), (dg.source(), dg.target()));
            let bf = bellman_ford(&dg, dg.source());
            assert!(close(s.total_cost(), bf[dg.target()]));
        }
    }

    #[test]
    fn all_on_seed_path() {
        // line 0-1-2: seed already visits everything
        let dg = DestGraph::from_matrix(
            &[vec![0.0, 1.0, INF], vec![1.0, 0.0, 1.0], vec![INF, 1.0, 0.0]],
            0,
            2,
        )
        .unwrap();
        let s = eci(&dg).unwrap();
        assert_eq!(s.order(), &[0, 1, 2]);
    }

    #[test]
    fn spur_forces_duplicate() {
        // 0 - 1 - 2 - 3 - 4 line, spur 5 hangs off 2
        let n = 6;
        let mut m = vec![vec![INF; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for (a, b, w) in [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (2, 5, 1.5)] {
            m[a][b] = w;
            m[b][a] = w;
        }
        let dg = DestGraph::from_matrix(&m, 0, 4).unwrap();
        let s = eci(&dg).unwrap();
        assert!(s.validate(&dg).is_ok());
        assert!(s.has_duplicates());
        assert_eq!(s.order(), &[0, 1, 2, 5, 2, 3, 4]);
    }

    #[test]
    fn eci_reaches_required_through_optional() {
        // required 2 only reachable via optional 1
        let dg = DestGraph::new(
            vec![
                0.0, 1.0, INF, 4.0, //
                1.0, 0.0, 1.0, INF, //
                INF, 1.0, 0.0, INF, //
                4.0, INF, INF, 0.0,
            ],
            0,
            3,
            vec![true, false, true, true],
        )
        .unwrap();
        let s = eci(&dg).unwrap();
        assert!(s.validate(&dg).is_ok());
        assert_eq!(s.order(), &[0, 1, 2, 1, 0, 3]);
    }

    #[test]
    fn refine_leaves_duplicate_free_sequence() {
        let dg = instances::random_complete(5, &mut ChaCha8Rng::seed_from_u64(1));
        let s = VisitSequence::new(&dg, vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(refine(&s, &dg), s);
    }

    #[test]
    fn refine_drops_redundant_revisit() {
        // [s, a, x, a, t] with theta(x, t) <= theta(x, a) + theta(a, t)
        let (s, a, x, t) = (0, 1, 2, 3);
        let dg = DestGraph::from_matrix(
            &[
                vec![0.0, 1.0, 5.0, 5.0],
                vec![1.0, 0.0, 1.0, 2.0],
                vec![5.0, 1.0, 0.0, 2.5],
                vec![5.0, 2.0, 2.5, 0.0],
            ],
            s,
            t,
        )
        .unwrap();
        let seq = VisitSequence::new(&dg, vec![s, a, x, a, t]).unwrap();
        let out = refine(&seq, &dg);
        assert_eq!(out.order(), &[s, a, x, t]);
        assert_eq!(out.total_cost(), 4.5);
    }

    #[test]
    fn refine_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let dg = instances::random_incomplete(7, 0.4, &mut rng);
            let Ok(base) = eci(&dg) else { continue };
            // inject duplicates as out-and-back detours along existing edges
            let mut order = base.order().to_vec();
            for _ in 0..rng.random_range(1..4) {
                let i = rng.random_range(0..order.len());
                let nbrs: Vec<usize> = (0..dg.len())
                    .filter(|&j| j != order[i] && dg.theta(order[i], j).is_finite())
                    .collect();
                let j = nbrs[rng.random_range(0..nbrs.len())];
                let at = order[i];
                order.splice(i + 1..i + 1, [j, at]);
            }
            let seq = VisitSequence::new(&dg, order).unwrap();
            let out = refine(&seq, &dg);
            assert!(out.validate(&dg).is_ok());
            assert!(out.total_cost() <= seq.total_cost() + 1e-9);
        }
    }

    #[test]
    fn eci_within_twice_optimum_on_complete_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let dg = instances::random_complete(6, &mut rng);
            let s = eci(&dg).unwrap();
            let (opt, _) = crate::rtsp::brute_force_oracle(&dg).unwrap();
            assert!(s.total_cost() <= 2.0 * opt + 1e-9);
            assert!(s.total_cost() >= opt - 1e-9);
        }
    }
}
