//! Seeded random destination graphs for tests and benchmarks.

use rand::Rng;

use super::eci::{dest_dijkstra, dest_path};
use super::{DestGraph, VisitSequence};

fn points<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(f64, f64)> {
    (0..n).map(|_| (rng.random::<f64>() * 1000.0, rng.random::<f64>() * 1000.0)).collect()
}

fn euclid(a: (f64, f64), b: (f64, f64)) -> f64 {
    // floor keeps coincident points from producing a zero edge
    (a.0 - b.0).hypot(a.1 - b.1).max(1e-6)
}

/// Complete metric instance: Euclidean distances between uniform points in a
/// 1000 x 1000 square. Source 0, target `n - 1`, everything required.
pub fn random_complete<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DestGraph {
    assert!(n >= 2);
    let p = points(n, rng);
    let mut theta = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let w = euclid(p[i], p[j]);
            theta[i * n + j] = w;
            theta[j * n + i] = w;
        }
    }
    DestGraph::new(theta, 0, n - 1, vec![true; n]).expect("valid instance")
}

/// Connected incomplete instance: a random spanning tree plus each remaining
/// pair with probability `extra_edge_prob`, Euclidean weights. Source 0,
/// target `n - 1`, everything required.
pub fn random_incomplete<R: Rng + ?Sized>(n: usize, extra_edge_prob: f64, rng: &mut R) -> DestGraph {
    assert!(n >= 2);
    let p = points(n, rng);
    let mut theta = vec![f64::INFINITY; n * n];
    for i in 0..n {
        theta[i * n + i] = 0.0;
    }
    let link = |theta: &mut Vec<f64>, i: usize, j: usize| {
        let w = euclid(p[i], p[j]);
        theta[i * n + j] = w;
        theta[j * n + i] = w;
    };
    // random recursive tree over a shuffled order
    let mut perm: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
    for k in 1..n {
        let parent = perm[rng.random_range(0..k)];
        link(&mut theta, perm[k], parent);
    }
    for i in 0..n {
        for j in i + 1..n {
            if !theta[i * n + j].is_finite() && rng.random_bool(extra_edge_prob) {
                link(&mut theta, i, j);
            }
        }
    }
    DestGraph::new(theta, 0, n - 1, vec![true; n]).expect("valid instance")
}

/// A random walk of `steps` hops from the source, closed by a shortest path
/// to the target. Not necessarily covering every required destination.
pub fn random_walk_sequence<R: Rng + ?Sized>(dg: &DestGraph, steps: usize, rng: &mut R) -> Option<VisitSequence> {
    let mut order = vec![dg.source()];
    for _ in 0..steps {
        let u = *order.last().unwrap();
        let nbrs: Vec<usize> = (0..dg.len()).filter(|&v| v != u && dg.theta(u, v).is_finite()).collect();
        if nbrs.is_empty() {
            break;
        }
        order.push(nbrs[rng.random_range(0..nbrs.len())]);
    }
    let last = *order.last().unwrap();
    let (dist, prev) = dest_dijkstra(dg, last);
    if !dist[dg.target()].is_finite() {
        return None;
    }
    if last != dg.target() {
        order.extend(dest_path(&prev, last, dg.target()).into_iter().skip(1));
    }
    VisitSequence::new(dg, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complete_is_metric() {
        let dg = random_complete(8, &mut ChaCha8Rng::seed_from_u64(0));
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    assert!(dg.theta(i, j) <= dg.theta(i, k) + dg.theta(k, j) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn incomplete_is_connected_and_sparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut missing = 0;
        for _ in 0..50 {
            let dg = random_incomplete(9, 0.2, &mut rng);
            let (dist, _) = dest_dijkstra(&dg, 0);
            assert!(dist.iter().all(|d| d.is_finite()));
            missing += (0..9).flat_map(|i| (0..9).map(move |j| (i, j))).filter(|&(i, j)| !dg.theta(i, j).is_finite()).count();
        }
        assert!(missing > 0);
    }

    #[test]
    fn walk_sequence_ends_at_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let dg = random_incomplete(7, 0.3, &mut rng);
        for steps in 0..10 {
            let s = random_walk_sequence(&dg, steps, &mut rng).unwrap();
            assert_eq!(s.order()[0], dg.source());
            assert_eq!(*s.order().last().unwrap(), dg.target());
        }
    }
}
