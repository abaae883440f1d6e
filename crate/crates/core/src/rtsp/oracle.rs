use super::{close, DestGraph, VisitSequence};
use crate::error::{Error, Result};

/// Largest destination count [`brute_force_oracle`] accepts.
pub const ORACLE_LIMIT: usize = 12;

/// Floyd-Warshall closure with next-hop table.
fn closure(dg: &DestGraph) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = dg.len();
    let mut dist = vec![f64::INFINITY; n * n];
    let mut next = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            let w = dg.theta(i, j);
            if w.is_finite() {
                dist[i * n + j] = w;
                next[i * n + j] = Some(j);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let via = dik + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                    next[i * n + j] = next[i * n + k];
                }
            }
        }
    }
    (dist, next)
}

/// Exact relaxed-TSP optimum for small instances.
///
/// Permutes the required intermediate destinations over the metric closure
/// of `dg`; the witness is expanded back into hops of `dg`, so it may revisit
/// destinations.
pub fn brute_force_oracle(dg: &DestGraph) -> Result<(f64, VisitSequence)> {
    let n = dg.len();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge { destinations: n, limit: ORACLE_LIMIT });
    }
    let (dist, next) = closure(dg);
    let d = |a: usize, b: usize| dist[a * n + b];
    let (s, t) = (dg.source(), dg.target());
    let mut mid: Vec<usize> = (0..n).filter(|&i| dg.is_required(i) && i != s && i != t).collect();

    let tour = |p: &[usize]| {
        let mut cost = 0.0;
        let mut prev = s;
        for &x in p {
            cost += d(prev, x);
            prev = x;
        }
        cost + d(prev, t)
    };

    // Heap's algorithm, iterative
    let mut best_cost = tour(&mid);
    let mut best = mid.clone();
    let mut c = vec![0usize; mid.len()];
    let mut i = 1;
    while i < mid.len() {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            mid.swap(j, i);
            let cost = tour(&mid);
            if cost < best_cost {
                best_cost = cost;
                best.clone_from(&mid);
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    if !best_cost.is_finite() {
        return Err(Error::NoSequence);
    }

    let mut order = vec![s];
    for &goal in best.iter().chain(std::iter::once(&t)) {
        let mut cur = *order.last().unwrap();
        while cur != goal {
            cur = next[cur * n + goal].expect("finite closure distance");
            order.push(cur);
        }
    }
    let seq = VisitSequence::new(dg, order).ok_or_else(|| Error::Internal("oracle witness uses a missing edge".into()))?;
    Ok((best_cost, seq))
}

/// Whether every valid sequence for `dg` revisits some destination, i.e. no
/// simple source-to-target path covers all required destinations.
pub fn revisit_required(dg: &DestGraph) -> bool {
    let n = dg.len();
    let need = (0..n).filter(|&i| dg.is_required(i)).count();
    let mut on_path = vec![false; n];

    fn dfs(dg: &DestGraph, u: usize, on_path: &mut [bool], covered: usize, need: usize) -> bool {
        if u == dg.target() {
            return covered == need;
        }
        for v in 0..dg.len() {
            if !on_path[v] && dg.theta(u, v).is_finite() {
                on_path[v] = true;
                let found = dfs(dg, v, on_path, covered + dg.is_required(v) as usize, need);
                on_path[v] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }

    on_path[dg.source()] = true;
    !dfs(dg, dg.source(), &mut on_path, 1, need)
}

/// Batch summary of solver cost against the oracle optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleStats {
    /// Summed oracle cost over summed solver cost.
    pub rho_mean: f64,
    /// Population standard deviation of per-instance ratios.
    pub rho_std: f64,
    /// Fraction of instances solved optimally.
    pub rho_optimality: f64,
    pub rho_worst: f64,
}

/// `pairs` holds `(oracle_cost, solver_cost)` per instance.
pub fn oracle_stats(pairs: &[(f64, f64)]) -> Result<OracleStats> {
    if pairs.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let m = pairs.len() as f64;
    let ratios: Vec<f64> = pairs.iter().map(|&(o, s)| if s > 0.0 { o / s } else { 1.0 }).collect();
    let (so, ss) = pairs.iter().fold((0.0, 0.0), |(a, b), &(o, s)| (a + o, b + s));
    let mean_ratio = ratios.iter().sum::<f64>() / m;
    let var = ratios.iter().map(|r| (r - mean_ratio).powi(2)).sum::<f64>() / m;
    Ok(OracleStats {
        rho_mean: if ss > 0.0 { so / ss } else { 1.0 },
        rho_std: var.sqrt(),
        rho_optimality: pairs.iter().filter(|&&(o, s)| close(o, s)).count() as f64 / m,
        rho_worst: ratios.iter().copied().fold(f64::INFINITY, f64::min),
    })
}
