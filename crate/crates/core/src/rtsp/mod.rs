//! Relaxed traveling-salesman solver over a destination graph.
//!
//! The relaxed problem fixes the first and last destination and lets every
//! destination be visited any number of times. The solver runs in three
//! stages, each never worse than the previous one:
//!
//! 1. [`initial_sequence`]: shortest source-to-target route over the
//!    destination graph.
//! 2. [`eci`]: enhanced cheapest insertion with five insertion actions
//!    (in-sequence, in-place, and three swapping variants), then
//!    [`refine`] to drop redundant revisits.
//! 3. [`ga`]: mutation followed by fitness-proportional crossover.
//!
//! [`brute_force_oracle`] gives exact optima for small instances and
//! [`oracle_stats`] summarizes solver-vs-oracle batches.

mod eci;
mod genetic;
mod insertion;
pub mod instances;
mod oracle;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use eci::{eci, initial_sequence, refine};
pub use genetic::{crossover, ga, mutate, selection_weights, GaConfig};
pub use insertion::{apply_insertion, best_insertion, insertion_cost, InsertionAction, InsertionPlan};
pub use oracle::{brute_force_oracle, oracle_stats, revisit_required, OracleStats, ORACLE_LIMIT};

/// Symmetric travel costs between destinations; `f64::INFINITY` marks a
/// missing edge.
#[derive(Debug, Clone, PartialEq)]
pub struct DestGraph {
    n: usize,
    theta: Vec<f64>,
    source: usize,
    target: usize,
    required: Vec<bool>,
}

impl DestGraph {
    /// `theta` is row-major `n * n`. Source and target are always required.
    pub fn new(theta: Vec<f64>, source: usize, target: usize, mut required: Vec<bool>) -> Result<Self> {
        let n = required.len();
        if theta.len() != n * n {
            return Err(Error::Config(format!("theta has {} entries, expected {}", theta.len(), n * n)));
        }
        if source >= n || target >= n || source == target {
            return Err(Error::Config("source and target must be distinct destinations".into()));
        }
        for i in 0..n {
            if theta[i * n + i] != 0.0 {
                return Err(Error::Config(format!("theta[{i}][{i}] must be zero")));
            }
            for j in i + 1..n {
                let (a, b) = (theta[i * n + j], theta[j * n + i]);
                if a != b && !(a.is_nan() && b.is_nan()) {
                    return Err(Error::Config(format!("theta not symmetric at ({i}, {j})")));
                }
                if !(a > 0.0) {
                    return Err(Error::Config(format!("theta[{i}][{j}] = {a} must be positive or infinite")));
                }
            }
        }
        required[source] = true;
        required[target] = true;
        Ok(Self { n, theta, source, target, required })
    }

    /// All destinations required.
    pub fn from_matrix(rows: &[Vec<f64>], source: usize, target: usize) -> Result<Self> {
        let n = rows.len();
        let theta = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(theta, source, target, vec![true; n])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn theta(&self, i: usize, j: usize) -> f64 {
        self.theta[i * self.n + j]
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn is_required(&self, i: usize) -> bool {
        self.required[i]
    }

    pub fn required(&self) -> &[bool] {
        &self.required
    }

    /// Sum of consecutive travel costs; `None` when a hop is missing.
    pub fn order_cost(&self, order: &[usize]) -> Option<f64> {
        let mut total = 0.0;
        for w in order.windows(2) {
            let c = self.theta(w[0], w[1]);
            if !c.is_finite() {
                return None;
            }
            total += c;
        }
        Some(total)
    }
}

/// Ordered destinations from source to target; duplicates allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitSequence {
    order: Vec<usize>,
    total_cost: f64,
}

impl VisitSequence {
    /// Costs `order`; `None` if any hop is missing.
    pub fn new(dg: &DestGraph, order: Vec<usize>) -> Option<Self> {
        let total_cost = dg.order_cost(&order)?;
        Some(Self { order, total_cost })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, d: usize) -> bool {
        self.order.contains(&d)
    }

    pub fn has_duplicates(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        !self.order.iter().all(|d| seen.insert(*d))
    }

    /// Re-costs the same order against (possibly updated) travel costs.
    pub fn recost(&self, dg: &DestGraph) -> Option<Self> {
        Self::new(dg, self.order.clone())
    }

    /// Checks every sequence invariant against `dg`.
    /// Drops immediate repeats such as `[.., 4, 4, ..]`; they add nothing
    /// to the cost since `theta(d, d) = 0`.
    pub fn without_repeats(&self, dg: &DestGraph) -> Self {
        let mut order = self.order.clone();
        order.dedup();
        if order.len() == self.order.len() {
            return self.clone();
        }
        Self::new(dg, order).expect("removing zero-cost hops keeps the sequence valid")
    }

    pub fn validate(&self, dg: &DestGraph) -> std::result::Result<(), String> {
        let (first, last) = match (self.order.first(), self.order.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err("empty sequence".into()),
        };
        if first != dg.source() || last != dg.target() {
            return Err(format!("sequence runs {first} -> {last}, expected {} -> {}", dg.source(), dg.target()));
        }
        if let Some(&d) = self.order.iter().find(|&&d| d >= dg.len()) {
            return Err(format!("destination {d} out of range"));
        }
        for d in (0..dg.len()).filter(|&d| dg.is_required(d)) {
            if !self.order.contains(&d) {
                return Err(format!("required destination {d} missing"));
            }
        }
        let cost = dg.order_cost(&self.order).ok_or("sequence uses a missing edge")?;
        if !close(cost, self.total_cost) {
            return Err(format!("stored cost {} != recomputed {cost}", self.total_cost));
        }
        Ok(())
    }
}

impl fmt::Display for VisitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(usize::to_string).collect();
        write!(f, "[{}] ({:.3})", parts.join(" "), self.total_cost)
    }
}

/// Relative equality at 1e-9, used wherever two costs should agree exactly up
/// to summation order.
pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Output of every solver stage, for stage-monotonicity checks and benches.
#[derive(Debug, Clone)]
pub struct SolveStages {
    pub initial: VisitSequence,
    pub eci: VisitSequence,
    pub ga: VisitSequence,
}

/// Full pipeline: [`initial_sequence`], [`eci`], then [`ga`].
pub fn solve(dg: &DestGraph, cfg: &GaConfig) -> Result<VisitSequence> {
    Ok(solve_staged(dg, cfg)?.ga)
}

pub fn solve_staged(dg: &DestGraph, cfg: &GaConfig) -> Result<SolveStages> {
    cfg.validate()?;
    let initial = initial_sequence(dg)?;
    let eci_seq = eci::eci_from(dg, initial.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let ga_seq = ga(&eci_seq, dg, cfg, &mut rng);
    Ok(SolveStages { initial, eci: eci_seq, ga: ga_seq })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::DestGraph;

    pub const INF: f64 = f64::INFINITY;

    /// Source 0, objective 1, target 2: revisiting the source beats the
    /// Hamiltonian path (7 vs 12).
    pub fn bad_hamiltonian() -> DestGraph {
        DestGraph::from_matrix(
            &[vec![0.0, 2.0, 3.0], vec![2.0, 0.0, 10.0], vec![3.0, 10.0, 0.0]],
            0,
            2,
        )
        .unwrap()
    }

    /// Tree-shaped destination graph: source 0 and target 3 hang off hub 1,
    /// objective 2 is a leaf on the hub. The hub must be visited twice.
    pub fn acyclic_hub() -> DestGraph {
        DestGraph::from_matrix(
            &[
                vec![0.0, 1.0, INF, INF],
                vec![1.0, 0.0, 2.0, 3.0],
                vec![INF, 2.0, 0.0, INF],
                vec![INF, 3.0, INF, 0.0],
            ],
            0,
            3,
        )
        .unwrap()
    }
}
