use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{DestGraph, VisitSequence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    /// Offspring drawn from the single seed parent.
    pub mutation_count: usize,
    /// Crossover offspring per generation.
    pub crossover_count: usize,
    pub generations: usize,
    /// Inclusive bounds on the segment count `k`; the upper bound is further
    /// capped at `len - 1` of the parent.
    pub segment_min: usize,
    pub segment_max: usize,
    /// Attempts per offspring before falling back to the parent.
    pub retry_budget: usize,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            mutation_count: 2000,
            crossover_count: 2000,
            generations: 10,
            segment_min: 3,
            segment_max: 7,
            retry_budget: 20,
            rng_seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [self.mutation_count, self.crossover_count, self.generations, self.retry_budget];
        if counts.contains(&0) {
            return Err(Error::Config("GA counts must be at least 1".into()));
        }
        if self.segment_min < 3 || self.segment_min > self.segment_max {
            return Err(Error::Config("segment range must satisfy 3 <= min <= max".into()));
        }
        Ok(())
    }
}

/// Cuts the parent into `k` segments, reverses each interior segment with
/// probability 1/2, shuffles the interior segments and splices everything
/// back together. The first and last segments stay in place.
///
/// Offspring that would use a missing edge are redrawn; when the retry
/// budget runs out the parent is returned.
pub fn mutate<R: Rng + ?Sized>(parent: &VisitSequence, dg: &DestGraph, cfg: &GaConfig, rng: &mut R) -> VisitSequence {
    let order = parent.order();
    let len = order.len();
    let k_max = cfg.segment_max.min(len.saturating_sub(1));
    if len <= 3 || k_max < cfg.segment_min {
        return parent.clone();
    }
    for _ in 0..cfg.retry_budget {
        let k = rng.random_range(cfg.segment_min..=k_max);
        // boundaries before positions 1..len, k - 1 of them
        let mut cuts: Vec<usize> = rand::seq::index::sample(rng, len - 1, k - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        let mut bounds = Vec::with_capacity(k + 1);
        bounds.push(0);
        bounds.extend_from_slice(&cuts);
        bounds.push(len);
        let mut middle: Vec<Vec<usize>> = bounds[1..k]
            .windows(2)
            .map(|w| {
                let mut seg = order[w[0]..w[1]].to_vec();
                if rng.random_bool(0.5) {
                    seg.reverse();
                }
                seg
            })
            .collect();
        middle.shuffle(rng);
        let mut child = Vec::with_capacity(len);
        child.extend_from_slice(&order[..bounds[1]]);
        for seg in middle {
            child.extend(seg);
        }
        child.extend_from_slice(&order[bounds[k - 1]..]);
        if let Some(seq) = VisitSequence::new(dg, child) {
            return seq;
        }
    }
    parent.clone()
}

/// Selection probability of each individual, proportional to `1 / cost`.
pub fn selection_weights(costs: &[f64]) -> Vec<f64> {
    let fitness: Vec<f64> = costs.iter().map(|c| 1.0 / c).collect();
    let total: f64 = fitness.iter().sum();
    fitness.into_iter().map(|f| f / total).collect()
}

/// Order crossover on the sequence interiors.
///
/// A random interior sub-sequence of one parent, reversed with probability
/// 1/2, goes to a random offset of the child; the rest of the child is the
/// other parent's interior in order, minus one occurrence for each element
/// the segment already supplies. Source and target stay pinned, and every
/// destination of the other parent keeps at least one occurrence.
///
/// Identical parents reproduce the parent.
pub fn crossover<R: Rng + ?Sized>(
    pa: &VisitSequence,
    pb: &VisitSequence,
    dg: &DestGraph,
    cfg: &GaConfig,
    rng: &mut R,
) -> Result<VisitSequence> {
    let (a, b) = (pa.order(), pb.order());
    if a.len() < 2 || b.len() < 2 || a[0] != b[0] || a[a.len() - 1] != b[b.len() - 1] {
        return Err(Error::Internal("crossover parents have different endpoints".into()));
    }
    if a == b {
        return Ok(pa.clone());
    }
    for _ in 0..cfg.retry_budget {
        let (donor, other) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
        let donor_inner = &donor[1..donor.len() - 1];
        let other_inner = &other[1..other.len() - 1];
        if donor_inner.is_empty() {
            return Ok(VisitSequence::new(dg, other.to_vec()).expect("parent is valid"));
        }
        let i = rng.random_range(0..donor_inner.len());
        let j = rng.random_range(i + 1..=donor_inner.len());
        let mut segment = donor_inner[i..j].to_vec();
        if rng.random_bool(0.5) {
            segment.reverse();
        }
        let mut supplied = vec![0usize; dg.len()];
        for &d in &segment {
            supplied[d] += 1;
        }
        let mut fill = Vec::with_capacity(other_inner.len());
        for &d in other_inner {
            if supplied[d] > 0 {
                supplied[d] -= 1;
            } else {
                fill.push(d);
            }
        }
        let offset = rng.random_range(0..=fill.len());
        let mut child = Vec::with_capacity(fill.len() + segment.len() + 2);
        child.push(other[0]);
        child.extend_from_slice(&fill[..offset]);
        child.extend_from_slice(&segment);
        child.extend_from_slice(&fill[offset..]);
        child.push(other[other.len() - 1]);
        if let Some(seq) = VisitSequence::new(dg, child) {
            return Ok(seq);
        }
    }
    Ok(pa.clone())
}

/// Genetic refinement of `seed`.
///
/// `mutation_count` mutants of the seed are drawn and those cheaper than the
/// seed form the first population. Each generation then draws
/// `crossover_count` children from fitness-proportional parent pairs; the
/// children cheaper than the previous generation's worst member become the
/// next population (the population carries over if none qualify). Returns
/// the cheapest sequence seen, never worse than `seed`.
pub fn ga<R: Rng + ?Sized>(seed: &VisitSequence, dg: &DestGraph, cfg: &GaConfig, rng: &mut R) -> VisitSequence {
    if seed.len() <= 3 {
        return seed.clone();
    }
    let mut best = seed.clone();
    let mut population: Vec<VisitSequence> = Vec::new();
    for _ in 0..cfg.mutation_count {
        let child = mutate(seed, dg, cfg, rng);
        if child.total_cost() < seed.total_cost() {
            if child.total_cost() < best.total_cost() {
                best = child.clone();
            }
            population.push(child);
        }
    }
    if population.is_empty() {
        return best.without_repeats(dg);
    }

    for _ in 0..cfg.generations {
        let costs: Vec<f64> = population.iter().map(VisitSequence::total_cost).collect();
        let threshold = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let pick = WeightedIndex::new(selection_weights(&costs)).expect("positive finite costs");
        let mut next = Vec::new();
        for _ in 0..cfg.crossover_count {
            let pa = &population[pick.sample(rng)];
            let pb = &population[pick.sample(rng)];
            let child = crossover(pa, pb, dg, cfg, rng).expect("population shares endpoints");
            if child.total_cost() < threshold {
                if child.total_cost() < best.total_cost() {
                    best = child.clone();
                }
                next.push(child);
            }
        }
        if !next.is_empty() {
            population = next;
        }
    }
    best.without_repeats(dg)
}
