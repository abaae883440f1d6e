//! Solver-versus-oracle benchmark over seeded random destination graphs.
//!
//! Each instance draws its randomness from its own ChaCha stream, so a batch
//! is reproducible regardless of how the instances are scheduled.

use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rtsp::{brute_force_oracle, close, instances, oracle_stats, revisit_required, solve_staged, GaConfig, OracleStats, ORACLE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Complete,
    Incomplete,
}

impl GraphKind {
    fn tag(self) -> u64 {
        match self {
            GraphKind::Complete => 1,
            GraphKind::Incomplete => 2,
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Complete => "complete",
            GraphKind::Incomplete => "incomplete",
        })
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(GraphKind::Complete),
            "incomplete" => Ok(GraphKind::Incomplete),
            other => Err(Error::Config(format!("unknown graph kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub orders: RangeInclusive<usize>,
    pub instances: usize,
    pub seed: u64,
    pub graphs: Vec<GraphKind>,
    /// Probability of each non-tree pair in an incomplete graph.
    pub extra_edge_prob: f64,
    pub ga: GaConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            orders: 5..=9,
            instances: 300,
            seed: 0,
            graphs: vec![GraphKind::Complete, GraphKind::Incomplete],
            extra_edge_prob: 0.3,
            ga: GaConfig::default(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (*self.orders.start(), *self.orders.end());
        if hi > ORACLE_LIMIT {
            return Err(Error::OracleTooLarge { destinations: hi, limit: ORACLE_LIMIT });
        }
        if lo < 2 || lo > hi {
            return Err(Error::Config(format!("order range {lo}..={hi} is empty or below 2")));
        }
        if self.instances == 0 {
            return Err(Error::EmptyBatch);
        }
        if !(0.0..=1.0).contains(&self.extra_edge_prob) {
            return Err(Error::Config("extra edge probability must lie in [0, 1]".into()));
        }
        self.ga.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceResult {
    pub graph: GraphKind,
    pub order: usize,
    pub instance: usize,
    pub oracle_cost: f64,
    pub eci_cost: f64,
    pub solver_cost: f64,
    /// The solver output passed the sequence validator.
    pub valid: bool,
    pub solver_revisits: bool,
    /// No simple source-to-target path covers every required destination.
    pub revisit_required: bool,
}

impl InstanceResult {
    pub fn rho(&self) -> f64 {
        if self.solver_cost > 0.0 {
            self.oracle_cost / self.solver_cost
        } else {
            1.0
        }
    }

    pub fn optimal(&self) -> bool {
        close(self.oracle_cost, self.solver_cost)
    }
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub graph: GraphKind,
    pub order: usize,
    pub instances: Vec<InstanceResult>,
    pub stats: OracleStats,
}

fn instance_rng(seed: u64, kind: GraphKind, order: usize, idx: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((kind.tag() << 56) | ((order as u64) << 40) | idx as u64);
    rng
}

pub fn run_instance(cfg: &BenchConfig, kind: GraphKind, order: usize, idx: usize) -> Result<InstanceResult> {
    let mut rng = instance_rng(cfg.seed, kind, order, idx);
    let dg = match kind {
        GraphKind::Complete => instances::random_complete(order, &mut rng),
        GraphKind::Incomplete => instances::random_incomplete(order, cfg.extra_edge_prob, &mut rng),
    };
    let ga = GaConfig { rng_seed: cfg.seed ^ idx as u64, ..cfg.ga.clone() };
    let stages = solve_staged(&dg, &ga)?;
    let (oracle_cost, _) = brute_force_oracle(&dg)?;
    Ok(InstanceResult {
        graph: kind,
        order,
        instance: idx,
        oracle_cost,
        eci_cost: stages.eci.total_cost(),
        solver_cost: stages.ga.total_cost(),
        valid: stages.ga.validate(&dg).is_ok(),
        solver_revisits: stages.ga.has_duplicates(),
        revisit_required: revisit_required(&dg),
    })
}

/// One batch per graph kind and order, in that nesting.
pub fn bench_oracle(cfg: &BenchConfig) -> Result<Vec<BatchResult>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &kind in &cfg.graphs {
        for order in cfg.orders.clone() {
            let instances = (0..cfg.instances)
                .into_par_iter()
                .map(|i| run_instance(cfg, kind, order, i))
                .collect::<Result<Vec<_>>>()?;
            let pairs: Vec<(f64, f64)> = instances.iter().map(|r| (r.oracle_cost, r.solver_cost)).collect();
            let stats = oracle_stats(&pairs)?;
            out.push(BatchResult { graph: kind, order, instances, stats });
        }
    }
    Ok(out)
}

/// Flat CSV row; instance rows leave the stats columns empty and vice versa.
#[derive(Serialize)]
struct CsvRow {
    record: &'static str,
    graph: GraphKind,
    order: usize,
    instance: Option<usize>,
    oracle_cost: Option<f64>,
    eci_cost: Option<f64>,
    solver_cost: Option<f64>,
    rho: Option<f64>,
    solver_revisits: Option<bool>,
    revisit_required: Option<bool>,
    count: Option<usize>,
    rho_mean: Option<f64>,
    rho_std: Option<f64>,
    rho_optimality: Option<f64>,
    rho_worst: Option<f64>,
}

/// Writes every instance row of a batch followed by its stats row.
pub fn write_bench_csv<W: Write>(batches: &[BatchResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Config(format!("writing CSV: {e}"));
    for b in batches {
        for r in &b.instances {
            w.serialize(CsvRow {
                record: "instance",
                graph: b.graph,
                order: b.order,
                instance: Some(r.instance),
                oracle_cost: Some(r.oracle_cost),
                eci_cost: Some(r.eci_cost),
                solver_cost: Some(r.solver_cost),
                rho: Some(r.rho()),
                solver_revisits: Some(r.solver_revisits),
                revisit_required: Some(r.revisit_required),
                count: None,
                rho_mean: None,
                rho_std: None,
                rho_optimality: None,
                rho_worst: None,
            })
            .map_err(io)?;
        }
        w.serialize(CsvRow {
            record: "stats",
            graph: b.graph,
            order: b.order,
            instance: None,
            oracle_cost: None,
            eci_cost: None,
            solver_cost: None,
            rho: None,
            solver_revisits: None,
            revisit_required: None,
            count: Some(b.instances.len()),
            rho_mean: Some(b.stats.rho_mean),
            rho_std: Some(b.stats.rho_std),
            rho_optimality: Some(b.stats.rho_optimality),
            rho_worst: Some(b.stats.rho_worst),
        })
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Config(format!("writing CSV: {e}")))?;
    Ok(())
}
