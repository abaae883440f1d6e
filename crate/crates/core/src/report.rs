//! Running a planner end to end and recording what happened.
//!
//! A run produces trace rows as solutions improve and one summary at the end.
//! Rows are handed to a callback as they occur so a front end can stream them.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::baselines::{anastar, bidirectional_astar, solve_legs, Baseline, BaselineResult};
use crate::destinations::DestinationSet;
use crate::error::{Error, Result};
use crate::graph::{NodeId, RoutingGraph};
use crate::imomd::{exact_dest_graph, plan, validate_path, PlannerConfig};
use crate::ingest::IdMap;
use crate::rtsp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Imomd,
    Biastar,
    Anastar,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Imomd => "imomd",
            Algo::Biastar => "biastar",
            Algo::Anastar => "anastar",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "imomd" => Ok(Algo::Imomd),
            "biastar" => Ok(Algo::Biastar),
            "anastar" => Ok(Algo::Anastar),
            other => Err(Error::Config(format!("unknown planner `{other}`"))),
        }
    }
}

/// Everything that determines a run, echoed into its report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub algo: Algo,
    pub budget: f64,
    pub seed: u64,
    pub goal_bias: f64,
    /// Iteration cap for imomd; `None` runs until the budget.
    pub max_iterations: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = PlannerConfig::default();
        Self { algo: Algo::Imomd, budget: p.time_budget, seed: 0, goal_bias: p.goal_bias, max_iterations: None }
    }
}

impl RunConfig {
    pub fn planner_config(&self) -> PlannerConfig {
        PlannerConfig {
            goal_bias: self.goal_bias,
            rng_seed: self.seed,
            time_budget: self.budget,
            max_iterations: self.max_iterations.unwrap_or(u64::MAX),
            ..PlannerConfig::default()
        }
    }
}

/// One improvement. `visit_order` indexes the scenario's destinations:
/// source first, then objectives and pseudo-destinations, target last.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub wall_time: f64,
    pub total_cost: f64,
    pub explored_nodes: usize,
    pub iteration: Option<u64>,
    pub visit_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub graph_sha256: String,
    pub scenario_sha256: String,
}

impl Provenance {
    pub fn of(graph_bytes: &[u8], scenario_bytes: &[u8]) -> Self {
        Self { graph_sha256: sha256_hex(graph_bytes), scenario_sha256: sha256_hex(scenario_bytes) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub planner: Algo,
    pub config: RunConfig,
    pub provenance: Provenance,
    pub trace: Vec<TraceRow>,
    /// Final route in external node ids; empty when nothing was found.
    pub node_path: Vec<i64>,
    pub total_cost: Option<f64>,
    pub explored_nodes: usize,
}

impl RunReport {
    pub fn solved(&self) -> bool {
        self.total_cost.is_some()
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Record<'a> {
    Trace(&'a TraceRow),
    Summary {
        planner: Algo,
        config: &'a RunConfig,
        provenance: &'a Provenance,
        solved: bool,
        total_cost: Option<f64>,
        node_path: &'a [i64],
    },
}

/// A trace row as one JSON line, without the newline.
pub fn trace_jsonl(row: &TraceRow) -> String {
    serde_json::to_string(&Record::Trace(row)).expect("trace rows serialize")
}

/// The closing summary line. Run-length dependent counters are left out so
/// reruns with the same seed give identical output apart from `wall_time`.
pub fn summary_jsonl(report: &RunReport) -> String {
    serde_json::to_string(&Record::Summary {
        planner: report.planner,
        config: &report.config,
        provenance: &report.provenance,
        solved: report.solved(),
        total_cost: report.total_cost,
        node_path: &report.node_path,
    })
    .expect("summary serializes")
}

pub const TRACE_CSV_HEADER: &str = "wall_time,total_cost,explored_nodes,iteration,visit_order";

/// A trace row in CSV; the visit order is space separated.
pub fn trace_csv(row: &TraceRow) -> String {
    let order: Vec<String> = row.visit_order.iter().map(usize::to_string).collect();
    let iteration = row.iteration.map(|i| i.to_string()).unwrap_or_default();
    format!("{},{},{},{},{}", row.wall_time, row.total_cost, row.explored_nodes, iteration, order.join(" "))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Order in which the single-pair baselines visit destinations: the relaxed
/// TSP answer over exact shortest-path distances.
pub fn baseline_visit_order(graph: &RoutingGraph, dests: &DestinationSet, cfg: &RunConfig) -> Result<Vec<usize>> {
    let dg = exact_dest_graph(graph, dests)?;
    let ga = rtsp::GaConfig { rng_seed: cfg.seed, ..cfg.planner_config().ga };
    Ok(rtsp::solve(&dg, &ga)?.into_order())
}

/// Runs the configured planner and reports every improvement to `on_row`.
///
/// Failing to find a route within the budget is not an error: the report
/// comes back with `total_cost == None`.
pub fn execute(
    graph: &RoutingGraph,
    ids: &IdMap,
    dests: &DestinationSet,
    cfg: &RunConfig,
    provenance: Provenance,
    mut on_row: impl FnMut(&TraceRow),
) -> Result<RunReport> {
    let mut report = RunReport {
        planner: cfg.algo,
        config: cfg.clone(),
        provenance,
        trace: Vec::new(),
        node_path: Vec::new(),
        total_cost: None,
        explored_nodes: 0,
    };
    let mut final_path: Vec<NodeId> = Vec::new();
    match cfg.algo {
        Algo::Imomd => {
            let pc = cfg.planner_config();
            let mut trace = Vec::new();
            let out = plan(graph, dests, &pc, |sol| {
                let row = TraceRow {
                    wall_time: sol.wall_time,
                    total_cost: sol.total_cost,
                    explored_nodes: sol.explored_nodes,
                    iteration: Some(sol.iteration),
                    visit_order: sol.visit_order.order().to_vec(),
                };
                on_row(&row);
                trace.push(row);
            })?;
            report.trace = trace;
            report.explored_nodes = out.explored_nodes;
            if let Some(best) = out.best() {
                final_path.clone_from(&best.node_path);
                report.total_cost = Some(best.total_cost);
            }
        }
        Algo::Biastar | Algo::Anastar => {
            let order = match baseline_visit_order(graph, dests, cfg) {
                Ok(o) => o,
                Err(Error::NoSequence) | Err(Error::NoInsertion { .. }) => return Ok(report),
                Err(e) => return Err(e),
            };
            let stops: Vec<NodeId> = order.iter().map(|&i| dests.node(i)).collect();
            let res = match run_baseline(graph, &stops, cfg) {
                Ok(r) => r,
                Err(Error::NoPath { explored }) | Err(Error::NoPathYet { explored }) => {
                    report.explored_nodes = explored;
                    return Ok(report);
                }
                Err(e) => return Err(e),
            };
            for &(wall_time, total_cost) in &res.trace {
                let row = TraceRow {
                    wall_time,
                    total_cost,
                    explored_nodes: res.explored_nodes,
                    iteration: None,
                    visit_order: order.clone(),
                };
                on_row(&row);
                report.trace.push(row);
            }
            report.explored_nodes = res.explored_nodes;
            report.total_cost = Some(res.cost);
            final_path = res.node_path;
        }
    }
    if let Some(cost) = report.total_cost {
        validate_path(graph, dests, &final_path, cost).map_err(Error::Internal)?;
    }
    report.node_path = final_path.iter().map(|&v| ids.external(v)).collect();
    Ok(report)
}

fn run_baseline(graph: &RoutingGraph, stops: &[NodeId], cfg: &RunConfig) -> Result<BaselineResult> {
    // a single leg keeps the search's own trace
    match (cfg.algo, stops) {
        (Algo::Biastar, [s, t]) => bidirectional_astar(graph, *s, *t),
        (Algo::Anastar, [s, t]) => anastar(graph, *s, *t, cfg.budget),
        (Algo::Biastar, _) => solve_legs(graph, stops, Baseline::BidirectionalAstar, cfg.budget),
        _ => solve_legs(graph, stops, Baseline::AnaStar, cfg.budget),
    }
}
