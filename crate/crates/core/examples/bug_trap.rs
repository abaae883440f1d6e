//! A source walled in on the side facing its target. Marking the way out as
//! a pseudo-destination lets the planner find the first route sooner.

use multigoal::gen::BugTrapSpec;
use multigoal::imomd::{Planner, PlannerConfig};
use multigoal::ingest::{resolve_scenario, IdMap};

fn first_route(trap: &multigoal::gen::BugTrap, informed: bool, seed: u64) -> multigoal::Result<Option<(u64, f64)>> {
    let dests = resolve_scenario(&trap.scenario(informed), &IdMap::identity(trap.graph.node_count()))?;
    let cfg = PlannerConfig { rng_seed: seed, ..PlannerConfig::default() };
    let mut planner = Planner::new(&trap.graph, &dests, &cfg)?;
    while planner.elapsed() < cfg.time_budget {
        if let Some(cost) = planner.step()?.map(|s| s.total_cost) {
            return Ok(Some((planner.iteration(), cost)));
        }
    }
    Ok(None)
}

fn main() -> multigoal::Result<()> {
    let trap = BugTrapSpec::default().generate()?;
    println!("{} nodes, entry at node {}", trap.graph.node_count(), trap.entry.index());
    for seed in 0..5 {
        let with = first_route(&trap, true, seed)?;
        let without = first_route(&trap, false, seed)?;
        println!("seed {seed}: with entry hint {with:?}, without {without:?}  (iteration, cost)");
    }
    Ok(())
}
