//! Plans a route through several destinations on a random road-like graph
//! and prints each improvement as it arrives.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multigoal::gen::{random_geometric, random_scenario};
use multigoal::imomd::{exact_dest_graph, plan, PlannerConfig};
use multigoal::ingest::{resolve_scenario, IdMap};
use multigoal::rtsp::brute_force_oracle;

fn main() -> multigoal::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let graph = random_geometric(2000, 0.035, &mut rng);
    let spec = random_scenario(&graph, 8, &mut rng)?;
    let dests = resolve_scenario(&spec, &IdMap::identity(graph.node_count()))?;

    let cfg = PlannerConfig { time_budget: 2.0, ..PlannerConfig::default() };
    let report = plan(&graph, &dests, &cfg, |s| {
        println!(
            "{:>8.4}s  iteration {:>6}  explored {:>5}  cost {:>8.1} m  order {:?}",
            s.wall_time,
            s.iteration,
            s.explored_nodes,
            s.total_cost,
            s.visit_order.order()
        );
    })?;
    let (optimum, _) = brute_force_oracle(&exact_dest_graph(&graph, &dests)?)?;
    let best = report.into_result()?;
    println!("final {:.1} m, optimum {:.1} m ({} nodes on the route)", best.total_cost, optimum, best.node_path.len());
    Ok(())
}
