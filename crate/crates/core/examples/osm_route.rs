//! Loads an OpenStreetMap extract and routes through three of its nodes.
//! Pass a `.osm` file, or run without arguments to use the bundled fixture.

use multigoal::graph::dijkstra;
use multigoal::imomd::{plan, PlannerConfig};
use multigoal::ingest::{parse_osm_xml, parse_scenario, resolve_scenario};

const FIXTURE: &[u8] = include_bytes!("../tests/data/osm_100_ways.osm");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bytes = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => FIXTURE.to_vec(),
    };
    let (graph, ids) = parse_osm_xml(&bytes)?;
    println!("{} nodes, {} edges", graph.node_count(), graph.edges().count());

    // the extract need not be connected: stay in the source's component
    let source = graph.nodes().next().ok_or("empty map")?;
    let tree = dijkstra(&graph, source)?;
    let mut reachable: Vec<_> = graph.nodes().filter(|&v| tree.cost(v).is_some()).collect();
    reachable.sort_by(|&a, &b| tree.cost(a).unwrap().total_cmp(&tree.cost(b).unwrap()));
    if reachable.len() < 3 {
        return Err("the first node's component is too small".into());
    }
    let (target, objective) = (reachable[reachable.len() - 1], reachable[reachable.len() / 2]);
    let text = format!(
        "scenario v1\nsource {}\ntarget {}\nobjectives {}\n",
        ids.external(source),
        ids.external(target),
        ids.external(objective)
    );
    let dests = resolve_scenario(&parse_scenario(&text)?, &ids)?;

    let cfg = PlannerConfig { time_budget: 1.0, ..PlannerConfig::default() };
    match plan(&graph, &dests, &cfg, |_| {})?.into_result() {
        Ok(best) => {
            let route: Vec<i64> = best.node_path.iter().map(|&v| ids.external(v)).collect();
            println!("{:.1} m through {} nodes: {route:?}", best.total_cost, route.len());
        }
        Err(e) => println!("{e}"),
    }
    Ok(())
}
