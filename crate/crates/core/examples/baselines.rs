//! Single-pair searches against Dijkstra on one random graph.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multigoal::baselines::{anastar, bidirectional_astar};
use multigoal::gen::random_geometric;
use multigoal::graph::{dijkstra, NodeId};

fn main() -> multigoal::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let graph = random_geometric(5000, 0.025, &mut rng);
    let (s, t) = (NodeId(0), NodeId(4999));

    let exact = dijkstra(&graph, s)?.cost(t).expect("connected");
    let bi = bidirectional_astar(&graph, s, t)?;
    let ana = anastar(&graph, s, t, 5.0)?;
    println!("dijkstra            {exact:.2} m");
    println!("bidirectional A*    {:.2} m, {} nodes expanded", bi.cost, bi.explored_nodes);
    println!("ANA*                {:.2} m, {} nodes expanded", ana.cost, ana.explored_nodes);
    for (time, cost) in &ana.trace {
        println!("  {:>9.6}s  {cost:.2}", time);
    }
    Ok(())
}
