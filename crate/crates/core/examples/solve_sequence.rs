//! Orders destinations with the sequence solver and checks the answer
//! against the brute-force optimum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multigoal::rtsp::{brute_force_oracle, instances, solve_staged, DestGraph, GaConfig};

fn main() -> multigoal::Result<()> {
    // Visiting every destination exactly once costs 12 here; going back
    // through the source costs 7.
    let dg = DestGraph::from_matrix(&[vec![0.0, 2.0, 3.0], vec![2.0, 0.0, 10.0], vec![3.0, 10.0, 0.0]], 0, 2)?;
    let stages = solve_staged(&dg, &GaConfig::default())?;
    println!("triangle: {:?} costs {}", stages.ga.order(), stages.ga.total_cost());

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dg = instances::random_incomplete(9, 0.25, &mut rng);
    let stages = solve_staged(&dg, &GaConfig::default())?;
    let (optimum, witness) = brute_force_oracle(&dg)?;
    println!("shortest s-t route  {:>9.1}", stages.initial.total_cost());
    println!("cheapest insertion  {:>9.1}  {:?}", stages.eci.total_cost(), stages.eci.order());
    println!("genetic refinement  {:>9.1}  {:?}", stages.ga.total_cost(), stages.ga.order());
    println!("optimum             {:>9.1}  {:?}", optimum, witness.order());
    Ok(())
}
