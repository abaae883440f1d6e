//! Small solver-versus-oracle benchmark; prints the per-order ratios and
//! writes the full table to standard output as CSV.

use multigoal::bench::{bench_oracle, write_bench_csv, BenchConfig, GraphKind};

fn main() -> multigoal::Result<()> {
    let cfg = BenchConfig {
        orders: 5..=8,
        instances: 50,
        graphs: vec![GraphKind::Complete, GraphKind::Incomplete],
        ..BenchConfig::default()
    };
    let batches = bench_oracle(&cfg)?;
    for b in &batches {
        eprintln!(
            "{:<10} n={}  rho_mean {:.4}  rho_std {:.4}  optimal {:>5.1}%  worst {:.4}",
            b.graph.to_string(),
            b.order,
            b.stats.rho_mean,
            b.stats.rho_std,
            b.stats.rho_optimality * 100.0,
            b.stats.rho_worst
        );
    }
    write_bench_csv(&batches, std::io::stdout().lock())
}
