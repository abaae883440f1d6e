use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multigoal::bench::{bench_oracle, write_bench_csv, BenchConfig, GraphKind};
use multigoal::gen::{random_geometric, random_scenario, BugTrapSpec};
use multigoal::graph::RoutingGraph;
use multigoal::ingest::{load_graph_bytes, parse_scenario, resolve_scenario, write_edgelist, IdMap, ScenarioSpec};
use multigoal::report::{self, Algo, Provenance, RunConfig};

/// Exit status when the budget ran out before any route was found.
const EXIT_NO_PATH_YET: u8 = 3;

#[derive(Parser)]
#[command(name = "multigoal", version, about = "Anytime multi-destination route planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a route through a scenario's destinations and stream the trace.
    Run(RunArgs),
    /// Compare the sequence solver with the brute-force optimum.
    BenchOracle(BenchArgs),
    /// Write a synthetic map and scenario files.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Imomd,
    Biastar,
    Anastar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Edge list, or OSM XML when the name ends in `.osm`.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value = "imomd")]
    algo: AlgoArg,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 10.0)]
    budget: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.2)]
    goal_bias: f64,
    /// Stop imomd after this many iterations even if budget remains.
    #[arg(long)]
    max_iterations: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 5)]
    min_order: usize,
    #[arg(long, default_value_t = 9)]
    max_order: usize,
    /// Instances per graph kind and order.
    #[arg(long, default_value_t = 300)]
    instances: usize,
    #[arg(long, value_delimiter = ',', default_value = "complete,incomplete")]
    graphs: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Random geometric graph with a random scenario.
    Geometric {
        #[arg(long, default_value_t = 100)]
        nodes: usize,
        /// Connection radius in unit-square coordinates.
        #[arg(long, default_value_t = 0.15)]
        radius: f64,
        #[arg(long, default_value_t = 5)]
        objectives: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Walled chamber around the source with a single corridor out.
    BugTrap {
        #[arg(long, default_value_t = 40)]
        chamber: usize,
        #[arg(long, default_value_t = 5)]
        corridor: usize,
        #[arg(long, default_value_t = 1)]
        entry_width: usize,
        /// Replace the corridor by one long bridge edge.
        #[arg(long)]
        water_gap: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::BenchOracle(args) => cmd_bench(args).map(|_| ExitCode::SUCCESS),
        Command::Gen { kind } => cmd_gen(kind).map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn writer(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_run(args: RunArgs) -> anyhow::Result<ExitCode> {
    let graph_bytes = read(&args.graph)?;
    let scenario_bytes = read(&args.scenario)?;
    let name = args.graph.to_string_lossy();
    let (graph, ids) = load_graph_bytes(&name, &graph_bytes).with_context(|| format!("in {}", args.graph.display()))?;
    let text = std::str::from_utf8(&scenario_bytes).with_context(|| format!("{} is not UTF-8", args.scenario.display()))?;
    let spec = parse_scenario(text).with_context(|| format!("in {}", args.scenario.display()))?;
    let dests = resolve_scenario(&spec, &ids).with_context(|| format!("in {}", args.scenario.display()))?;

    let cfg = RunConfig {
        algo: match args.algo {
            AlgoArg::Imomd => Algo::Imomd,
            AlgoArg::Biastar => Algo::Biastar,
            AlgoArg::Anastar => Algo::Anastar,
        },
        budget: args.budget,
        seed: args.seed,
        goal_bias: args.goal_bias,
        max_iterations: args.max_iterations,
    };
    cfg.planner_config().validate()?;

    let mut out = writer(args.out.as_deref())?;
    if let Format::Csv = args.format {
        writeln!(out, "{}", report::TRACE_CSV_HEADER)?;
    }
    let mut io_err = None;
    let provenance = Provenance::of(&graph_bytes, &scenario_bytes);
    let rep = report::execute(&graph, &ids, &dests, &cfg, provenance, |row| {
        let line = match args.format {
            Format::Jsonl => report::trace_jsonl(row),
            Format::Csv => report::trace_csv(row),
        };
        if io_err.is_none() {
            io_err = writeln!(out, "{line}").and_then(|_| out.flush()).err();
        }
    })?;
    if let Some(e) = io_err {
        return Err(e).context("writing trace");
    }
    if let Format::Jsonl = args.format {
        writeln!(out, "{}", report::summary_jsonl(&rep))?;
    }
    out.flush()?;
    if rep.solved() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("no route found ({} nodes explored)", rep.explored_nodes);
        Ok(ExitCode::from(EXIT_NO_PATH_YET))
    }
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<()> {
    let graphs = args.graphs.iter().map(|g| g.parse::<GraphKind>()).collect::<Result<Vec<_>, _>>()?;
    let cfg = BenchConfig {
        orders: args.min_order..=args.max_order,
        instances: args.instances,
        seed: args.seed,
        graphs,
        ..BenchConfig::default()
    };
    let batches = bench_oracle(&cfg)?;
    for b in &batches {
        eprintln!(
            "{} order {}: rho_mean {:.4} rho_std {:.4} rho_optimality {:.3} rho_worst {:.4}",
            b.graph, b.order, b.stats.rho_mean, b.stats.rho_std, b.stats.rho_optimality, b.stats.rho_worst
        );
    }
    write_bench_csv(&batches, writer(args.out.as_deref())?)?;
    Ok(())
}

fn write_fixture(dir: &Path, graph: &RoutingGraph, scenarios: &[(&str, ScenarioSpec)]) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let files = std::iter::once(("graph.el", write_edgelist(graph, &IdMap::identity(graph.node_count()))))
        .chain(scenarios.iter().map(|(name, s)| (*name, s.to_text())));
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_gen(kind: GenKind) -> anyhow::Result<()> {
    match kind {
        GenKind::Geometric { nodes, radius, objectives, seed, out } => {
            if nodes < 2 || !(radius > 0.0) {
                bail!("need at least 2 nodes and a positive radius");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let graph = random_geometric(nodes, radius, &mut rng);
            let scenario = random_scenario(&graph, objectives, &mut rng)?;
            write_fixture(&out, &graph, &[("scenario.txt", scenario)])
        }
        GenKind::BugTrap { chamber, corridor, entry_width, water_gap, out } => {
            let trap = BugTrapSpec { chamber, corridor, entry_width, water_gap }.generate()?;
            write_fixture(
                &out,
                &trap.graph,
                &[("scenario.txt", trap.scenario(false)), ("scenario_pseudo.txt", trap.scenario(true))],
            )
        }
    }
}
