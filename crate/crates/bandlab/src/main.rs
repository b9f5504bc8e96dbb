//! Command-line front end: bandwidth solvers, cluster-deletion tools, the
//! bin-packing reduction, instance generation, and cross-check harnesses.
//!
//! Exit codes: 0 success (or decision YES), 1 decision NO or failed checks,
//! 2 usage/input error, 3 resource limit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bandlab::cluster::{extended_deletion_set, min_cluster_deletion_set};
use bandlab::crosscheck::{crosscheck, crosscheck_reduction, CrosscheckSpec};
use bandlab::exact::{
    bandwidth_bruteforce_with, bandwidth_decide_with, bandwidth_min_with, ExactConfig,
};
use bandlab::fpt::{fpt_decide, fpt_min, FptConfig};
use bandlab::gen::{generate_instance, GenSpec};
use bandlab::graph::{stretch, Graph, Ordering};
use bandlab::io::{
    deletion_set_from_json, deletion_set_to_json, ordering_from_json, ordering_to_json,
    parse_dimacs, write_dimacs,
};
use bandlab::reduction::{
    build_reduction, check_structure_claims, cvd_witness, ubp_solve, witness_ordering,
    BinPackingInstance,
};
use bandlab::{Error, Result};

#[derive(Parser)]
#[command(name = "bandlab", version, about = "Bandwidth solver toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve or decide bandwidth on a graph file.
    Bandwidth(BandwidthArgs),
    /// Compute a minimum cluster deletion set.
    Cvd(CvdArgs),
    /// Build the bandwidth instance for a bin-packing instance.
    Reduce(ReduceArgs),
    /// Solve equal-sum bin packing.
    Ubp(UbpArgs),
    /// Verify an ordering against a graph.
    Verify(VerifyArgs),
    /// Generate a seeded instance with a planted deletion set.
    Gen(GenArgs),
    /// Compare all bandwidth solvers on seeded instances.
    Crosscheck(CrosscheckArgs),
    /// Sweep bin-packing instances against the constructed graphs.
    CrosscheckReduction(CrosscheckReductionArgs),
}

#[derive(Args)]
struct BandwidthArgs {
    /// exact (brute force), dp (window search), or fpt (parameterized).
    #[arg(value_parser = ["exact", "dp", "fpt"])]
    solver: String,
    /// Graph in DIMACS format.
    #[arg(long)]
    graph: PathBuf,
    /// Decide stretch <= b instead of minimizing.
    #[arg(long)]
    b: Option<usize>,
    /// Write the witness ordering as JSON.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    /// Use this cluster deletion set (JSON) instead of computing one (fpt only).
    #[arg(long)]
    deletion_set: Option<PathBuf>,
    /// Pin the reported witness to the first feasible order of S' (fpt only).
    #[arg(long)]
    deterministic: bool,
    /// Write one LP export per attempted order of S' (fpt only).
    #[arg(long)]
    export_lp: Option<PathBuf>,
    /// Node budget for the feasibility solver (fpt only).
    #[arg(long)]
    node_budget: Option<u64>,
    /// Vertex cap for the brute-force solver.
    #[arg(long)]
    max_brute_n: Option<usize>,
}

#[derive(Args)]
struct CvdArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Write the deletion set as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Comma-separated item sizes, e.g. 1,2,1.
    #[arg(long)]
    items: String,
    #[arg(long)]
    bins: usize,
    #[arg(long)]
    graph_out: PathBuf,
    #[arg(long)]
    labels_out: Option<PathBuf>,
    /// Solve the packing and write the induced low-stretch ordering.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct UbpArgs {
    #[arg(long)]
    items: String,
    #[arg(long)]
    bins: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    ordering: PathBuf,
    /// Also check stretch <= b.
    #[arg(long)]
    b: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    cvd: usize,
    #[arg(long, default_value_t = 3)]
    clique_cap: usize,
    #[arg(long, default_value_t = 1)]
    types: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    graph_out: PathBuf,
    /// Write the planted deletion set as JSON.
    #[arg(long)]
    set_out: Option<PathBuf>,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[arg(long, default_value_t = 25)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    min_n: usize,
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    max_cvd: usize,
    #[arg(long, default_value_t = 2)]
    max_types: usize,
    #[arg(long, default_value_t = 3)]
    clique_cap: usize,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CrosscheckReductionArgs {
    #[arg(long, default_value_t = 4)]
    max_sum: u64,
    #[arg(long, default_value_t = 2)]
    bins: usize,
    #[arg(long)]
    json: bool,
}

fn env_var<T: std::str::FromStr>(name: &str) -> Option<T> {
    std::env::var(name).ok()?.parse().ok()
}

fn exact_config(max_brute_n: Option<usize>) -> ExactConfig {
    let mut cfg = ExactConfig::default();
    if let Some(n) = env_var::<usize>("BANDLAB_MAX_BRUTE_N") {
        cfg.max_brute_n = n;
    }
    if let Some(n) = max_brute_n {
        cfg.max_brute_n = n;
    }
    cfg
}

fn fpt_config(node_budget: Option<u64>, export_lp: Option<PathBuf>) -> FptConfig {
    let mut cfg = FptConfig::default();
    if let Some(b) = env_var::<u64>("BANDLAB_NODE_BUDGET") {
        cfg.ilp_node_budget = b;
    }
    if let Some(b) = node_budget {
        cfg.ilp_node_budget = b;
    }
    cfg.export_lp_dir = export_lp;
    cfg
}

fn parse_items(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad item value {part:?}")))
        })
        .collect()
}

fn read_graph(path: &PathBuf) -> Result<Graph> {
    parse_dimacs(&std::fs::read_to_string(path)?)
}

/// Re-verify a witness against the graph before persisting it.
fn write_witness(g: &Graph, pi: &Ordering, b: usize, path: &PathBuf) -> Result<()> {
    let s = stretch(g, pi)?;
    if s > b {
        return Err(Error::Internal(format!(
            "refusing to write witness of stretch {s} > {b}"
        )));
    }
    std::fs::write(path, ordering_to_json(pi))?;
    Ok(())
}

fn run_bandwidth(args: BandwidthArgs) -> Result<bool> {
    let g = read_graph(&args.graph)?;
    let exact_cfg = exact_config(args.max_brute_n);
    let mut fpt_cfg = fpt_config(args.node_budget, args.export_lp.clone());
    fpt_cfg.deterministic = args.deterministic || fpt_cfg.deterministic;
    let provided_set = match &args.deletion_set {
        Some(path) => Some(deletion_set_from_json(&g, &std::fs::read_to_string(path)?)?),
        None => None,
    };
    match args.b {
        Some(b) => {
            let (yes, witness) = match args.solver.as_str() {
                "exact" => {
                    let (opt, pi) = bandwidth_bruteforce_with(&g, &exact_cfg)?;
                    (opt <= b, (opt <= b).then_some(pi))
                }
                "dp" => bandwidth_decide_with(&g, b, &exact_cfg)?,
                "fpt" => fpt_decide(&g, b, provided_set.as_ref(), &fpt_cfg)?,
                _ => unreachable!("clap validates the solver name"),
            };
            if yes {
                println!("YES");
                if let (Some(path), Some(pi)) = (&args.witness_out, &witness) {
                    write_witness(&g, pi, b, path)?;
                }
            } else {
                println!("NO");
            }
            Ok(yes)
        }
        None => {
            let (opt, pi) = match args.solver.as_str() {
                "exact" => bandwidth_bruteforce_with(&g, &exact_cfg)?,
                "dp" => bandwidth_min_with(&g, &exact_cfg)?,
                "fpt" => fpt_min(&g, provided_set.as_ref(), &fpt_cfg)?,
                _ => unreachable!("clap validates the solver name"),
            };
            println!("{opt}");
            if let Some(path) = &args.witness_out {
                write_witness(&g, &pi, opt, path)?;
            }
            Ok(true)
        }
    }
}

fn run_cvd(args: CvdArgs) -> Result<bool> {
    let g = read_graph(&args.graph)?;
    let set = min_cluster_deletion_set(&g)?;
    println!("{}", set.members().len());
    let eds = extended_deletion_set(&g, &set)?;
    println!(
        "clusters {} types {} k' {}",
        set.clusters().len(),
        eds.types().len(),
        eds.k_prime()
    );
    if let Some(path) = &args.out {
        std::fs::write(path, deletion_set_to_json(&set))?;
    }
    Ok(true)
}

fn run_reduce(args: ReduceArgs) -> Result<bool> {
    let inst = BinPackingInstance::new(parse_items(&args.items)?, args.bins)?;
    let (g, b, labels) = build_reduction(&inst)?;
    println!("b {b}");
    println!("n {}", g.n());
    println!("m {}", g.edge_count());
    println!("cvd-witness {}", cvd_witness(&labels).len());
    std::fs::write(&args.graph_out, write_dimacs(&g))?;
    if let Some(path) = &args.labels_out {
        std::fs::write(path, labels.to_json())?;
    }
    if let Some(path) = &args.witness_out {
        match ubp_solve(&inst)? {
            Some(parts) => {
                let pi = witness_ordering(&g, &labels, &parts)?;
                let report = check_structure_claims(&g, &labels, &pi, b)?;
                if !report.all_hold() {
                    return Err(Error::Internal(
                        "witness ordering fails the structure claims".into(),
                    ));
                }
                write_witness(&g, &pi, b, path)?;
            }
            None => {
                println!("no packing; witness not written");
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn run_ubp(args: UbpArgs) -> Result<bool> {
    let inst = BinPackingInstance::new(parse_items(&args.items)?, args.bins)?;
    match ubp_solve(&inst)? {
        Some(parts) => {
            let rendered: Vec<String> = parts
                .iter()
                .map(|bin| {
                    bin.iter()
                        .map(|&j| inst.items()[j].to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            println!("{}", rendered.join(" | "));
            Ok(true)
        }
        None => {
            println!("NONE");
            Ok(false)
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<bool> {
    let g = read_graph(&args.graph)?;
    let pi = ordering_from_json(&std::fs::read_to_string(&args.ordering)?)?;
    let s = stretch(&g, &pi)?;
    println!("stretch {s}");
    match args.b {
        Some(b) if s > b => {
            println!("EXCEEDS {b}");
            Ok(false)
        }
        _ => Ok(true),
    }
}

fn run_gen(args: GenArgs) -> Result<bool> {
    let spec = GenSpec {
        n: args.n,
        cvd: args.cvd,
        clique_cap: args.clique_cap,
        cluster_types: args.types,
    };
    let (g, set) = generate_instance(&spec, args.seed)?;
    println!("n {} m {}", g.n(), g.edge_count());
    std::fs::write(&args.graph_out, write_dimacs(&g))?;
    if let Some(path) = &args.set_out {
        std::fs::write(path, deletion_set_to_json(&set))?;
    }
    Ok(true)
}

fn run_crosscheck(args: CrosscheckArgs) -> Result<bool> {
    let spec = CrosscheckSpec {
        min_n: args.min_n,
        max_n: args.max_n,
        max_cvd: args.max_cvd,
        max_types: args.max_types,
        clique_cap: args.clique_cap,
    };
    let report = crosscheck(args.count, args.seed, &spec)?;
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.passed())
}

fn run_crosscheck_reduction(args: CrosscheckReductionArgs) -> Result<bool> {
    let report = crosscheck_reduction(args.max_sum, args.bins)?;
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bandwidth(args) => run_bandwidth(args),
        Command::Cvd(args) => run_cvd(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Ubp(args) => run_ubp(args),
        Command::Verify(args) => run_verify(args),
        Command::Gen(args) => run_gen(args),
        Command::Crosscheck(args) => run_crosscheck(args),
        Command::CrosscheckReduction(args) => run_crosscheck_reduction(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
