//! Command line front end: generate instances, build graphs, enumerate
//! Pareto frontiers under any variant and method combination, compare
//! frontier files, and run the brute-force oracle.
//!
//! Exit codes: 0 success, 1 bad input, 2 internal error, 3 budget exhausted
//! (a partial frontier was still written).

mod commands;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mmcp", version, about = "bi-objective multimodal car-sharing solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance file named E_<users>_<index>.
    Generate(GenerateArgs),
    /// Enumerate the Pareto frontier of an instance.
    Solve(SolveArgs),
    /// Exhaustive oracle frontier for a small instance (same CSV schema).
    Oracle(OracleArgs),
    /// Compare two or more frontier CSV files.
    Compare(CompareArgs),
    /// Dump the leg graph of a variant as CSV.
    Graph(GraphArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of users.
    #[arg(long)]
    users: usize,
    /// Instance index within the size group (file suffix).
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trips_min: usize,
    #[arg(long, default_value_t = 2)]
    trips_max: usize,
    #[arg(long, default_value_t = 1)]
    tasks_min: usize,
    #[arg(long, default_value_t = 2)]
    tasks_max: usize,
    #[arg(long, default_value_t = 2)]
    depots: usize,
    /// Side of the square service area, meters.
    #[arg(long, default_value_t = 5000)]
    area: i64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    instance: PathBuf,
    /// Model variant: m1, m2, m3, m4, m4b.
    #[arg(long)]
    variant: String,
    /// Frontier method: eps-cost, eps-pref, wbs.
    #[arg(long, default_value = "eps-cost")]
    method: String,
    /// Valid-inequality level: none, m3, m4.
    #[arg(long, default_value = "none")]
    vi: String,
    /// Carry separation cuts into subsequent iterations.
    #[arg(long)]
    propagate: bool,
    /// Keep every interval duplicate instead of merging equal-weight runs.
    #[arg(long)]
    no_reduce: bool,
    /// Skip the reference warm start.
    #[arg(long)]
    no_warm_start: bool,
    /// Wall-clock budget, e.g. "30s", "500ms" or plain seconds.
    #[arg(long)]
    budget: Option<String>,
    /// Node budget per single MIP solve.
    #[arg(long)]
    node_limit: Option<usize>,
    /// Output directory for the frontier CSV, cut log and run log.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Recorded in the run log; solving itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long)]
    variant: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Two or more frontier CSV files.
    #[arg(required = true, num_args = 2..)]
    frontiers: Vec<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    instance: PathBuf,
    #[arg(long)]
    variant: String,
    #[arg(long)]
    no_reduce: bool,
    /// Output file (CSV of legs).
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => commands::generate(args),
        Command::Solve(args) => commands::solve(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Compare(args) => commands::compare(args),
        Command::Graph(args) => commands::graph(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::classify(&err))
        }
    }
}
