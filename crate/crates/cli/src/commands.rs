use crate::{CompareArgs, GenerateArgs, GraphArgs, OracleArgs, SolveArgs};
use anyhow::{anyhow, Context, Result};
use mmcp_core::biobjective::{
    brute_force_frontier, read_frontier_csv, verify_frontier, write_frontier_csv,
    EnumerateConfig, Frontier, FrontierInputs, OracleError,
};
use mmcp_core::instance::{
    generate_instance, load_instance, save_instance, GeneratorParams, Instance,
};
use mmcp_core::models::{reference_warm_start, Formulation, ViLevel};
use mmcp_core::registry;
use mmcp_core::separation::write_cut_log;
use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// Error classes map to exit codes: bad input 1, internal 2.
#[derive(Debug)]
pub struct BadInput;

pub fn classify(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<BadInput>().is_some() {
        1
    } else {
        2
    }
}

fn bad_input(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(msg.into()).context(BadInput)
}

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("invalid input")
    }
}

pub fn generate(args: GenerateArgs) -> Result<ExitCode> {
    if args.users == 0 {
        return Err(bad_input("--users must be at least 1"));
    }
    if args.trips_min > args.trips_max || args.tasks_min > args.tasks_max {
        return Err(bad_input("empty trips/tasks range"));
    }
    let params = GeneratorParams {
        n_users: args.users,
        trips_per_user: args.trips_min..=args.trips_max,
        tasks_per_trip: args.tasks_min..=args.tasks_max,
        n_depots: args.depots,
        area: args.area,
    };
    let instance = generate_instance(&params, args.seed)
        .map_err(|e| bad_input(format!("generation failed: {e}")))?;
    fs::create_dir_all(&args.out)?;
    let name = format!("E_{}_{}", args.users, args.index);
    let path = args.out.join(&name);
    fs::write(&path, save_instance(&instance)).with_context(|| format!("writing {path:?}"))?;
    println!(
        "wrote {} users={} trips={} tasks={} depots={}",
        path.display(),
        instance.users.len(),
        instance.trips.len(),
        instance.trips.iter().map(|t| t.tasks.len()).sum::<usize>(),
        instance.depots.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)
        .map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))?;
    load_instance(&text).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

fn parse_budget(raw: &str) -> Result<Duration> {
    let raw = raw.trim();
    let (value, unit): (&str, &str) = if let Some(v) = raw.strip_suffix("ms") {
        (v, "ms")
    } else if let Some(v) = raw.strip_suffix('s') {
        (v, "s")
    } else {
        (raw, "s")
    };
    let n: f64 = value
        .parse()
        .map_err(|_| bad_input(format!("bad budget `{raw}`")))?;
    Ok(if unit == "ms" {
        Duration::from_secs_f64(n / 1000.0)
    } else {
        Duration::from_secs_f64(n)
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into())
}

pub fn solve(args: SolveArgs) -> Result<ExitCode> {
    let instance = read_instance(&args.instance)?;
    let strategy = registry::variant(&args.variant)
        .ok_or_else(|| bad_input(format!("unknown variant `{}`", args.variant)))?;
    let method = registry::method(&args.method)
        .ok_or_else(|| bad_input(format!("unknown method `{}`", args.method)))?;
    let vi = ViLevel::parse(&args.vi)
        .ok_or_else(|| bad_input(format!("unknown vi level `{}`", args.vi)))?;
    let options = registry::BuildOptions {
        vi,
        reduce: !args.no_reduce,
    };
    let built = strategy
        .build(&instance, &options)
        .map_err(|e| bad_input(format!("assembly failed: {e}")))?;

    let deadline = match &args.budget {
        Some(raw) => Some(Instant::now() + parse_budget(raw)?),
        None => None,
    };
    let warm_start = if args.no_warm_start {
        None
    } else {
        reference_warm_start(&built.problem, &built.graph, &instance)
    };
    let inputs = FrontierInputs {
        problem: &built.problem,
        graph: &built.graph,
        instance: &instance,
    };
    let config = EnumerateConfig {
        propagate_cuts: args.propagate,
        warm_start,
        node_limit: args.node_limit,
        deadline,
    };
    let frontier = method.enumerate(&inputs, &config);
    verify_frontier(&frontier, &built.graph).map_err(|e| anyhow!("frontier check failed: {e}"))?;

    fs::create_dir_all(&args.out)?;
    let base = format!("{}_{}_{}", stem(&args.instance), args.variant, args.method);
    let frontier_path = args.out.join(format!("{base}.csv"));
    let mut buf = Vec::new();
    write_frontier_csv(&mut buf, &frontier)?;
    fs::write(&frontier_path, buf)?;

    let cuts_path = args.out.join(format!("{base}_cuts.csv"));
    let mut buf = Vec::new();
    write_cut_log(&mut buf, &frontier.cut_events)?;
    fs::write(&cuts_path, buf)?;

    let log_path = args.out.join(format!("{base}.log"));
    let cuts_per_iter = cuts_per_iteration(&frontier);
    let log = format!(
        "instance: {}\nvariant: {}\nmethod: {}\nvi: {}\npropagate: {}\nreduce: {}\nseed: {}\n\
         points: {}\nmip_solves: {}\ntotal_seconds: {:.3}\ntotal_cuts: {}\ncuts_per_iteration: {}\ntruncated: {}\n",
        args.instance.display(),
        args.variant,
        args.method,
        vi,
        args.propagate,
        !args.no_reduce,
        args.seed,
        frontier.points.len(),
        frontier.mip_solves,
        frontier.total_seconds,
        frontier.total_cuts(),
        cuts_per_iter,
        frontier.truncated,
    );
    fs::write(&log_path, log)?;

    println!(
        "frontier {}: {} points, {:.3}s, {} cuts ({}), solves {}, wrote {}{}",
        base,
        frontier.points.len(),
        frontier.total_seconds,
        frontier.total_cuts(),
        cuts_per_iter,
        frontier.mip_solves,
        frontier_path.display(),
        if frontier.truncated { ", TRUNCATED" } else { "" },
    );
    if std::env::var("MMCP_LP_STATS").is_ok() {
        use std::sync::atomic::Ordering;
        eprintln!(
            "lp stats: solves={} pivots={} lp_secs={:.2} nodes={} cb_calls={} cb_secs={:.2}",
            mmcp_core::mip::LP_SOLVES.load(Ordering::Relaxed),
            mmcp_core::mip::PIVOTS.load(Ordering::Relaxed),
            mmcp_core::mip::LP_NANOS.load(Ordering::Relaxed) as f64 / 1e9,
            mmcp_core::mip::NODES_TOTAL.load(Ordering::Relaxed),
            mmcp_core::mip::CB_CALLS.load(Ordering::Relaxed),
            mmcp_core::mip::CB_NANOS.load(Ordering::Relaxed) as f64 / 1e9,
        );
    }
    Ok(if frontier.truncated {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn cuts_per_iteration(frontier: &Frontier) -> String {
    let max_iter = frontier
        .cut_events
        .iter()
        .map(|(i, _)| *i)
        .max()
        .unwrap_or(0);
    let mut counts = vec![0usize; max_iter + 1];
    for (i, _) in &frontier.cut_events {
        counts[*i] += 1;
    }
    counts
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("/")
}

pub fn oracle(args: OracleArgs) -> Result<ExitCode> {
    let instance = read_instance(&args.instance)?;
    let formulation = match args.variant.as_str() {
        "m1" => Formulation::M1,
        "m2" => Formulation::M2,
        "m3" => Formulation::M3,
        "m4" => Formulation::M4,
        "m4b" => Formulation::M4b,
        other => return Err(bad_input(format!("unknown variant `{other}`"))),
    };
    let frontier = match brute_force_frontier(&instance, formulation) {
        Ok(f) => f,
        Err(e @ OracleError::OverLimit(_)) => return Err(bad_input(e.to_string())),
        Err(e) => return Err(anyhow!(e)),
    };
    fs::create_dir_all(&args.out)?;
    let path = args
        .out
        .join(format!("{}_{}_oracle.csv", stem(&args.instance), args.variant));
    let mut buf = Vec::new();
    write_frontier_csv(&mut buf, &frontier)?;
    fs::write(&path, buf)?;
    println!(
        "oracle frontier: {} points, wrote {}",
        frontier.points.len(),
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn compare(args: CompareArgs) -> Result<ExitCode> {
    let mut frontiers: Vec<(String, Vec<(i64, i64)>)> = Vec::new();
    for path in &args.frontiers {
        let file = fs::File::open(path)
            .map_err(|e| bad_input(format!("cannot open {}: {e}", path.display())))?;
        let frontier = read_frontier_csv(BufReader::new(file))
            .map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
        frontiers.push((stem(path), frontier.objective_pairs()));
    }
    for pair in frontiers.windows(2) {
        let (name_a, a) = &pair[0];
        let (name_b, b) = &pair[1];
        let verdict = if a == b {
            "equal".to_string()
        } else if weakly_dominates(a, b) {
            format!("{name_a} weakly dominates {name_b}")
        } else if weakly_dominates(b, a) {
            format!("{name_b} weakly dominates {name_a}")
        } else {
            "incomparable".to_string()
        };
        let range = |f: &[(i64, i64)]| match (f.first(), f.last()) {
            (Some(lo), Some(hi)) => format!("cost [{}..{}] pref [{}..{}]", lo.0, hi.0, hi.1, lo.1),
            _ => "empty".into(),
        };
        println!(
            "{name_a} ({} pts, {}) vs {name_b} ({} pts, {}): {verdict}",
            a.len(),
            range(a),
            b.len(),
            range(b),
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Every point of `b` is matched or beaten by some point of `a`.
fn weakly_dominates(a: &[(i64, i64)], b: &[(i64, i64)]) -> bool {
    b.iter()
        .all(|&(c, p)| a.iter().any(|&(ca, pa)| ca <= c && pa <= p))
}

pub fn graph(args: GraphArgs) -> Result<ExitCode> {
    let instance = read_instance(&args.instance)?;
    let strategy = registry::variant(&args.variant)
        .ok_or_else(|| bad_input(format!("unknown variant `{}`", args.variant)))?;
    let options = registry::BuildOptions {
        vi: ViLevel::None,
        reduce: !args.no_reduce,
    };
    let built = strategy
        .build(&instance, &options)
        .map_err(|e| bad_input(format!("assembly failed: {e}")))?;
    let mut buf = Vec::new();
    built.graph.write_legs_csv(&mut buf)?;
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(&args.out, buf)?;
    println!(
        "graph {}: {} nodes, {} legs, wrote {}",
        args.variant,
        built.graph.nodes.len(),
        built.graph.legs.len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}
