use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use multicut::bipedal::{bipedal_tree, NoReason};
use multicut::compression::{solve, solve_star, Mode, SolveOptions, Stats, Status};
use multicut::edge::{solve_edge, verify_edges, DEFAULT_VERTEX_CAP};
use multicut::format::{parse_instance, InstanceFile, Kind};
use multicut::generate::{planted_instance, random_instance, PlantedParams, RandomParams};
use multicut::graph::shadow;
use multicut::oracle::{
    brute_edge_multicut, brute_plain, brute_star, closest_sets, has_shadowless_solution, verify,
    Certificate, Target,
};
use multicut::rng::stream;
use multicut::separators::enumerate_important;
use multicut::shadow::{
    deterministic_sets, exact_shadow, exhaustive_sets, random_set, DEFAULT_EMISSION_CAP,
};
use multicut::twosat::{almost2sat_vars, parse_dimacs};
use multicut::VertexSet;

const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "multicut",
    version,
    about = "Exact solver for undirected vertex and edge multicut"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolveFlags {
    /// Maximum cutset size.
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value = "sampled", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restart budget for sampled mode.
    #[arg(long)]
    restarts: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Cap on the number of sets deterministic mode may plan.
    #[arg(long, default_value_t = DEFAULT_EMISSION_CAP)]
    emission_cap: u128,
    #[arg(long)]
    json: bool,
    /// Report wall_ms as 0 so repeated runs print identical output.
    #[arg(long)]
    no_timing: bool,
}

impl SolveFlags {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            mode: self.mode,
            seed: self.seed,
            restarts: self.restarts,
            threads: self.threads.max(1),
            emission_cap: self.emission_cap,
            ..Default::default()
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    Planted,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleQuery {
    Multicut,
    Star,
    Edge,
    Closest,
    Shadowless,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a vertex instance; files with `w` lines are solved as star
    /// instances and edge files are routed to the edge solver.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Solve an instance as edge multicut.
    SolveEdge {
        file: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
        /// Refuse when (budget + 1) * n exceeds this.
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        vertex_cap: usize,
    },
    /// List all important separators of size at most the budget.
    ImportantSeps {
        file: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        source: Vec<usize>,
        #[arg(long, num_args = 1.., required = true)]
        sink: Vec<usize>,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print candidate shadow-covering sets Z for a set W.
    SampleZ {
        file: PathBuf,
        /// W vertices; defaults to the file's `w` lines.
        #[arg(long, num_args = 1..)]
        w: Vec<usize>,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value = "sampled", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sets to print.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_EMISSION_CAP)]
        emission_cap: u128,
    },
    /// Shadow and exact shadow of a cut with respect to W.
    Shadows {
        file: PathBuf,
        #[arg(long, num_args = 1..)]
        w: Vec<usize>,
        #[arg(long, num_args = 0..)]
        cut: Vec<usize>,
    },
    /// Run the bipedal reduction on a star instance and summarize the tree.
    Bipedal {
        file: PathBuf,
        #[arg(long)]
        budget: usize,
    },
    /// Minimum variable deletion making a DIMACS 2-CNF satisfiable.
    Almost2sat {
        file: PathBuf,
        #[arg(long)]
        budget: usize,
    },
    /// Brute-force reference answers for small instances.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(long, value_enum, default_value = "multicut")]
        query: OracleQuery,
    },
    /// Print a generated instance.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Number of terminal pairs.
        #[arg(long, default_value_t = 3)]
        pairs: usize,
        /// Edge probability for random instances.
        #[arg(long, default_value_t = 0.3)]
        prob: f64,
        /// Hidden cut size for planted instances.
        #[arg(long, default_value_t = 2)]
        cut: usize,
        /// Extra edge probability inside planted sides.
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        /// Emit an edge instance (random only).
        #[arg(long)]
        edge: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve a batch of planted instances and report timings.
    Bench {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        cut: usize,
        #[arg(long, default_value_t = 6)]
        pairs: usize,
        #[arg(long, default_value_t = 0.15)]
        density: f64,
        #[arg(long, default_value_t = 5)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "sampled", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

/// Failure to read or interpret the input.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<InstanceFile, InputError> {
    let text = read(path)?;
    parse_instance(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// 1-based ids on the command line to a 0-based set.
fn id_set(f: &InstanceFile, ids: &[usize], what: &str) -> Result<VertexSet, InputError> {
    let n = f.g.universe();
    let mut s = VertexSet::new(n);
    for &v in ids {
        if v == 0 || v > n {
            return Err(InputError(format!(
                "{what} vertex {v} out of range 1..={n}"
            )));
        }
        s.insert(v - 1);
    }
    Ok(s)
}

fn one_based(s: &VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

fn show(s: &VertexSet) -> String {
    let ids = one_based(s);
    if ids.is_empty() {
        "{}".to_string()
    } else {
        ids.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn status_code(status: &Status) -> u8 {
    match status {
        Status::Solved(_) => 0,
        Status::No => 1,
        Status::Inconclusive(_) => 2,
    }
}

struct Outcome {
    status: Status,
    cutset: Option<Value>,
    size: Option<usize>,
    certificate: Option<Certificate>,
    stats: Stats,
}

fn print_outcome(o: &Outcome, flags: &SolveFlags) {
    let mut stats = o.stats;
    if flags.no_timing {
        stats.wall_ms = 0;
    }
    if let Status::Inconclusive(why) = &o.status {
        eprintln!("inconclusive: {why}");
    }
    if flags.json {
        let doc = json!({
            "status": o.status.name(),
            "cutset": o.cutset,
            "size": o.size,
            "certificate": o.certificate,
            "stats": stats,
            "mode": flags.mode.name(),
            "seed": flags.seed,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        );
        return;
    }
    let mut out = String::new();
    let _ = writeln!(out, "status: {}", o.status.name());
    if let (Some(c), Some(size)) = (&o.cutset, o.size) {
        let _ = writeln!(out, "cutset: {c}");
        let _ = writeln!(out, "size: {size}");
    }
    if let Some(cert) = &o.certificate {
        let checks: Vec<String> = cert
            .checks
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(
            out,
            "certificate: {} ({})",
            if cert.all_pass { "pass" } else { "FAIL" },
            checks.join(", ")
        );
    }
    let _ = writeln!(
        out,
        "stats: flow_calls={} instances_emitted={} restarts_used={} wall_ms={}",
        stats.flow_calls, stats.instances_emitted, stats.restarts_used, stats.wall_ms
    );
    print!("{out}");
}

fn vertex_outcome(status: Status, stats: Stats, certificate: Option<Certificate>) -> Outcome {
    let (cutset, size) = match &status {
        Status::Solved(s) => (Some(json!(one_based(s))), Some(s.len())),
        _ => (None, None),
    };
    Outcome {
        status,
        cutset,
        size,
        certificate,
        stats,
    }
}

fn run_edge(f: &InstanceFile, flags: &SolveFlags, cap: usize) -> Result<Outcome, InputError> {
    let rep = solve_edge(&f.g, &f.t, flags.budget, &flags.options(), cap)?;
    let (cutset, size) = match &rep.edges {
        Some(e) => {
            let ids: Vec<[usize; 2]> = e.iter().map(|&(u, v)| [u + 1, v + 1]).collect();
            (Some(json!(ids)), Some(e.len()))
        }
        None => (None, None),
    };
    Ok(Outcome {
        status: rep.inner.status,
        cutset,
        size,
        certificate: rep.certificate,
        stats: rep.inner.stats,
    })
}

fn cmd_solve(file: &Path, flags: &SolveFlags) -> Result<u8, InputError> {
    let f = load(file)?;
    let outcome = if f.kind == Kind::Edge {
        run_edge(&f, flags, DEFAULT_VERTEX_CAP)?
    } else if let Some(star) = f.to_star(flags.budget) {
        let start = Instant::now();
        let (status, mut stats) = solve_star(&star, &flags.options(), &[]);
        stats.wall_ms = start.elapsed().as_millis() as u64;
        let cert = match &status {
            Status::Solved(s) => Some(verify(Target::Star(&star), s)),
            _ => None,
        };
        vertex_outcome(status, stats, cert)
    } else {
        let rep = solve(&f.to_multicut(flags.budget), &flags.options());
        vertex_outcome(rep.status, rep.stats, rep.certificate)
    };
    print_outcome(&outcome, flags);
    Ok(status_code(&outcome.status))
}

fn cmd_solve_edge(file: &Path, flags: &SolveFlags, cap: usize) -> Result<u8, InputError> {
    let f = load(file)?;
    let outcome = run_edge(&f, flags, cap)?;
    print_outcome(&outcome, flags);
    Ok(status_code(&outcome.status))
}

fn cmd_important(
    file: &Path,
    source: &[usize],
    sink: &[usize],
    budget: usize,
    as_json: bool,
) -> Result<u8, InputError> {
    let f = load(file)?;
    let x = id_set(&f, source, "source")?;
    let y = id_set(&f, sink, "sink")?;
    if x.intersects(&y) {
        return Err(InputError("source and sink overlap".into()));
    }
    let seps = enumerate_important(&f.g, &x, &y, budget);
    if as_json {
        let list: Vec<Vec<usize>> = seps.iter().map(|s| one_based(&s.set)).collect();
        println!("{}", json!({ "count": seps.len(), "separators": list }));
    } else {
        println!("{} important separators", seps.len());
        for s in &seps {
            println!("{}", show(&s.set));
        }
    }
    Ok(0)
}

fn w_or_file(f: &InstanceFile, w: &[usize]) -> Result<VertexSet, InputError> {
    if !w.is_empty() {
        return id_set(f, w, "w");
    }
    f.w.clone()
        .ok_or_else(|| InputError("no W given: pass --w or add w lines to the file".into()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample_z(
    file: &Path,
    w: &[usize],
    budget: usize,
    mode: Mode,
    seed: u64,
    count: usize,
    cap: u128,
) -> Result<u8, InputError> {
    let f = load(file)?;
    let w = w_or_file(&f, w)?;
    let sets: Vec<VertexSet> = match mode {
        Mode::Sampled => (0..count as u64)
            .map(|j| random_set(&f.g, &w, budget, &mut stream(seed, &[j])))
            .collect(),
        Mode::Deterministic => deterministic_sets(&f.g, &w, budget, cap)?
            .take(count)
            .collect(),
        Mode::ExhaustiveZ => exhaustive_sets(&f.g, &w, budget)?
            .into_iter()
            .take(count)
            .collect(),
    };
    for z in &sets {
        println!("{}", show(z));
    }
    Ok(0)
}

fn cmd_shadows(file: &Path, w: &[usize], cut: &[usize]) -> Result<u8, InputError> {
    let f = load(file)?;
    let w = w_or_file(&f, w)?;
    let s = id_set(&f, cut, "cut")?;
    if s.intersects(&w) {
        return Err(InputError("cut must avoid W".into()));
    }
    println!("shadow: {}", show(&shadow(&f.g, &w, &s)));
    println!("exact shadow: {}", show(&exact_shadow(&f.g, &w, &s)));
    Ok(0)
}

fn reason(r: &NoReason) -> String {
    match r {
        NoReason::PairInsideW(w) => format!("pair ({0}, {0}) inside W", w + 1),
        NoReason::BudgetExhausted => "budget exhausted".into(),
        NoReason::NoSmallSeparator(w) => format!("vertex {} of W has no small separator", w + 1),
        NoReason::TooManyNontrivial(k) => format!("{k} components need a deletion"),
        NoReason::NoMultiwayCut => "no multiway cut within budget".into(),
    }
}

fn cmd_bipedal(file: &Path, budget: usize) -> Result<u8, InputError> {
    let f = load(file)?;
    let star = f
        .to_star(budget)
        .ok_or_else(|| InputError("bipedal needs a star instance (w lines)".into()))?;
    let tree = bipedal_tree(&star);
    println!("solved base cases: {}", tree.solved.len());
    for s in &tree.solved {
        println!("  cutset {}", show(s));
    }
    println!("no base cases: {}", tree.no.len());
    for r in &tree.no {
        println!("  {}", reason(r));
    }
    println!("shattering sets: {}", tree.shattering.len());
    for r in &tree.shattering {
        println!(
            "  component {} legs {} set {}",
            show(&r.component),
            show(&r.legs),
            show(&r.b)
        );
    }
    println!("bipedal leaves: {}", tree.leaves.len());
    for l in &tree.leaves {
        println!(
            "  deleted {} W {} budget {} vertices {}",
            show(&l.deleted),
            show(&l.instance.w),
            l.instance.p,
            l.instance.g.vertex_count()
        );
    }
    Ok(0)
}

fn cmd_almost2sat(file: &Path, budget: usize) -> Result<u8, InputError> {
    let text = read(file)?;
    let f = parse_dimacs(&text)?;
    match almost2sat_vars(&f, budget) {
        Some(vars) => {
            let ids: Vec<String> = vars.iter().map(|v| (v + 1).to_string()).collect();
            println!(
                "delete {} variables: {}",
                vars.len(),
                if ids.is_empty() {
                    "{}".into()
                } else {
                    ids.join(" ")
                }
            );
            Ok(0)
        }
        None => {
            println!("no deletion of at most {budget} variables");
            Ok(1)
        }
    }
}

fn cmd_oracle(file: &Path, budget: usize, query: OracleQuery) -> Result<u8, InputError> {
    let f = load(file)?;
    let found = |s: Option<VertexSet>| match s {
        Some(s) => {
            println!("minimum: {} (size {})", show(&s), s.len());
            0
        }
        None => {
            println!("none within budget {budget}");
            1
        }
    };
    let code = match query {
        OracleQuery::Multicut => found(brute_plain(&f.to_multicut(budget))?),
        OracleQuery::Star | OracleQuery::Shadowless => {
            let star = f
                .to_star(budget)
                .ok_or_else(|| InputError("this query needs w lines".into()))?;
            if matches!(query, OracleQuery::Star) {
                found(brute_star(&star)?)
            } else {
                found(has_shadowless_solution(&star)?)
            }
        }
        OracleQuery::Edge => match brute_edge_multicut(&f.g, &f.t, budget)? {
            Some(e) => {
                let cert = verify_edges(&f.g, &f.t, budget, &e);
                let ids: Vec<String> = e
                    .iter()
                    .map(|&(u, v)| format!("{}-{}", u + 1, v + 1))
                    .collect();
                println!(
                    "minimum: {} (size {}, verified {})",
                    ids.join(" "),
                    e.len(),
                    cert.all_pass
                );
                0
            }
            None => {
                println!("none within budget {budget}");
                1
            }
        },
        OracleQuery::Closest => {
            let w =
                f.w.clone()
                    .ok_or_else(|| InputError("this query needs w lines".into()))?;
            let sets = closest_sets(&f.g, &w, budget)?;
            println!("{} closest sets", sets.len());
            for r in &sets {
                println!("{}  |N| = {}", show(r), f.g.open_neighborhood(r).len());
            }
            0
        }
    };
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKind,
    n: usize,
    pairs: usize,
    prob: f64,
    cut: usize,
    density: f64,
    edge: bool,
    seed: u64,
) -> Result<u8, InputError> {
    let f = match kind {
        GenKind::Random => random_instance(
            RandomParams {
                n,
                edge_prob: prob,
                pairs,
            },
            if edge { Kind::Edge } else { Kind::Vertex },
            seed,
        ),
        GenKind::Planted => {
            if n < cut + 2 {
                return Err(InputError(format!(
                    "planted instances need n >= cut + 2 (n = {n}, cut = {cut})"
                )));
            }
            planted_instance(
                PlantedParams {
                    n,
                    cut,
                    pairs,
                    density,
                },
                seed,
            )
        }
    };
    print!("{}", f.print());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    n: usize,
    cut: usize,
    pairs: usize,
    density: f64,
    count: u64,
    seed: u64,
    mode: Mode,
    threads: usize,
) -> Result<u8, InputError> {
    if n < cut + 2 {
        return Err(InputError(format!(
            "need n >= cut + 2 (n = {n}, cut = {cut})"
        )));
    }
    let opts = SolveOptions {
        mode,
        seed,
        threads: threads.max(1),
        ..Default::default()
    };
    println!(
        "{:>6} {:>6} {:>13} {:>8} {:>10} {:>9}",
        "seed", "edges", "status", "size", "flows", "ms"
    );
    let mut worst = 0;
    for s in seed..seed + count {
        let f = planted_instance(
            PlantedParams {
                n,
                cut,
                pairs,
                density,
            },
            s,
        );
        let rep = solve(&f.to_multicut(cut), &opts);
        let size = match &rep.status {
            Status::Solved(c) => c.len().to_string(),
            _ => "-".into(),
        };
        worst = worst.max(status_code(&rep.status));
        println!(
            "{:>6} {:>6} {:>13} {:>8} {:>10} {:>9}",
            s,
            f.g.edge_count(),
            rep.status.name(),
            size,
            rep.stats.flow_calls,
            rep.stats.wall_ms
        );
    }
    Ok(worst)
}

fn run(cli: Cli) -> Result<u8, InputError> {
    match cli.command {
        Command::Solve { file, flags } => cmd_solve(&file, &flags),
        Command::SolveEdge {
            file,
            flags,
            vertex_cap,
        } => cmd_solve_edge(&file, &flags, vertex_cap),
        Command::ImportantSeps {
            file,
            source,
            sink,
            budget,
            json,
        } => cmd_important(&file, &source, &sink, budget, json),
        Command::SampleZ {
            file,
            w,
            budget,
            mode,
            seed,
            count,
            emission_cap,
        } => cmd_sample_z(&file, &w, budget, mode, seed, count, emission_cap),
        Command::Shadows { file, w, cut } => cmd_shadows(&file, &w, &cut),
        Command::Bipedal { file, budget } => cmd_bipedal(&file, budget),
        Command::Almost2sat { file, budget } => cmd_almost2sat(&file, budget),
        Command::Oracle {
            file,
            budget,
            query,
        } => cmd_oracle(&file, budget, query),
        Command::Gen {
            kind,
            n,
            pairs,
            prob,
            cut,
            density,
            edge,
            seed,
        } => cmd_gen(kind, n, pairs, prob, cut, density, edge, seed),
        Command::Bench {
            n,
            cut,
            pairs,
            density,
            count,
            seed,
            mode,
            threads,
        } => cmd_bench(n, cut, pairs, density, count, seed, mode, threads),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if help { 0 } else { EXIT_INPUT });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
