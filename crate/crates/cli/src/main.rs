//! `drp`: verify, solve, generate and benchmark delay-robust routing
//! instances.
//!
//! Exit codes: 0 robust / yes, 1 not robust / no, 2 usage or parse error,
//! 3 search or oracle budget exceeded, 4 solvers disagree. Every failure
//! prints a single `error: ...` line on stderr.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use delay_robust::fes::feedback_edge_number;
use delay_robust::io::{parse_dimacs, parse_graph, parse_mcc, write_graph, GraphFile, Sidecar};
use delay_robust::pareto::{self, ParetoOptions};
use delay_robust::random::{graph_from_spec, RandomSpec};
use delay_robust::reductions::{
    brute_force_clique, brute_force_sat, mcc_to_mcpsat, mcpsat_to_drp, threesat_to_mcpsat, GadgetInstance,
};
use delay_robust::{
    fes, is_delay_robust, oracle, tfvs, worst_case_table, DelayKind, DrpInstance, Error, Route, TemporalGraph,
};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "drp", version, about = "Delay-robust routes in temporal graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a given route survives every small set of delays.
    Verify(VerifyArgs),
    /// Search for a delay-robust route between two vertices.
    Solve(SolveArgs),
    /// Write a generated instance and its JSON sidecar.
    Generate(GenerateArgs),
    /// Time the solvers on a seeded suite of random instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    /// Route as vertex ids or names.
    #[arg(required = true, num_args = 1..)]
    route: Vec<String>,
    #[arg(short, long)]
    x: usize,
    #[arg(short, long)]
    delta: u64,
    /// Delay model used for `--table`.
    #[arg(long, value_enum, default_value_t = Kind::Traversal)]
    kind: Kind,
    /// Print the worst-case arrival table, one row per route prefix.
    #[arg(long)]
    table: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Traversal,
    Starting,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Auto,
    Pareto,
    Fes,
    Tfvs,
    Brute,
}

impl Algo {
    const CONCRETE: [Algo; 4] = [Algo::Pareto, Algo::Fes, Algo::Tfvs, Algo::Brute];

    fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Pareto => "pareto",
            Algo::Fes => "fes",
            Algo::Tfvs => "tfvs",
            Algo::Brute => "brute",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    /// Source vertex (id or name).
    s: String,
    /// Target vertex (id or name).
    z: String,
    #[arg(short, long)]
    x: usize,
    #[arg(short, long)]
    delta: u64,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// With `--algo auto`, use the feedback edge solver when the feedback
    /// edge number is at most this.
    #[arg(long, default_value_t = 12)]
    fes_threshold: usize,
    /// Run every solver and fail with exit code 4 if they disagree.
    #[arg(long)]
    all_check: bool,
    /// Threads for `--all-check`.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Label limit for the label-setting solver.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct GenerateArgs {
    /// DIMACS CNF file.
    #[arg(long, group = "source")]
    from_cnf: Option<PathBuf>,
    /// Multicolored clique file.
    #[arg(long, group = "source")]
    from_mcc: Option<PathBuf>,
    /// Random graph spec such as `n=20 arcs=60 seed=7`.
    #[arg(long, group = "source")]
    random: Option<String>,
    /// Graph file to write; the sidecar goes to `<out>.json`.
    out: PathBuf,
    /// Budget for random instances.
    #[arg(short, long, default_value_t = 1)]
    x: usize,
    /// Delay for random instances.
    #[arg(short, long, default_value_t = 1)]
    delta: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Suite spec: `count=10 n=8 arcs=20 x=1 delta=1 seed=3` (also `tmax`,
    /// `lambda`). Instance `i` uses seed `seed + i`.
    #[arg(long, default_value = "count=10")]
    suite: String,
    /// Comma separated solvers to time.
    #[arg(long, value_delimiter = ',', default_value = "pareto,fes,brute")]
    algos: Vec<Algo>,
    /// Write CSV here and print a text table; otherwise CSV goes to stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Overrides the suite seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Label limit for the label-setting solver.
    #[arg(long)]
    budget: Option<usize>,
}

/// Solvers returned different answers.
#[derive(Debug)]
struct Disagreement(String);

impl std::fmt::Display for Disagreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "solvers disagree: {}", self.0)
    }
}

impl std::error::Error for Disagreement {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Disagreement>().is_some() {
        return 4;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::TooLarge(_) | Error::TfvsBudgetExceeded) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Solve(a) => solve(a),
        Command::Generate(a) => generate(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let message = format!("{err:#}").replace('\n', " ");
            eprintln!("error: {message}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn read_graph(path: &Path) -> anyhow::Result<GraphFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_graph(&text).with_context(|| path.display().to_string())
}

fn route_label(file: &GraphFile, route: &Route) -> String {
    route.vertices().iter().map(|&v| file.label(v)).collect::<Vec<_>>().join(" ")
}

fn verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let file = read_graph(&a.graph)?;
    let ids = a.route.iter().map(|t| file.resolve(t)).collect::<Result<Vec<_>, _>>()?;
    let route = Route::new(ids)?;
    route.check_in(&file.graph)?;
    // Both delay kinds have the same robust routes, so the verdict always
    // comes from the dynamic program. Worst-case values can differ, so a
    // starting-delay table is computed exhaustively.
    let table = worst_case_table(&file.graph, &route, a.x, a.delta);
    if a.table {
        for (j, row) in table.rows.iter().enumerate() {
            let row = match a.kind {
                Kind::Traversal => row.clone(),
                Kind::Starting => {
                    let prefix = Route::new(route.vertices()[..=j].to_vec())?;
                    oracle::brute_force_worst_case(&file.graph, &prefix, a.x, a.delta, DelayKind::Starting)?
                }
            };
            println!("{}\t{row}", file.label(route.vertices()[j]));
        }
    }
    match table.first_break() {
        None => {
            println!("robust");
            Ok(0)
        }
        Some((j, y)) => {
            println!("broken at prefix {j}, budget {y}");
            Ok(1)
        }
    }
}

fn run_algo(algo: Algo, inst: &DrpInstance, budget: Option<usize>) -> Result<Option<Route>, Error> {
    match algo {
        Algo::Pareto | Algo::Auto => Ok(pareto::solve_with(
            inst,
            ParetoOptions {
                prune: true,
                label_limit: budget,
            },
        )?
        .route),
        Algo::Fes => fes::solve(inst),
        Algo::Tfvs => Ok(tfvs::solve(inst)?.witness),
        Algo::Brute => oracle::brute_force_solve(inst),
    }
}

fn pick_algo(g: &TemporalGraph, threshold: usize) -> Algo {
    if feedback_edge_number(&g.underlying_graph()) <= threshold {
        Algo::Fes
    } else {
        Algo::Pareto
    }
}

fn thread_pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| anyhow!("cannot start {jobs} threads: {e}"))
}

fn solve(a: SolveArgs) -> anyhow::Result<u8> {
    let file = read_graph(&a.graph)?;
    let (s, z) = (file.resolve(&a.s)?, file.resolve(&a.z)?);
    let inst = DrpInstance::new(file.graph.clone(), s, z, a.x, a.delta)?;

    if a.all_check {
        let results: Vec<(Algo, Result<Option<Route>, Error>)> = thread_pool(a.jobs)?.install(|| {
            Algo::CONCRETE
                .par_iter()
                .map(|&algo| (algo, run_algo(algo, &inst, a.budget)))
                .collect()
        });
        let mut answers = Vec::new();
        for (algo, result) in results {
            match result {
                Ok(found) => {
                    if let Some(route) = &found {
                        if !is_delay_robust(&inst.graph, route, inst.x, inst.delta)? {
                            return Err(Disagreement(format!("{} witness {} is not robust", algo.name(), route_label(&file, route))).into());
                        }
                    }
                    let shown = found.as_ref().map_or("no".to_string(), |r| format!("yes {}", route_label(&file, r)));
                    println!("{}\t{shown}", algo.name());
                    answers.push((algo, found.is_some()));
                }
                Err(e @ (Error::TooLarge(_) | Error::TfvsBudgetExceeded)) => {
                    println!("{}\tskipped ({e})", algo.name());
                }
                Err(e) => return Err(e.into()),
            }
        }
        let Some(&(_, first)) = answers.first() else {
            bail!(Error::TooLarge("every solver exceeded its budget".into()));
        };
        if answers.iter().any(|&(_, yes)| yes != first) {
            let summary = answers
                .iter()
                .map(|(algo, yes)| format!("{}={}", algo.name(), if *yes { "yes" } else { "no" }))
                .collect::<Vec<_>>()
                .join(" ");
            return Err(Disagreement(summary).into());
        }
        println!("all algorithms agree: {}", if first { "yes" } else { "no" });
        return Ok(u8::from(!first));
    }

    let algo = match a.algo {
        Algo::Auto => pick_algo(&inst.graph, a.fes_threshold),
        other => other,
    };
    match run_algo(algo, &inst, a.budget)? {
        Some(route) => {
            println!("{}", route_label(&file, &route));
            Ok(0)
        }
        None => {
            println!("no robust route");
            Ok(1)
        }
    }
}

/// Exhaustive checks are only attempted below these sizes.
const SAT_VARIABLE_LIMIT: usize = 20;
const CLIQUE_CHOICE_LIMIT: usize = 1 << 20;

fn generate(a: GenerateArgs) -> anyhow::Result<u8> {
    let (file, sidecar) = if let Some(path) = &a.from_cnf {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let cnf = parse_dimacs(&text).with_context(|| path.display().to_string())?;
        let expected = (cnf.variables <= SAT_VARIABLE_LIMIT).then(|| brute_force_sat(&cnf).is_some());
        gadget_files(mcpsat_to_drp(&threesat_to_mcpsat(&cnf)), expected, format!("cnf:{}", path.display()))
    } else if let Some(path) = &a.from_mcc {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let mcc = parse_mcc(&text).with_context(|| path.display().to_string())?;
        let choices = mcc
            .partition_sizes
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k).filter(|&p| p <= CLIQUE_CHOICE_LIMIT));
        let expected = choices.map(|_| brute_force_clique(&mcc).is_some());
        gadget_files(mcpsat_to_drp(&mcc_to_mcpsat(&mcc)), expected, format!("mcc:{}", path.display()))
    } else {
        let spec_text = a.random.as_deref().expect("clap enforces one source");
        let spec: RandomSpec = spec_text.parse()?;
        let graph = graph_from_spec(&spec);
        let sidecar = Sidecar {
            s: 0,
            z: spec.n - 1,
            x: a.x,
            delta: a.delta,
            expected: None,
            layout: (0..spec.n).collect(),
            provenance: Vec::new(),
            source: format!("random:{spec_text}"),
        };
        (GraphFile::new(graph), sidecar)
    };
    fs::write(&a.out, write_graph(&file)).with_context(|| format!("cannot write {}", a.out.display()))?;
    let json_path = sidecar_path(&a.out);
    let json = serde_json::to_string_pretty(&sidecar)? + "\n";
    fs::write(&json_path, json).with_context(|| format!("cannot write {}", json_path.display()))?;
    println!(
        "wrote {} ({} vertices, {} arcs) and {}",
        a.out.display(),
        file.graph.vertex_count(),
        file.graph.arc_count(),
        json_path.display()
    );
    Ok(0)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn gadget_files(gadget: GadgetInstance, expected: Option<bool>, source: String) -> (GraphFile, Sidecar) {
    let mut file = GraphFile::new(gadget.drp.graph.clone());
    file.names = gadget.provenance.iter().cloned().enumerate().collect();
    let sidecar = Sidecar {
        s: gadget.drp.s,
        z: gadget.drp.z,
        x: gadget.drp.x,
        delta: gadget.drp.delta,
        expected,
        layout: gadget.layout,
        provenance: gadget.provenance,
        source,
    };
    (file, sidecar)
}

struct Suite {
    count: usize,
    x: usize,
    delta: u64,
    graph: RandomSpec,
}

fn parse_suite(text: &str) -> anyhow::Result<Suite> {
    let mut suite = Suite {
        count: 10,
        x: 1,
        delta: 1,
        graph: RandomSpec::default(),
    };
    let mut rest = Vec::new();
    for pair in text.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()) {
        let parsed = |v: &str| v.parse::<u64>().map_err(|_| anyhow!("bad suite entry `{pair}`"));
        match pair.split_once('=') {
            Some(("count", v)) => suite.count = parsed(v)? as usize,
            Some(("x", v)) => suite.x = parsed(v)? as usize,
            Some(("delta", v)) => suite.delta = parsed(v)?,
            _ => rest.push(pair),
        }
    }
    suite.graph = rest.join(" ").parse()?;
    Ok(suite)
}

struct Row {
    algo: Algo,
    n: usize,
    m: usize,
    x: usize,
    delta: u64,
    answer: &'static str,
    micros: u128,
}

fn bench(a: BenchArgs) -> anyhow::Result<u8> {
    let mut suite = parse_suite(&a.suite)?;
    if let Some(seed) = a.seed {
        suite.graph.seed = seed;
    }
    let algos: Vec<Algo> = a.algos.iter().copied().filter(|&al| al != Algo::Auto).collect();
    let rows: Vec<Row> = thread_pool(a.jobs)?.install(|| {
        (0..suite.count)
            .into_par_iter()
            .flat_map_iter(|i| {
                let spec = RandomSpec {
                    seed: suite.graph.seed.wrapping_add(i as u64),
                    ..suite.graph
                };
                let g = graph_from_spec(&spec);
                let inst = DrpInstance::new(g, 0, spec.n - 1, suite.x, suite.delta).expect("endpoints in range");
                algos
                    .iter()
                    .map(|&algo| {
                        let start = Instant::now();
                        let answer = match run_algo(algo, &inst, a.budget) {
                            Ok(Some(_)) => "yes",
                            Ok(None) => "no",
                            Err(Error::TooLarge(_) | Error::TfvsBudgetExceeded) => "budget",
                            Err(_) => "error",
                        };
                        Row {
                            algo,
                            n: inst.graph.vertex_count(),
                            m: inst.graph.arc_count(),
                            x: inst.x,
                            delta: inst.delta,
                            answer,
                            micros: start.elapsed().as_micros(),
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    });

    let mut csv = String::from("algo,n,m,x,delta,answer,micros\n");
    for r in &rows {
        writeln!(csv, "{},{},{},{},{},{},{}", r.algo.name(), r.n, r.m, r.x, r.delta, r.answer, r.micros)?;
    }
    match &a.csv {
        None => print!("{csv}"),
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("cannot write {}", path.display()))?;
            println!("{:<8} {:>5} {:>6} {:>3} {:>5} {:>7} {:>10}", "algo", "n", "m", "x", "delta", "answer", "micros");
            for r in &rows {
                println!(
                    "{:<8} {:>5} {:>6} {:>3} {:>5} {:>7} {:>10}",
                    r.algo.name(),
                    r.n,
                    r.m,
                    r.x,
                    r.delta,
                    r.answer,
                    r.micros
                );
            }
        }
    }
    Ok(0)
}
