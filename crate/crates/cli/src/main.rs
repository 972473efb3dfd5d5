//! `flp4`: generate instances, solve them, verify small ones exactly, export
//! the path model, run benchmark plans and build comparison reports.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 size guard refusal,
//! 4 I/O or parse error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flp4::bench::{self, BenchPlan, FixtureTable};
use flp4::instance::{generate, validate, GenParams, Instance, InstanceError, IntRange};
use flp4::oracle::{self, OracleError};
use flp4::run::{Algorithm, Budget};

#[derive(Debug)]
enum Failure {
    Usage(String),
    Guard(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Guard(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Guard(m) | Failure::Io(m) => m,
        }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        match e {
            InstanceError::Param { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Io(_) => Failure::Io(e.to_string()),
            _ => Failure::Guard(e.to_string()),
        }
    }
}

impl From<bench::BenchError> for Failure {
    fn from(e: bench::BenchError) -> Self {
        match e {
            bench::BenchError::Plan(_) | bench::BenchError::Threads(_) => Failure::Usage(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(name = "flp4", version, about = "Four-level facility location toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Solve an instance with local search or tabu search.
    Solve(SolveArgs),
    /// Exact optimum of a tiny instance by enumeration.
    Exact(ExactArgs),
    /// Write the path-based 0-1 model in LP format.
    ExportIp(ExportArgs),
    /// Run a benchmark plan and append to a run log.
    Bench(BenchArgs),
    /// Comparison report from a run log or a bundled result table.
    Stats(StatsArgs),
}

fn parse_range(s: &str) -> Result<IntRange, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo = lo.trim().parse().map_err(|_| format!("bad lower end in `{s}`"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad upper end in `{s}`"))?;
    Ok(IntRange::new(lo, hi))
}

#[derive(Args)]
struct GenArgs {
    /// Number of stores.
    #[arg(long)]
    m: usize,
    /// Number of plants.
    #[arg(long)]
    n: usize,
    /// Number of warehouses.
    #[arg(long)]
    k: usize,
    /// Number of distribution centers.
    #[arg(long)]
    j: usize,
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    #[arg(long, default_value_t = 0.2)]
    bound_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_range)]
    revenue_range: Option<IntRange>,
    #[arg(long, value_parser = parse_range)]
    transport_cost_range: Option<IntRange>,
    #[arg(long, value_parser = parse_range)]
    fixed_store_range: Option<IntRange>,
    #[arg(long, value_parser = parse_range)]
    fixed_plant_range: Option<IntRange>,
    #[arg(long, value_parser = parse_range)]
    fixed_warehouse_range: Option<IntRange>,
    #[arg(long, value_parser = parse_range)]
    fixed_dc_range: Option<IntRange>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    /// Local search with re-sequencing.
    Ls,
    /// Local search with fixed scan orders.
    LsNoseq,
    /// Tabu search.
    Tabu,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ls => Algorithm::LsSeq,
            AlgoArg::LsNoseq => Algorithm::LsNoseq,
            AlgoArg::Tabu => Algorithm::TabuSeq,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget; results depend on machine speed.
    #[arg(long, conflicts_with = "budget_iters")]
    budget_seconds: Option<f64>,
    /// Work budget in applied moves plus starts; fully reproducible.
    #[arg(long)]
    budget_iters: Option<u64>,
    /// Cap on tabu starts.
    #[arg(long)]
    max_starts: Option<u64>,
    #[arg(long)]
    out_solution: Option<PathBuf>,
    #[arg(long)]
    out_record: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out_solution: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    plan: PathBuf,
    /// Run log to append to.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the plan's thread count.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureArg {
    Table1,
    Table2,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    log: Option<PathBuf>,
    #[arg(long, value_enum)]
    fixture: Option<FixtureArg>,
    /// Report CSV; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let inst = Instance::load(path)?;
    let report = validate(&inst);
    if !report.is_empty() {
        return Err(Failure::Io(format!("{}: invalid instance: {report}", path.display())));
    }
    Ok(inst)
}

fn gen(a: GenArgs) -> Result<(), Failure> {
    let mut p = GenParams::with_sizes(a.m, a.n, a.k, a.j).with_seed(a.seed);
    p.density = a.density;
    p.bound_fraction = a.bound_fraction;
    let ranges = [
        (a.revenue_range, &mut p.revenue_range),
        (a.transport_cost_range, &mut p.transport_cost_range),
        (a.fixed_store_range, &mut p.fixed_store_range),
        (a.fixed_plant_range, &mut p.fixed_plant_range),
        (a.fixed_warehouse_range, &mut p.fixed_warehouse_range),
        (a.fixed_dc_range, &mut p.fixed_dc_range),
    ];
    for (given, slot) in ranges {
        if let Some(r) = given {
            *slot = r;
        }
    }
    let inst = generate(&p)?;
    inst.save(&a.out)?;
    let b = inst.bounds();
    println!(
        "{}: bounds stores {} plants {} warehouses {} dcs {}",
        inst.name(),
        b.stores,
        b.plants,
        b.warehouses,
        b.dcs
    );
    Ok(())
}

fn solve(a: SolveArgs) -> Result<(), Failure> {
    let budget = match (a.budget_seconds, a.budget_iters) {
        (Some(s), _) if !s.is_finite() || s <= 0.0 => {
            return Err(Failure::Usage("--budget-seconds must be positive".into()))
        }
        (Some(s), _) => Some(Budget::Seconds(s)),
        (_, Some(0)) => return Err(Failure::Usage("--budget-iters must be positive".into())),
        (_, Some(n)) => Some(Budget::Iterations(n)),
        _ => None,
    };
    let inst = load_instance(&a.instance)?;
    let (sol, rec) = bench::run_algorithm(&inst, a.algo.into(), a.seed, budget, a.max_starts);
    if let Some(path) = &a.out_solution {
        sol.save(&inst, path).map_err(|e| Failure::Io(e.to_string()))?;
    }
    let json = serde_json::to_string(&rec).expect("record serializes");
    if let Some(path) = &a.out_record {
        fs::write(path, format!("{json}\n")).map_err(io_err(path))?;
    }
    println!("{json}");
    Ok(())
}

fn exact(a: ExactArgs) -> Result<(), Failure> {
    let inst = load_instance(&a.instance)?;
    let r = oracle::exact_enumerate(&inst)?;
    if let Some(path) = &a.out_solution {
        r.solution.save(&inst, path).map_err(|e| Failure::Io(e.to_string()))?;
    }
    println!("{}", r.objective);
    Ok(())
}

fn export_ip(a: ExportArgs) -> Result<(), Failure> {
    let inst = load_instance(&a.instance)?;
    oracle::export_path_ip(&inst, &a.out)?;
    Ok(())
}

fn run_bench(a: BenchArgs) -> Result<(), Failure> {
    let mut plan = BenchPlan::load(&a.plan)?;
    if a.threads.is_some() {
        plan.threads = a.threads;
        plan.check()?;
    }
    let base = a.plan.parent().unwrap_or(Path::new("."));
    let rows = bench::run_plan(&plan, base)?;
    bench::append_log(&a.out, &rows)?;
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    eprintln!("{} runs, {failed} failed", rows.len());
    Ok(())
}

fn stats(a: StatsArgs) -> Result<(), Failure> {
    let report = match (a.fixture, &a.log) {
        (Some(FixtureArg::Table1), _) => bench::report_fixture(FixtureTable::LsSequencing),
        (Some(FixtureArg::Table2), _) => bench::report_fixture(FixtureTable::TabuVsLs),
        (None, Some(log)) => bench::report_log(&bench::load_log(log)?),
        (None, None) => unreachable!("clap requires --log or --fixture"),
    };
    if report.unpaired > 0 {
        eprintln!("warning: {} runs without a partner were excluded", report.unpaired);
    }
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(io_err(path))?;
            bench::write_report(&report, file)?;
        }
        None => bench::write_report(&report, io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Exact(a) => exact(a),
        Command::ExportIp(a) => export_ip(a),
        Command::Bench(a) => run_bench(a),
        Command::Stats(a) => stats(a),
    };
    match result {
        Ok(()) => {
            let _ = io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
