//! Command-line front end: scenario generation plus the experiment
//! commands, with distinct exit codes so batch drivers can tell usage
//! errors, bad inputs, I/O trouble, and failed assertions apart.

use clap::{Args, Parser, Subcommand};
use kinetikos_cli::runner::{run_command, CliError, RunConfig};
use kinetikos_cli::scenario::{generate_scenario, parse_kind, GeneratorParams, Scenario};
use std::path::PathBuf;
use std::process::ExitCode;

const REPORT_DOCS: &str = "\
Report files per command (written into --out):
  net          net.csv (index), summary.txt
  approx       approx.csv (index), summary.txt
  voronoi      facilities.csv (index); loads.csv (time,max_load,argmax_site);
               robustness.csv (set,sites,ok,max_load,threshold); loads.svg; summary.txt
  interference series.csv (t,interference,connected,diameter,num_edges);
               changes.csv (point_index,change_count); schedule.txt;
               interference.svg; summary.txt
  count        queries.csv (query,time,exact,raw,approx,abs_error); summary.txt
  disc         coloring.csv (index,value); trace.csv (iteration,value);
               disc.svg; summary.txt
  oracle       catalog_<family>.txt per family valid at the scenario dimension

Exit codes: 0 all assertions pass (or --report-only), 1 assertion failures,
2 usage error, 3 invalid scenario or parameters, 4 I/O failure.";

#[derive(Parser)]
#[command(
    name = "kinetikos",
    about = "Kinetic range-space experiments: scenario generation, nets, balanced facilities, interference protocols, counting, discrepancy",
    after_help = REPORT_DOCS,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file to run against.
    #[arg(long)]
    scenario: PathBuf,
    /// Directory for report files (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Override the scenario's experiment seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override epsilon (net, approx, count).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override the facility count k (voronoi).
    #[arg(long)]
    k: Option<usize>,
    /// Override the grid density: sweep grid (voronoi), sample times
    /// (interference), query count (count), flip budget (disc).
    #[arg(long)]
    grid: Option<usize>,
    /// Override the sampling constant C in the size formulas.
    #[arg(long = "constant-c")]
    constant_c: Option<f64>,
    /// Rayon thread count; env KINETIKOS_THREADS is the fallback.
    #[arg(long)]
    threads: Option<usize>,
    /// Fail (exit 1) when an assertion fails. Default.
    #[arg(long, conflicts_with = "report_only")]
    assert: bool,
    /// Report assertion failures without failing the run.
    #[arg(long = "report-only")]
    report_only: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Instance shape: uniform | static | linear | fan.
    #[arg(long, default_value = "uniform")]
    kind: String,
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Ambient dimension (forced to 1 by linear/fan).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Motion degree bound (forced to 0 by static, 1 by linear/fan).
    #[arg(long, default_value_t = 1)]
    degree: usize,
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Range family tag stored in the scenario.
    #[arg(long, default_value = "halfspaces")]
    family: String,
    /// Half-width of the starting-coordinate box.
    #[arg(long, default_value_t = 10.0)]
    spread: f64,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    /// Where to write the scenario file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a scenario file.
    Gen(GenArgs),
    /// Build and verify an epsilon-net.
    Net(RunArgs),
    /// Build and verify an epsilon-approximation.
    Approx(RunArgs),
    /// Select facilities and sweep cell loads against the balance threshold.
    Voronoi(RunArgs),
    /// Run the hub communication protocol and measure interference.
    Interference(RunArgs),
    /// Build an approximate range counter and compare against exact counts.
    Count(RunArgs),
    /// Color the points and greedily reduce the worst edge imbalance.
    Disc(RunArgs),
    /// Enumerate the full hyperedge catalogs for this instance.
    Oracle(RunArgs),
}

fn configure_threads(flag: Option<usize>) {
    let from_env = std::env::var("KINETIKOS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(t) = flag.or(from_env) {
        // a second global-pool build (tests, repeated calls) is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

fn execute(name: &str, args: &RunArgs) -> Result<bool, CliError> {
    configure_threads(args.threads);
    let scenario = Scenario::load(&args.scenario)?;
    let cfg = RunConfig {
        out_dir: args.out.clone(),
        seed: args.seed,
        epsilon: args.epsilon,
        k: args.k,
        grid: args.grid,
        constant_c: args.constant_c,
        assert_mode: !args.report_only,
    };
    let outcome = run_command(name, &scenario, &cfg)?;
    println!("{}", outcome.summary);
    for f in &outcome.failures {
        println!("FAIL {f}");
    }
    Ok(outcome.passed() || !cfg.assert_mode)
}

fn generate(args: &GenArgs) -> Result<(), CliError> {
    let params = GeneratorParams {
        kind: parse_kind(&args.kind)?,
        n: args.n,
        dimension: args.dim,
        degree: args.degree,
        horizon: args.horizon,
        seed: args.seed,
        family: args.family.clone(),
        spread: args.spread,
        k: args.k,
        epsilon: args.epsilon,
        grid: args.grid,
    };
    let scenario = generate_scenario(&params)?;
    scenario.save(&args.out)?;
    println!(
        "gen kind={} n={} d={} s={} family={} perturbation={} -> {}",
        args.kind,
        scenario.n(),
        scenario.dimension,
        scenario.degree,
        scenario.family,
        scenario
            .perturbation
            .map(|m| m.to_string())
            .unwrap_or_else(|| "none".into()),
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(args) => generate(args).map(|()| true),
        Command::Net(args) => execute("net", args),
        Command::Approx(args) => execute("approx", args),
        Command::Voronoi(args) => execute("voronoi", args),
        Command::Interference(args) => execute("interference", args),
        Command::Count(args) => execute("count", args),
        Command::Disc(args) => execute("disc", args),
        Command::Oracle(args) => execute("oracle", args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
