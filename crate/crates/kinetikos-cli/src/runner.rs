//! Experiment commands: each takes a scenario plus flags, writes report
//! files into an output directory, and returns a one-line summary with a
//! machine-readable list of failed assertions. Everything is deterministic:
//! the same scenario, command, and flags produce byte-identical reports.

use crate::scenario::{family_tag, Scenario};
use crate::svg;
use kinetikos::discrepancy::{
    color_random, coloring_csv, improve_coloring, kinetic_discrepancy, random_baseline_bound,
};
use kinetikos::error::Error;
use kinetikos::hypergraph::{enumerate, EnumerationConfig};
use kinetikos::interference::{
    assign_hub_protocol, change_log_csv, count_combinatorial_changes, hub_sample_config,
    protocol_time_series, schedule_text, time_series_csv,
};
use kinetikos::motion::{MovingPointSet, Trajectory};
use kinetikos::ranges::{random_range, BoundingBox, RangeFamily};
use kinetikos::sampling::{
    build_epsilon_approximation, build_epsilon_net, family_vc_default, SampleConfig,
};
use kinetikos::counting::{approx_count, build_counter, exact_count, raw_count};
use kinetikos::voronoi::{balance_series_csv, select_facilities, verify_balanced};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::PathBuf;

/// Errors with distinct exit codes: bad input or scenario content (3),
/// I/O trouble (4). Usage errors exit 2 via argument parsing, and failed
/// assertions exit 1 without being errors.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

/// Flag overrides; `None` falls back to the scenario file's value.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
    pub k: Option<usize>,
    pub grid: Option<usize>,
    pub constant_c: Option<f64>,
    /// When false (--report-only), failed assertions are reported but the
    /// outcome still counts as success.
    pub assert_mode: bool,
}

impl RunConfig {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            out_dir: out_dir.into(),
            assert_mode: true,
            ..RunConfig::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// The one-line summary printed to standard output.
    pub summary: String,
    /// One entry per failed assertion, machine-readable `name value bound`.
    pub failures: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const COMMANDS: [&str; 7] = [
    "net",
    "approx",
    "voronoi",
    "interference",
    "count",
    "disc",
    "oracle",
];

/// Runs one experiment command against a scenario. The summary line and a
/// `FAIL <detail>` line per failed assertion are also written to
/// `summary.txt` in the output directory so reports are self-contained.
pub fn run_command(
    command: &str,
    scenario: &Scenario,
    cfg: &RunConfig,
) -> Result<RunOutcome, CliError> {
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", cfg.out_dir.display())))?;
    let mut out = match command {
        "net" => run_net(scenario, cfg, false),
        "approx" => run_net(scenario, cfg, true),
        "voronoi" => run_voronoi(scenario, cfg),
        "interference" => run_interference(scenario, cfg),
        "count" => run_count(scenario, cfg),
        "disc" => run_disc(scenario, cfg),
        "oracle" => run_oracle(scenario, cfg),
        other => {
            return Err(CliError::Input(format!(
                "unknown command {other:?}; expected one of {}",
                COMMANDS.join("|")
            )))
        }
    }?;
    let mut text = out.summary.clone();
    text.push('\n');
    for f in &out.failures {
        let _ = writeln!(text, "FAIL {f}");
    }
    let path = write_file(cfg, "summary.txt", &text)?;
    out.files.push(path);
    Ok(out)
}

fn write_file(cfg: &RunConfig, name: &str, content: &str) -> Result<PathBuf, CliError> {
    let path = cfg.out_dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}

fn need_epsilon(scenario: &Scenario, cfg: &RunConfig) -> Result<f64, CliError> {
    cfg.epsilon
        .or(scenario.epsilon)
        .ok_or_else(|| CliError::Input("epsilon required (flag --epsilon or scenario field)".into()))
}

fn sample_config(scenario: &Scenario, cfg: &RunConfig) -> SampleConfig {
    SampleConfig {
        seed: cfg.seed.unwrap_or(scenario.seed),
        size_constant: cfg.constant_c.unwrap_or(4.0),
        ..SampleConfig::default()
    }
}

fn index_csv(indices: &[u32]) -> String {
    let mut s = String::from("index\n");
    for i in indices {
        let _ = writeln!(s, "{i}");
    }
    s
}

/// Box around the motion: positions sampled across the window, inflated by
/// half its diameter, so random query ranges can land anywhere relevant.
fn motion_bounds(set: &MovingPointSet<f64>) -> BoundingBox<f64> {
    let window = set.horizon();
    let mut pts = Vec::new();
    for i in 0..=16 {
        let t = window.lo() + window.span() * i as f64 / 16.0;
        pts.extend(set.positions(t));
    }
    let b = BoundingBox::of_points(&pts);
    let margin = 0.5 * b.diameter().max(1.0);
    b.inflate(margin)
}

fn run_net(scenario: &Scenario, cfg: &RunConfig, approximation: bool) -> Result<RunOutcome, CliError> {
    let set = scenario.to_moving_set()?;
    let family = scenario.range_family()?;
    let epsilon = need_epsilon(scenario, cfg)?;
    let scfg = sample_config(scenario, cfg);
    let ecfg = EnumerationConfig::default();
    let window = set.horizon();
    let name = if approximation { "approx" } else { "net" };
    let (indices, vc, attempts, verified) = if approximation {
        match build_epsilon_approximation(&set, family, window, epsilon, &scfg, &ecfg) {
            Ok(a) => (a.indices, a.vc_used, a.attempts, a.verified),
            Err(Error::AttemptsExhausted { attempts, .. }) => (Vec::new(), 0, attempts, false),
            Err(e) => return Err(e.into()),
        }
    } else {
        match build_epsilon_net(&set, family, window, epsilon, &scfg, &ecfg) {
            Ok(n) => (n.indices, n.vc_used, n.attempts, n.verified),
            Err(Error::AttemptsExhausted { attempts, .. }) => (Vec::new(), 0, attempts, false),
            Err(e) => return Err(e.into()),
        }
    };
    let mut failures = Vec::new();
    if !verified {
        failures.push(format!("{name}.verified false (attempts {attempts})"));
    }
    let files = vec![write_file(cfg, &format!("{name}.csv"), &index_csv(&indices))?];
    let summary = format!(
        "{name} family={} n={} epsilon={} vc={} size={} attempts={} verified={}",
        family_tag(family),
        set.len(),
        epsilon,
        vc,
        indices.len(),
        attempts,
        verified
    );
    Ok(RunOutcome { summary, failures, files })
}

/// Deterministic static site sets for the robustness sweep: `count` draws
/// of `k` sites each, uniform in the motion bounds.
fn static_site_sets(
    set: &MovingPointSet<f64>,
    k: usize,
    count: usize,
    seed: u64,
) -> Vec<Vec<Vec<f64>>> {
    let bounds = motion_bounds(set);
    let d = bounds.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5349_5445);
    (0..count)
        .map(|_| {
            (0..k)
                .map(|_| {
                    (0..d)
                        .map(|j| rng.gen_range(bounds.lo[j]..bounds.hi[j]))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn run_voronoi(scenario: &Scenario, cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let set = scenario.to_moving_set()?;
    let k = cfg
        .k
        .or(scenario.k)
        .ok_or_else(|| CliError::Input("k required (flag --k or scenario field)".into()))?;
    let grid = cfg.grid.or(scenario.grid).unwrap_or(1000);
    let scfg = sample_config(scenario, cfg);
    let ecfg = EnumerationConfig::default();
    let window = set.horizon();
    let facilities = select_facilities(&set, window, k, &scfg, &ecfg)?;
    let report = verify_balanced(&set, &facilities, &[], window, grid, &ecfg)?;
    let mut failures = Vec::new();
    // facility count stays within the size formula it was drawn from
    let vc = family_vc_default(
        if set.dim() == 1 { RangeFamily::Intervals } else { RangeFamily::BoundedCones },
        set.dim(),
    );
    let size_bound =
        (scfg.size_constant * vc as f64 * k as f64 * (k as f64).ln()).ceil().max(1.0) as usize;
    if facilities.indices.len() > size_bound.min(set.len()) {
        failures.push(format!(
            "voronoi.facilities {} exceeds {}",
            facilities.indices.len(),
            size_bound.min(set.len())
        ));
    }
    if !report.ok {
        failures.push(format!(
            "voronoi.balance max_load {} exceeds {} at t={}",
            report.max_load, report.threshold, report.worst_time
        ));
    }
    // robustness: the same facilities stay balanced when random static
    // sites join the competition
    let site_sets = static_site_sets(&set, k, 3, scfg.seed);
    let mut robust_rows = String::from("set,sites,ok,max_load,threshold\n");
    let mut robust_ok = 0usize;
    for (j, sites) in site_sets.iter().enumerate() {
        let r = verify_balanced(&set, &facilities, sites, window, grid, &ecfg)?;
        if r.ok {
            robust_ok += 1;
        } else {
            failures.push(format!(
                "voronoi.robustness set {j} max_load {} exceeds {}",
                r.max_load, r.threshold
            ));
        }
        let _ = writeln!(
            robust_rows,
            "{j},{},{},{},{}",
            sites.len(),
            r.ok,
            r.max_load,
            r.threshold
        );
    }
    let series_csv = balance_series_csv(&report);
    let load_points: Vec<(f64, f64)> = report
        .series
        .iter()
        .map(|row| (row.time, row.max_load as f64))
        .collect();
    let plot = svg::line_plot(
        "maximum cell load over time",
        "t",
        "max load",
        &[
            svg::Series { label: "max load", points: &load_points },
            svg::Series {
                label: "threshold",
                points: &[
                    (window.lo(), report.threshold as f64),
                    (window.hi(), report.threshold as f64),
                ],
            },
        ],
    );
    let files = vec![
        write_file(cfg, "facilities.csv", &index_csv(&facilities.indices))?,
        write_file(cfg, "loads.csv", &series_csv)?,
        write_file(cfg, "robustness.csv", &robust_rows)?,
        write_file(cfg, "loads.svg", &plot)?,
    ];
    let summary = format!(
        "voronoi n={} k={} facilities={} verified_net={} max_load={} threshold={} ok={} robust={}/{}",
        set.len(),
        k,
        facilities.indices.len(),
        facilities.verified,
        report.max_load,
        report.threshold,
        report.ok,
        robust_ok,
        site_sets.len()
    );
    Ok(RunOutcome { summary, failures, files })
}

fn run_interference(scenario: &Scenario, cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let set = scenario.to_moving_set()?;
    let samples = cfg.grid.or(scenario.grid).unwrap_or(500).max(2);
    let seed = cfg.seed.unwrap_or(scenario.seed);
    let ecfg = EnumerationConfig::default();
    let window = set.horizon();
    let schedule = assign_hub_protocol(&set, &hub_sample_config(seed), &ecfg)?;
    let times: Vec<f64> = (0..samples)
        .map(|i| window.lo() + window.span() * i as f64 / (samples - 1) as f64)
        .collect();
    let rows = protocol_time_series(&set, &schedule, &times)?;
    let log = count_combinatorial_changes(&set, &schedule);
    let n = set.len() as f64;
    let interference_bound = 8.0 * (n * n.ln()).sqrt();
    let change_bound = 4.0 * n.powf(1.5) * n.ln().sqrt();
    let mut failures = Vec::new();
    let mut connected = 0usize;
    let mut max_diameter = 0usize;
    let mut max_interference = 0usize;
    for row in &rows {
        if row.connected {
            connected += 1;
        } else {
            failures.push(format!("interference.connectivity false at t={}", row.time));
        }
        if let Some(dia) = row.diameter {
            max_diameter = max_diameter.max(dia);
            if dia > 3 {
                failures.push(format!("interference.diameter {dia} at t={}", row.time));
            }
        }
        max_interference = max_interference.max(row.interference);
    }
    if (max_interference as f64) > interference_bound {
        failures.push(format!(
            "interference.magnitude {max_interference} exceeds {interference_bound}"
        ));
    }
    if (log.total as f64) > change_bound {
        failures.push(format!(
            "interference.changes {} exceeds {change_bound}",
            log.total
        ));
    }
    let series = time_series_csv(&rows);
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.time, r.interference as f64)).collect();
    let plot = svg::line_plot(
        "interference over time",
        "t",
        "interference",
        &[svg::Series { label: "interference", points: &points }],
    );
    let files = vec![
        write_file(cfg, "series.csv", &series)?,
        write_file(cfg, "changes.csv", &change_log_csv(&log))?,
        write_file(cfg, "schedule.txt", &schedule_text(&schedule))?,
        write_file(cfg, "interference.svg", &plot)?,
    ];
    let summary = format!(
        "interference n={} hubs={} times={} connected={}/{} max_diameter={} max_interference={} bound={} changes={} change_bound={}",
        set.len(),
        schedule.hubs.indices.len(),
        rows.len(),
        connected,
        rows.len(),
        max_diameter,
        max_interference,
        interference_bound,
        log.total,
        change_bound
    );
    Ok(RunOutcome { summary, failures, files })
}

fn run_count(scenario: &Scenario, cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let set = scenario.to_moving_set()?;
    let family = scenario.range_family()?;
    let epsilon = need_epsilon(scenario, cfg)?;
    let queries = cfg.grid.or(scenario.grid).unwrap_or(1000);
    let scfg = sample_config(scenario, cfg);
    let ecfg = EnumerationConfig::default();
    let window = set.horizon();
    let counter = match build_counter(&set, family, window, epsilon, &scfg, &ecfg) {
        Ok(c) => Some(c),
        Err(Error::AttemptsExhausted { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut failures = Vec::new();
    let Some(counter) = counter else {
        let files = vec![write_file(cfg, "queries.csv", "query,time,exact,raw,approx,abs_error\n")?];
        return Ok(RunOutcome {
            summary: format!(
                "count family={} n={} epsilon={} sample=0 verified=false queries=0",
                family_tag(family),
                set.len(),
                epsilon
            ),
            failures: vec!["count.verified false (attempts exhausted)".into()],
            files,
        });
    };
    if !counter.verified() {
        failures.push("count.verified false".into());
    }
    let bounds = motion_bounds(&set);
    let mut rng = ChaCha8Rng::seed_from_u64(scfg.seed ^ 0xC0C0_0117);
    let tolerance = epsilon * set.len() as f64 + 1e-9;
    let mut rows = String::from("query,time,exact,raw,approx,abs_error\n");
    let mut max_error = 0.0f64;
    let mut violations = 0usize;
    for q in 0..queries {
        let t = window.lo() + rng.gen_range(0.0..=1.0) * window.span();
        let range = random_range(family, &bounds, ecfg.cone_angle, &mut rng);
        let exact = exact_count(&set, &range, t)?;
        let raw = raw_count(&counter, &set, &range, t)?;
        let approx = approx_count(&counter, &set, &range, t)?;
        let err = (approx - exact as f64).abs();
        max_error = max_error.max(err);
        if err > tolerance {
            violations += 1;
            failures.push(format!(
                "count.error query {q} |{approx} - {exact}| exceeds {tolerance}"
            ));
        }
        let _ = writeln!(rows, "{q},{t},{exact},{raw},{approx},{err}");
    }
    let files = vec![write_file(cfg, "queries.csv", &rows)?];
    let summary = format!(
        "count family={} n={} epsilon={} sample={} verified={} queries={} max_error={} tolerance={} violations={}",
        family_tag(family),
        set.len(),
        epsilon,
        counter.sample_size(),
        counter.verified(),
        queries,
        max_error,
        tolerance,
        violations
    );
    Ok(RunOutcome { summary, failures, files })
}

fn run_disc(scenario: &Scenario, cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let set = scenario.to_moving_set()?;
    let family = scenario.range_family()?;
    let seed = cfg.seed.unwrap_or(scenario.seed);
    let iterations = cfg.grid.or(scenario.grid).unwrap_or(2 * set.len());
    let ecfg = EnumerationConfig::default();
    let window = set.horizon();
    let chi = color_random(set.len(), seed);
    let random = kinetic_discrepancy(&set, family, window, &chi, &ecfg)?;
    let improved = improve_coloring(&set, family, window, &chi, iterations, &ecfg)?;
    let bound = random_baseline_bound(set.len(), random.edges_checked);
    let final_value = *improved.values.last().expect("nonempty trace");
    let mut failures = Vec::new();
    if final_value > random.value {
        failures.push(format!(
            "disc.improvement final {final_value} exceeds initial {}",
            random.value
        ));
    }
    if improved.values.windows(2).any(|w| w[1] > w[0]) {
        failures.push("disc.trace not monotone".into());
    }
    let mut trace_rows = String::from("iteration,value\n");
    for (i, v) in improved.values.iter().enumerate() {
        let _ = writeln!(trace_rows, "{i},{v}");
    }
    let trace_points: Vec<(f64, f64)> = improved
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64, v as f64))
        .collect();
    let plot = svg::line_plot(
        "greedy imbalance trace",
        "flip",
        "max |imbalance|",
        &[svg::Series { label: "discrepancy", points: &trace_points }],
    );
    let files = vec![
        write_file(cfg, "coloring.csv", &coloring_csv(&improved.coloring))?,
        write_file(cfg, "trace.csv", &trace_rows)?,
        write_file(cfg, "disc.svg", &plot)?,
    ];
    let summary = format!(
        "disc family={} n={} edges={} random={} baseline_bound={} improved={} flips={}",
        family_tag(family),
        set.len(),
        random.edges_checked,
        random.value,
        bound,
        final_value,
        improved.flips.len()
    );
    Ok(RunOutcome { summary, failures, files })
}

fn run_oracle(scenario: &Scenario, cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let set = scenario.to_moving_set()?;
    let ecfg = EnumerationConfig::default();
    let window = set.horizon();
    // every family meaningful at this dimension; in the plane and above,
    // intervals apply to the first-coordinate projection
    let mut jobs: Vec<(String, MovingPointSet<f64>, RangeFamily)> = Vec::new();
    if set.dim() == 1 {
        jobs.push(("intervals".into(), set.clone(), RangeFamily::Intervals));
    } else {
        let projected = MovingPointSet::new(
            set.trajectories()
                .iter()
                .map(|t| Trajectory::new(vec![t.component(0).clone()]))
                .collect::<Result<Vec<_>, _>>()?,
            set.max_degree(),
            window,
        )?;
        jobs.push(("intervals_x".into(), projected, RangeFamily::Intervals));
        jobs.push(("halfspaces".into(), set.clone(), RangeFamily::Halfspaces));
        jobs.push(("balls".into(), set.clone(), RangeFamily::Balls));
        jobs.push(("cones".into(), set.clone(), RangeFamily::BoundedCones));
    }
    let mut files = Vec::new();
    let mut counts = Vec::new();
    for (name, subject, family) in &jobs {
        let cat = enumerate(subject, *family, window, &ecfg)?;
        files.push(write_file(cfg, &format!("catalog_{name}.txt"), &cat.to_text())?);
        counts.push(format!("{name}={}", cat.edge_count()));
    }
    let summary = format!("oracle n={} d={} {}", set.len(), set.dim(), counts.join(" "));
    Ok(RunOutcome { summary, failures: Vec::new(), files })
}
