//! The project's acceptance gate: nine numbered criteria, each printing one
//! PASS/FAIL line. Tolerances, budgets, and seeds are pinned here. The
//! criteria that produce report files (2-5) run once through the experiment
//! runner and share their outputs; criterion 9 repeats them and demands
//! byte-identical reports.

use kinetikos::discrepancy::{
    color_random, improve_coloring, kinetic_discrepancy, log_log_slope, random_baseline_bound,
};
use kinetikos::hypergraph::{enumerate, shatter_function, vc_dimension_estimate, EnumerationConfig};
use kinetikos::ranges::{canonical_ranges, RangeFamily};
use kinetikos::sampling::{build_epsilon_net, verify_epsilon_net, SampleConfig};
use kinetikos_cli::runner::{run_command, RunConfig, RunOutcome};
use kinetikos_cli::scenario::{generate_scenario, GeneratorKind, GeneratorParams, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

// ---------------------------------------------------------------- plumbing

/// Criteria run one at a time so the pinned budgets measure real work, not
/// scheduler contention.
fn serial() -> MutexGuard<'static, ()> {
    static GATE: Mutex<()> = Mutex::new(());
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

/// One verdict line per criterion; the test fails after printing it.
fn verdict(index: usize, name: &str, failures: &[String], detail: &str) {
    let ok = failures.is_empty();
    println!(
        "ACCEPTANCE {index} {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {index} {name} failed: {failures:#?}");
}

fn linear_scenario(n: usize, seed: u64) -> Scenario {
    generate_scenario(&GeneratorParams {
        kind: GeneratorKind::Linear1D,
        n,
        seed,
        family: "intervals".into(),
        ..GeneratorParams::default()
    })
    .expect("linear scenario generates")
}

fn planar_scenario(n: usize, seed: u64, family: &str) -> Scenario {
    generate_scenario(&GeneratorParams {
        kind: GeneratorKind::Uniform,
        n,
        dimension: 2,
        degree: 1,
        seed,
        family: family.into(),
        ..GeneratorParams::default()
    })
    .expect("planar scenario generates")
}

fn summary_field(summary: &str, key: &str) -> f64 {
    let prefix = format!("{key}=");
    summary
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix(&prefix))
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no numeric field {key} in summary {summary:?}"))
}

fn median(values: &mut [usize]) -> f64 {
    values.sort_unstable();
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2] as f64
    } else {
        (values[k / 2 - 1] + values[k / 2]) as f64 / 2.0
    }
}

// --------------------------------------------- shared runner suite (2-5)

const AC2_SEEDS: u64 = 20;
const AC2_N: usize = 100;
const AC2_EPSILON: f64 = 0.2;
const AC3_SEEDS: u64 = 10;
const AC3_N: usize = 400;
const AC3_K: usize = 8;
const AC3_GRID: usize = 1000;
const AC3_FACILITY_BOUND: usize = 333; // ceil(4 * 5 * 8 * ln 8)
const AC3_LOAD_THRESHOLD: f64 = 300.0; // 6 * ceil(400 / 8)
const AC4_SIZES: [usize; 3] = [64, 144, 256];
const AC4_SEEDS: u64 = 10;
const AC4_TIMES: usize = 500;
const AC5_N: usize = 200;
const AC5_EPSILON: f64 = 0.1;
const AC5_QUERIES: usize = 1000;

struct Suite {
    root: PathBuf,
    ac2: Vec<RunOutcome>,
    ac3: Vec<RunOutcome>,
    ac4: Vec<(usize, RunOutcome)>,
    ac5: RunOutcome,
    ac2_elapsed: Duration,
    ac3_elapsed: Duration,
    ac4_elapsed: Duration,
    ac5_elapsed: Duration,
}

fn run_suite(root: &Path) -> Suite {
    let cfg_at = |sub: String| RunConfig::new(root.join(sub));

    let t0 = Instant::now();
    let ac2 = (0..AC2_SEEDS)
        .map(|i| {
            let mut s = linear_scenario(AC2_N, 2000 + i);
            s.epsilon = Some(AC2_EPSILON);
            run_command("net", &s, &cfg_at(format!("ac2/seed{i}"))).expect("net run")
        })
        .collect();
    let ac2_elapsed = t0.elapsed();

    let t0 = Instant::now();
    let ac3 = (0..AC3_SEEDS)
        .map(|i| {
            let s = planar_scenario(AC3_N, 3000 + i, "halfspaces");
            let mut cfg = cfg_at(format!("ac3/seed{i}"));
            cfg.k = Some(AC3_K);
            cfg.grid = Some(AC3_GRID);
            run_command("voronoi", &s, &cfg).expect("voronoi run")
        })
        .collect();
    let ac3_elapsed = t0.elapsed();

    let t0 = Instant::now();
    let mut ac4 = Vec::new();
    for &n in &AC4_SIZES {
        for i in 0..AC4_SEEDS {
            let s = planar_scenario(n, 4000 + n as u64 * 37 + i, "halfspaces");
            let mut cfg = cfg_at(format!("ac4/n{n}/seed{i}"));
            cfg.grid = Some(AC4_TIMES);
            ac4.push((
                n,
                run_command("interference", &s, &cfg).expect("interference run"),
            ));
        }
    }
    let ac4_elapsed = t0.elapsed();

    let t0 = Instant::now();
    let mut s = planar_scenario(AC5_N, 5001, "balls");
    s.epsilon = Some(AC5_EPSILON);
    let mut cfg = cfg_at("ac5".into());
    cfg.grid = Some(AC5_QUERIES);
    let ac5 = run_command("count", &s, &cfg).expect("count run");
    let ac5_elapsed = t0.elapsed();

    Suite {
        root: root.to_path_buf(),
        ac2,
        ac3,
        ac4,
        ac5,
        ac2_elapsed,
        ac3_elapsed,
        ac4_elapsed,
        ac5_elapsed,
    }
}

fn first_suite() -> &'static Suite {
    static FIRST: OnceLock<(tempfile::TempDir, Suite)> = OnceLock::new();
    let (_, suite) = FIRST.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        let suite = run_suite(dir.path());
        (dir, suite)
    });
    suite
}

// ------------------------------------------------------------ criterion 1

#[test]
fn criterion_1_oracle_equivalence() {
    let _g = serial();
    const INSTANCES: usize = 50;
    const DENSE_SAMPLES: usize = 10_000;
    let budget = Duration::from_secs(10);
    let ecfg = EnumerationConfig::default();
    let mut failures = Vec::new();
    let mut family_checks = 0usize;
    let mut slowest = Duration::ZERO;
    for i in 0..INSTANCES {
        let d = if i % 2 == 0 { 1 } else { 2 };
        let s = 1 + (i / 2) % 2;
        let n = 4 + i % 5;
        let scenario = generate_scenario(&GeneratorParams {
            kind: GeneratorKind::Uniform,
            n,
            dimension: d,
            degree: s,
            seed: 1000 + i as u64,
            family: "balls".into(),
            ..GeneratorParams::default()
        })
        .expect("oracle instance generates");
        let set = scenario.to_moving_set().expect("valid instance");
        let window = set.horizon();
        let families: &[RangeFamily] = if d == 1 {
            &[RangeFamily::Intervals]
        } else {
            &[RangeFamily::Halfspaces, RangeFamily::Balls]
        };
        let started = Instant::now();
        for &family in families {
            let cat = enumerate(&set, family, window, &ecfg).expect("catalog enumerates");
            let catalog: BTreeSet<Vec<u32>> = cat.edges.keys().cloned().collect();
            let mut dense: BTreeSet<Vec<u32>> = BTreeSet::new();
            for j in 0..DENSE_SAMPLES {
                let t = window.lo() + window.span() * j as f64 / (DENSE_SAMPLES - 1) as f64;
                let positions = set.positions(t);
                for r in canonical_ranges(&positions, family).expect("canonical ranges") {
                    let edge = r.select(&positions);
                    if !edge.is_empty() {
                        dense.insert(edge);
                    }
                }
            }
            family_checks += 1;
            if catalog != dense {
                let missing: Vec<_> = dense.difference(&catalog).take(3).collect();
                let extra: Vec<_> = catalog.difference(&dense).take(3).collect();
                failures.push(format!(
                    "instance {i} (n={n} d={d} s={s}) {family}: catalog {} vs dense {}; dense-only {missing:?}, catalog-only {extra:?}",
                    catalog.len(),
                    dense.len()
                ));
            }
        }
        let elapsed = started.elapsed();
        slowest = slowest.max(elapsed);
        if elapsed > budget {
            failures.push(format!("instance {i} took {elapsed:.2?} (budget {budget:?})"));
        }
    }
    verdict(
        1,
        "oracle equivalence",
        &failures,
        &format!("{INSTANCES} instances, {family_checks} family catalogs == {DENSE_SAMPLES}-sample sweeps, slowest instance {slowest:.2?}"),
    );
}

// ------------------------------------------------------------ criterion 2

#[test]
fn criterion_2_epsilon_net_soundness() {
    let _g = serial();
    let suite = first_suite();
    let budget = Duration::from_secs(120);
    let ecfg = EnumerationConfig::default();
    let mut failures = Vec::new();
    for (i, outcome) in suite.ac2.iter().enumerate() {
        if !outcome.passed() {
            failures.push(format!("seed {i}: {:?}", outcome.failures));
        }
        if summary_field(&outcome.summary, "attempts") > 20.0 {
            failures.push(format!("seed {i}: attempts exceed 20"));
        }
    }
    // independent of the runner: rebuild each net and demand a clean
    // verification pass over the full event timeline
    for i in 0..AC2_SEEDS {
        let scenario = {
            let mut s = linear_scenario(AC2_N, 2000 + i);
            s.epsilon = Some(AC2_EPSILON);
            s
        };
        let set = scenario.to_moving_set().expect("scenario loads");
        let cfg = SampleConfig {
            seed: scenario.seed,
            ..SampleConfig::default()
        };
        match build_epsilon_net(
            &set,
            RangeFamily::Intervals,
            set.horizon(),
            AC2_EPSILON,
            &cfg,
            &ecfg,
        ) {
            Ok(net) => {
                if !net.verified || net.attempts > 20 {
                    failures.push(format!(
                        "seed {i}: verified={} attempts={}",
                        net.verified, net.attempts
                    ));
                }
                match verify_epsilon_net(
                    &set,
                    RangeFamily::Intervals,
                    set.horizon(),
                    AC2_EPSILON,
                    &net.indices,
                    &ecfg,
                ) {
                    Ok(None) => {}
                    Ok(Some(v)) => failures.push(format!(
                        "seed {i}: uncovered edge of {} points at t={}",
                        v.population, v.time
                    )),
                    Err(e) => failures.push(format!("seed {i}: verify error {e}")),
                }
            }
            Err(e) => failures.push(format!("seed {i}: build error {e}")),
        }
    }
    if suite.ac2_elapsed > budget {
        failures.push(format!(
            "report pass took {:.2?} (budget {budget:?})",
            suite.ac2_elapsed
        ));
    }
    verdict(
        2,
        "kinetic epsilon-net soundness",
        &failures,
        &format!(
            "{AC2_SEEDS}/{AC2_SEEDS} verified nets (n={AC2_N}, eps={AC2_EPSILON}), zero uncovered edges of >= {} points, reports in {:.2?}",
            (AC2_EPSILON * AC2_N as f64) as usize,
            suite.ac2_elapsed
        ),
    );
}

// ------------------------------------------------------------ criterion 3

#[test]
fn criterion_3_balanced_voronoi() {
    let _g = serial();
    let suite = first_suite();
    let budget = Duration::from_secs(300);
    let mut failures = Vec::new();
    let mut worst_load = 0.0f64;
    for (i, outcome) in suite.ac3.iter().enumerate() {
        if !outcome.passed() {
            failures.push(format!("seed {i}: {:?}", outcome.failures));
        }
        let facilities = summary_field(&outcome.summary, "facilities");
        if facilities > AC3_FACILITY_BOUND as f64 {
            failures.push(format!(
                "seed {i}: {facilities} facilities exceed {AC3_FACILITY_BOUND}"
            ));
        }
        let threshold = summary_field(&outcome.summary, "threshold");
        if threshold != AC3_LOAD_THRESHOLD {
            failures.push(format!("seed {i}: threshold {threshold} != {AC3_LOAD_THRESHOLD}"));
        }
        worst_load = worst_load.max(summary_field(&outcome.summary, "max_load"));
        if !outcome.summary.contains("robust=3/3") {
            failures.push(format!("seed {i}: robustness sweep incomplete"));
        }
    }
    if suite.ac3_elapsed > budget {
        failures.push(format!(
            "report pass took {:.2?} (budget {budget:?})",
            suite.ac3_elapsed
        ));
    }
    verdict(
        3,
        "balanced facility loads",
        &failures,
        &format!(
            "{AC3_SEEDS}/{AC3_SEEDS} trials (n={AC3_N}, k={AC3_K}): facilities <= {AC3_FACILITY_BOUND}, worst load {worst_load} <= {AC3_LOAD_THRESHOLD}, 3 static-site sets each, in {:.2?}",
            suite.ac3_elapsed
        ),
    );
}

// ------------------------------------------------------------ criterion 4

#[test]
fn criterion_4_interference_protocol() {
    let _g = serial();
    let suite = first_suite();
    let budget = Duration::from_secs(600);
    const SLOPE_LIMIT: f64 = 0.6; // 0.5 + 0.1 slack
    let mut failures = Vec::new();
    let mut per_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (n, outcome) in &suite.ac4 {
        if !outcome.passed() {
            failures.push(format!("n={n}: {:?}", outcome.failures));
        }
        let times = summary_field(&outcome.summary, "times") as usize;
        if times != AC4_TIMES {
            failures.push(format!("n={n}: sampled {times} times, pinned {AC4_TIMES}"));
        }
        per_size
            .entry(*n)
            .or_default()
            .push(summary_field(&outcome.summary, "max_interference") as usize);
    }
    let trend: Vec<(f64, f64)> = per_size
        .iter_mut()
        .map(|(n, values)| (*n as f64, median(values)))
        .collect();
    let slope = log_log_slope(&trend);
    if slope > SLOPE_LIMIT {
        failures.push(format!("interference slope {slope:.3} exceeds {SLOPE_LIMIT}"));
    }
    if suite.ac4_elapsed > budget {
        failures.push(format!(
            "report pass took {:.2?} (budget {budget:?})",
            suite.ac4_elapsed
        ));
    }
    verdict(
        4,
        "interference protocol",
        &failures,
        &format!(
            "{} runs x {AC4_TIMES} times all connected with diameter <= 3, interference and change bounds held, median trend {:?} slope {slope:.3} <= {SLOPE_LIMIT}, in {:.2?}",
            suite.ac4.len(),
            trend,
            suite.ac4_elapsed
        ),
    );
}

// ------------------------------------------------------------ criterion 5

#[test]
fn criterion_5_approximate_counting() {
    let _g = serial();
    let suite = first_suite();
    let budget = Duration::from_secs(60);
    let mut failures = Vec::new();
    if !suite.ac5.passed() {
        failures.push(format!("{:?}", suite.ac5.failures));
    }
    if summary_field(&suite.ac5.summary, "violations") != 0.0 {
        failures.push("query violations reported".into());
    }
    if !suite.ac5.summary.contains("verified=true") {
        failures.push("counter not verified".into());
    }
    let queries = summary_field(&suite.ac5.summary, "queries") as usize;
    if queries != AC5_QUERIES {
        failures.push(format!("ran {queries} queries, pinned {AC5_QUERIES}"));
    }
    if suite.ac5_elapsed > budget {
        failures.push(format!(
            "report pass took {:.2?} (budget {budget:?})",
            suite.ac5_elapsed
        ));
    }
    verdict(
        5,
        "approximate counting",
        &failures,
        &format!(
            "verified counter (n={AC5_N}, eps={AC5_EPSILON}), {AC5_QUERIES} queries, max error {} <= {}, in {:.2?}",
            summary_field(&suite.ac5.summary, "max_error"),
            AC5_EPSILON * AC5_N as f64,
            suite.ac5_elapsed
        ),
    );
}

// ------------------------------------------------------------ criterion 6

#[test]
fn criterion_6_vc_and_shatter_empirics() {
    let _g = serial();
    let started = Instant::now();
    let budget = Duration::from_secs(300);
    let ecfg = EnumerationConfig::default();
    let mut failures = Vec::new();
    // static halfplanes on 8 generic points: VC exactly 3, exhaustively
    for i in 0..10u64 {
        let scenario = generate_scenario(&GeneratorParams {
            kind: GeneratorKind::Static,
            n: 8,
            dimension: 2,
            seed: 6000 + i,
            family: "halfspaces".into(),
            ..GeneratorParams::default()
        })
        .expect("static instance");
        let set = scenario.to_moving_set().unwrap();
        let cat = enumerate(&set, RangeFamily::Halfspaces, set.horizon(), &ecfg).unwrap();
        let vc = vc_dimension_estimate(&cat, 60 + i).unwrap();
        if vc.value != 3 || !vc.exact {
            failures.push(format!(
                "static instance {i}: halfplane VC {} (exact {})",
                vc.value, vc.exact
            ));
        }
    }
    // kinetic intervals on 12 moving points: VC stays <= 4
    for i in 0..10u64 {
        let scenario = linear_scenario(12, 6100 + i);
        let set = scenario.to_moving_set().unwrap();
        let cat = enumerate(&set, RangeFamily::Intervals, set.horizon(), &ecfg).unwrap();
        let vc = vc_dimension_estimate(&cat, 61 + i).unwrap();
        if vc.value > 4 {
            failures.push(format!("kinetic instance {i}: interval VC {}", vc.value));
        }
    }
    // kinetic halfplanes: shatter growth stays polynomial of the predicted
    // order; for d=2, s=1 the exponent limit is 2d+1+log2(ds)+0.5 = 6.5
    const SHATTER_SLOPE_LIMIT: f64 = 6.5;
    let mut worst_slope = f64::NEG_INFINITY;
    for i in 0..5u64 {
        let scenario = planar_scenario(10, 6200 + i, "halfspaces");
        let set = scenario.to_moving_set().unwrap();
        let cat = enumerate(&set, RangeFamily::Halfspaces, set.horizon(), &ecfg).unwrap();
        let points: Vec<(f64, f64)> = [4usize, 6, 8, 10]
            .iter()
            .map(|&m| {
                let sh = shatter_function(&cat, m, 62 + i).unwrap();
                (m as f64, sh.value.max(1) as f64)
            })
            .collect();
        let slope = log_log_slope(&points);
        worst_slope = worst_slope.max(slope);
        if slope > SHATTER_SLOPE_LIMIT {
            failures.push(format!(
                "kinetic halfplane instance {i}: shatter slope {slope:.3} exceeds {SHATTER_SLOPE_LIMIT}"
            ));
        }
    }
    let elapsed = started.elapsed();
    if elapsed > budget {
        failures.push(format!("took {elapsed:.2?} (budget {budget:?})"));
    }
    verdict(
        6,
        "VC and shatter empirics",
        &failures,
        &format!(
            "halfplane VC = 3 on 10/10 static instances, kinetic interval VC <= 4 on 10/10, worst shatter slope {worst_slope:.3} <= {SHATTER_SLOPE_LIMIT}, in {elapsed:.2?}"
        ),
    );
}

// ------------------------------------------------------------ criterion 7

#[test]
fn criterion_7_discrepancy_trend() {
    let _g = serial();
    let started = Instant::now();
    let budget = Duration::from_secs(300);
    const SIZES: [usize; 4] = [16, 32, 64, 128];
    const SEEDS: u64 = 20;
    const SLOPE_LIMIT: f64 = 0.65;
    let ecfg = EnumerationConfig::default();
    let mut failures = Vec::new();
    let mut cells = 0usize;
    let mut under_baseline = 0usize;
    let mut medians: Vec<(f64, f64)> = Vec::new();
    for &n in &SIZES {
        let mut improved_values = Vec::new();
        for i in 0..SEEDS {
            let scenario = linear_scenario(n, 7000 + n as u64 * 41 + i);
            let set = scenario.to_moving_set().unwrap();
            let window = set.horizon();
            let chi = color_random(n, 7500 + i);
            let random =
                kinetic_discrepancy(&set, RangeFamily::Intervals, window, &chi, &ecfg).unwrap();
            cells += 1;
            if (random.value as f64) <= random_baseline_bound(n, random.edges_checked) {
                under_baseline += 1;
            }
            // multistart greedy: polish five random colorings, keep the best
            let mut best_final = usize::MAX;
            for restart in 0..5u64 {
                let start = if restart == 0 {
                    chi.clone()
                } else {
                    color_random(n, 7500 + i + 1000 * restart)
                };
                let improved =
                    improve_coloring(&set, RangeFamily::Intervals, window, &start, 2 * n, &ecfg)
                        .unwrap();
                best_final = best_final.min(*improved.values.last().unwrap());
            }
            if best_final > random.value {
                failures.push(format!("n={n} seed {i}: greedy worsened the coloring"));
            }
            improved_values.push(best_final);
        }
        medians.push((n as f64, median(&mut improved_values).max(1.0)));
    }
    let slope = log_log_slope(&medians);
    if slope > SLOPE_LIMIT {
        failures.push(format!("discrepancy slope {slope:.3} exceeds {SLOPE_LIMIT}"));
    }
    let needed = (0.9 * cells as f64).ceil() as usize;
    if under_baseline < needed {
        failures.push(format!(
            "random baseline under sqrt(2n ln 2m) in only {under_baseline}/{cells} cells (need {needed})"
        ));
    }
    let elapsed = started.elapsed();
    if elapsed > budget {
        failures.push(format!("took {elapsed:.2?} (budget {budget:?})"));
    }
    verdict(
        7,
        "discrepancy trend",
        &failures,
        &format!(
            "improved medians {medians:?} slope {slope:.3} <= {SLOPE_LIMIT}, baseline held in {under_baseline}/{cells} cells, in {elapsed:.2?}"
        ),
    );
}

// ------------------------------------------------------------ criterion 8

#[test]
fn criterion_8_exact_depth_oracle() {
    let _g = serial();
    let started = Instant::now();
    let budget = Duration::from_secs(120);
    const CONFIGS: usize = 50;
    const DISKS: usize = 32;
    const GRID: usize = 1000; // 1000 x 1000 = 10^6 probes
    let mut failures = Vec::new();
    let mut equal = 0usize;
    for c in 0..CONFIGS {
        let mut rng = ChaCha8Rng::seed_from_u64(8000 + c as u64);
        let centers: Vec<Vec<f64>> = (0..DISKS)
            .map(|_| vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)])
            .collect();
        let radii: Vec<f64> = (0..DISKS).map(|_| rng.gen_range(0.5..3.0)).collect();
        let (exact, _, certified) = kinetikos::interference::disk_depth(&centers, &radii);
        if !certified {
            failures.push(format!("config {c}: planar depth not certified exact"));
        }
        let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
        for (ctr, r) in centers.iter().zip(&radii) {
            for a in 0..2 {
                lo[a] = lo[a].min(ctr[a] - r);
                hi[a] = hi[a].max(ctr[a] + r);
            }
        }
        let mut grid_depth = 0usize;
        for gx in 0..GRID {
            let x = lo[0] + (hi[0] - lo[0]) * gx as f64 / (GRID - 1) as f64;
            for gy in 0..GRID {
                let y = lo[1] + (hi[1] - lo[1]) * gy as f64 / (GRID - 1) as f64;
                let mut depth = 0usize;
                for (ctr, r) in centers.iter().zip(&radii) {
                    let (dx, dy) = (x - ctr[0], y - ctr[1]);
                    if dx * dx + dy * dy <= r * r {
                        depth += 1;
                    }
                }
                grid_depth = grid_depth.max(depth);
            }
        }
        if exact < grid_depth {
            failures.push(format!(
                "config {c}: exact depth {exact} below grid depth {grid_depth}"
            ));
        }
        if exact == grid_depth {
            equal += 1;
        }
    }
    if equal < 48 {
        failures.push(format!("grid matched the exact depth in only {equal}/{CONFIGS}"));
    }
    let elapsed = started.elapsed();
    if elapsed > budget {
        failures.push(format!("took {elapsed:.2?} (budget {budget:?})"));
    }
    verdict(
        8,
        "exact planar depth oracle",
        &failures,
        &format!(
            "{CONFIGS} configs of {DISKS} disks: exact >= 10^6-point grid always, equal in {equal}/{CONFIGS}, in {elapsed:.2?}"
        ),
    );
}

// ------------------------------------------------------------ criterion 9

fn collect_files(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
    let mut entries: Vec<_> = std::fs::read_dir(dir)
        .expect("report dir reads")
        .map(|e| e.expect("dir entry").path())
        .collect();
    entries.sort();
    for path in entries {
        if path.is_dir() {
            collect_files(root, &path, out);
        } else {
            let rel = path.strip_prefix(root).expect("under root").to_path_buf();
            out.insert(rel, std::fs::read(&path).expect("report file reads"));
        }
    }
}

#[test]
fn criterion_9_deterministic_reports() {
    let _g = serial();
    let first = first_suite();
    let rerun_dir = tempfile::tempdir().expect("tempdir");
    let second = run_suite(rerun_dir.path());
    let mut failures = Vec::new();
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    collect_files(&first.root, &first.root, &mut a);
    collect_files(&second.root, &second.root, &mut b);
    if a.keys().collect::<Vec<_>>() != b.keys().collect::<Vec<_>>() {
        failures.push(format!(
            "report trees differ: {} files vs {}",
            a.len(),
            b.len()
        ));
    }
    let mut compared = 0usize;
    for (rel, bytes) in &a {
        match b.get(rel) {
            Some(other) if other == bytes => compared += 1,
            Some(_) => failures.push(format!("{} differs between reruns", rel.display())),
            None => failures.push(format!("{} missing from rerun", rel.display())),
        }
    }
    verdict(
        9,
        "deterministic reports",
        &failures,
        &format!("criteria 2-5 rerun with identical seeds: {compared} report files byte-identical"),
    );
}
