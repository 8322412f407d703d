//! Two-colorings of kinetic hypergraphs and their worst edge imbalance.
//!
//! A coloring assigns +1 or -1 to every point; the discrepancy of the
//! kinetic hypergraph is the largest absolute signed sum over any edge the
//! motion ever realizes. Small instances score against the explicit edge
//! catalog. One-dimensional interval instances instead stream over
//! representative times — within one ordering every contiguous window is
//! an edge, so prefix-sum extremes find the worst window without ever
//! materializing the catalog — which keeps n in the hundreds tractable.
//!
//! No coloring construction with a proven bound is attempted: colorings
//! start random and improve by greedy single flips, and the sublinear
//! growth predicted for the discrepancy is checked as a trend, not a
//! certified constant.

use crate::error::Error;
use crate::hypergraph::{
    count_interval_edges, enumerate, event_times, representative_times, EnumerationConfig,
};
use crate::motion::{MovingPointSet, TimeInterval};
use crate::ranges::RangeFamily;
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A two-coloring of the points: every entry is +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub values: Vec<i8>,
    /// Where the coloring came from, for reports.
    pub provenance: String,
}

impl Coloring {
    pub fn new(values: Vec<i8>, provenance: impl Into<String>) -> Result<Self, Error> {
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidInput("coloring entries must be +1 or -1".into()));
        }
        Ok(Coloring {
            values,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Signed sum over an edge's members.
    pub fn imbalance(&self, edge: &[u32]) -> i64 {
        edge.iter().map(|&i| self.values[i as usize] as i64).sum()
    }

    pub fn negated(&self) -> Coloring {
        Coloring {
            values: self.values.iter().map(|v| -v).collect(),
            provenance: format!("negated({})", self.provenance),
        }
    }
}

/// Independent fair +/-1 entries from a seeded generator.
pub fn color_random(n: usize, seed: u64) -> Coloring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Coloring {
        values: (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect(),
        provenance: format!("random(seed={seed})"),
    }
}

#[derive(Debug, Clone)]
pub struct DiscrepancyResult<T> {
    /// max |sum of colors| over every edge of the kinetic hypergraph.
    pub value: usize,
    /// An edge attaining it, as sorted point indices.
    pub edge: Vec<u32>,
    /// A time at which that edge is realized.
    pub time: T,
    /// Number of distinct edges accounted for.
    pub edges_checked: u64,
}

/// The tail bound a random coloring should rarely exceed on a hypergraph
/// with m edges: sqrt(2 n ln(2m)).
pub fn random_baseline_bound(n: usize, m: u64) -> f64 {
    (2.0 * n as f64 * (2.0 * m.max(1) as f64).ln()).sqrt()
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "slope needs at least two points");
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let (mx, my) = logs
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let num: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    num / den
}

fn check_coloring<T: Real>(set: &MovingPointSet<T>, chi: &Coloring) -> Result<(), Error> {
    if chi.len() != set.len() {
        return Err(Error::InvalidInput(format!(
            "coloring length {} does not match point count {}",
            chi.len(),
            set.len()
        )));
    }
    if chi.values.iter().any(|&v| v != 1 && v != -1) {
        return Err(Error::InvalidInput("coloring entries must be +1 or -1".into()));
    }
    Ok(())
}

/// Maximum |signed sum| over all kinetic hyperedges, with an attaining
/// edge and time. Interval instances stream over representative
/// orderings; every other family scores against the explicit catalog and
/// is subject to its enumeration guards.
pub fn kinetic_discrepancy<T: Real>(
    set: &MovingPointSet<T>,
    family: RangeFamily,
    window: TimeInterval<T>,
    chi: &Coloring,
    ecfg: &EnumerationConfig<T>,
) -> Result<DiscrepancyResult<T>, Error> {
    check_coloring(set, chi)?;
    if family == RangeFamily::Intervals {
        return interval_discrepancy(set, window, chi, ecfg);
    }
    let cat = enumerate(set, family, window, ecfg)?;
    let mut best: Option<(usize, &Vec<u32>)> = None;
    for edge in cat.edges.keys() {
        let v = chi.imbalance(edge).unsigned_abs() as usize;
        if best.map_or(true, |(bv, _)| v > bv) {
            best = Some((v, edge));
        }
    }
    let (value, edge) = best.ok_or_else(|| Error::InvalidInput("empty catalog".into()))?;
    let witness = &cat.edges[edge];
    Ok(DiscrepancyResult {
        value,
        edge: edge.clone(),
        time: witness.time,
        edges_checked: cat.edge_count() as u64,
    })
}

/// Sorted point order at one time: by coordinate, index on ties.
fn rep_order<T: Real>(set: &MovingPointSet<T>, t: T) -> Vec<u32> {
    let mut order: Vec<(T, u32)> = (0..set.len())
        .map(|i| (set.trajectory(i).component(0).eval(t), i as u32))
        .collect();
    order.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite positions")
            .then(a.1.cmp(&b.1))
    });
    order.into_iter().map(|(_, i)| i).collect()
}

fn interval_discrepancy<T: Real>(
    set: &MovingPointSet<T>,
    window: TimeInterval<T>,
    chi: &Coloring,
    ecfg: &EnumerationConfig<T>,
) -> Result<DiscrepancyResult<T>, Error> {
    let n = set.len();
    let events = event_times(set, RangeFamily::Intervals, window, ecfg)?;
    let reps = representative_times(&events, window);
    let m = count_interval_edges(set, window, ecfg)?;
    // worst window per representative ordering via prefix-sum extremes
    let mut best_value = 0usize;
    let mut best_edge: Vec<u32> = Vec::new();
    let mut best_time = window.lo();
    for &t in &reps {
        let order = rep_order(set, t);
        let mut s = 0i64;
        let (mut min_s, mut min_at) = (0i64, 0usize);
        let (mut max_s, mut max_at) = (0i64, 0usize);
        for (p, &i) in order.iter().enumerate() {
            s += chi.values[i as usize] as i64;
            if s < min_s {
                (min_s, min_at) = (s, p + 1);
            }
            if s > max_s {
                (max_s, max_at) = (s, p + 1);
            }
        }
        let spread = (max_s - min_s) as usize;
        if spread > best_value {
            best_value = spread;
            best_time = t;
            let (lo, hi) = (min_at.min(max_at), min_at.max(max_at));
            best_edge = order[lo..hi].to_vec();
            best_edge.sort_unstable();
        }
    }
    if best_edge.is_empty() && n > 0 {
        // perfectly balanced at every order: any singleton attains 1,
        // except that spread 0 over nonempty points cannot happen since
        // a single point already gives |sum| = 1
        best_value = 1;
        best_edge = vec![0];
        best_time = reps[0];
    }
    Ok(DiscrepancyResult {
        value: best_value,
        edge: best_edge,
        time: best_time,
        edges_checked: m,
    })
}

/// A greedy improvement run: the coloring after the flips, plus the
/// discrepancy value before and after each applied flip.
#[derive(Debug, Clone)]
pub struct ImprovedColoring {
    pub coloring: Coloring,
    /// values[0] is the incoming discrepancy; one entry per applied flip
    /// follows. Non-increasing by construction.
    pub values: Vec<usize>,
    /// Indices flipped, in order.
    pub flips: Vec<u32>,
}

/// Greedy local search: repeatedly flip the single entry whose flip
/// yields the smallest new maximum imbalance, while that is a strict
/// improvement; stop at a local optimum or after `iterations` flips.
/// Dispatches like `kinetic_discrepancy`: interval instances stream,
/// other families walk the catalog.
pub fn improve_coloring<T: Real>(
    set: &MovingPointSet<T>,
    family: RangeFamily,
    window: TimeInterval<T>,
    chi: &Coloring,
    iterations: usize,
    ecfg: &EnumerationConfig<T>,
) -> Result<ImprovedColoring, Error> {
    check_coloring(set, chi)?;
    if family == RangeFamily::Intervals {
        improve_via_stream(set, window, chi, iterations, ecfg)
    } else {
        improve_via_catalog(set, family, window, chi, iterations, ecfg)
    }
}

fn finish_improved(chi: &Coloring, values: Vec<i8>, trace: Vec<usize>, flips: Vec<u32>) -> ImprovedColoring {
    ImprovedColoring {
        coloring: Coloring {
            values,
            provenance: format!("{} + greedy({} flips)", chi.provenance, flips.len()),
        },
        values: trace,
        flips,
    }
}

fn improve_via_catalog<T: Real>(
    set: &MovingPointSet<T>,
    family: RangeFamily,
    window: TimeInterval<T>,
    chi: &Coloring,
    iterations: usize,
    ecfg: &EnumerationConfig<T>,
) -> Result<ImprovedColoring, Error> {
    let cat = enumerate(set, family, window, ecfg)?;
    let masks = cat.edge_masks()?;
    let n = set.len();
    let mut values = chi.values.clone();
    let mut sums: Vec<i64> = cat.edges.keys().map(|e| chi.imbalance(e)).collect();
    let mut current = sums.iter().map(|s| s.unsigned_abs() as usize).max().unwrap_or(0);
    let mut trace = vec![current];
    let mut flips = Vec::new();
    for _ in 0..iterations {
        // smallest new maximum over single flips; first index on ties
        let mut best: Option<(usize, usize)> = None; // (new value, v)
        for v in 0..n {
            let delta = -2 * values[v] as i64;
            let cap = best.map_or(current, |(b, _)| b);
            let mut worst = 0usize;
            for (s, mask) in sums.iter().zip(&masks) {
                let adj = if mask >> v & 1 == 1 { *s + delta } else { *s };
                worst = worst.max(adj.unsigned_abs() as usize);
                if worst >= cap {
                    break; // cannot strictly beat the incumbent
                }
            }
            if worst < cap {
                best = Some((worst, v));
            }
        }
        let Some((new_value, v)) = best else { break };
        let delta = -2 * values[v] as i64;
        values[v] = -values[v];
        for (s, mask) in sums.iter_mut().zip(&masks) {
            if mask >> v & 1 == 1 {
                *s += delta;
            }
        }
        current = new_value;
        trace.push(current);
        flips.push(v as u32);
    }
    Ok(finish_improved(chi, values, trace, flips))
}

/// One pass over all representative orderings: the current maximum
/// spread, and for each point the maximum |imbalance| that would remain
/// after flipping exactly that point.
fn stream_flip_scores(orders: &[Vec<u32>], values: &[i8]) -> (usize, Vec<usize>) {
    let n = values.len();
    const NONE: i64 = i64::MIN / 2;
    let per_rep: Vec<(usize, Vec<usize>)> = orders
        .par_iter()
        .map(|order| {
            let mut s = vec![0i64; n + 1];
            for (p, &i) in order.iter().enumerate() {
                s[p + 1] = s[p] + values[i as usize] as i64;
            }
            // prefix/suffix extremes of s, and best spreads confined to a
            // prefix (windows left of a position) or suffix (right of it)
            let mut pref_min = vec![0i64; n + 1];
            let mut pref_max = vec![0i64; n + 1];
            let mut left_hi = vec![NONE; n + 1]; // max s_j - s_i, i < j <= q
            let mut left_lo = vec![-NONE; n + 1];
            for q in 1..=n {
                pref_min[q] = pref_min[q - 1].min(s[q]);
                pref_max[q] = pref_max[q - 1].max(s[q]);
                left_hi[q] = left_hi[q - 1].max(s[q] - pref_min[q - 1]);
                left_lo[q] = left_lo[q - 1].min(s[q] - pref_max[q - 1]);
            }
            let mut suf_min = vec![0i64; n + 2];
            let mut suf_max = vec![0i64; n + 2];
            suf_min[n] = s[n];
            suf_max[n] = s[n];
            let mut right_hi = vec![NONE; n + 2]; // max s_j - s_i, q <= i < j
            let mut right_lo = vec![-NONE; n + 2];
            for q in (0..n).rev() {
                suf_min[q] = suf_min[q + 1].min(s[q]);
                suf_max[q] = suf_max[q + 1].max(s[q]);
                right_hi[q] = right_hi[q + 1].max(suf_max[q + 1] - s[q]);
                right_lo[q] = right_lo[q + 1].min(suf_min[q + 1] - s[q]);
            }
            let rep_value = left_hi[n].max(-left_lo[n]).max(0) as usize;
            let mut rep_scores = vec![0usize; n];
            for (p, &i) in order.iter().enumerate() {
                // windows containing position p shift by delta; their
                // extreme sums bound every |shifted| value
                let delta = -2 * values[i as usize] as i64;
                let in_hi = suf_max[p + 1] - pref_min[p];
                let in_lo = suf_min[p + 1] - pref_max[p];
                let mut after = (in_hi + delta).abs().max((in_lo + delta).abs());
                if p >= 1 {
                    after = after.max(left_hi[p]).max(-left_lo[p]);
                }
                if p + 2 <= n {
                    after = after.max(right_hi[p + 1]).max(-right_lo[p + 1]);
                }
                rep_scores[i as usize] = after as usize;
            }
            (rep_value, rep_scores)
        })
        .collect();
    let mut value = 0usize;
    let mut scores = vec![0usize; n];
    for (rv, rs) in per_rep {
        value = value.max(rv);
        for (b, r) in scores.iter_mut().zip(rs) {
            *b = (*b).max(r);
        }
    }
    (value, scores)
}

fn improve_via_stream<T: Real>(
    set: &MovingPointSet<T>,
    window: TimeInterval<T>,
    chi: &Coloring,
    iterations: usize,
    ecfg: &EnumerationConfig<T>,
) -> Result<ImprovedColoring, Error> {
    let events = event_times(set, RangeFamily::Intervals, window, ecfg)?;
    let reps = representative_times(&events, window);
    let orders: Vec<Vec<u32>> = reps.par_iter().map(|&t| rep_order(set, t)).collect();
    let mut values = chi.values.clone();
    let (mut current, mut scores) = stream_flip_scores(&orders, &values);
    let mut trace = vec![current];
    let mut flips = Vec::new();
    for _ in 0..iterations {
        let (v, &best) = scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("nonempty coloring");
        if best >= current {
            break;
        }
        values[v] = -values[v];
        current = best;
        trace.push(current);
        flips.push(v as u32);
        if flips.len() < iterations {
            scores = stream_flip_scores(&orders, &values).1;
        }
    }
    Ok(finish_improved(chi, values, trace, flips))
}

/// One measured point of a discrepancy growth experiment, with the two
/// reference exponents the theory offers for dimension d: the kinetic
/// bound n^(1/2 - 1/(2d+2)) and the primal-shatter bound n^(1/2 - 1/(2d)).
#[derive(Debug, Clone)]
pub struct TrendRow {
    pub n: usize,
    pub measured: usize,
    pub reference_kinetic: f64,
    pub reference_primal: f64,
}

pub fn trend_row(n: usize, measured: usize, d: usize) -> TrendRow {
    let nf = n as f64;
    TrendRow {
        n,
        measured,
        reference_kinetic: nf.powf(0.5 - 1.0 / (2.0 * d as f64 + 2.0)),
        reference_primal: nf.powf(0.5 - 1.0 / (2.0 * d as f64)),
    }
}

/// CSV rows `n,measured,ref_kinetic,ref_primal`.
pub fn trend_csv(rows: &[TrendRow]) -> String {
    let mut out = String::from("n,measured,ref_kinetic,ref_primal\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n, r.measured, r.reference_kinetic, r.reference_primal
        ));
    }
    out
}

/// CSV rows `index,value` with values +1/-1.
pub fn coloring_csv(chi: &Coloring) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in chi.values.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::Trajectory;
    use crate::poly::Polynomial;

    fn win(lo: f64, hi: f64) -> TimeInterval<f64> {
        TimeInterval::new(lo, hi).unwrap()
    }

    fn ecfg() -> EnumerationConfig<f64> {
        EnumerationConfig::default()
    }

    fn moving_line_set(n: usize, seed: u64) -> MovingPointSet<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trajs = (0..n)
            .map(|_| {
                Trajectory::new(vec![Polynomial::new(vec![
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-4.0..4.0),
                ])])
                .unwrap()
            })
            .collect();
        MovingPointSet::new(trajs, 1, win(0.0, 1.0)).unwrap()
    }

    #[test]
    fn random_colorings_are_fair_and_reproducible() {
        let a = color_random(100, 9);
        let b = color_random(100, 9);
        assert_eq!(a, b);
        assert!(a.values.iter().all(|&v| v == 1 || v == -1));
        let one = color_random(1, 4);
        assert_eq!(one.len(), 1);
        let big = color_random(10_000, 7);
        let mean = big.values.iter().map(|&v| v as f64).sum::<f64>() / 10_000.0;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!(Coloring::new(vec![1, 0, -1], "bad").is_err());
    }

    #[test]
    fn all_plus_ones_scores_the_largest_edge() {
        let set = moving_line_set(8, 1);
        let chi = Coloring::new(vec![1; 8], "ones").unwrap();
        let r = kinetic_discrepancy(&set, RangeFamily::Intervals, win(0.0, 1.0), &chi, &ecfg())
            .unwrap();
        assert_eq!(r.value, 8, "the full line is always one window");
        assert_eq!(r.edge.len(), 8);
        // catalog families too: value equals the largest edge size
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trajs: Vec<Trajectory<f64>> = (0..7)
            .map(|_| {
                Trajectory::new(vec![
                    Polynomial::from_slice(&[rng.gen_range(-5.0..5.0)]),
                    Polynomial::from_slice(&[rng.gen_range(-5.0..5.0)]),
                ])
                .unwrap()
            })
            .collect();
        let set2 = MovingPointSet::new(trajs, 1, win(0.0, 1.0)).unwrap();
        let chi2 = Coloring::new(vec![1; 7], "ones").unwrap();
        let r2 = kinetic_discrepancy(&set2, RangeFamily::Halfspaces, win(0.0, 1.0), &chi2, &ecfg())
            .unwrap();
        let cat = enumerate(&set2, RangeFamily::Halfspaces, win(0.0, 1.0), &ecfg()).unwrap();
        let largest = cat.edges.keys().map(|e| e.len()).max().unwrap();
        assert_eq!(r2.value, largest);
    }

    #[test]
    fn paired_points_balance_pair_closed_edges() {
        // six almost-coincident pairs with opposite colors: any edge that
        // keeps pairs whole sums to zero
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut trajs = Vec::new();
        let mut chi_vals = Vec::new();
        for _ in 0..6 {
            let base = rng.gen_range(-5.0..5.0);
            let drift = rng.gen_range(-2.0..2.0);
            trajs.push(Trajectory::new(vec![Polynomial::new(vec![base, drift])]).unwrap());
            trajs.push(
                Trajectory::new(vec![Polynomial::new(vec![base + 1e-6, drift])]).unwrap(),
            );
            chi_vals.push(1);
            chi_vals.push(-1);
        }
        let set = MovingPointSet::new(trajs, 1, win(0.0, 1.0)).unwrap();
        let chi = Coloring::new(chi_vals, "paired").unwrap();
        let cat = enumerate(&set, RangeFamily::Intervals, win(0.0, 1.0), &ecfg()).unwrap();
        let mut closed_edges = 0usize;
        for edge in cat.edges.keys() {
            let closed = edge.iter().all(|&i| {
                let partner = if i % 2 == 0 { i + 1 } else { i - 1 };
                edge.binary_search(&partner).is_ok()
            });
            if closed {
                closed_edges += 1;
                assert_eq!(chi.imbalance(edge), 0, "pair-closed edge {edge:?}");
            }
        }
        assert!(closed_edges > 6, "expected multi-pair closed edges");
    }

    #[test]
    fn negation_and_parity_invariants_hold() {
        let set = moving_line_set(10, 4);
        let chi = color_random(10, 5);
        let r = kinetic_discrepancy(&set, RangeFamily::Intervals, win(0.0, 1.0), &chi, &ecfg())
            .unwrap();
        let rn = kinetic_discrepancy(
            &set,
            RangeFamily::Intervals,
            win(0.0, 1.0),
            &chi.negated(),
            &ecfg(),
        )
        .unwrap();
        assert_eq!(r.value, rn.value);
        assert_eq!(chi.imbalance(&r.edge).unsigned_abs() as usize, r.value);
        let cat = enumerate(&set, RangeFamily::Intervals, win(0.0, 1.0), &ecfg()).unwrap();
        for edge in cat.edges.keys() {
            let s = chi.imbalance(edge).unsigned_abs() as usize;
            assert_eq!(s % 2, edge.len() % 2, "parity violated on {edge:?}");
        }
    }

    #[test]
    fn random_colorings_sit_under_the_tail_bound() {
        let mut under = 0;
        for seed in 0..10 {
            let set = moving_line_set(64, 100 + seed);
            let chi = color_random(64, 200 + seed);
            let r =
                kinetic_discrepancy(&set, RangeFamily::Intervals, win(0.0, 1.0), &chi, &ecfg())
                    .unwrap();
            if (r.value as f64) <= random_baseline_bound(64, r.edges_checked) {
                under += 1;
            }
        }
        assert!(under >= 8, "only {under}/10 under the tail bound");
    }

    #[test]
    fn greedy_improves_all_ones_and_stays_monotone() {
        let set = moving_line_set(16, 6);
        let chi = Coloring::new(vec![1; 16], "ones").unwrap();
        let out = improve_coloring(
            &set,
            RangeFamily::Intervals,
            win(0.0, 1.0),
            &chi,
            100,
            &ecfg(),
        )
        .unwrap();
        assert_eq!(out.values[0], 16);
        assert!(out.values.last().unwrap() < &16, "no improvement found");
        for w in out.values.windows(2) {
            assert!(w[1] <= w[0], "non-monotone trace {:?}", out.values);
        }
        let r = kinetic_discrepancy(
            &set,
            RangeFamily::Intervals,
            win(0.0, 1.0),
            &out.coloring,
            &ecfg(),
        )
        .unwrap();
        assert_eq!(r.value, *out.values.last().unwrap());
    }

    #[test]
    fn balanced_pair_is_a_local_optimum() {
        let set = moving_line_set(2, 8);
        let chi = Coloring::new(vec![1, -1], "balanced").unwrap();
        let out = improve_coloring(
            &set,
            RangeFamily::Intervals,
            win(0.0, 1.0),
            &chi,
            10,
            &ecfg(),
        )
        .unwrap();
        assert!(out.flips.is_empty());
        assert_eq!(out.coloring.values, chi.values);
        assert_eq!(out.values, vec![1]);
    }

    #[test]
    fn stream_and_catalog_greedy_agree() {
        let set = moving_line_set(10, 12);
        let chi = color_random(10, 13);
        let a = improve_via_stream(&set, win(0.0, 1.0), &chi, 50, &ecfg()).unwrap();
        let b =
            improve_via_catalog(&set, RangeFamily::Intervals, win(0.0, 1.0), &chi, 50, &ecfg())
                .unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.flips, b.flips);
        assert_eq!(a.coloring.values, b.coloring.values);
    }

    #[test]
    fn trend_helpers_have_expected_shape() {
        let pts: Vec<(f64, f64)> = (1..=4).map(|k| {
            let x = (k as f64).exp();
            (x, x * x)
        }).collect();
        assert!((log_log_slope(&pts) - 2.0).abs() < 1e-9);
        let rows = vec![trend_row(16, 5, 1), trend_row(32, 6, 1)];
        assert!((rows[0].reference_kinetic - (16f64).powf(0.25)).abs() < 1e-12);
        assert!((rows[0].reference_primal - 1.0).abs() < 1e-12);
        let csv = trend_csv(&rows);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("n,measured,ref_kinetic,ref_primal"));
        let chi = color_random(3, 1);
        let ccsv = coloring_csv(&chi);
        assert_eq!(ccsv.lines().count(), 4);
    }
}
