//! Kinetic catalogs: the distinct point subsets a range family captures
//! over a motion window.
//!
//! The subsets realizable by a range family change only when the moving
//! configuration passes through a degeneracy: an affine degeneracy of d+1
//! points for halfspaces (the sign of the orientation determinant flips), a
//! cosphericality of d+2 points for balls, a coincidence of two points on
//! the line for intervals. Those instants are roots of fixed polynomials in
//! time. The catalog is built by enumerating canonical ranges at one
//! representative time inside each inter-event interval (plus the window
//! endpoints) and collecting every realized subset with a witness.
//!
//! Cones carry no clean algebraic event set; their timeline reuses the
//! halfspace and ball events plus a uniform time grid, and is best-effort.

use crate::combi::{binomial, for_each_combination};
use crate::error::Error;
use crate::motion::{
    cosphericality_polynomial, degeneracy_polynomial, MovingPointSet, TimeInterval,
};
use crate::poly::Polynomial;
use crate::ranges::{canonical_ranges_with_angle, estimated_ranges, Range, RangeFamily};
use crate::scalar::Real;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Uniform synthetic event grid per point for the cone timeline.
const CONE_GRID_PER_POINT: usize = 64;

/// Exhaustive-versus-sampled switchover for subset searches.
const SUBSET_SEARCH_LIMIT: u128 = 20_000;

#[derive(Debug, Clone)]
pub struct EnumerationConfig<T> {
    /// Root isolation tolerance; nearby events merge within twice this.
    pub tol: T,
    /// Cap on the number of point tuples whose event polynomial is solved.
    pub max_tuples: u128,
    /// Cap on representative times x canonical ranges x points.
    pub work_budget: u128,
    /// Cap on distinct catalog edges.
    pub max_edges: usize,
    /// Opening angle for the cone family (default sixty degrees).
    pub cone_angle: Option<T>,
}

impl<T: Real> Default for EnumerationConfig<T> {
    fn default() -> Self {
        EnumerationConfig {
            tol: T::from_f(crate::TAU_ROOT),
            max_tuples: 1_000_000,
            work_budget: 600_000_000,
            max_edges: 200_000,
            cone_angle: None,
        }
    }
}

/// One catalog entry: a range and a time at which it realizes the subset.
#[derive(Debug, Clone)]
pub struct Witness<T> {
    pub time: T,
    pub range: Range<T>,
}

#[derive(Debug, Clone)]
pub struct KineticCatalog<T> {
    pub family: RangeFamily,
    pub n: usize,
    pub window: TimeInterval<T>,
    pub events: Vec<T>,
    pub reps: Vec<T>,
    pub edges: BTreeMap<Vec<u32>, Witness<T>>,
}

impl<T: Real> KineticCatalog<T> {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, subset: &[u32]) -> bool {
        self.edges.contains_key(subset)
    }

    /// Bit masks of the edges, for restriction counting. Needs n <= 128.
    pub fn edge_masks(&self) -> Result<Vec<u128>, Error> {
        if self.n > 128 {
            return Err(Error::GuardExceeded {
                what: "bit-mask restriction counting",
                size: self.n as u128,
                limit: 128,
            });
        }
        Ok(self
            .edges
            .keys()
            .map(|e| e.iter().fold(0u128, |m, i| m | 1u128 << *i))
            .collect())
    }

    /// Plain-text export: one header line, then one line per edge with its
    /// witness time and range.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "family={} n={} window=[{},{}] events={} edges={}",
            self.family,
            self.n,
            self.window.lo(),
            self.window.hi(),
            self.events.len(),
            self.edges.len()
        );
        for (edge, w) in &self.edges {
            let ids: Vec<String> = edge.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(s, "{}\tt={}\t{}", ids.join(","), w.time, w.range);
        }
        s
    }
}

fn check_family_dim(family: RangeFamily, d: usize) -> Result<(), Error> {
    match family {
        RangeFamily::Intervals if d != 1 => Err(Error::InvalidInput(format!(
            "interval family is one-dimensional, configuration has d = {d}"
        ))),
        RangeFamily::Halfspaces | RangeFamily::Balls if d > 3 => {
            Err(Error::UnsupportedDimension(d))
        }
        _ => Ok(()),
    }
}

/// Distinct times in the window at which the configuration passes through a
/// family-relevant degeneracy, sorted ascending, merged within `2 * tol`.
/// Errors if a tuple is degenerate at every time (validate and perturb
/// first) or the tuple count exceeds the guard.
pub fn event_times<T: Real>(
    set: &MovingPointSet<T>,
    family: RangeFamily,
    window: TimeInterval<T>,
    cfg: &EnumerationConfig<T>,
) -> Result<Vec<T>, Error> {
    let n = set.len();
    let d = set.dim();
    check_family_dim(family, d)?;
    let tuples: u128 = match family {
        RangeFamily::Intervals => binomial(n, 2),
        RangeFamily::Halfspaces => binomial(n, d + 1),
        RangeFamily::Balls | RangeFamily::BoundedCones => {
            binomial(n, d + 2) + binomial(n, d + 1)
        }
    };
    if tuples > cfg.max_tuples {
        return Err(Error::GuardExceeded {
            what: "event tuple enumeration",
            size: tuples,
            limit: cfg.max_tuples,
        });
    }
    let mut times: Vec<T> = Vec::new();
    let mut push_poly = |p: Polynomial<T>| -> Result<(), Error> {
        if p.is_zero() {
            return Err(Error::Degenerate(
                "a point tuple is degenerate at every time; validate and perturb the input"
                    .into(),
            ));
        }
        if p.degree() == 0 {
            return Ok(());
        }
        times.extend(p.real_roots(window, cfg.tol)?);
        Ok(())
    };
    match family {
        RangeFamily::Intervals => {
            for i in 0..n {
                for j in i + 1..n {
                    let p = set
                        .trajectory(i)
                        .component(0)
                        .sub_poly(set.trajectory(j).component(0));
                    push_poly(p)?;
                }
            }
        }
        RangeFamily::Halfspaces => {
            over_tuples(set, d + 1, &mut |t| degeneracy_polynomial(t), &mut push_poly)?;
        }
        RangeFamily::Balls | RangeFamily::BoundedCones => {
            over_tuples(set, d + 2, &mut |t| cosphericality_polynomial(t), &mut push_poly)?;
            over_tuples(set, d + 1, &mut |t| degeneracy_polynomial(t), &mut push_poly)?;
        }
    }
    if family == RangeFamily::BoundedCones {
        let steps = CONE_GRID_PER_POINT * n;
        let span = window.span();
        for g in 0..steps {
            let f = (g as f64 + 0.5) / steps as f64;
            times.push(window.lo() + span * T::from_f(f));
        }
    }
    times.sort_by(|a, b| a.partial_cmp(b).expect("event times are finite"));
    let two_tol = cfg.tol * T::from_f(2.0);
    let mut merged: Vec<T> = Vec::with_capacity(times.len());
    for t in times {
        if merged.last().is_none_or(|last| t - *last > two_tol) {
            merged.push(t);
        }
    }
    Ok(merged)
}

/// Applies `push` to `build`'s polynomial for every k-tuple of
/// trajectories, stopping at the first error.
fn over_tuples<T: Real>(
    set: &MovingPointSet<T>,
    k: usize,
    build: &mut dyn FnMut(&[&crate::motion::Trajectory<T>]) -> Result<Polynomial<T>, Error>,
    push: &mut dyn FnMut(Polynomial<T>) -> Result<(), Error>,
) -> Result<(), Error> {
    let mut failure: Option<Error> = None;
    for_each_combination(set.len(), k, |idx| {
        let tuple: Vec<&crate::motion::Trajectory<T>> =
            idx.iter().map(|&i| set.trajectory(i)).collect();
        match build(&tuple).and_then(&mut *push) {
            Ok(()) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// The window endpoints plus one midpoint per maximal interval between
/// consecutive events.
pub fn representative_times<T: Real>(events: &[T], window: TimeInterval<T>) -> Vec<T> {
    let two = T::from_f(2.0);
    let mut reps = Vec::with_capacity(events.len() + 3);
    reps.push(window.lo());
    let mut prev = window.lo();
    for &e in events {
        if e > prev {
            reps.push((prev + e) / two);
        }
        prev = e;
    }
    if window.hi() > prev {
        reps.push((prev + window.hi()) / two);
    }
    reps.push(window.hi());
    reps
}

/// Builds the kinetic catalog: every subset some canonical range captures
/// at some representative time, keyed by the sorted point indices, with the
/// earliest witness kept.
pub fn enumerate<T: Real>(
    set: &MovingPointSet<T>,
    family: RangeFamily,
    window: TimeInterval<T>,
    cfg: &EnumerationConfig<T>,
) -> Result<KineticCatalog<T>, Error> {
    let n = set.len();
    let d = set.dim();
    check_family_dim(family, d)?;
    let events = event_times(set, family, window, cfg)?;
    let reps = representative_times(&events, window);
    let work = (reps.len() as u128)
        .saturating_mul(estimated_ranges(n, d, family))
        .saturating_mul(n as u128);
    if work > cfg.work_budget {
        return Err(Error::GuardExceeded {
            what: "catalog enumeration work",
            size: work,
            limit: cfg.work_budget,
        });
    }
    // chunked map over representative times, merged in time order so the
    // earliest-witness rule is deterministic under any thread count
    let chunk_maps: Vec<Result<BTreeMap<Vec<u32>, Witness<T>>, Error>> = reps
        .par_chunks(32)
        .map(|chunk| {
            let mut local: BTreeMap<Vec<u32>, Witness<T>> = BTreeMap::new();
            for &t in chunk {
                let positions = set.positions(t);
                let ranges = canonical_ranges_with_angle(&positions, family, cfg.cone_angle)?;
                for r in ranges {
                    let subset = r.select(&positions);
                    if subset.is_empty() {
                        continue;
                    }
                    local
                        .entry(subset)
                        .or_insert_with(|| Witness { time: t, range: r });
                }
            }
            Ok(local)
        })
        .collect();
    let mut edges: BTreeMap<Vec<u32>, Witness<T>> = BTreeMap::new();
    for m in chunk_maps {
        for (k, v) in m? {
            edges.entry(k).or_insert(v);
            if edges.len() > cfg.max_edges {
                return Err(Error::GuardExceeded {
                    what: "catalog edge count",
                    size: edges.len() as u128,
                    limit: cfg.max_edges as u128,
                });
            }
        }
    }
    Ok(KineticCatalog {
        family,
        n,
        window,
        events,
        reps,
        edges,
    })
}

/// A shatter or VC value together with whether the subset search that
/// produced it was exhaustive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchValue {
    pub value: usize,
    pub exact: bool,
}

fn subsets_to_probe(n: usize, m: usize, seed: u64) -> (Vec<Vec<usize>>, bool) {
    let total = binomial(n, m);
    if total <= SUBSET_SEARCH_LIMIT {
        let mut all = Vec::with_capacity(total as usize);
        for_each_combination(n, m, |idx| {
            all.push(idx.to_vec());
            true
        });
        (all, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(SUBSET_SEARCH_LIMIT as usize);
        let mut pool: Vec<usize> = (0..n).collect();
        for _ in 0..SUBSET_SEARCH_LIMIT {
            pool.shuffle(&mut rng);
            let mut pick: Vec<usize> = pool[..m].to_vec();
            pick.sort_unstable();
            out.push(pick);
        }
        (out, false)
    }
}

/// Count of distinct nonempty restrictions of the catalog edges to `probe`.
fn restriction_count(edge_masks: &[u128], probe: &[usize]) -> usize {
    let pmask = probe.iter().fold(0u128, |m, i| m | 1u128 << *i);
    let mut seen: Vec<u128> = edge_masks
        .iter()
        .map(|e| e & pmask)
        .filter(|m| *m != 0)
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Largest number of distinct nonempty traces the catalog induces on any
/// point subset of size `m`. Exhaustive when the subset count fits the
/// guard, otherwise a seeded sample (flagged inexact). The empty trace is
/// excluded from the count; it is realizable for every family here.
pub fn shatter_function<T: Real>(
    cat: &KineticCatalog<T>,
    m: usize,
    seed: u64,
) -> Result<SearchValue, Error> {
    if m == 0 || m > cat.n {
        return Err(Error::InvalidInput(format!(
            "shatter argument {m} out of range for n = {}",
            cat.n
        )));
    }
    let masks = cat.edge_masks()?;
    let (probes, exact) = subsets_to_probe(cat.n, m, seed);
    let best = probes
        .par_iter()
        .map(|p| restriction_count(&masks, p))
        .max()
        .unwrap_or(0);
    Ok(SearchValue { value: best, exact })
}

/// Largest `m` such that some size-m subset carries all `2^m - 1` nonempty
/// traces (the empty trace being free). Exact when every search level up to
/// the failing one was exhaustive.
pub fn vc_dimension_estimate<T: Real>(
    cat: &KineticCatalog<T>,
    seed: u64,
) -> Result<SearchValue, Error> {
    let masks = cat.edge_masks()?;
    let mut exact = true;
    let mut vc = 0usize;
    for m in 1..=cat.n.min(24) {
        let (probes, exhaustive) = subsets_to_probe(cat.n, m, seed ^ m as u64);
        let want = (1usize << m) - 1;
        let found = probes
            .par_iter()
            .any(|p| restriction_count(&masks, p) == want);
        if found {
            vc = m;
        } else {
            exact = exhaustive;
            break;
        }
    }
    Ok(SearchValue { value: vc, exact })
}

/// Number of distinct catalog edges for the interval family, computed by
/// streaming prefix hashes over representative times without materializing
/// the catalog. Within each representative ordering, every contiguous
/// window of the sorted points is an edge; the id-set of a window is
/// fingerprinted by xor of per-point random tags.
pub fn count_interval_edges<T: Real>(
    set: &MovingPointSet<T>,
    window: TimeInterval<T>,
    cfg: &EnumerationConfig<T>,
) -> Result<u64, Error> {
    if set.dim() != 1 {
        return Err(Error::InvalidInput(
            "interval edge counting needs a one-dimensional configuration".into(),
        ));
    }
    let n = set.len();
    let events = event_times(set, RangeFamily::Intervals, window, cfg)?;
    let reps = representative_times(&events, window);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7461_6773);
    let tags: Vec<u128> = (0..n)
        .map(|_| (rand::Rng::gen::<u64>(&mut rng) as u128) << 64 | rand::Rng::gen::<u64>(&mut rng) as u128)
        .collect();
    let mut seen = std::collections::HashSet::<u128>::new();
    let mut order: Vec<(T, usize)> = Vec::with_capacity(n);
    let mut prefix: Vec<u128> = vec![0; n + 1];
    for &t in &reps {
        order.clear();
        for i in 0..n {
            order.push((set.trajectory(i).component(0).eval(t), i));
        }
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite positions"));
        for (k, (_, i)) in order.iter().enumerate() {
            prefix[k + 1] = prefix[k] ^ tags[*i];
        }
        for a in 0..n {
            for b in a + 1..=n {
                seen.insert(prefix[a] ^ prefix[b]);
            }
        }
    }
    Ok(seen.len() as u64)
}
