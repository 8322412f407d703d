//! Hub-based power assignment for moving transmitters.
//!
//! Each sensor transmits with just enough power to reach an assigned
//! partner: a small set of hubs reaches its current furthest point (so a
//! hub hears everyone), while every other sensor reaches only its nearest
//! hub. The resulting graph stays connected with hop diameter at most
//! three, and the interference — the deepest stack of transmission disks
//! over any point of space — stays near the square-root regime instead of
//! the linear worst case.
//!
//! Partner assignments are piecewise-constant in time. Breakpoints are
//! roots of pairwise squared-distance difference polynomials, so each
//! sensor carries an explicit schedule of (interval, partner) pairs and
//! every quantity derived from radii is reproducible exactly.

use crate::error::Error;
use crate::hypergraph::EnumerationConfig;
use crate::linalg;
use crate::motion::{MovingPointSet, TimeInterval};
use crate::poly::Polynomial;
use crate::sampling::{SampleConfig, VcHint};
use crate::scalar::Real;
use crate::voronoi::{select_facilities, FacilitySet};
use rayon::prelude::*;

/// Multiplicative slack on squared-distance comparisons; covers the
/// square/square-root round trips in radius bookkeeping.
const EDGE_SLACK: f64 = 1e-9;

/// Hub-count parameter `k = round(sqrt(n / ln n))`, floored at 2.
pub fn hub_count(n: usize) -> usize {
    let nf = n as f64;
    let k = (nf / nf.ln()).sqrt().round() as usize;
    k.max(2)
}

/// Facility-selection configuration calibrated for hub drafting: about
/// `k ln k` hubs rather than the conservative verified-net size. At
/// protocol scales net verification exceeds the enumeration guards and
/// the hub set is reported unverified; connectivity and diameter do not
/// depend on the net property, only the interference bound does.
pub fn hub_sample_config(seed: u64) -> SampleConfig {
    SampleConfig {
        seed,
        size_constant: 1.0,
        vc_hint: VcHint::Fixed(1),
        ..SampleConfig::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartnerInterval<T> {
    pub start: T,
    pub end: T,
    pub partner: u32,
}

#[derive(Debug, Clone)]
pub struct AssignmentSchedule<T> {
    pub hubs: FacilitySet<T>,
    pub horizon: TimeInterval<T>,
    /// Per point, (interval, partner) pairs partitioning the horizon,
    /// adjacent intervals always naming distinct partners.
    pub per_point: Vec<Vec<PartnerInterval<T>>>,
    pub is_hub: Vec<bool>,
}

impl<T: Real> AssignmentSchedule<T> {
    pub fn len(&self) -> usize {
        self.per_point.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_point.is_empty()
    }

    /// Partner of point `i` at time `t`: the interval whose start is the
    /// last one at or before `t` (right-continuous at breakpoints).
    pub fn partner_at(&self, i: usize, t: T) -> u32 {
        let ivs = &self.per_point[i];
        let mut lo = 0usize;
        let mut hi = ivs.len();
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if ivs[mid].start <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ivs[lo].partner
    }

    /// Transmission radius of point `i` at time `t`: its distance to the
    /// scheduled partner.
    pub fn radius_at(&self, set: &MovingPointSet<T>, i: usize, t: T) -> T {
        let p = set.trajectory(i).eval(t);
        let q = set.trajectory(self.partner_at(i, t) as usize).eval(t);
        linalg::dist2(&p, &q).sqrt()
    }
}

/// Squared-distance difference polynomial `|p_i - p_a|^2 - |p_i - p_b|^2`;
/// its roots are the only times the preference between a and b can flip.
fn equidistance_poly<T: Real>(
    set: &MovingPointSet<T>,
    i: usize,
    a: usize,
    b: usize,
) -> Polynomial<T> {
    let d = set.dim();
    let mut acc = Polynomial::zero();
    for c in 0..d {
        let pi = set.trajectory(i).component(c);
        let pa = set.trajectory(a).component(c);
        let pb = set.trajectory(b).component(c);
        let da = pi.sub_poly(pa);
        let db = pi.sub_poly(pb);
        acc = acc.add(&da.mul(&da)).sub_poly(&db.mul(&db));
    }
    acc
}

/// Partner by direct scan: furthest (maximize) or nearest candidate at
/// time `t`, distance ties resolved to the smaller index.
fn scan_partner<T: Real>(
    positions: &[Vec<T>],
    i: usize,
    candidates: &[u32],
    maximize: bool,
) -> u32 {
    let mut best = candidates[0];
    let mut best_d = linalg::dist2(&positions[i], &positions[best as usize]);
    for &c in &candidates[1..] {
        let d = linalg::dist2(&positions[i], &positions[c as usize]);
        let better = if maximize { d > best_d } else { d < best_d };
        if better {
            best_d = d;
            best = c;
        }
    }
    best
}

/// Piecewise-constant argmin/argmax of distance from point `i` over a
/// candidate set. Breakpoints are the in-horizon roots of all pairwise
/// squared-distance difference polynomials; the winner on each piece is
/// read off at the midpoint, and pieces with equal winners merge, so a
/// tangency without an actual leader change produces no interval break.
fn track_envelope<T: Real>(
    set: &MovingPointSet<T>,
    i: usize,
    candidates: &[u32],
    maximize: bool,
    horizon: TimeInterval<T>,
    tol: T,
) -> Result<Vec<PartnerInterval<T>>, Error> {
    debug_assert!(!candidates.is_empty());
    let mut events: Vec<T> = Vec::new();
    for a in 0..candidates.len() {
        for b in a + 1..candidates.len() {
            let p = equidistance_poly(set, i, candidates[a] as usize, candidates[b] as usize);
            if p.is_zero() || p.degree() == 0 {
                continue; // permanent tie, settled by index order
            }
            events.extend(p.real_roots(horizon, tol)?);
        }
    }
    events.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoint times"));
    events.dedup_by(|a, b| (*a - *b).abs() <= tol + tol);
    let mut bounds = Vec::with_capacity(events.len() + 2);
    bounds.push(horizon.lo());
    bounds.extend(events.into_iter().filter(|&e| e > horizon.lo() && e < horizon.hi()));
    bounds.push(horizon.hi());
    let mut out: Vec<PartnerInterval<T>> = Vec::new();
    for w in bounds.windows(2) {
        let mid = (w[0] + w[1]) / T::from_f(2.0);
        let partner = scan_partner(&set.positions(mid), i, candidates, maximize);
        match out.last_mut() {
            Some(last) if last.partner == partner => last.end = w[1],
            _ => out.push(PartnerInterval {
                start: w[0],
                end: w[1],
                partner,
            }),
        }
    }
    Ok(out)
}

/// Builds the full power-assignment schedule: hubs are drafted as
/// facilities with k = round(sqrt(n / ln n)), every hub tracks its
/// furthest point over the whole set, every non-hub tracks its nearest
/// hub. Requires at least two points.
pub fn assign_hub_protocol<T: Real>(
    set: &MovingPointSet<T>,
    cfg: &SampleConfig,
    ecfg: &EnumerationConfig<T>,
) -> Result<AssignmentSchedule<T>, Error> {
    let n = set.len();
    if n < 2 {
        return Err(Error::InvalidInput(
            "hub protocol needs at least two points".into(),
        ));
    }
    let horizon = set.horizon();
    let k = hub_count(n);
    let hubs = select_facilities(set, horizon, k, cfg, ecfg)?;
    let mut is_hub = vec![false; n];
    for &h in &hubs.indices {
        is_hub[h as usize] = true;
    }
    let everyone: Vec<u32> = (0..n as u32).collect();
    let per_point: Vec<Vec<PartnerInterval<T>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let candidates: Vec<u32> = if is_hub[i] {
                everyone.iter().copied().filter(|&q| q as usize != i).collect()
            } else {
                hubs.indices.clone()
            };
            track_envelope(set, i, &candidates, is_hub[i], horizon, ecfg.tol)
        })
        .collect::<Result<_, _>>()?;
    Ok(AssignmentSchedule {
        hubs,
        horizon,
        per_point,
        is_hub,
    })
}

#[derive(Debug, Clone)]
pub struct NetworkSnapshot<T> {
    pub time: T,
    pub positions: Vec<Vec<T>>,
    /// Transmission radii, one per point.
    pub radii: Vec<T>,
    /// Symmetric edges {p, q} with d(p, q) <= min(r_p, r_q), stored once
    /// with p < q.
    pub edges: Vec<(u32, u32)>,
}

impl<T: Real> NetworkSnapshot<T> {
    /// All-pairs edge construction under the min-radius rule.
    pub fn build(positions: Vec<Vec<T>>, radii: Vec<T>, time: T) -> Self {
        assert_eq!(positions.len(), radii.len());
        let n = positions.len();
        let slack = T::one() + T::from_f(EDGE_SLACK);
        let mut edges = Vec::new();
        for p in 0..n {
            for q in p + 1..n {
                let r = if radii[p] < radii[q] { radii[p] } else { radii[q] };
                if linalg::dist2(&positions[p], &positions[q]) <= r * r * slack {
                    edges.push((p as u32, q as u32));
                }
            }
        }
        NetworkSnapshot {
            time,
            positions,
            radii,
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(p, q) in &self.edges {
            adj[p as usize].push(q);
            adj[q as usize].push(p);
        }
        adj
    }

    pub fn has_edge(&self, p: u32, q: u32) -> bool {
        let key = if p < q { (p, q) } else { (q, p) };
        self.edges.binary_search(&key).is_ok()
    }
}

/// Snapshot of the communication graph at time `t`: radii realize the
/// schedule exactly, edges follow the min-radius rule.
pub fn communication_graph<T: Real>(
    set: &MovingPointSet<T>,
    schedule: &AssignmentSchedule<T>,
    t: T,
) -> Result<NetworkSnapshot<T>, Error> {
    if !schedule.horizon.contains(t) {
        return Err(Error::InvalidInput(format!(
            "time {t} outside the schedule horizon"
        )));
    }
    let positions = set.positions(t);
    let radii: Vec<T> = (0..set.len())
        .map(|i| {
            let q = schedule.partner_at(i, t) as usize;
            linalg::dist2(&positions[i], &positions[q]).sqrt()
        })
        .collect();
    Ok(NetworkSnapshot::build(positions, radii, t))
}

/// Breadth-first hop metrics: whether the snapshot graph is connected,
/// and its hop diameter when it is.
pub fn connectivity_and_diameter<T: Real>(snap: &NetworkSnapshot<T>) -> (bool, Option<usize>) {
    let n = snap.len();
    if n == 0 {
        return (true, Some(0));
    }
    let adj = snap.adjacency();
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    let mut diameter = 0usize;
    for src in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        let mut seen = 1usize;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v as usize] == usize::MAX {
                    dist[v as usize] = dist[u] + 1;
                    diameter = diameter.max(dist[v as usize]);
                    seen += 1;
                    queue.push_back(v as usize);
                }
            }
        }
        if seen < n {
            return (false, None);
        }
    }
    (true, Some(diameter))
}

#[derive(Debug, Clone)]
pub struct InterferenceSample<T> {
    pub time: T,
    /// Maximum number of transmission disks stacked over one point.
    pub value: usize,
    /// A point attaining the maximum.
    pub witness: Vec<T>,
    /// True when the candidate set provably attains the maximum
    /// (dimensions 1 and 2); false means certified lower bound.
    pub exact: bool,
}

fn disk_contains<T: Real>(center: &[T], radius: T, q: &[T], q_norm: T) -> bool {
    let slack = T::from_f(1e-9) * (T::one() + radius + q_norm);
    let r = radius + slack;
    linalg::dist2(center, q) <= r * r
}

fn depth_at<T: Real>(centers: &[Vec<T>], radii: &[T], q: &[T]) -> usize {
    let q_norm = linalg::dot(q, q).sqrt();
    centers
        .iter()
        .zip(radii)
        .filter(|(c, &r)| disk_contains(c, r, q, q_norm))
        .count()
}

/// Maximum disk-stack depth and a witness point. On the line the answer
/// comes from an exact endpoint sweep; in the plane the depth of a disk
/// arrangement is attained at a disk center or a boundary-intersection
/// point, so scanning those candidates is exact. In higher dimensions the
/// candidate set (centers, pairwise radical points, seeded random probes)
/// yields a certified lower bound, flagged not exact.
pub fn disk_depth<T: Real>(centers: &[Vec<T>], radii: &[T]) -> (usize, Vec<T>, bool) {
    assert_eq!(centers.len(), radii.len());
    assert!(!centers.is_empty(), "depth of an empty disk set");
    let d = centers[0].len();
    if d == 1 {
        // +1 at entries, -1 at exits; entries first on ties so touching
        // closed intervals still stack
        let mut evs: Vec<(T, i32)> = Vec::with_capacity(2 * centers.len());
        for (c, &r) in centers.iter().zip(radii) {
            evs.push((c[0] - r, 1));
            evs.push((c[0] + r, -1));
        }
        evs.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .expect("finite endpoints")
                .then(b.1.cmp(&a.1))
        });
        let mut depth = 0i32;
        let mut best = 0i32;
        let mut witness = evs[0].0;
        for (x, delta) in evs {
            depth += delta;
            if depth > best {
                best = depth;
                witness = x;
            }
        }
        return (best as usize, vec![witness], true);
    }
    let mut candidates: Vec<Vec<T>> = centers.to_vec();
    let n = centers.len();
    for i in 0..n {
        for j in i + 1..n {
            let d2 = linalg::dist2(&centers[i], &centers[j]);
            let dist = d2.sqrt();
            if dist <= T::from_f(1e-300) {
                continue; // concentric, boundaries never cross
            }
            let (ri, rj) = (radii[i], radii[j]);
            if dist > ri + rj || dist < (ri - rj).abs() {
                continue; // disjoint or nested, no boundary intersection
            }
            let a = (d2 + ri * ri - rj * rj) / (dist + dist);
            if d == 2 {
                let h = (ri * ri - a * a).max(T::zero()).sqrt();
                let ux = (centers[j][0] - centers[i][0]) / dist;
                let uy = (centers[j][1] - centers[i][1]) / dist;
                let bx = centers[i][0] + a * ux;
                let by = centers[i][1] + a * uy;
                candidates.push(vec![bx - h * uy, by + h * ux]);
                candidates.push(vec![bx + h * uy, by - h * ux]);
            } else {
                // radical point on the center line
                let base: Vec<T> = (0..d)
                    .map(|c| centers[i][c] + a * (centers[j][c] - centers[i][c]) / dist)
                    .collect();
                candidates.push(base);
            }
        }
    }
    let exact = d == 2;
    if !exact {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6465_7074);
        let mut lo = centers[0].clone();
        let mut hi = centers[0].clone();
        for c in centers {
            for k in 0..d {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        let pad = radii.iter().fold(T::zero(), |m, &r| m.max(r));
        for _ in 0..8 * n {
            candidates.push(
                (0..d)
                    .map(|k| {
                        let u = T::from_f(rng.gen_range(0.0..1.0));
                        (lo[k] - pad) + (hi[k] - lo[k] + pad + pad) * u
                    })
                    .collect(),
            );
        }
    }
    let mut best = 0usize;
    let mut witness = candidates[0].clone();
    for q in &candidates {
        let v = depth_at(centers, radii, q);
        if v > best {
            best = v;
            witness = q.clone();
        }
    }
    (best, witness, exact)
}

/// Interference of the scheduled network at time `t`.
pub fn interference_at<T: Real>(
    set: &MovingPointSet<T>,
    schedule: &AssignmentSchedule<T>,
    t: T,
) -> Result<InterferenceSample<T>, Error> {
    if !schedule.horizon.contains(t) {
        return Err(Error::InvalidInput(format!(
            "time {t} outside the schedule horizon"
        )));
    }
    let positions = set.positions(t);
    let radii: Vec<T> = (0..set.len())
        .map(|i| {
            let q = schedule.partner_at(i, t) as usize;
            linalg::dist2(&positions[i], &positions[q]).sqrt()
        })
        .collect();
    let (value, witness, exact) = disk_depth(&positions, &radii);
    Ok(InterferenceSample {
        time: t,
        value,
        witness,
        exact,
    })
}

#[derive(Debug, Clone)]
pub struct ChangeLog<T> {
    /// Total partner changes: interval boundaries strictly inside the
    /// horizon, summed over points.
    pub total: usize,
    pub per_point: Vec<usize>,
    /// All interior boundary times, sorted, one entry per change.
    pub event_times: Vec<T>,
    /// Sum over points of the crossing cap `2s * C(m, 2)` for an
    /// m-candidate envelope with degree-s motion.
    pub cap: usize,
    /// Every per-point count is within its crossing cap.
    pub within_cap: bool,
}

/// Counts partner changes per point and checks them against the pairwise
/// crossing cap (each candidate pair's squared-distance difference has
/// degree at most 2s, hence at most 2s sign alternations).
pub fn count_combinatorial_changes<T: Real>(
    set: &MovingPointSet<T>,
    schedule: &AssignmentSchedule<T>,
) -> ChangeLog<T> {
    let n = schedule.len();
    let hubs = schedule.hubs.indices.len();
    let s = set.max_degree().max(1);
    let mut per_point = Vec::with_capacity(n);
    let mut event_times = Vec::new();
    let mut cap = 0usize;
    let mut within = true;
    for i in 0..n {
        let changes = schedule.per_point[i].len().saturating_sub(1);
        per_point.push(changes);
        for iv in &schedule.per_point[i][1..] {
            event_times.push(iv.start);
        }
        let m = if schedule.is_hub[i] { n - 1 } else { hubs };
        let point_cap = 2 * s * (m * m.saturating_sub(1)) / 2;
        cap += point_cap;
        within &= changes <= point_cap;
    }
    event_times.sort_by(|a, b| a.partial_cmp(b).expect("finite event times"));
    ChangeLog {
        total: per_point.iter().sum(),
        per_point,
        event_times,
        cap,
        within_cap: within,
    }
}

#[derive(Debug, Clone)]
pub struct TimeSeriesRow<T> {
    pub time: T,
    pub interference: usize,
    pub connected: bool,
    /// None when disconnected.
    pub diameter: Option<usize>,
    pub num_edges: usize,
}

/// Evaluates the scheduled network at each time: snapshot, hop metrics,
/// and exact-or-lower-bound interference. Parallel over times.
pub fn protocol_time_series<T: Real>(
    set: &MovingPointSet<T>,
    schedule: &AssignmentSchedule<T>,
    times: &[T],
) -> Result<Vec<TimeSeriesRow<T>>, Error> {
    times
        .par_iter()
        .map(|&t| {
            let snap = communication_graph(set, schedule, t)?;
            let (connected, diameter) = connectivity_and_diameter(&snap);
            let inter = interference_at(set, schedule, t)?;
            Ok(TimeSeriesRow {
                time: t,
                interference: inter.value,
                connected,
                diameter,
                num_edges: snap.edges.len(),
            })
        })
        .collect()
}

/// CSV rows `t,interference,connected,diameter,num_edges`; connected is
/// 0/1 and a disconnected snapshot prints diameter -1.
pub fn time_series_csv<T: Real>(rows: &[TimeSeriesRow<T>]) -> String {
    let mut out = String::from("t,interference,connected,diameter,num_edges\n");
    for r in rows {
        let diam = r.diameter.map_or(-1i64, |d| d as i64);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.time,
            r.interference,
            r.connected as u8,
            diam,
            r.num_edges
        ));
    }
    out
}

/// CSV rows `point_index,change_count`.
pub fn change_log_csv<T: Real>(log: &ChangeLog<T>) -> String {
    let mut out = String::from("point_index,change_count\n");
    for (i, c) in log.per_point.iter().enumerate() {
        out.push_str(&format!("{i},{c}\n"));
    }
    out
}

/// Human-readable schedule dump, one line per point.
pub fn schedule_text<T: Real>(schedule: &AssignmentSchedule<T>) -> String {
    let mut out = String::new();
    for (i, ivs) in schedule.per_point.iter().enumerate() {
        let role = if schedule.is_hub[i] { "hub " } else { "leaf" };
        out.push_str(&format!("{i:4} {role}"));
        for iv in ivs {
            out.push_str(&format!(" [{},{})->{}", iv.start, iv.end, iv.partner));
        }
        out.push('\n');
    }
    out
}
