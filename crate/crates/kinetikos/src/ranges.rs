//! Geometric ranges and canonical range enumeration.
//!
//! Four range families over R^d: halfspaces, balls, bounded cones, and 1-D
//! intervals. All membership predicates are closed (boundary points count
//! as inside).
//!
//! `canonical_ranges` produces, for a static point configuration, a finite
//! set of ranges realizing every subset the family can realize. Halfspaces
//! are anchored at hyperplanes through d points and tilted to every in/out
//! pattern of the touching points; balls use the same construction through
//! d+1 points in the paraboloid lift; cones use an apex/axis/angle/cap grid
//! anchored at point pairs. Completeness is validated against dense random
//! sweeps in the tests, at oracle scale.

use crate::combi::{binomial, for_each_combination};
use crate::error::Error;
use crate::linalg;
use crate::scalar::Real;
use std::fmt;

/// Work guard for canonical enumeration: estimated ranges times points.
const CANONICAL_WORK_LIMIT: u128 = 10_000_000;

/// Relative offset used to pull a canonical boundary on or off a point.
const BOUNDARY_DELTA: f64 = 1e-9;

/// Unit-norm slack accepted by the halfspace and cone constructors.
const UNIT_TOL: f64 = 1e-12;

/// Default cone opening angle (sixty degrees).
pub const SIXTY_DEGREES: f64 = std::f64::consts::PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RangeFamily {
    Intervals,
    Halfspaces,
    Balls,
    BoundedCones,
}

impl RangeFamily {
    pub const ALL: [RangeFamily; 4] = [
        RangeFamily::Intervals,
        RangeFamily::Halfspaces,
        RangeFamily::Balls,
        RangeFamily::BoundedCones,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RangeFamily::Intervals => "intervals",
            RangeFamily::Halfspaces => "halfspaces",
            RangeFamily::Balls => "balls",
            RangeFamily::BoundedCones => "bounded_cones",
        }
    }
}

impl fmt::Display for RangeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RangeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "intervals" => Ok(RangeFamily::Intervals),
            "halfspaces" => Ok(RangeFamily::Halfspaces),
            "balls" => Ok(RangeFamily::Balls),
            "bounded_cones" | "cones" => Ok(RangeFamily::BoundedCones),
            other => Err(Error::InvalidInput(format!("unknown range family '{other}'"))),
        }
    }
}

/// Closed halfspace `normal . x >= offset` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Real> Halfspace<T> {
    pub fn new(normal: Vec<T>, offset: T) -> Result<Self, Error> {
        let n = linalg::norm(&normal);
        if (n - T::one()).abs() > T::from_f(UNIT_TOL) {
            return Err(Error::InvalidInput(format!(
                "halfspace normal must be unit length, |n| = {n}"
            )));
        }
        Ok(Halfspace { normal, offset })
    }

    /// Normalizes `dir . x >= offset` into unit-normal form.
    pub fn from_direction(dir: &[T], offset: T) -> Result<Self, Error> {
        let n = linalg::norm(dir);
        if n <= T::from_f(1e-30) {
            return Err(Error::InvalidInput("halfspace direction is zero".into()));
        }
        Ok(Halfspace {
            normal: linalg::scale(dir, T::one() / n),
            offset: offset / n,
        })
    }

    #[inline]
    pub fn contains(&self, x: &[T]) -> bool {
        debug_assert_eq!(x.len(), self.normal.len());
        linalg::dot(&self.normal, x) >= self.offset
    }
}

/// Closed ball `|x - center| <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Real> Ball<T> {
    pub fn new(center: Vec<T>, radius: T) -> Result<Self, Error> {
        if radius < T::zero() || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("ball radius must be >= 0, got {radius}")));
        }
        Ok(Ball { center, radius })
    }

    #[inline]
    pub fn contains(&self, x: &[T]) -> bool {
        debug_assert_eq!(x.len(), self.center.len());
        linalg::dist2(x, &self.center) <= self.radius * self.radius
    }
}

/// Cone with apex `apex`, unit axis direction, full opening angle `angle`
/// (membership within `angle / 2` of the axis), truncated at distance `cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedCone<T> {
    pub apex: Vec<T>,
    pub axis: Vec<T>,
    pub angle: T,
    pub cap: T,
}

impl<T: Real> BoundedCone<T> {
    pub fn new(apex: Vec<T>, axis: Vec<T>, angle: T, cap: T) -> Result<Self, Error> {
        let n = linalg::norm(&axis);
        if (n - T::one()).abs() > T::from_f(UNIT_TOL) {
            return Err(Error::InvalidInput(format!(
                "cone axis must be unit length, |u| = {n}"
            )));
        }
        if !(angle > T::zero() && angle <= T::from_f(std::f64::consts::PI)) {
            return Err(Error::InvalidInput(format!(
                "cone angle must lie in (0, pi], got {angle}"
            )));
        }
        if !(cap > T::zero()) {
            return Err(Error::InvalidInput(format!("cone cap must be positive, got {cap}")));
        }
        if apex.len() != axis.len() {
            return Err(Error::InvalidInput("cone apex/axis dimension mismatch".into()));
        }
        Ok(BoundedCone { apex, axis, angle, cap })
    }

    #[inline]
    pub fn contains(&self, x: &[T]) -> bool {
        debug_assert_eq!(x.len(), self.apex.len());
        let mut dot = T::zero();
        let mut n2 = T::zero();
        for ((xi, ai), ui) in x.iter().zip(&self.apex).zip(&self.axis) {
            let v = *xi - *ai;
            dot = dot + v * *ui;
            n2 = n2 + v * v;
        }
        if n2 > self.cap * self.cap {
            return false;
        }
        let c = (self.angle / T::from_f(2.0)).cos();
        dot >= n2.sqrt() * c
    }
}

/// Closed interval on the line (the d = 1 family).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalRange<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> IntervalRange<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, Error> {
        if !(lo <= hi) {
            return Err(Error::InvalidInput(format!("interval [{lo}, {hi}] is reversed")));
        }
        Ok(IntervalRange { lo, hi })
    }

    #[inline]
    pub fn contains(&self, x: &[T]) -> bool {
        debug_assert_eq!(x.len(), 1);
        x[0] >= self.lo && x[0] <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Range<T> {
    Interval(IntervalRange<T>),
    Halfspace(Halfspace<T>),
    Ball(Ball<T>),
    Cone(BoundedCone<T>),
}

impl<T: Real> Range<T> {
    pub fn family(&self) -> RangeFamily {
        match self {
            Range::Interval(_) => RangeFamily::Intervals,
            Range::Halfspace(_) => RangeFamily::Halfspaces,
            Range::Ball(_) => RangeFamily::Balls,
            Range::Cone(_) => RangeFamily::BoundedCones,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Range::Interval(_) => 1,
            Range::Halfspace(h) => h.normal.len(),
            Range::Ball(b) => b.center.len(),
            Range::Cone(c) => c.apex.len(),
        }
    }

    #[inline]
    pub fn contains(&self, x: &[T]) -> bool {
        match self {
            Range::Interval(r) => r.contains(x),
            Range::Halfspace(r) => r.contains(x),
            Range::Ball(r) => r.contains(x),
            Range::Cone(r) => r.contains(x),
        }
    }

    /// Indices of the points the range captures.
    pub fn select(&self, points: &[Vec<T>]) -> Vec<u32> {
        points
            .iter()
            .enumerate()
            .filter(|(_, p)| self.contains(p))
            .map(|(i, _)| i as u32)
            .collect()
    }
}

fn fmt_vec<T: Real>(f: &mut fmt::Formatter<'_>, v: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl<T: Real> fmt::Display for Range<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Interval(r) => write!(f, "interval lo={} hi={}", r.lo, r.hi),
            Range::Halfspace(r) => {
                write!(f, "halfspace n=")?;
                fmt_vec(f, &r.normal)?;
                write!(f, " c={}", r.offset)
            }
            Range::Ball(r) => {
                write!(f, "ball c=")?;
                fmt_vec(f, &r.center)?;
                write!(f, " r={}", r.radius)
            }
            Range::Cone(r) => {
                write!(f, "cone a=")?;
                fmt_vec(f, &r.apex)?;
                write!(f, " u=")?;
                fmt_vec(f, &r.axis)?;
                write!(f, " theta={} rho={}", r.angle, r.cap)
            }
        }
    }
}

/// Axis-aligned bounding box of a static configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox<T> {
    pub lo: Vec<T>,
    pub hi: Vec<T>,
}

impl<T: Real> BoundingBox<T> {
    pub fn of_points(points: &[Vec<T>]) -> Self {
        let d = points[0].len();
        let mut lo = vec![T::infinity(); d];
        let mut hi = vec![T::neg_infinity(); d];
        for p in points {
            for j in 0..d {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        BoundingBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn diameter(&self) -> T {
        linalg::dist(&self.lo, &self.hi)
    }

    pub fn inflate(&self, margin: T) -> Self {
        BoundingBox {
            lo: self.lo.iter().map(|x| *x - margin).collect(),
            hi: self.hi.iter().map(|x| *x + margin).collect(),
        }
    }
}

/// Seeded random range with parameters scaled to the box; used by the dense
/// sweep oracles and the query generators.
pub fn random_range<T: Real, R: rand::Rng>(
    family: RangeFamily,
    bounds: &BoundingBox<T>,
    cone_angle: Option<T>,
    rng: &mut R,
) -> Range<T> {
    let d = bounds.dim();
    let diam = bounds.diameter().max(T::one());
    let pad = diam * T::from_f(0.5);
    let sample_point = |rng: &mut R| -> Vec<T> {
        (0..d)
            .map(|j| {
                let lo = (bounds.lo[j] - pad).to_f();
                let hi = (bounds.hi[j] + pad).to_f();
                T::from_f(rng.gen_range(lo..hi.max(lo + 1e-12)))
            })
            .collect()
    };
    let unit_dir = |rng: &mut R| -> Vec<T> {
        loop {
            let v: Vec<T> = (0..d).map(|_| T::from_f(rng.gen_range(-1.0..1.0))).collect();
            let n = linalg::norm(&v);
            if n > T::from_f(1e-3) && n <= T::one() {
                return linalg::scale(&v, T::one() / n);
            }
        }
    };
    match family {
        RangeFamily::Intervals => {
            let a = sample_point(rng)[0];
            let w = T::from_f(rng.gen_range(0.0..1.5)) * diam;
            Range::Interval(IntervalRange { lo: a, hi: a + w })
        }
        RangeFamily::Halfspaces => {
            let u = unit_dir(rng);
            let p = sample_point(rng);
            Range::Halfspace(Halfspace { offset: linalg::dot(&u, &p), normal: u })
        }
        RangeFamily::Balls => {
            let c = sample_point(rng);
            let r = T::from_f(rng.gen_range(0.0..1.5)) * diam;
            Range::Ball(Ball { center: c, radius: r })
        }
        RangeFamily::BoundedCones => {
            let apex = sample_point(rng);
            let axis = unit_dir(rng);
            let angle = cone_angle
                .unwrap_or_else(|| T::from_f(rng.gen_range(0.05..std::f64::consts::PI)));
            let cap = T::from_f(rng.gen_range(0.05..2.0)) * diam;
            Range::Cone(BoundedCone { apex, axis, angle, cap })
        }
    }
}

/// Coordinate scale of a configuration, used to set relative offsets.
fn coord_scale<T: Real>(points: &[Vec<T>]) -> T {
    let mut m = T::one();
    for p in points {
        for x in p {
            if x.abs() > m {
                m = x.abs();
            }
        }
    }
    m
}

/// Errors out when enumerating canonical ranges for an (n, d, family)
/// configuration would exceed the work limit; lets callers bail before
/// paying for event solving.
pub(crate) fn canonical_work_check(n: usize, d: usize, family: RangeFamily) -> Result<(), Error> {
    let work = estimated_ranges(n, d, family).saturating_mul(n as u128);
    if work > CANONICAL_WORK_LIMIT {
        return Err(Error::GuardExceeded {
            what: "canonical range enumeration",
            size: work,
            limit: CANONICAL_WORK_LIMIT,
        });
    }
    Ok(())
}

pub(crate) fn estimated_ranges(n: usize, d: usize, family: RangeFamily) -> u128 {
    match family {
        RangeFamily::Intervals => binomial(n + 1, 2),
        RangeFamily::Halfspaces => binomial(n, d).saturating_mul(1 << (d + 1)),
        RangeFamily::Balls => binomial(n, d + 1).saturating_mul(1 << (d + 1)),
        RangeFamily::BoundedCones => {
            // three apex classes; see canonical_cones
            let n = n as u128;
            (2 * n + 1) * n * n * (60 * n + 54)
        }
    }
}

/// Canonical ranges for a static configuration: a finite family realizing
/// every realizable subset. Errors when the estimated work exceeds the
/// enumeration guard. Cones use the default sixty-degree opening.
pub fn canonical_ranges<T: Real>(
    points: &[Vec<T>],
    family: RangeFamily,
) -> Result<Vec<Range<T>>, Error> {
    canonical_ranges_with_angle(points, family, None)
}

/// Same as `canonical_ranges` with an explicit cone opening angle.
pub fn canonical_ranges_with_angle<T: Real>(
    points: &[Vec<T>],
    family: RangeFamily,
    cone_angle: Option<T>,
) -> Result<Vec<Range<T>>, Error> {
    if points.is_empty() {
        return Err(Error::InvalidInput("canonical enumeration over empty configuration".into()));
    }
    let n = points.len();
    let d = points[0].len();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidInput("mixed dimensions in configuration".into()));
    }
    canonical_work_check(n, d, family)?;
    match family {
        RangeFamily::Intervals => {
            if d != 1 {
                return Err(Error::InvalidInput(format!(
                    "interval family is one-dimensional, configuration has d = {d}"
                )));
            }
            Ok(canonical_intervals(points))
        }
        RangeFamily::Halfspaces => {
            if d > 3 {
                return Err(Error::UnsupportedDimension(d));
            }
            Ok(canonical_halfspaces(points))
        }
        RangeFamily::Balls => {
            if d > 3 {
                return Err(Error::UnsupportedDimension(d));
            }
            Ok(canonical_balls(points))
        }
        RangeFamily::BoundedCones => {
            let theta = cone_angle.unwrap_or_else(|| T::from_f(SIXTY_DEGREES));
            Ok(canonical_cones(points, theta))
        }
    }
}

/// Every contiguous group of values, via cut points between consecutive
/// distinct sorted values.
fn canonical_intervals<T: Real>(points: &[Vec<T>]) -> Vec<Range<T>> {
    let mut xs: Vec<T> = points.iter().map(|p| p[0]).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    xs.dedup();
    let mut cuts = Vec::with_capacity(xs.len() + 1);
    cuts.push(xs[0] - T::one());
    for w in xs.windows(2) {
        cuts.push((w[0] + w[1]) / T::from_f(2.0));
    }
    cuts.push(xs[xs.len() - 1] + T::one());
    let mut out = Vec::new();
    for i in 0..cuts.len() {
        for j in i + 1..cuts.len() {
            out.push(Range::Interval(IntervalRange { lo: cuts[i], hi: cuts[j] }));
        }
    }
    out
}

/// Unit normal of the hyperplane through `d` points, or None when the tuple
/// is affinely degenerate at working precision.
fn hyperplane_normal<T: Real>(pts: &[&Vec<T>]) -> Option<Vec<T>> {
    let d = pts[0].len();
    let u = match d {
        1 => vec![T::one()],
        2 => {
            let v = linalg::sub(pts[1], pts[0]);
            vec![-v[1], v[0]]
        }
        3 => {
            let a = linalg::sub(pts[1], pts[0]);
            let b = linalg::sub(pts[2], pts[0]);
            vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        }
        _ => return None,
    };
    let n = linalg::norm(&u);
    let mut ref_scale = T::one();
    for p in pts.iter().skip(1) {
        ref_scale = ref_scale * linalg::dist(p, pts[0]).max(T::from_f(1e-30));
    }
    if n <= T::from_f(1e-10) * ref_scale {
        return None;
    }
    Some(linalg::scale(&u, T::one() / n))
}

/// Exact-margin separator construction for configurations with at most d
/// points: every subset is realizable, solve for it directly.
fn tiny_halfspaces<T: Real>(points: &[Vec<T>]) -> Vec<Range<T>> {
    let n = points.len();
    let d = points[0].len();
    let tiny = T::from_f(1e-12);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let a: Vec<Vec<T>> = points
            .iter()
            .map(|p| {
                let mut row = p.clone();
                row.push(-T::one());
                row
            })
            .collect();
        let rhs: Vec<T> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { T::one() } else { -T::one() })
            .collect();
        if let Some(z) = linalg::least_norm_solve(&a, &rhs, tiny) {
            let (u, c) = (&z[..d], z[d]);
            if linalg::norm(u) > T::from_f(1e-9) {
                if let Ok(h) = Halfspace::from_direction(u, c) {
                    out.push(Range::Halfspace(h));
                }
            }
        }
    }
    // the all-points subset, which the solver skips when it needs u = 0
    let u: Vec<T> = (0..d).map(|j| if j == 0 { T::one() } else { T::zero() }).collect();
    let min_proj = points
        .iter()
        .map(|p| p[0])
        .fold(T::infinity(), |a, b| a.min(b));
    out.push(Range::Halfspace(Halfspace { normal: u, offset: min_proj - T::one() }));
    out
}

/// Hyperplanes through every d-tuple, tilted to every in/out pattern of the
/// touching points, both orientations.
fn canonical_halfspaces<T: Real>(points: &[Vec<T>]) -> Vec<Range<T>> {
    let n = points.len();
    let d = points[0].len();
    if n < d {
        return tiny_halfspaces(points);
    }
    let delta = T::from_f(BOUNDARY_DELTA) * coord_scale(points);
    let tiny = T::from_f(1e-12);
    let mut out = Vec::new();
    for_each_combination(n, d, |idx| {
        let pts: Vec<&Vec<T>> = idx.iter().map(|&i| &points[i]).collect();
        let Some(u0) = hyperplane_normal(&pts) else {
            return true;
        };
        let c0 = linalg::dot(&u0, pts[0]);
        // perturbation rows: du . q - dc = sigma
        let a: Vec<Vec<T>> = pts
            .iter()
            .map(|p| {
                let mut row = (*p).clone();
                row.push(-T::one());
                row
            })
            .collect();
        for mask in 0u32..(1 << d) {
            let rhs: Vec<T> = (0..d)
                .map(|i| if mask >> i & 1 == 1 { delta } else { -delta })
                .collect();
            let Some(z) = linalg::least_norm_solve(&a, &rhs, tiny) else {
                continue;
            };
            let mut u: Vec<T> = u0.iter().zip(&z[..d]).map(|(a, b)| *a + *b).collect();
            let mut c = c0 + z[d];
            let norm = linalg::norm(&u);
            if norm <= T::from_f(1e-9) {
                continue;
            }
            u = linalg::scale(&u, T::one() / norm);
            c = c / norm;
            out.push(Range::Halfspace(Halfspace { normal: u.clone(), offset: c }));
            out.push(Range::Halfspace(Halfspace {
                normal: u.iter().map(|x| -*x).collect(),
                offset: -c,
            }));
        }
        true
    });
    out
}

/// Ball through a lifted tuple with prescribed signed margins, via the
/// paraboloid lift with the lift coefficient pinned to -1:
/// `a . x - b = sigma_i + |x_i|^2` makes `|x_i - a/2|^2 - r^2 = -sigma_i`.
fn ball_through<T: Real>(pts: &[&Vec<T>], sigma: &[T]) -> Option<Ball<T>> {
    let d = pts[0].len();
    let k = pts.len();
    let mut a: Vec<Vec<T>> = pts
        .iter()
        .map(|p| {
            let mut row = (*p).clone();
            row.push(-T::one());
            row
        })
        .collect();
    let mut rhs: Vec<T> = pts
        .iter()
        .zip(sigma)
        .map(|(p, s)| *s + linalg::norm2(p))
        .collect();
    let tiny = T::from_f(1e-12);
    let z = if k == d + 1 {
        linalg::solve_square(&mut a, &mut rhs, tiny)?
    } else {
        linalg::least_norm_solve(&a, &rhs, tiny)?
    };
    let c: Vec<T> = z[..d].iter().map(|x| *x / T::from_f(2.0)).collect();
    let r2 = linalg::norm2(&c) - z[d];
    if r2 < T::zero() || !r2.is_finite() {
        return None;
    }
    Some(Ball { center: c, radius: r2.sqrt() })
}

/// Balls through every (d+1)-tuple with every in/out pattern, plus small
/// singleton balls and diametral pair balls.
fn canonical_balls<T: Real>(points: &[Vec<T>]) -> Vec<Range<T>> {
    let n = points.len();
    let d = points[0].len();
    let scale = coord_scale(points);
    let delta = T::from_f(BOUNDARY_DELTA) * scale * scale;
    let mut out = Vec::new();
    if n <= d + 1 {
        // every subset is realizable; solve for each with unit margins
        for mask in 1u32..(1 << n) {
            let pts: Vec<&Vec<T>> = points.iter().collect();
            let sigma: Vec<T> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { T::one() } else { -T::one() })
                .collect();
            if let Some(b) = ball_through(&pts, &sigma) {
                out.push(Range::Ball(b));
            }
        }
    } else {
        for_each_combination(n, d + 1, |idx| {
            let pts: Vec<&Vec<T>> = idx.iter().map(|&i| &points[i]).collect();
            for mask in 0u32..(1 << (d + 1)) {
                let sigma: Vec<T> = (0..d + 1)
                    .map(|i| if mask >> i & 1 == 1 { delta } else { -delta })
                    .collect();
                if let Some(b) = ball_through(&pts, &sigma) {
                    out.push(Range::Ball(b));
                }
            }
            true
        });
    }
    let r_small = T::from_f(1e-6) * scale;
    for p in points {
        out.push(Range::Ball(Ball { center: p.clone(), radius: r_small }));
    }
    for i in 0..n {
        for j in i + 1..n {
            let c: Vec<T> = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (*a + *b) / T::from_f(2.0))
                .collect();
            let r = linalg::dist(&points[i], &points[j]) / T::from_f(2.0);
            let eps = T::from_f(BOUNDARY_DELTA) * scale;
            out.push(Range::Ball(Ball { center: c.clone(), radius: r + eps }));
            if r - eps > T::zero() {
                out.push(Range::Ball(Ball { center: c, radius: r - eps }));
            }
        }
    }
    out
}

/// Rotates a planar vector by `phi`.
fn rot2<T: Real>(v: &[T], phi: T) -> Vec<T> {
    let (s, c) = (phi.sin(), phi.cos());
    vec![c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// Emits cones at one apex: the given base angles plus tangency-adjusted
/// angles, crossed with a cap grid at tangency distances.
fn push_cones_at<T: Real>(
    out: &mut Vec<Range<T>>,
    points: &[Vec<T>],
    apex: &[T],
    axis: &[T],
    base_angles: &[T],
    with_tangency_angles: bool,
    delta_rho: T,
    big_cap: T,
) {
    let delta_theta = T::from_f(1e-6);
    let pi = T::from_f(std::f64::consts::PI);
    let mut angles = base_angles.to_vec();
    let mut caps = vec![big_cap];
    for p in points {
        let v = linalg::sub(p, apex);
        let vn = linalg::norm(&v);
        if with_tangency_angles && vn > T::from_f(1e-12) {
            let cosv = (linalg::dot(&v, axis) / vn).max(-T::one()).min(T::one());
            let full = cosv.acos() * T::from_f(2.0);
            angles.push(full - delta_theta);
            angles.push(full + delta_theta);
        }
        caps.push(vn + delta_rho);
        if vn - delta_rho > T::zero() {
            caps.push(vn - delta_rho);
        }
    }
    for ang in &angles {
        if !(*ang > T::zero() && *ang <= pi) {
            continue;
        }
        for cap in &caps {
            out.push(Range::Cone(BoundedCone {
                apex: apex.to_vec(),
                axis: axis.to_vec(),
                angle: *ang,
                cap: *cap,
            }));
        }
    }
}

/// Canonical cones, built from three contact classes:
///
/// 1. apex at (or just off) a point, axis toward another point, with
///    tangency-adjusted angles — covers cones pinned at their apex;
/// 2. (planar) apex on the inscribed arc over a point pair, where both
///    points sit on the two boundary rays — covers free-apex wedges; the
///    arc is sampled and also pinned exactly at its third-contact events;
/// 3. (planar, the third-contact events themselves) two points on one
///    boundary ray and one on the other, solved in closed form.
///
/// Each apex carries small angle and axis-rotation perturbations so pinned
/// points toggle in and out. The class list is validated against seeded
/// dense random sweeps in the tests; in three dimensions only class 1 is
/// available and the enumeration is best-effort.
fn canonical_cones<T: Real>(points: &[Vec<T>], theta: T) -> Vec<Range<T>> {
    let n = points.len();
    let d = points[0].len();
    let scale = coord_scale(points);
    let delta_apex = T::from_f(1e-6) * scale;
    let delta_rho = T::from_f(BOUNDARY_DELTA) * scale;
    let delta_theta = T::from_f(1e-6);
    let big_cap = T::from_f(4.0) * scale + T::one();
    let two = T::from_f(2.0);
    let mut out = Vec::new();

    // class 1: apex anchored at a point
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dir = linalg::sub(&points[j], &points[i]);
            let len = linalg::norm(&dir);
            if len <= T::from_f(1e-12) {
                continue;
            }
            let u = linalg::scale(&dir, T::one() / len);
            let apexes = [
                linalg::add_scaled(&points[i], &u, -delta_apex),
                points[i].clone(),
                linalg::add_scaled(&points[i], &u, delta_apex),
            ];
            for apex in apexes {
                let axis_dir = linalg::sub(&points[j], &apex);
                let axis_len = linalg::norm(&axis_dir);
                if axis_len <= T::from_f(1e-12) {
                    continue;
                }
                let axis = linalg::scale(&axis_dir, T::one() / axis_len);
                let base = [theta - delta_theta, theta, theta + delta_theta];
                push_cones_at(&mut out, points, &apex, &axis, &base, true, delta_rho, big_cap);
            }
        }
    }
    if d != 2 {
        return out;
    }

    // planar apex variants: fixed opening, boundary points toggled by small
    // angle growth / axis rotation
    let push_wedge = |out: &mut Vec<Range<T>>, apex: &[T], axis: &[T]| {
        for ia in -1i32..=1 {
            let ang = theta + T::from_f(ia as f64 * 2.0) * delta_theta;
            for ir in -1i32..=1 {
                let ax = rot2(axis, T::from_f(ir as f64) * delta_theta);
                push_cones_at(out, points, apex, &ax, &[ang], false, delta_rho, big_cap);
            }
        }
    };

    // class 2: apex on the inscribed arc of a pair, both points on the rays
    let arc_samples = 4 * n + 5;
    for j in 0..n {
        for k in j + 1..n {
            let chord = linalg::sub(&points[k], &points[j]);
            let len = linalg::norm(&chord);
            if len <= T::from_f(1e-12) {
                continue;
            }
            let radius = len / (two * theta.sin());
            let mid: Vec<T> = points[j]
                .iter()
                .zip(&points[k])
                .map(|(a, b)| (*a + *b) / two)
                .collect();
            let h2 = radius * radius - (len / two) * (len / two);
            let h = h2.max(T::zero()).sqrt();
            let nrm = [-chord[1] / len, chord[0] / len];
            for side in [T::one(), -T::one()] {
                let center = [mid[0] + side * h * nrm[0], mid[1] + side * h * nrm[1]];
                let phi_j = (points[j][1] - center[1]).atan2(points[j][0] - center[0]);
                let phi_k = (points[k][1] - center[1]).atan2(points[k][0] - center[0]);
                let tau = T::from_f(std::f64::consts::TAU);
                let mut delta = phi_k - phi_j;
                while delta > T::from_f(std::f64::consts::PI) {
                    delta -= tau;
                }
                while delta < -T::from_f(std::f64::consts::PI) {
                    delta += tau;
                }
                // walk the long way round: that is the arc subtending theta
                let span = if delta >= T::zero() { delta - tau } else { tau + delta };
                for s in 1..arc_samples {
                    let t = T::from_us(s) / T::from_us(arc_samples);
                    let phi = phi_j + span * t;
                    let apex = [
                        center[0] + radius * phi.cos(),
                        center[1] + radius * phi.sin(),
                    ];
                    let vj = linalg::sub(&points[j], &apex);
                    let vk = linalg::sub(&points[k], &apex);
                    let (nj, nk) = (linalg::norm(&vj), linalg::norm(&vk));
                    if nj <= T::from_f(1e-9) * scale || nk <= T::from_f(1e-9) * scale {
                        continue;
                    }
                    let bis = [
                        vj[0] / nj + vk[0] / nk,
                        vj[1] / nj + vk[1] / nk,
                    ];
                    let bn = linalg::norm(&bis);
                    if bn <= T::from_f(1e-9) {
                        continue;
                    }
                    let axis = linalg::scale(&bis, T::one() / bn);
                    push_wedge(&mut out, &apex, &axis);
                }
            }
        }
    }

    // class 3: edge through points a,b; apex on that line so the ray to c
    // opens exactly theta. With e the edge direction and w = c - a, the
    // apex a - s*e satisfies sin^2(theta) s^2 + 2 w.e sin^2(theta) s +
    // ((w.e)^2 - cos^2(theta) |w|^2) = 0.
    let sin2 = theta.sin() * theta.sin();
    let cos2 = theta.cos() * theta.cos();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let dir = linalg::sub(&points[b], &points[a]);
            let len = linalg::norm(&dir);
            if len <= T::from_f(1e-12) {
                continue;
            }
            let e = linalg::scale(&dir, T::one() / len);
            for c in 0..n {
                if c == a || c == b {
                    continue;
                }
                let w = linalg::sub(&points[c], &points[a]);
                let w1 = linalg::dot(&w, &e);
                let disc = w1 * w1 * sin2 * sin2
                    - sin2 * (w1 * w1 - cos2 * linalg::norm2(&w));
                if disc < T::zero() {
                    continue;
                }
                let sq = disc.sqrt();
                for root in [(-w1 * sin2 + sq) / sin2, (-w1 * sin2 - sq) / sin2] {
                    if root < -T::from_f(1e-9) * scale {
                        continue; // apex must keep a and b on the forward ray
                    }
                    let s = root.max(T::zero());
                    if w1 + s < T::zero() {
                        continue; // spurious branch from squaring
                    }
                    let apex = linalg::add_scaled(&points[a], &e, -s);
                    let vc = linalg::sub(&points[c], &apex);
                    let side = if e[0] * vc[1] - e[1] * vc[0] >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    let axis = rot2(&e, side * theta / two);
                    push_wedge(&mut out, &apex, &axis);
                }
            }
        }
    }
    out
}
