//! Moving points: polynomial trajectories, event polynomials, and
//! general-position validation.

use crate::combi::{binomial, for_each_combination};
use crate::error::Error;
use crate::linalg;
use crate::poly::{poly_matrix_det, Polynomial};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Closed time interval with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInterval<T> {
    lo: T,
    hi: T,
}

impl<T: Real> TimeInterval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, Error> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!(
                "interval endpoints must be finite and ordered, got [{lo}, {hi}]"
            )));
        }
        Ok(TimeInterval { lo, hi })
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn span(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, t: T) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub fn midpoint(&self) -> T {
        (self.lo + self.hi) / T::from_f(2.0)
    }
}

/// One moving point: a polynomial per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    components: Vec<Polynomial<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn new(components: Vec<Polynomial<T>>) -> Result<Self, Error> {
        if components.is_empty() {
            return Err(Error::InvalidInput("trajectory needs at least one coordinate".into()));
        }
        Ok(Trajectory { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn component(&self, j: usize) -> &Polynomial<T> {
        &self.components[j]
    }

    pub fn components(&self) -> &[Polynomial<T>] {
        &self.components
    }

    pub fn eval(&self, t: T) -> Vec<T> {
        self.components.iter().map(|p| p.eval(t)).collect()
    }

    pub fn eval_into(&self, t: T, out: &mut [T]) {
        for (o, p) in out.iter_mut().zip(&self.components) {
            *o = p.eval(t);
        }
    }
}

/// A finite set of moving points sharing a dimension, a degree bound, and a
/// finite observation horizon.
#[derive(Debug, Clone)]
pub struct MovingPointSet<T> {
    trajectories: Vec<Trajectory<T>>,
    dim: usize,
    max_degree: usize,
    horizon: TimeInterval<T>,
}

impl<T: Real> MovingPointSet<T> {
    pub fn new(
        trajectories: Vec<Trajectory<T>>,
        max_degree: usize,
        horizon: TimeInterval<T>,
    ) -> Result<Self, Error> {
        if trajectories.is_empty() {
            return Err(Error::InvalidInput("point set must be nonempty".into()));
        }
        let dim = trajectories[0].dim();
        for (i, tr) in trajectories.iter().enumerate() {
            if tr.dim() != dim {
                return Err(Error::InvalidInput(format!(
                    "trajectory {i} has dimension {} but the set has {dim}",
                    tr.dim()
                )));
            }
            if tr.degree() > max_degree {
                return Err(Error::InvalidInput(format!(
                    "trajectory {i} has degree {} above the bound {max_degree}",
                    tr.degree()
                )));
            }
        }
        Ok(MovingPointSet { trajectories, dim, max_degree, horizon })
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn horizon(&self) -> TimeInterval<T> {
        self.horizon
    }

    pub fn trajectory(&self, i: usize) -> &Trajectory<T> {
        &self.trajectories[i]
    }

    pub fn trajectories(&self) -> &[Trajectory<T>] {
        &self.trajectories
    }

    /// Positions of every point at time `t`.
    pub fn positions(&self, t: T) -> Vec<Vec<T>> {
        self.trajectories.iter().map(|tr| tr.eval(t)).collect()
    }

    /// Positions of a subset, in the order given.
    pub fn positions_of(&self, idx: &[usize], t: T) -> Vec<Vec<T>> {
        idx.iter().map(|&i| self.trajectories[i].eval(t)).collect()
    }

    /// Restriction to a subset of the points, preserving order.
    pub fn restrict(&self, idx: &[usize]) -> Result<Self, Error> {
        let trajectories = idx.iter().map(|&i| self.trajectories[i].clone()).collect();
        MovingPointSet::new(trajectories, self.max_degree, self.horizon)
    }

    /// Largest coordinate magnitude over the horizon endpoints and midpoint;
    /// cheap scale estimate used to set relative tolerances.
    pub fn coordinate_scale(&self) -> T {
        let mut m = T::one();
        for t in [self.horizon.lo(), self.horizon.midpoint(), self.horizon.hi()] {
            for tr in &self.trajectories {
                for p in tr.components() {
                    let v = p.eval(t).abs();
                    if v > m {
                        m = v;
                    }
                }
            }
        }
        m
    }
}

/// Affine-degeneracy event polynomial of `d+1` moving points in dimension
/// `d`: the determinant of their coordinates bordered by a column of ones.
/// Its roots are the times at which the tuple lies on a common hyperplane.
/// Degree is at most `d * s` because the ones column contributes one
/// degree-zero factor to every expansion term.
pub fn degeneracy_polynomial<T: Real>(points: &[&Trajectory<T>]) -> Result<Polynomial<T>, Error> {
    let d = points[0].dim();
    if points.len() != d + 1 {
        return Err(Error::InvalidInput(format!(
            "affine degeneracy needs d+1 = {} points, got {}",
            d + 1,
            points.len()
        )));
    }
    let m: Vec<Vec<Polynomial<T>>> = points
        .iter()
        .map(|tr| {
            let mut row: Vec<Polynomial<T>> = tr.components().to_vec();
            row.push(Polynomial::constant(T::one()));
            row
        })
        .collect();
    Ok(poly_matrix_det(&m))
}

/// Cosphericality event polynomial of `d+2` moving points: determinant of
/// coordinates bordered by the squared norm and a column of ones. Roots are
/// the times at which the tuple lies on a common sphere or hyperplane.
pub fn cosphericality_polynomial<T: Real>(
    points: &[&Trajectory<T>],
) -> Result<Polynomial<T>, Error> {
    let d = points[0].dim();
    if points.len() != d + 2 {
        return Err(Error::InvalidInput(format!(
            "cosphericality needs d+2 = {} points, got {}",
            d + 2,
            points.len()
        )));
    }
    let m: Vec<Vec<Polynomial<T>>> = points
        .iter()
        .map(|tr| {
            let mut row: Vec<Polynomial<T>> = tr.components().to_vec();
            let mut sq = Polynomial::zero();
            for p in tr.components() {
                sq = sq.add(&p.mul(p));
            }
            row.push(sq);
            row.push(Polynomial::constant(T::one()));
            row
        })
        .collect();
    Ok(poly_matrix_det(&m))
}

/// Outcome of general-position validation: tuples that are affinely
/// degenerate at the start of the horizon, and tuples whose degeneracy
/// polynomial vanishes identically (degenerate for all time).
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub degenerate_at_start: Vec<Vec<usize>>,
    pub degenerate_always: Vec<Vec<usize>>,
    /// True when the tuple sweep was subsampled rather than exhaustive.
    pub sampled: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.degenerate_at_start.is_empty() && self.degenerate_always.is_empty()
    }
}

/// Budget above which validation falls back to a randomized tuple sample.
const VALIDATION_TUPLE_BUDGET: u128 = 200_000;
const VALIDATION_SAMPLE: usize = 200_000;

/// Checks that no `d+1` points lie on a common hyperplane at the start of
/// the horizon. Exhaustive when the tuple count is within budget, otherwise
/// a seeded random sample of tuples.
pub fn validate_general_position<T: Real>(set: &MovingPointSet<T>) -> ValidationReport {
    let n = set.len();
    let d = set.dim();
    let k = d + 1;
    let mut report = ValidationReport::default();
    if n < k {
        return report;
    }
    let t0 = set.horizon().lo();
    let scale = set.coordinate_scale();
    let tol = T::from_f(1e-9) * scale.powi(d as i32);
    let mut check = |idx: &[usize]| {
        let rows: Vec<Vec<T>> = idx
            .iter()
            .map(|&i| {
                let mut r = set.trajectory(i).eval(t0);
                r.push(T::one());
                r
            })
            .collect();
        if linalg::det(&rows).abs() <= tol {
            report.degenerate_at_start.push(idx.to_vec());
        } else {
            return;
        }
        // only start-degenerate tuples are worth the polynomial check
        let trs: Vec<&Trajectory<T>> = idx.iter().map(|&i| set.trajectory(i)).collect();
        if let Ok(p) = degeneracy_polynomial(&trs) {
            if p.max_abs_coeff() <= tol {
                report.degenerate_always.push(idx.to_vec());
            }
        }
    };
    if binomial(n, k) <= VALIDATION_TUPLE_BUDGET {
        for_each_combination(n, k, |idx| {
            check(idx);
            true
        });
    } else {
        report.sampled = true;
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b69_6e65);
        let mut idx = vec![0usize; k];
        for _ in 0..VALIDATION_SAMPLE {
            // sample k distinct indices
            let mut chosen = std::collections::BTreeSet::new();
            while chosen.len() < k {
                chosen.insert(rng.gen_range(0..n));
            }
            for (slot, v) in idx.iter_mut().zip(&chosen) {
                *slot = *v;
            }
            check(&idx);
        }
    }
    report
}

/// Returns a copy of the set with every constant coefficient shifted by a
/// uniform random amount in `[-magnitude, magnitude]`. Intended as the
/// repair step when validation fails; deterministic in the seed.
pub fn perturb<T: Real>(set: &MovingPointSet<T>, magnitude: T, seed: u64) -> MovingPointSet<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trajectories = set
        .trajectories()
        .iter()
        .map(|tr| {
            let comps = tr
                .components()
                .iter()
                .map(|p| {
                    let delta = T::from_f(rng.gen_range(-1.0..1.0)) * magnitude;
                    let mut coeffs = p.coeffs().to_vec();
                    if coeffs.is_empty() {
                        coeffs.push(delta);
                    } else {
                        coeffs[0] = coeffs[0] + delta;
                    }
                    Polynomial::new(coeffs)
                })
                .collect();
            Trajectory::new(comps).expect("dimension preserved")
        })
        .collect();
    MovingPointSet::new(trajectories, set.max_degree(), set.horizon())
        .expect("structure preserved")
}
