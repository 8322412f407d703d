//! Approximate range counting from a fixed representative subset.
//!
//! Build once: draw a verified epsilon-approximation A of the point set.
//! Query forever: count the members of A inside a range at a time and
//! scale by n/|A|. For a verified approximation every query's error is at
//! most epsilon * n, while the work per query drops from n to |A|. At
//! this scale queries are plain linear scans; no tree structures.

use crate::error::Error;
use crate::hypergraph::EnumerationConfig;
use crate::motion::{MovingPointSet, TimeInterval};
use crate::ranges::{Range, RangeFamily};
use crate::sampling::{build_epsilon_approximation, EpsilonApproximation, SampleConfig};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct ApproxCounter<T> {
    pub approximation: EpsilonApproximation<T>,
    pub family: RangeFamily,
    pub n: usize,
    /// n / |A|, the factor turning subset counts into estimates.
    pub scale: T,
}

impl<T: Real> ApproxCounter<T> {
    pub fn sample_size(&self) -> usize {
        self.approximation.indices.len()
    }

    pub fn verified(&self) -> bool {
        self.approximation.verified
    }
}

/// Draws and verifies the approximation subset, then wraps it for
/// counting. The subset is never empty, so the scale is at least 1.
pub fn build_counter<T: Real>(
    set: &MovingPointSet<T>,
    family: RangeFamily,
    window: TimeInterval<T>,
    epsilon: T,
    cfg: &SampleConfig,
    ecfg: &EnumerationConfig<T>,
) -> Result<ApproxCounter<T>, Error> {
    let approximation = build_epsilon_approximation(set, family, window, epsilon, cfg, ecfg)?;
    let n = set.len();
    let a = approximation.indices.len();
    debug_assert!(a >= 1);
    Ok(ApproxCounter {
        approximation,
        family,
        n,
        scale: T::from_us(n) / T::from_us(a),
    })
}

/// Members of the approximation subset inside `r` at time `t`.
pub fn raw_count<T: Real>(
    counter: &ApproxCounter<T>,
    set: &MovingPointSet<T>,
    r: &Range<T>,
    t: T,
) -> Result<usize, Error> {
    if !set.horizon().contains(t) {
        return Err(Error::InvalidInput(format!("query time {t} outside the horizon")));
    }
    let mut count = 0usize;
    for &i in &counter.approximation.indices {
        if r.contains(&set.trajectory(i as usize).eval(t)) {
            count += 1;
        }
    }
    Ok(count)
}

/// Estimated number of points of the full set inside `r` at time `t`:
/// the subset count scaled by n/|A|. Dividing the estimate back by the
/// scale recovers the integer subset count exactly.
pub fn approx_count<T: Real>(
    counter: &ApproxCounter<T>,
    set: &MovingPointSet<T>,
    r: &Range<T>,
    t: T,
) -> Result<T, Error> {
    Ok(T::from_us(raw_count(counter, set, r, t)?) * counter.scale)
}

/// Ground truth: full linear scan of the point set.
pub fn exact_count<T: Real>(set: &MovingPointSet<T>, r: &Range<T>, t: T) -> Result<usize, Error> {
    if !set.horizon().contains(t) {
        return Err(Error::InvalidInput(format!("query time {t} outside the horizon")));
    }
    Ok(set.positions(t).iter().filter(|p| r.contains(p)).count())
}
