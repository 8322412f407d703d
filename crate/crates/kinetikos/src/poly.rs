//! Univariate polynomials with real-root isolation.
//!
//! Coefficients are stored in ascending power order and trimmed so the
//! leading coefficient is nonzero (the zero polynomial is the empty vector).
//! Root isolation counts sign variations of a Sturm chain and bisects on the
//! variation count, so roots of even multiplicity are found too;
//! multiplicities are collapsed.

use crate::error::Error;
use crate::motion::TimeInterval;
use crate::scalar::Real;

/// Relative threshold below which a coefficient is treated as zero when
/// normalizing Sturm chain members.
const CHAIN_TRIM: f64 = 1e-13;
/// Relative threshold for calling a chain remainder exhausted.
const REMAINDER_FLOOR: f64 = 1e-12;
/// Relative threshold for the sign of a chain member at a point.
const SIGN_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Real> Polynomial<T> {
    /// Ascending coefficients; exact trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| *c == T::zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn from_slice(coeffs: &[T]) -> Self {
        Self::new(coeffs.to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the trimmed form; zero and constant polynomials report 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<T> {
        self.coeffs.last().copied()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |m, c| if c.abs() > m { c.abs() } else { m })
    }

    /// Horner evaluation.
    pub fn eval(&self, t: T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + *c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| *c * T::from_us(i))
            .collect();
        Self::new(out)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![T::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = *c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] = out[i] + *c;
        }
        Self::new(out)
    }

    pub fn sub_poly(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -*c).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|c| *c * s).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + *a * *b;
            }
        }
        Self::new(out)
    }

    /// All distinct real roots inside `window`, sorted ascending, with roots
    /// closer than `2 * tol` merged. Errors on the identically-zero
    /// polynomial, which carries no sign information.
    pub fn real_roots(&self, window: TimeInterval<T>, tol: T) -> Result<Vec<T>, Error> {
        if self.is_zero() {
            return Err(Error::Degenerate(
                "root isolation on the zero polynomial".into(),
            ));
        }
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        let chain = SturmChain::build(self);
        let pad = tol;
        let lo = window.lo() - pad;
        let hi = window.hi() + pad;
        let vlo = chain.variations(lo);
        let vhi = chain.variations(hi);
        let mut roots = Vec::new();
        isolate(&chain, lo, hi, vlo, vhi, tol, &mut roots);
        roots.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
        let merged = merge_clusters(&roots, tol);
        // variation counting runs against a noise floor, which can shift an
        // isolated bracket off the root by far more than tol near roots of
        // even multiplicity; polish each estimate on the polynomial itself
        let pn = self.scale(T::one() / self.max_abs_coeff());
        let dpn = pn.derivative();
        let mut polished: Vec<T> = merged
            .into_iter()
            .map(|r| polish_root(&pn, &dpn, r))
            .collect();
        polished.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
        Ok(merge_clusters(&polished, tol)
            .into_iter()
            .filter(|r| *r >= window.lo() - pad && *r <= window.hi() + pad)
            .map(|r| r.max(window.lo()).min(window.hi()))
            .collect())
    }
}

/// Collapses runs of sorted values closer than `2 * tol` to their mean.
fn merge_clusters<T: Real>(sorted: &[T], tol: T) -> Vec<T> {
    let two = T::from_f(2.0);
    let mut merged: Vec<T> = Vec::with_capacity(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        let mut sum = sorted[i];
        while j < sorted.len() && sorted[j] - sorted[j - 1] < two * tol {
            sum = sum + sorted[j];
            j += 1;
        }
        merged.push(sum / T::from_us(j - i));
        i = j;
    }
    merged
}

/// Damped Newton refinement. Steps are capped and the walk is confined to a
/// small neighborhood of the starting estimate, so a polish can only tighten
/// an isolated root, never jump to a different one. Returns the best point
/// seen. Converges linearly at roots of even multiplicity, which is exactly
/// where variation counting leaves the largest offset.
fn polish_root<T: Real>(p: &Polynomial<T>, dp: &Polynomial<T>, x0: T) -> T {
    let guard = T::from_f(0.05) * (T::one() + x0.abs());
    let mut x = x0;
    let mut best = x0;
    let mut best_v = p.eval(x0).abs();
    for _ in 0..100 {
        let f = p.eval(x);
        if f == T::zero() {
            return x;
        }
        let g = dp.eval(x);
        if g.abs() <= T::from_f(1e-300) {
            break;
        }
        let mut step = f / g;
        let cap = T::from_f(1e-3) * (T::one() + x.abs());
        if step.abs() > cap {
            step = if step > T::zero() { cap } else { -cap };
        }
        x = x - step;
        if (x - x0).abs() > guard {
            break;
        }
        let v = p.eval(x).abs();
        if v < best_v {
            best_v = v;
            best = x;
        }
        if step.abs() <= T::from_f(1e-16) * (T::one() + x.abs()) {
            break;
        }
    }
    best
}

/// Sturm chain with every member normalized to unit max coefficient, so the
/// sign thresholds below are meaningful across the chain.
struct SturmChain<T> {
    members: Vec<Polynomial<T>>,
}

impl<T: Real> SturmChain<T> {
    fn build(p: &Polynomial<T>) -> Self {
        let mut members = Vec::with_capacity(p.degree() + 2);
        let first = normalize(p);
        let second = normalize(&first.derivative());
        members.push(first);
        if second.is_zero() {
            return SturmChain { members };
        }
        members.push(second);
        loop {
            let k = members.len();
            if k > p.degree() + 1 {
                break;
            }
            let rem = pseudo_rem(&members[k - 2], &members[k - 1]);
            if rem.max_abs_coeff().to_f() <= REMAINDER_FLOOR {
                break;
            }
            members.push(normalize(&rem.neg()));
            if members.last().unwrap().degree() == 0 {
                break;
            }
        }
        SturmChain { members }
    }

    /// Sign variation count at `x`; values within the evaluation noise floor
    /// are skipped, per the usual convention.
    fn variations(&self, x: T) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for m in &self.members {
            let v = m.eval(x);
            let floor = eval_floor(m, x);
            if v.abs() <= floor {
                continue;
            }
            let s = v > T::zero();
            if let Some(prev) = last {
                if prev != s {
                    count += 1;
                }
            }
            last = Some(s);
        }
        count
    }
}

/// Noise floor for evaluating a unit-normalized polynomial at `x`.
fn eval_floor<T: Real>(p: &Polynomial<T>, x: T) -> T {
    let ax = x.abs().max(T::one());
    let mut scale = T::zero();
    let mut pw = T::one();
    for _ in 0..=p.degree() {
        scale = scale + pw;
        pw = pw * ax;
    }
    T::from_f(SIGN_FLOOR) * scale
}

fn normalize<T: Real>(p: &Polynomial<T>) -> Polynomial<T> {
    let m = p.max_abs_coeff();
    if m == T::zero() {
        return Polynomial::zero();
    }
    let inv = T::one() / m;
    let trim = T::from_f(CHAIN_TRIM);
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| {
            let v = *c * inv;
            if v.abs() <= trim {
                T::zero()
            } else {
                v
            }
        })
        .collect();
    Polynomial::new(coeffs)
}

/// Remainder of `a / b` by long division; `b` is unit-normalized.
fn pseudo_rem<T: Real>(a: &Polynomial<T>, b: &Polynomial<T>) -> Polynomial<T> {
    let db = b.degree();
    let lead = b.leading().expect("divisor is nonzero");
    let mut rem: Vec<T> = a.coeffs().to_vec();
    while rem.len() >= db + 1 {
        if rem.last().is_some_and(|c| *c == T::zero()) {
            rem.pop();
            continue;
        }
        let da = rem.len() - 1;
        let f = rem[da] / lead;
        let shift = da - db;
        for (i, c) in b.coeffs().iter().enumerate() {
            rem[i + shift] = rem[i + shift] - f * *c;
        }
        rem.pop();
    }
    Polynomial::new(rem)
}

/// Recursively splits `(lo, hi]` by variation count; a bracket holding one
/// root is tightened by bisecting on the count, which also pins roots of
/// even multiplicity where the polynomial itself does not change sign.
fn isolate<T: Real>(
    chain: &SturmChain<T>,
    lo: T,
    hi: T,
    vlo: usize,
    vhi: usize,
    tol: T,
    out: &mut Vec<T>,
) {
    let k = vlo.saturating_sub(vhi);
    if k == 0 {
        return;
    }
    let two = T::from_f(2.0);
    if hi - lo <= two * tol {
        // unresolvable cluster: report its center once
        out.push((lo + hi) / two);
        return;
    }
    if k == 1 {
        let (mut a, mut b, mut va) = (lo, hi, vlo);
        while b - a > tol {
            let mid = (a + b) / two;
            if mid <= a || mid >= b {
                break;
            }
            let vm = chain.variations(mid);
            if va.saturating_sub(vm) >= 1 {
                b = mid;
            } else {
                a = mid;
                va = vm;
            }
        }
        out.push((a + b) / two);
        return;
    }
    let mid = (lo + hi) / two;
    let vm = chain.variations(mid);
    isolate(chain, lo, mid, vlo, vm, tol, out);
    isolate(chain, mid, hi, vm, vhi, tol, out);
}

/// Determinant of a square matrix of polynomials by cofactor expansion
/// along the first row. Matrices here are at most 5x5.
pub fn poly_matrix_det<T: Real>(m: &[Vec<Polynomial<T>>]) -> Polynomial<T> {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero();
    for (col, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial<T>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = entry.mul(&poly_matrix_det(&minor));
        acc = if col % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub_poly(&term)
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn win(lo: f64, hi: f64) -> TimeInterval<f64> {
        TimeInterval::new(lo, hi).unwrap()
    }

    const TOL: f64 = 1e-10;

    #[test]
    fn trims_leading_zeros() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.coeffs(), &[1.0, 2.0]);
        assert_eq!(p.degree(), 1);
        assert!(Polynomial::<f64>::new(vec![0.0, 0.0]).is_zero());
    }

    #[test]
    fn evaluates_square() {
        // t^2 at 3
        let p = Polynomial::from_slice(&[0.0, 0.0, 1.0]);
        assert_eq!(p.eval(3.0), 9.0);
    }

    #[test]
    fn arithmetic_degree() {
        let p = Polynomial::from_slice(&[1.0, 1.0]);
        let q = Polynomial::from_slice(&[-1.0, 1.0]);
        let prod = p.mul(&q);
        assert_eq!(prod.coeffs(), &[-1.0, 0.0, 1.0]);
        assert_eq!(p.add(&q).coeffs(), &[0.0, 2.0]);
        assert_eq!(p.derivative().coeffs(), &[1.0]);
    }

    #[test]
    fn roots_of_shifted_square() {
        // t^2 - 1 on [0, 10]: only the root at 1 is inside
        let p = Polynomial::from_slice(&[-1.0, 0.0, 1.0]);
        let roots = p.real_roots(win(0.0, 10.0), TOL).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn roots_of_cubic() {
        // (t-1)(t-2)(t-3)
        let p = Polynomial::from_slice(&[-6.0, 11.0, -6.0, 1.0]);
        let roots = p.real_roots(win(0.0, 10.0), TOL).unwrap();
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - want).abs() < 1e-8, "{r} vs {want}");
        }
    }

    #[test]
    fn double_root_is_found_once() {
        // (t-1)^2 has no sign change; variation-count bisection still lands on it
        let p = Polynomial::from_slice(&[1.0, -2.0, 1.0]);
        let roots = p.real_roots(win(0.0, 2.0), TOL).unwrap();
        assert_eq!(roots.len(), 1);
        // a double root is only determined to about sqrt(eps)
        assert!((roots[0] - 1.0).abs() < 5e-8);
    }

    #[test]
    fn root_at_window_edge() {
        let p = Polynomial::from_slice(&[0.0, 1.0]); // t
        let roots = p.real_roots(win(0.0, 1.0), TOL).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0], 0.0);
    }

    #[test]
    fn zero_polynomial_errors() {
        let p = Polynomial::<f64>::zero();
        assert!(matches!(
            p.real_roots(win(0.0, 1.0), TOL),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn constant_has_no_roots() {
        let p = Polynomial::from_slice(&[5.0]);
        assert!(p.real_roots(win(0.0, 1.0), TOL).unwrap().is_empty());
    }

    #[test]
    fn close_roots_merge() {
        let a = 0.5;
        let b = 0.5 + 1e-11; // closer than 2*tol
        let p = Polynomial::from_slice(&[a * b, -(a + b), 1.0]);
        let roots = p.real_roots(win(0.0, 1.0), TOL).unwrap();
        assert_eq!(roots.len(), 1);
        // the pair is numerically a double root; sqrt(eps) is the limit
        assert!((roots[0] - 0.5).abs() < 5e-8);
    }

    /// Dense-grid sign-change oracle: every bracketed sign change must have
    /// an isolated root nearby, and every reported root must nearly vanish.
    #[test]
    fn random_polynomials_match_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let deg = rng.gen_range(1..=6);
            let coeffs: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let p = Polynomial::from_slice(&coeffs);
            if p.is_zero() || p.degree() == 0 {
                continue;
            }
            let (lo, hi) = (-2.0, 2.0);
            let roots = p.real_roots(win(lo, hi), TOL).unwrap();
            assert!(roots.len() <= p.degree());
            let scale = p.max_abs_coeff();
            for r in &roots {
                assert!(
                    p.eval(*r).abs() <= scale * 1e-8,
                    "trial {trial}: residual {} at root {r}",
                    p.eval(*r)
                );
            }
            let samples = 100_000;
            let step = (hi - lo) / samples as f64;
            let mut prev = p.eval(lo);
            for i in 1..=samples {
                let t = lo + step * i as f64;
                let v = p.eval(t);
                if prev != 0.0 && v != 0.0 && (prev > 0.0) != (v > 0.0) {
                    let hit = roots.iter().any(|r| (*r >= t - step * 2.0 - TOL) && (*r <= t + TOL));
                    assert!(hit, "trial {trial}: sign change near {t} missed (roots {roots:?})");
                }
                prev = v;
            }
        }
    }

    #[test]
    fn matrix_det_of_polynomials() {
        // det [[t, 1], [2-t, 1]] = t - (2 - t) = 2t - 2
        let m = vec![
            vec![
                Polynomial::from_slice(&[0.0, 1.0]),
                Polynomial::from_slice(&[1.0]),
            ],
            vec![
                Polynomial::from_slice(&[2.0, -1.0]),
                Polynomial::from_slice(&[1.0]),
            ],
        ];
        let d = poly_matrix_det(&m);
        assert_eq!(d.coeffs(), &[-2.0, 2.0]);
    }

    #[test]
    fn f32_instantiation_smoke() {
        let p: Polynomial<f32> = Polynomial::from_slice(&[-1.0, 0.0, 1.0]);
        let w = TimeInterval::new(0.0f32, 2.0f32).unwrap();
        let roots = p.real_roots(w, 1e-5).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.0).abs() < 1e-4);
    }
}
