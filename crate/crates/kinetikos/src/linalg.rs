//! Small dense linear algebra for the predicate layer.
//!
//! Systems here are at most 5x5 (lifted ball tuples in R^3), so plain
//! Gaussian elimination with partial pivoting is exact enough.

use crate::scalar::Real;

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        s = s + *x * *y;
    }
    s
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

pub fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a)
}

pub fn norm<T: Real>(a: &[T]) -> T {
    norm2(a).sqrt()
}

pub fn dist2<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        let d = *x - *y;
        s = s + d * d;
    }
    s
}

pub fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    dist2(a, b).sqrt()
}

pub fn scale<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|x| *x * s).collect()
}

pub fn add_scaled<T: Real>(a: &[T], b: &[T], s: T) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x + *y * s).collect()
}

/// Solves `A x = b` in place for a square system, returning `None` when the
/// pivot collapses below `tiny` (relative to the largest row entry).
pub fn solve_square<T: Real>(a: &mut [Vec<T>], b: &mut [T], tiny: T) -> Option<Vec<T>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() <= tiny {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = T::one() / a[col][col];
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col] * inv;
            if f == T::zero() {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] = a[r][c] - f * v;
            }
            b[r] = b[r] - f * b[col];
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Determinant of a small square matrix by elimination.
pub fn det<T: Real>(m: &[Vec<T>]) -> T {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut d = T::one();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == T::zero() {
            return T::zero();
        }
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d = d * a[col][col];
        let inv = T::one() / a[col][col];
        for r in col + 1..n {
            let f = a[r][col] * inv;
            for c in col..n {
                let v = a[col][c];
                a[r][c] = a[r][c] - f * v;
            }
        }
    }
    d
}

/// Minimum-norm solution of the underdetermined system `A z = b`
/// (rows of `A` independent, fewer rows than columns): z = A^T (A A^T)^{-1} b.
pub fn least_norm_solve<T: Real>(a: &[Vec<T>], b: &[T], tiny: T) -> Option<Vec<T>> {
    let rows = a.len();
    let cols = a[0].len();
    debug_assert!(rows <= cols);
    let mut gram: Vec<Vec<T>> = vec![vec![T::zero(); rows]; rows];
    for i in 0..rows {
        for j in 0..rows {
            gram[i][j] = dot(&a[i], &a[j]);
        }
    }
    let mut rhs = b.to_vec();
    let y = solve_square(&mut gram, &mut rhs, tiny)?;
    let mut z = vec![T::zero(); cols];
    for (i, yi) in y.iter().enumerate() {
        for c in 0..cols {
            z[c] = z[c] + a[i][c] * *yi;
        }
    }
    Some(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_3x3() {
        let mut a: Vec<Vec<f64>> = vec![
            vec![2.0, 1.0, -1.0],
            vec![-3.0, -1.0, 2.0],
            vec![-2.0, 1.0, 2.0],
        ];
        let mut b = vec![8.0, -11.0, -3.0];
        let x = solve_square(&mut a, &mut b, 1e-14).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
        assert!((x[2] - -1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_returns_none() {
        let mut a: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        let mut b = vec![1.0, 2.0];
        assert!(solve_square(&mut a, &mut b, 1e-12).is_none());
    }

    #[test]
    fn det_matches_hand_value() {
        let m: Vec<Vec<f64>> = vec![
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ];
        assert!((det(&m) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn least_norm_satisfies_constraints() {
        // one constraint, three unknowns
        let a: Vec<Vec<f64>> = vec![vec![1.0, 2.0, 2.0]];
        let b = vec![9.0];
        let z = least_norm_solve(&a, &b, 1e-14).unwrap();
        assert!((dot(&a[0], &z) - 9.0).abs() < 1e-12);
        // minimum-norm solution is parallel to the constraint row
        assert!((z[1] / z[0] - 2.0).abs() < 1e-12);
    }
}
