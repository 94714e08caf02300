//! Dense linear algebra over a [`Scalar`], row-major `Vec<Vec<S>>`.
//!
//! Sizes here are tiny (at most a few dozen rows, `d + 1 <= 6` columns), so
//! everything is plain Gauss-Jordan elimination. Float pivots below
//! `tol * max|entry|` count as zero.

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn mat_vec<S: Scalar>(m: &Matrix<S>, v: &[S]) -> Vec<S> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Row vector times matrix.
pub fn vec_mat<S: Scalar>(v: &[S], m: &Matrix<S>) -> Vec<S> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            v.iter()
                .zip(m)
                .fold(S::zero(), |acc, (x, row)| acc + x.clone() * row[j].clone())
        })
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn transpose<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity<S: Scalar>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

fn max_abs<S: Scalar>(m: &Matrix<S>) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|x| x.to_f64().abs())
        .fold(0.0, f64::max)
}

/// Reduced row echelon form. Returns the reduced rows and the pivot
/// columns, in order.
pub fn rref<S: Scalar>(rows: &Matrix<S>, tol: f64) -> (Matrix<S>, Vec<usize>) {
    let mut m = rows.clone();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let thresh = tol * max_abs(&m).max(1.0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let pivot = if S::EXACT {
            (r..n_rows).find(|&i| !m[i][c].is_zero())
        } else {
            (r..n_rows)
                .max_by(|&i, &j| {
                    m[i][c]
                        .to_f64()
                        .abs()
                        .total_cmp(&m[j][c].to_f64().abs())
                })
                .filter(|&i| !m[i][c].is_zero_tol(thresh))
        };
        let Some(p) = pivot else {
            if !S::EXACT {
                for row in m.iter_mut().skip(r) {
                    row[c] = S::zero();
                }
            }
            continue;
        };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..n_rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n_cols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<S: Scalar>(rows: &Matrix<S>, tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(rows, tol).1.len()
}

/// Basis of `{x : rows * x = 0}` with `n_cols` unknowns.
pub fn nullspace<S: Scalar>(rows: &Matrix<S>, n_cols: usize, tol: f64) -> Vec<Vec<S>> {
    if rows.is_empty() {
        return identity(n_cols);
    }
    let (r, pivots) = rref(rows, tol);
    let free: Vec<usize> = (0..n_cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); n_cols];
            v[f] = S::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

pub fn determinant<S: Scalar>(m: &Matrix<S>) -> S {
    let n = m.len();
    let mut a = m.clone();
    let mut det = S::one();
    for c in 0..n {
        let pivot = if S::EXACT {
            (c..n).find(|&i| !a[i][c].is_zero())
        } else {
            (c..n).max_by(|&i, &j| a[i][c].to_f64().abs().total_cmp(&a[j][c].to_f64().abs()))
        };
        let Some(p) = pivot.filter(|&p| !a[p][c].is_zero()) else {
            return S::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det * a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / a[c][c].clone();
            for j in c..n {
                let v = a[c][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
    }
    det
}

/// Inverse, or `None` when singular at tolerance.
pub fn inverse<S: Scalar>(m: &Matrix<S>, tol: f64) -> Option<Matrix<S>> {
    let n = m.len();
    let aug: Matrix<S> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, tol);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Unique solution of a square system, or `None` when singular.
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &[S], tol: f64) -> Option<Vec<S>> {
    let n = m.len();
    let aug: Matrix<S> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, tol);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n].clone()).collect())
}

pub fn to_f64_matrix<S: Scalar>(m: &Matrix<S>) -> Matrix<f64> {
    m.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Rat};

    fn q(rows: &[&[i64]]) -> Matrix<Rat> {
        rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace_exact() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m, 0.0), 2);
        let ns = nullspace(&m, 3, 0.0);
        assert_eq!(ns.len(), 1);
        for row in &m {
            assert_eq!(dot(row, &ns[0]), rat_int(0));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = q(&[&[2, 1, 0], &[0, 1, 0], &[1, 0, 3]]);
        assert_eq!(determinant(&m), rat_int(6));
        let inv = inverse(&m, 0.0).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity::<Rat>(3));
        let singular = q(&[&[1, 2], &[2, 4]]);
        assert!(inverse(&singular, 0.0).is_none());
        assert_eq!(determinant(&singular), rat_int(0));
    }

    #[test]
    fn solve_float_matches_exact() {
        let m = q(&[&[3, 1], &[1, 2]]);
        let b = vec![rat_int(9), rat_int(8)];
        let x = solve(&m, &b, 0.0).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(3, 1)]);
        let mf = to_f64_matrix(&m);
        let xf = solve(&mf, &[9.0, 8.0], 1e-12).unwrap();
        assert!((xf[0] - 2.0).abs() < 1e-12 && (xf[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn float_rank_uses_tolerance() {
        let m = vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-14]];
        assert_eq!(rank(&m, 1e-9), 1);
        assert_eq!(rank(&m, 1e-16), 2);
    }
}
