//! Singular value decomposition of dense matrices.
//!
//! The general kernel is a one-sided Jacobi iteration: plane rotations
//! orthogonalize column pairs of a working copy of the input while the same
//! rotations accumulate into `V`; at convergence the column norms are the
//! singular values and the normalized columns form the leading part of `U`.
//! A cyclic Jacobi eigensolver on the 4x4 Gram matrix provides a cheap path
//! for the `4 x m` matrices produced by 2x2-block analysis, where factoring
//! the full matrix would be wasteful.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Sweep cap for both Jacobi iterations.
const MAX_SWEEPS: usize = 30;

/// A sweep whose largest applied rotation angle is below this has converged.
const ANGLE_TOL: f64 = 1e-12;

/// Column pairs (or off-diagonal entries) satisfying
/// `|<p,q>| <= ORTHO_TOL * |p| * |q|` are already orthogonal to machine
/// precision and are skipped; rotating them only churns roundoff.
const ORTHO_TOL: f64 = 1e-14;

/// Columns whose singular value falls below `RANK_TOL * s_max` are treated as
/// null directions: their `U` columns come from deterministic orthonormal
/// completion rather than normalizing a roundoff-sized vector.
const RANK_TOL: f64 = 1e-13;

/// Result of [`svd`]: `U * diag(s) * V^T` reconstructs the input.
///
/// `u` is `M x M` orthonormal, `v` is `N x N` orthonormal and `s` holds the
/// `min(M, N)` singular values in descending order. Signs are normalized so
/// that the largest-magnitude entry of every left singular vector is
/// positive (ties broken by lowest index), which makes the factorization
/// deterministic.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl SvdFactors {
    /// Computes `U * diag(s) * V^T`.
    pub fn reconstruct(&self) -> Matrix {
        let m = self.u.rows();
        let n = self.v.rows();
        Matrix::from_fn(m, n, |i, j| {
            self.s
                .iter()
                .enumerate()
                .map(|(r, &sr)| sr * self.u.get(i, r) * self.v.get(j, r))
                .sum()
        })
    }
}

/// Full singular value decomposition of an arbitrary dense matrix.
///
/// Rank-deficient and zero matrices are valid inputs; null directions get
/// deterministic orthonormal completion columns so `U` and `V` are always
/// full orthogonal bases.
pub fn svd(a: &Matrix) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    let mut factors = if m >= n {
        jacobi_tall(a)?
    } else {
        // Factor the transpose and swap the roles of U and V.
        let t = jacobi_tall(&a.transpose())?;
        SvdFactors {
            u: t.v,
            s: t.s,
            v: t.u,
        }
    };
    apply_sign_convention(&mut factors.u, Some(&mut factors.v), m.min(n));
    Ok(factors)
}

/// Left singular basis of a `4 x m` matrix, `m >= 4`, via the symmetric
/// eigenproblem of the 4x4 Gram matrix `a1 * a1^T`. Columns are ordered by
/// descending singular value and sign-normalized exactly like [`svd`].
pub fn left_singular_basis_4(a1: &Matrix) -> Result<Matrix> {
    if a1.rows() != 4 {
        return Err(Error::dimension(format!(
            "expected a 4-row matrix, got {} rows",
            a1.rows()
        )));
    }
    if a1.cols() < 4 {
        return Err(Error::dimension(format!(
            "need at least 4 columns, got {}",
            a1.cols()
        )));
    }
    left_basis_from_gram(a1)
}

/// Gram-matrix eigenbasis path without the column-count restriction; the
/// multiresolution transform uses this so that tiny images (down to 2x2)
/// still decompose.
pub(crate) fn left_basis_from_gram(a1: &Matrix) -> Result<Matrix> {
    let gram = a1.multiply(&a1.transpose())?;
    let (_, mut vectors) = jacobi_eigh(&gram)?;
    apply_sign_convention(&mut vectors, None, 0);
    Ok(vectors)
}

/// One-sided Jacobi on a tall (rows >= cols) matrix.
fn jacobi_tall(a: &Matrix) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);

    let mut w: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| a.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut max_angle = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    alpha += w[p][i] * w[p][i];
                    beta += w[q][i] * w[q][i];
                    gamma += w[p][i] * w[q][i];
                }
                if gamma.abs() <= ORTHO_TOL * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
                max_angle = max_angle.max(t.abs().atan());
            }
        }
        converged = max_angle < ANGLE_TOL;
    }
    if !converged {
        return Err(Error::Convergence { sweeps: MAX_SWEEPS });
    }

    // Order columns by descending singular value, ties by original index.
    let sigma: Vec<f64> = w.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap().then(i.cmp(&j)));

    let s: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    let s_max = s.first().copied().unwrap_or(0.0);

    let mut ucols: Vec<Option<Vec<f64>>> = vec![None; m];
    for (rank, &j) in order.iter().enumerate() {
        if sigma[j] > s_max * RANK_TOL && sigma[j] > 0.0 {
            let inv = 1.0 / sigma[j];
            ucols[rank] = Some(w[j].iter().map(|x| x * inv).collect());
        }
    }
    complete_orthonormal(&mut ucols);

    let u = columns_to_matrix(m, &ucols.into_iter().map(Option::unwrap).collect::<Vec<_>>());
    let vcols: Vec<Vec<f64>> = order.iter().map(|&j| v[j].clone()).collect();
    let v = columns_to_matrix(n, &vcols);

    Ok(SvdFactors { u, s, v })
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// eigenvalues in descending order and the matching eigenvectors as columns.
fn jacobi_eigh(sym: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = sym.rows();
    debug_assert_eq!(n, sym.cols());
    let mut a: Vec<f64> = sym.as_slice().to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut max_angle = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq.abs() <= ORTHO_TOL * app.abs().sqrt() * aqq.abs().sqrt() {
                    continue;
                }
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    let new_p = c * aip - s * aiq;
                    let new_q = s * aip + c * aiq;
                    a[i * n + p] = new_p;
                    a[p * n + i] = new_p;
                    a[i * n + q] = new_q;
                    a[q * n + i] = new_q;
                }
                rotate_pair(&mut v, p, q, c, s);
                max_angle = max_angle.max(t.abs().atan());
            }
        }
        converged = max_angle < ANGLE_TOL;
    }
    if !converged {
        return Err(Error::Convergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap().then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vcols: Vec<Vec<f64>> = order.iter().map(|&j| v[j].clone()).collect();
    Ok((values, columns_to_matrix(n, &vcols)))
}

/// Applies the plane rotation `[p, q] <- [c*p - s*q, s*p + c*q]`.
fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let new_x = c * *x - s * *y;
        let new_y = s * *x + c * *y;
        *x = new_x;
        *y = new_y;
    }
}

fn norm(col: &[f64]) -> f64 {
    col.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fills the `None` slots with unit vectors orthogonal to every filled
/// column. Each slot takes the standard basis vector with the largest
/// residual after two Gram-Schmidt passes (ties to the lowest index), so the
/// completion is deterministic.
fn complete_orthonormal(cols: &mut [Option<Vec<f64>>]) {
    let dim = cols.len();
    for slot in 0..dim {
        if cols[slot].is_some() {
            continue;
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for cand in 0..dim {
            let mut v = vec![0.0; dim];
            v[cand] = 1.0;
            for _ in 0..2 {
                for filled in cols.iter().flatten() {
                    let proj = dot(&v, filled);
                    for (x, f) in v.iter_mut().zip(filled) {
                        *x -= proj * f;
                    }
                }
            }
            let len = norm(&v);
            if best.as_ref().map_or(true, |(b, _)| len > *b) {
                best = Some((len, v));
            }
        }
        let (len, mut v) = best.expect("dim > 0");
        debug_assert!(len > 0.0, "cannot complete an already full basis");
        let inv = 1.0 / len;
        v.iter_mut().for_each(|x| *x *= inv);
        cols[slot] = Some(v);
    }
}

/// Flips column signs so the largest-magnitude entry of each `u` column is
/// positive (ties broken by lowest index). For columns paired with a
/// singular value (`j < paired`), the matching `v` column flips too so the
/// product is unchanged; the rule applied to trailing `v` columns keeps the
/// whole factorization deterministic.
fn apply_sign_convention(u: &mut Matrix, v: Option<&mut Matrix>, paired: usize) {
    let flip: Vec<bool> = (0..u.cols()).map(|j| dominant_entry_negative(u, j)).collect();
    for (j, &f) in flip.iter().enumerate() {
        if f {
            negate_column(u, j);
        }
    }
    if let Some(v) = v {
        for (j, &f) in flip.iter().enumerate().take(paired) {
            if f && j < v.cols() {
                negate_column(v, j);
            }
        }
        for j in paired..v.cols() {
            if dominant_entry_negative(v, j) {
                negate_column(v, j);
            }
        }
    }
}

fn dominant_entry_negative(m: &Matrix, col: usize) -> bool {
    let mut best_abs = -1.0;
    let mut best_val = 0.0;
    for i in 0..m.rows() {
        let x = m.get(i, col);
        if x.abs() > best_abs {
            best_abs = x.abs();
            best_val = x;
        }
    }
    best_val < 0.0
}

fn negate_column(m: &mut Matrix, col: usize) {
    for i in 0..m.rows() {
        let x = m.get(i, col);
        m.set(i, col, -x);
    }
}

fn columns_to_matrix(rows: usize, cols: &[Vec<f64>]) -> Matrix {
    Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}
