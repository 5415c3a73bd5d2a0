//! Small dense complex linear algebra helpers on top of nalgebra.
//!
//! Everything here works in Euclidean coordinates. Callers that carry a
//! non-trivial gram matrix map into orthonormal coordinates first (see
//! [`crate::hermsymp::HermitianSymplecticSpace::to_orthonormal`]).

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Largest entry modulus, 0 for an empty matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis of `{x : m x = 0}`, using `tol` as an absolute
/// singular value threshold.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return zeros(0, 0);
    }
    if rows == 0 {
        return identity(cols);
    }
    // nalgebra returns a thin SVD; pad with zero rows so that v_t is square.
    let padded = if rows < cols {
        let mut p = zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol)
        .map(|(i, _)| i)
        .collect();
    let mut out = zeros(cols, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        let row = v_t.row(i).adjoint();
        out.set_column(j, &row);
    }
    out
}

/// Orthonormal basis of the column space of `m`, keeping left singular
/// vectors whose singular value exceeds `tol`. Also returns all singular
/// values (descending) so callers can inspect the gap.
pub fn column_space(m: &CMat, tol: f64) -> (CMat, Vec<f64>) {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return (zeros(rows, 0), Vec::new());
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("u requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let keep: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] > tol)
        .collect();
    let mut out = zeros(rows, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &u.column(i));
    }
    (out, sv)
}

/// Modified Gram-Schmidt (two passes) in column order.
///
/// Fails with [`Error::RankDeficient`] when a column's residual after
/// projection falls below `tol` times its original norm.
pub fn orthonormalize_in_order(cols: &CMat, tol: f64) -> Result<CMat> {
    let (n, k) = cols.shape();
    let mut q = zeros(n, k);
    for j in 0..k {
        let mut v = cols.column(j).into_owned();
        let norm0 = v.norm();
        if norm0 == 0.0 || !norm0.is_finite() {
            return Err(Error::RankDeficient {
                column: j,
                residual: 0.0,
            });
        }
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let proj = qi.dotc(&v);
                v -= qi * proj;
            }
        }
        let norm = v.norm();
        if norm <= tol * norm0 {
            return Err(Error::RankDeficient {
                column: j,
                residual: norm / norm0,
            });
        }
        q.set_column(j, &(v / c(norm, 0.0)));
    }
    Ok(q)
}

/// Greedy column-pivoted Gram-Schmidt: picks `count` columns, each time the
/// one with the largest remaining residual (ties go to the lower index).
/// Returns the orthonormal columns and the largest residual left over.
pub fn pivoted_orthonormal_columns(cols: &CMat, count: usize) -> (CMat, f64) {
    let (n, k) = cols.shape();
    let mut work = cols.clone();
    let mut q = zeros(n, count);
    let mut used = vec![false; k];
    for j in 0..count {
        let mut best = None;
        let mut best_norm = -1.0;
        for (i, u) in used.iter().enumerate() {
            if *u {
                continue;
            }
            let nrm = work.column(i).norm();
            if nrm > best_norm * (1.0 + 1e-12) {
                best_norm = nrm;
                best = Some(i);
            }
        }
        let Some(p) = best else { break };
        used[p] = true;
        let mut v = work.column(p).into_owned();
        for i in 0..j {
            let qi = q.column(i);
            let proj = qi.dotc(&v);
            v -= qi * proj;
        }
        let nrm = v.norm();
        if nrm == 0.0 {
            break;
        }
        let qj = v / c(nrm, 0.0);
        q.set_column(j, &qj);
        for (i, &done) in used.iter().enumerate() {
            if done {
                continue;
            }
            let mut w = work.column(i).into_owned();
            let proj = qj.dotc(&w);
            w -= &qj * proj;
            work.set_column(i, &w);
        }
    }
    let leftover = (0..k)
        .filter(|&i| !used[i])
        .map(|i| work.column(i).norm())
        .fold(0.0, f64::max);
    (q, leftover)
}

/// Multiply each column by a unit phase so that its first entry of
/// non-negligible modulus (relative to `rel_tol` times the column max) is
/// real and positive.
pub fn fix_column_phases(m: &mut CMat, rel_tol: f64) {
    for j in 0..m.ncols() {
        let col_max = m.column(j).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if col_max == 0.0 {
            continue;
        }
        let lead = m
            .column(j)
            .iter()
            .copied()
            .find(|z| z.norm() > rel_tol * col_max)
            .expect("nonzero column");
        let phase = lead.conj() / lead.norm();
        for i in 0..m.nrows() {
            m[(i, j)] *= phase;
        }
    }
}

/// Eigenvalues of a unitary matrix.
///
/// With `w = e^{ia}` chosen away from the spectrum, the Cayley transform
/// `K = i (w + U)(w - U)^{-1}` is Hermitian and an eigenvalue `k` of `K`
/// corresponds to `w (k - i)/(k + i)` of `U`. This keeps repeated
/// eigenvalues (in particular `-1` with multiplicity) well behaved, unlike a
/// general Schur iteration.
pub fn unitary_eigenvalues(u: &CMat) -> Result<Vec<Complex64>> {
    let n = u.nrows();
    if n != u.ncols() {
        return Err(Error::Shape(
            "unitary eigenvalues need a square matrix".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // among 2n + 2 equally spaced points some lie at angular distance
    // >= pi / (2n + 2) from every eigenvalue
    let candidates = 2 * n + 2;
    let mut best = (f64::NEG_INFINITY, c(1.0, 0.0));
    for j in 0..candidates {
        let angle = std::f64::consts::PI * (2 * j + 1) as f64 / candidates as f64;
        let w = Complex64::from_polar(1.0, angle);
        let gap = singular_values(&(identity(n) * w - u))
            .last()
            .copied()
            .unwrap_or(0.0);
        if gap > best.0 {
            best = (gap, w);
        }
    }
    let w = best.1;
    let shifted = (identity(n) * w - u)
        .try_inverse()
        .ok_or(Error::Eigensolver)?;
    let k = (identity(n) * w + u) * shifted * c(0.0, 1.0);
    let i = c(0.0, 1.0);
    Ok(hermitian_eigenvalues(&k)
        .into_iter()
        .map(|kappa| w * (kappa - i) / (kappa + i))
        .collect())
}

/// Eigenvalues of a Hermitian matrix (the input is symmetrized first).
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

/// Block diagonal matrix `diag(a, b)`.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Vertical stack `[a; b]`.
pub fn vstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols());
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// Horizontal concatenation `[a | b]`.
pub fn hstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// Spectral distance between the orthogonal projectors onto the column
/// spaces of two matrices with orthonormal columns.
pub fn projector_distance(q1: &CMat, q2: &CMat) -> f64 {
    let p1 = q1 * q1.adjoint();
    let p2 = q2 * q2.adjoint();
    spectral_norm(&(p1 - p2))
}
