//! Small dense linear-algebra helpers shared by the Gaussian modules.
//!
//! Everything works on `nalgebra` dynamic matrices in xxpp ordering: for an
//! `n`-mode system the phase-space vector is `(x_1..x_n, p_1..p_n)`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};

/// Tolerance on the minimum eigenvalue of `cov + iΩ` (and plain PSD checks).
pub const PSD_TOL: f64 = 1e-9;
/// Tolerance on `SᵀΩS − Ω`, max absolute entry.
pub const SYMPLECTIC_TOL: f64 = 1e-9;
/// Relative tolerance on symmetry of covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Symplectic form `[[0, I], [−I, 0]]` for `n` modes.
pub fn omega(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = 1.0;
        m[(n + i, i)] = -1.0;
    }
    m
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Max relative asymmetry `|m − mᵀ| / max(1, |m|)`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = max_abs(m).max(1.0);
    max_abs(&(m - m.transpose())) / scale
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    let a = asymmetry(m);
    if a > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(a));
    }
    Ok(())
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(symmetrize(m)).eigenvalues.min()
}

/// Minimum eigenvalue of the Hermitian matrix `cov + iΩ`.
///
/// Uses the real embedding `[[A, −B], [B, A]]` of `A + iB`, which has the
/// same spectrum with every eigenvalue doubled.
pub fn min_eigenvalue_with_omega(cov: &DMatrix<f64>) -> f64 {
    let dim = cov.nrows();
    let w = omega(dim / 2);
    let mut big = DMatrix::zeros(2 * dim, 2 * dim);
    let a = symmetrize(cov);
    big.view_mut((0, 0), (dim, dim)).copy_from(&a);
    big.view_mut((dim, dim), (dim, dim)).copy_from(&a);
    big.view_mut((0, dim), (dim, dim)).copy_from(&(-&w));
    big.view_mut((dim, 0), (dim, dim)).copy_from(&w);
    min_eigenvalue(&big)
}

/// Rejects matrices whose `cov + iΩ` has an eigenvalue below `−PSD_TOL`.
pub fn check_physical(cov: &DMatrix<f64>) -> Result<()> {
    let m = min_eigenvalue_with_omega(cov);
    if m < -PSD_TOL {
        Err(Error::NotPositive(m))
    } else {
        Ok(())
    }
}

/// Inverse of a symmetric positive-definite matrix via Cholesky.
///
/// Cholesky keeps componentwise accuracy on the strongly graded matrices
/// produced by near-homodyne measurements (entries spanning `e^{±40}`),
/// where an eigendecomposition would not.
pub fn spd_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(spd_factor(m)?.inverse())
}

pub(crate) fn spd_factor(m: &DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    let sym = symmetrize(m);
    match Cholesky::new(sym.clone()) {
        Some(ch) => {
            let l = ch.l_dirty();
            let ok = (0..l.nrows()).all(|i| l[(i, i)].is_finite() && l[(i, i)] > 1e-150);
            if ok {
                Ok(ch)
            } else {
                Err(Error::Singular)
            }
        }
        None => {
            let min = min_eigenvalue(&sym);
            if min < -PSD_TOL * max_abs(&sym).max(1.0) {
                Err(Error::NotPositive(min))
            } else {
                Err(Error::Singular)
            }
        }
    }
}

/// `ln det` of a symmetric positive-definite matrix.
pub fn spd_ln_det(m: &DMatrix<f64>) -> Result<f64> {
    let ch = spd_factor(m)?;
    let l = ch.l_dirty();
    Ok((0..l.nrows()).map(|i| 2.0 * l[(i, i)].ln()).sum())
}

/// Max absolute entry of `SᵀΩS − Ω`.
pub fn symplectic_deviation(s: &DMatrix<f64>) -> f64 {
    if !s.is_square() || s.nrows() % 2 != 0 {
        return f64::INFINITY;
    }
    let w = omega(s.nrows() / 2);
    max_abs(&(s.transpose() * &w * s - w))
}

/// Max absolute entry of `SᵀS − I`.
pub fn orthogonality_deviation(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows();
    max_abs(&(s.transpose() * s - DMatrix::identity(n, n)))
}

/// Symplectic eigenvalues of a positive-definite covariance matrix, ascending.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = cov.nrows() / 2;
    let ch = spd_factor(cov)?;
    let l = ch.l();
    let k = l.transpose() * omega(n) * &l;
    // KᵀK = −K² has eigenvalues ν_j², each twice.
    let mut ev: Vec<f64> = SymmetricEigen::new(symmetrize(&(k.transpose() * &k)))
        .eigenvalues
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect())
}

/// Phase-space indices `(x_m, p_m)` for the listed modes of an `n`-mode system.
pub(crate) fn quadrature_indices(modes: &[usize], n: usize) -> Vec<usize> {
    modes.iter().copied().chain(modes.iter().map(|m| m + n)).collect()
}

pub(crate) fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub(crate) fn select_vec(v: &DVector<f64>, idx: &[usize]) -> DVector<f64> {
    DVector::from_iterator(idx.len(), idx.iter().map(|&i| v[i]))
}

/// Direct sum of two xxpp-ordered matrices, keeping xxpp ordering.
pub(crate) fn direct_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let na = a.nrows() / 2;
    let nb = b.nrows() / 2;
    let n = na + nb;
    let ia: Vec<usize> = (0..na).chain(n..n + na).collect();
    let ib: Vec<usize> = (na..n).chain(n + na..2 * n).collect();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for (i, &ri) in ia.iter().enumerate() {
        for (j, &rj) in ia.iter().enumerate() {
            out[(ri, rj)] = a[(i, j)];
        }
    }
    for (i, &ri) in ib.iter().enumerate() {
        for (j, &rj) in ib.iter().enumerate() {
            out[(ri, rj)] = b[(i, j)];
        }
    }
    out
}

pub(crate) fn direct_sum_vec(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    let na = a.len() / 2;
    let nb = b.len() / 2;
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(&a.as_slice()[..na]);
    out.extend_from_slice(&b.as_slice()[..nb]);
    out.extend_from_slice(&a.as_slice()[na..]);
    out.extend_from_slice(&b.as_slice()[nb..]);
    DVector::from_vec(out)
}
