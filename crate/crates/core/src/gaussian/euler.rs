//! Euler (Bloch–Messiah) decomposition `S = O · diag(M, M⁻¹) · O′`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::SymplecticMap;
use crate::error::{Error, Result};
use crate::linalg::{self, omega};

#[derive(Debug, Clone)]
pub struct EulerDecomposition {
    /// Left passive factor.
    pub left: SymplecticMap,
    /// Squeezing parameters `r_i` with `M = diag(e^{r_i})`, sorted descending
    /// and nonnegative.
    pub squeezes: Vec<f64>,
    /// Right passive factor.
    pub right: SymplecticMap,
}

impl EulerDecomposition {
    pub fn squeezing_map(&self) -> SymplecticMap {
        let n = self.squeezes.len();
        let diag = DVector::from_fn(2 * n, |i, _| {
            if i < n {
                self.squeezes[i].exp()
            } else {
                (-self.squeezes[i - n]).exp()
            }
        });
        SymplecticMap::new_unchecked(DMatrix::from_diagonal(&diag))
    }

    /// `O · diag(M, M⁻¹) · O′`.
    pub fn reconstruct(&self) -> SymplecticMap {
        self.left.then(&self.squeezing_map()).then(&self.right)
    }
}

// Eigenvalues of SᵀS closer than this to 1 are treated as unsqueezed.
const UNIT_TOL: f64 = 1e-10;

/// Decomposes a symplectic map into passive · squeezing · passive.
///
/// The right factor is `Wᵀ`, where `W` is an orthogonal symplectic
/// eigenbasis of `SᵀS`: each eigenvector `u` with eigenvalue `λ² > 1` is
/// paired with `−Ωu` (eigenvalue `λ⁻²`), and the unit eigenspace is given a
/// basis of the same form by symplectic Gram–Schmidt. The left factor is
/// `S W D⁻¹`.
pub fn euler_decompose(s: &SymplecticMap) -> Result<EulerDecomposition> {
    let dev = s.symplectic_deviation();
    if dev > linalg::SYMPLECTIC_TOL {
        return Err(Error::NotSymplectic(dev));
    }
    let n = s.n_modes();
    let m = s.matrix();
    let gram = linalg::symmetrize(&(m.transpose() * m));
    let eig = SymmetricEigen::new(gram);
    let w_form = omega(n);

    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut us: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut lambdas: Vec<f64> = Vec::with_capacity(n);
    let mut unit_space: Vec<DVector<f64>> = Vec::new();
    for &i in &order {
        let ev = eig.eigenvalues[i];
        let v = eig.eigenvectors.column(i).into_owned();
        if ev > 1.0 + UNIT_TOL && us.len() < n {
            us.push(v);
            lambdas.push(ev.sqrt());
        } else if (ev - 1.0).abs() <= UNIT_TOL {
            unit_space.push(v);
        }
    }

    // Complete the basis inside the unit eigenspace.
    let mut basis: Vec<DVector<f64>> = us.iter().flat_map(|u| [u.clone(), -(&w_form * u)]).collect();
    for cand in &unit_space {
        if us.len() == n {
            break;
        }
        let mut v = cand.clone();
        for b in &basis {
            let c = b.dot(&v);
            v -= b * c;
        }
        let norm = v.norm();
        if norm < 1e-6 {
            continue;
        }
        v /= norm;
        let partner = -(&w_form * &v);
        basis.push(v.clone());
        basis.push(partner);
        us.push(v);
        lambdas.push(1.0);
    }
    if us.len() != n {
        return Err(Error::NotSymplectic(dev));
    }

    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for (k, u) in us.iter().enumerate() {
        w.set_column(k, u);
        w.set_column(n + k, &(-(&w_form * u)));
    }
    let d_inv = DMatrix::from_diagonal(&DVector::from_fn(2 * n, |i, _| {
        if i < n {
            1.0 / lambdas[i]
        } else {
            lambdas[i - n]
        }
    }));
    let left = m * &w * d_inv;
    Ok(EulerDecomposition {
        left: SymplecticMap::new_unchecked(left),
        squeezes: lambdas.iter().map(|l| l.ln()).collect(),
        right: SymplecticMap::new_unchecked(w.transpose()),
    })
}
