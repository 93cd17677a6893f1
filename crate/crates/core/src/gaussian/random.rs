//! Random Gaussian objects for property checks and verification suites.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{GaussianState, GeneralDyneMeasurement, SymplecticMap};

/// Haar-random `n×n` unitary: QR of a complex Ginibre matrix with the phases
/// of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random passive (orthogonal symplectic) map.
pub fn orthogonal_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticMap {
    SymplecticMap::from_unitary(&haar_unitary(n, rng)).expect("unitaries map to symplectic matrices")
}

/// `O · squeezers · O′` with squeezing drawn uniformly from `[−max_r, max_r]`.
pub fn symplectic<R: Rng + ?Sized>(n: usize, max_r: f64, rng: &mut R) -> SymplecticMap {
    let mut s = orthogonal_symplectic(n, rng);
    for mode in 0..n {
        let r = rng.random_range(-max_r..=max_r);
        s = s.then(&SymplecticMap::squeezer(n, mode, r));
    }
    s.then(&orthogonal_symplectic(n, rng))
}

pub fn normal_vector<R: Rng + ?Sized>(len: usize, scale: f64, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(len, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

/// Mixed Gaussian state: a random symplectic applied to a thermal state with
/// symplectic eigenvalues in `[1, 1 + 2·max_nth]`, then displaced.
pub fn state<R: Rng + ?Sized>(n: usize, max_r: f64, max_nth: f64, rng: &mut R) -> GaussianState {
    let thermal: Vec<f64> = (0..n).map(|_| 1.0 + 2.0 * rng.random_range(0.0..=max_nth)).collect();
    let cov = DMatrix::from_fn(2 * n, 2 * n, |i, j| if i == j { thermal[i % n] } else { 0.0 });
    let base = GaussianState::new_unchecked(cov, normal_vector(2 * n, 1.0, rng));
    base.transform(&symplectic(n, max_r, rng)).expect("dimensions agree")
}

/// Pure general-dyne measurement: a random passive map composed with
/// single-mode squeezed detection.
pub fn measurement<R: Rng + ?Sized>(n: usize, max_r: f64, rng: &mut R) -> GeneralDyneMeasurement {
    let rs: Vec<f64> = (0..n).map(|_| rng.random_range(-max_r..=max_r)).collect();
    let base = GeneralDyneMeasurement::squeezed_modes(&rs);
    super::compose_measurement(&base, &orthogonal_symplectic(n, rng)).expect("dimensions agree")
}
