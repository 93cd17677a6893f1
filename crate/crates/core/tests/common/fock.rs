//! Truncated number-basis references, independent of the phase-space code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub const CUTOFF: usize = 60;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `|α⟩` on `0..dim`, not renormalized.
pub fn coherent(alpha: Complex64, dim: usize) -> DVector<Complex64> {
    let norm = (-0.5 * alpha.norm_sqr()).exp();
    DVector::from_fn(dim, |n, _| {
        if alpha.norm() == 0.0 {
            return if n == 0 { c(1.0) } else { c(0.0) };
        }
        let mag = (n as f64 * alpha.norm().ln() - 0.5 * ln_factorial(n)).exp();
        Complex64::from_polar(mag * norm, n as f64 * alpha.arg())
    })
}

pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { c((j as f64).sqrt()) } else { c(0.0) })
}

/// Quadratures with vacuum variance ½: `x̂ = i(a − a†)/√2`, `p̂ = (a + a†)/√2`,
/// so that `⟨x̂⟩ = −√2 Im α` and `⟨p̂⟩ = √2 Re α`.
pub fn quadratures(dim: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let a = annihilation(dim);
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&a - &ad) * Complex64::new(0.0, s);
    let p = (&a + &ad) * c(s);
    (x, p)
}

/// Displacement and covariance `γ_ij = ⟨{ΔR_i, ΔR_j}⟩` of a single-mode
/// density matrix, ordered `(x, p)`.
pub fn moments(rho: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<f64>) {
    let dim = rho.nrows();
    let (x, p) = quadratures(dim);
    let ops = [x, p];
    let tr = |m: &DMatrix<Complex64>| (rho * m).trace().re;
    let mean = DVector::from_fn(2, |i, _| tr(&ops[i]));
    let cov = DMatrix::from_fn(2, 2, |i, j| {
        let anti = &ops[i] * &ops[j] + &ops[j] * &ops[i];
        tr(&anti) - 2.0 * mean[i] * mean[j]
    });
    (mean, cov)
}

/// `⟨β|ρ|β⟩`.
pub fn coherent_overlap(rho: &DMatrix<Complex64>, beta: Complex64) -> f64 {
    let b = coherent(beta, rho.nrows());
    (b.adjoint() * rho * &b)[(0, 0)].re
}

/// Two-mode pure state stored as `amp[(j, k)]`, with `j + k < dim` kept.
pub type TwoMode = DMatrix<Complex64>;

pub fn product(a: &DVector<Complex64>, b: &DVector<Complex64>) -> TwoMode {
    let dim = a.len();
    DMatrix::from_fn(dim, dim, |j, k| if j + k < dim { a[j] * b[k] } else { c(0.0) })
}

/// Beam splitter with transmissivity `eta` (`a → √η a + √(1−η) b`), applied
/// block by block in total photon number via a matrix exponential.
pub fn beamsplitter(state: &TwoMode, eta: f64) -> TwoMode {
    let dim = state.nrows();
    let theta = eta.sqrt().acos();
    let mut out = DMatrix::zeros(dim, dim);
    for total in 0..dim {
        let size = total + 1;
        // basis |j, total − j⟩; generator θ(a†b − ab†)
        let mut g = DMatrix::<f64>::zeros(size, size);
        for j in 0..total {
            let k = total - j;
            let v = ((j + 1) as f64 * k as f64).sqrt() * theta;
            g[(j + 1, j)] = v;
            g[(j, j + 1)] = -v;
        }
        let u = g.exp();
        for j in 0..size {
            let mut acc = c(0.0);
            for i in 0..size {
                acc += state[(i, total - i)] * u[(j, i)];
            }
            out[(j, total - j)] = acc;
        }
    }
    out
}

/// Reduced density matrix of the first mode.
pub fn reduce_first(state: &TwoMode) -> DMatrix<Complex64> {
    state * state.adjoint()
}

/// Reduced density matrix of the second mode.
pub fn reduce_second(state: &TwoMode) -> DMatrix<Complex64> {
    state.transpose() * state.conjugate()
}

/// Full two-mode moments in xxpp order: `(x₁, x₂, p₁, p₂)`.
pub fn two_mode_moments(state: &TwoMode) -> (DVector<f64>, DMatrix<f64>) {
    let (x, p) = quadratures(state.nrows());
    // R ψ for each quadrature; all are Hermitian so ⟨R_i R_j⟩ = (R_i ψ)†(R_j ψ).
    let applied = [&x * state, state * x.transpose(), &p * state, state * p.transpose()];
    let inner = |a: &TwoMode, b: &TwoMode| a.iter().zip(b.iter()).map(|(u, v)| u.conj() * v).sum::<Complex64>();
    let mean = DVector::from_fn(4, |i, _| inner(state, &applied[i]).re);
    let cov = DMatrix::from_fn(4, 4, |i, j| {
        2.0 * inner(&applied[i], &applied[j]).re - 2.0 * mean[i] * mean[j]
    });
    (mean, cov)
}

/// `Σ_n tanh^n r / cosh r |n, n⟩`.
pub fn two_mode_squeezed(r: f64, dim: usize) -> TwoMode {
    DMatrix::from_fn(dim, dim, |j, k| if j == k && 2 * j < dim { c(r.tanh().powi(j as i32) / r.cosh()) } else { c(0.0) })
}

/// Projects the second mode on `⟨β|` and renormalizes.
pub fn project_second_on_coherent(state: &TwoMode, beta: Complex64) -> (DMatrix<Complex64>, f64) {
    let b = coherent(beta, state.nrows());
    let psi = state * b.conjugate();
    let prob = psi.norm_squared();
    let psi = psi / Complex64::new(prob.sqrt(), 0.0);
    (&psi * psi.adjoint(), prob)
}

/// Thermal weights `n̄ᵏ/(1+n̄)^{k+1}` on `0..dim`.
pub fn thermal_weights(nbar: f64, dim: usize) -> Vec<f64> {
    (0..dim).map(|k| (nbar / (1.0 + nbar)).powi(k as i32) / (1.0 + nbar)).collect()
}

pub fn number_state(k: usize, dim: usize) -> DVector<Complex64> {
    DVector::from_fn(dim, |n, _| if n == k { c(1.0) } else { c(0.0) })
}

/// Eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect()
}

/// Minimum error probability for `|α⟩` vs `|−α⟩` with equal priors:
/// `½(1 − ‖½ρ₀ − ½ρ₁‖₁)`.
pub fn two_state_error(nbar: f64) -> f64 {
    let alpha = c(nbar.sqrt());
    let a = coherent(alpha, CUTOFF);
    let b = coherent(-alpha, CUTOFF);
    let diff = (&a * a.adjoint() - &b * b.adjoint()) * c(0.5);
    let trace_norm: f64 = hermitian_eigenvalues(&diff).iter().map(|v| v.abs()).sum();
    0.5 * (1.0 - trace_norm)
}

/// von Neumann entropy in bits of the equal mixture of `|α e^{2πik/M}⟩`.
pub fn psk_entropy(m: usize, nbar: f64) -> f64 {
    let mut rho = DMatrix::<Complex64>::zeros(CUTOFF, CUTOFF);
    for k in 0..m {
        let alpha = Complex64::from_polar(nbar.sqrt(), 2.0 * std::f64::consts::PI * k as f64 / m as f64);
        let v = coherent(alpha, CUTOFF);
        rho += &v * v.adjoint() * c(1.0 / m as f64);
    }
    hermitian_eigenvalues(&rho).iter().filter(|&&l| l > 1e-300).map(|&l| -l * l.log2()).sum()
}
