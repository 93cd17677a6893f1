//! Covariance-matrix calculus for Gaussian states, Gaussian unitaries and
//! general-dyne measurements.
//!
//! Conventions: quadratures `x̂ = (â† + â)/√2`, vacuum covariance `I`, xxpp
//! ordering, symplectic form `Ω = [[0, I], [−I, 0]]`. A state is described
//! by the characteristic function `χ(x) = exp(−¼ xᵀγx + i dᵀx)` and a
//! Gaussian unitary acts as `γ → SᵀγS`, `d → Sᵀd`. Coherent amplitudes map
//! to displacements as `d = √2 (−Im α₁..−Im αₙ, Re α₁..Re αₙ)`.

mod conditioning;
mod euler;
pub mod random;

pub use conditioning::{
    condition_on_partial_measurement, eliminate_feedforward, ConditionalOutput,
    FeedforwardElimination,
};
pub use euler::{euler_decompose, EulerDecomposition};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_nonneg, Error, Result};
use crate::linalg::{self, check_physical, check_symmetric};

/// Squeezing used to stand in for an ideal homodyne measurement.
///
/// The variance ratio is `e^{80}`; only the numerical Gaussian modules use
/// it, the closed-form capacities take the exact limit.
pub const R_CAP: f64 = 20.0;

/// Displacement vector for the coherent amplitudes `alphas`.
pub fn displacement_from_amplitudes(alphas: &[Complex64]) -> DVector<f64> {
    let n = alphas.len();
    let s = std::f64::consts::SQRT_2;
    DVector::from_fn(2 * n, |i, _| if i < n { -s * alphas[i].im } else { s * alphas[i - n].re })
}

/// Inverse of [`displacement_from_amplitudes`].
pub fn amplitudes_from_displacement(d: &DVector<f64>) -> Vec<Complex64> {
    let n = d.len() / 2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..n).map(|i| Complex64::new(s * d[n + i], -s * d[i])).collect()
}

fn check_even_square(m: &DMatrix<f64>) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    if m.nrows() == 0 || m.nrows() % 2 != 0 {
        return Err(domain(format!("phase-space dimension must be even and positive, got {}", m.nrows())));
    }
    Ok(m.nrows() / 2)
}

/// A Gaussian state: covariance matrix and displacement vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRecord", into = "StateRecord")]
pub struct GaussianState {
    n_modes: usize,
    cov: DMatrix<f64>,
    disp: DVector<f64>,
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    n_modes: usize,
    cov: Vec<f64>,
    disp: Vec<f64>,
}

impl TryFrom<StateRecord> for GaussianState {
    type Error = Error;

    fn try_from(r: StateRecord) -> Result<Self> {
        let dim = 2 * r.n_modes;
        if r.cov.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: r.cov.len() });
        }
        GaussianState::new(DMatrix::from_row_slice(dim, dim, &r.cov), DVector::from_vec(r.disp))
    }
}

impl From<GaussianState> for StateRecord {
    fn from(s: GaussianState) -> Self {
        let dim = s.cov.nrows();
        let cov = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|ij| s.cov[ij]).collect();
        StateRecord { n_modes: s.n_modes, cov, disp: s.disp.iter().copied().collect() }
    }
}

impl GaussianState {
    /// Validates symmetry and the uncertainty principle `cov + iΩ ⪰ 0`.
    pub fn new(cov: DMatrix<f64>, disp: DVector<f64>) -> Result<Self> {
        let n_modes = check_even_square(&cov)?;
        if disp.len() != cov.nrows() {
            return Err(Error::DimensionMismatch { expected: cov.nrows(), got: disp.len() });
        }
        check_symmetric(&cov)?;
        let cov = linalg::symmetrize(&cov);
        check_physical(&cov)?;
        Ok(Self { n_modes, cov, disp })
    }

    pub(crate) fn new_unchecked(cov: DMatrix<f64>, disp: DVector<f64>) -> Self {
        Self { n_modes: cov.nrows() / 2, cov: linalg::symmetrize(&cov), disp }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self::thermal(n_modes, 0.0).expect("vacuum is valid")
    }

    /// Zero-mean thermal state with `nth` photons per mode.
    pub fn thermal(n_modes: usize, nth: f64) -> Result<Self> {
        ensure_nonneg("thermal photon number", nth)?;
        if n_modes == 0 {
            return Err(domain("a state needs at least one mode"));
        }
        let dim = 2 * n_modes;
        Ok(Self {
            n_modes,
            cov: DMatrix::identity(dim, dim) * (1.0 + 2.0 * nth),
            disp: DVector::zeros(dim),
        })
    }

    pub fn coherent(alphas: &[Complex64]) -> Result<Self> {
        Self::displaced_thermal(alphas, 0.0)
    }

    /// `D(α) ρ_th D†(α)` on every mode.
    pub fn displaced_thermal(alphas: &[Complex64], nth: f64) -> Result<Self> {
        let mut s = Self::thermal(alphas.len(), nth)?;
        s.disp = displacement_from_amplitudes(alphas);
        Ok(s)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn disp(&self) -> &DVector<f64> {
        &self.disp
    }

    pub fn amplitudes(&self) -> Vec<Complex64> {
        amplitudes_from_displacement(&self.disp)
    }

    pub fn transform(&self, s: &SymplecticMap) -> Result<Self> {
        if s.n_modes() != self.n_modes {
            return Err(Error::DimensionMismatch { expected: self.n_modes, got: s.n_modes() });
        }
        let st = s.matrix.transpose();
        Ok(Self::new_unchecked(&st * &self.cov * &s.matrix, st * &self.disp))
    }

    /// Shifts the displacement by `delta`.
    pub fn displaced(&self, delta: &DVector<f64>) -> Result<Self> {
        if delta.len() != self.disp.len() {
            return Err(Error::DimensionMismatch { expected: self.disp.len(), got: delta.len() });
        }
        Ok(Self { n_modes: self.n_modes, cov: self.cov.clone(), disp: &self.disp + delta })
    }

    /// Tensor product; the modes of `other` follow the modes of `self`.
    pub fn product(&self, other: &GaussianState) -> Self {
        Self {
            n_modes: self.n_modes + other.n_modes,
            cov: linalg::direct_sum(&self.cov, &other.cov),
            disp: linalg::direct_sum_vec(&self.disp, &other.disp),
        }
    }

    /// Reduced state on the listed modes.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() || modes.iter().any(|&m| m >= self.n_modes) {
            return Err(domain(format!("invalid mode selection {modes:?} for {} modes", self.n_modes)));
        }
        let idx = linalg::quadrature_indices(modes, self.n_modes);
        Ok(Self::new_unchecked(linalg::select(&self.cov, &idx, &idx), linalg::select_vec(&self.disp, &idx)))
    }

    /// `χ(x) = exp(−¼ xᵀγx + i dᵀx)`.
    pub fn characteristic(&self, x: &DVector<f64>) -> Complex64 {
        characteristic(&self.cov, &self.disp, x)
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::symplectic_eigenvalues(&self.cov)
    }

    pub fn min_physical_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue_with_omega(&self.cov)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| domain(e.to_string()))
    }
}

pub(crate) fn characteristic(cov: &DMatrix<f64>, disp: &DVector<f64>, x: &DVector<f64>) -> Complex64 {
    let quad = (x.transpose() * cov * x)[(0, 0)];
    let lin = disp.dot(x);
    Complex64::from_polar((-0.25 * quad).exp(), lin)
}

/// A real symplectic matrix `S` with `SᵀΩS = Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    matrix: DMatrix<f64>,
}

impl SymplecticMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        check_even_square(&matrix)?;
        let dev = linalg::symplectic_deviation(&matrix);
        if dev > linalg::SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic(dev));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: DMatrix<f64>) -> Self {
        Self { matrix }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self { matrix: DMatrix::identity(2 * n_modes, 2 * n_modes) }
    }

    /// Single-mode squeezer on `mode`: `diag(e^{−r}, e^{r})` on `(x, p)`.
    ///
    /// Conjugating heterodyne with it gives `diag(e^{−2r}, e^{2r})`.
    pub fn squeezer(n_modes: usize, mode: usize, r: f64) -> Self {
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        m[(mode, mode)] = (-r).exp();
        m[(n_modes + mode, n_modes + mode)] = r.exp();
        Self { matrix: m }
    }

    /// Phase rotation of `mode` by `theta`.
    pub fn rotation(n_modes: usize, mode: usize, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let (x, p) = (mode, n_modes + mode);
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        m[(x, x)] = c;
        m[(x, p)] = s;
        m[(p, x)] = -s;
        m[(p, p)] = c;
        Self { matrix: m }
    }

    /// Beamsplitter of power transmissivity `tau` between modes `a` and `b`.
    pub fn beamsplitter(n_modes: usize, a: usize, b: usize, tau: f64) -> Self {
        let t = tau.sqrt();
        let r = (1.0 - tau).sqrt();
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for off in [0, n_modes] {
            let (ia, ib) = (a + off, b + off);
            m[(ia, ia)] = t;
            m[(ia, ib)] = -r;
            m[(ib, ia)] = r;
            m[(ib, ib)] = t;
        }
        Self { matrix: m }
    }

    /// Passive map `[[Re U, Im U], [−Im U, Re U]]` of an `n×n` unitary.
    pub fn from_unitary(u: &DMatrix<Complex64>) -> Result<Self> {
        let n = u.nrows();
        if !u.is_square() {
            return Err(Error::DimensionMismatch { expected: n, got: u.ncols() });
        }
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = u[(i, j)];
                m[(i, j)] = z.re;
                m[(i, n + j)] = z.im;
                m[(n + i, j)] = -z.im;
                m[(n + i, n + j)] = z.re;
            }
        }
        Self::new(m)
    }

    /// The map that applies `self` first and `next` second.
    pub fn then(&self, next: &SymplecticMap) -> SymplecticMap {
        Self { matrix: &self.matrix * &next.matrix }
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn transpose(&self) -> SymplecticMap {
        Self { matrix: self.matrix.transpose() }
    }

    pub fn symplectic_deviation(&self) -> f64 {
        linalg::symplectic_deviation(&self.matrix)
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        linalg::orthogonality_deviation(&self.matrix) <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "r")]
pub enum MeasurementKind {
    Heterodyne,
    HomodyneX,
    HomodyneP,
    /// The same squeezing `r` on every mode.
    Squeezed(f64),
    General,
}

/// A Gaussian (general-dyne) measurement with covariance `Γ_M` and an
/// optional outcome `d_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralDyneMeasurement {
    cov: DMatrix<f64>,
    outcome: Option<DVector<f64>>,
    kind: MeasurementKind,
}

impl GeneralDyneMeasurement {
    pub fn heterodyne(n_modes: usize) -> Self {
        let dim = 2 * n_modes;
        Self { cov: DMatrix::identity(dim, dim), outcome: None, kind: MeasurementKind::Heterodyne }
    }

    /// `diag(e^{−2r_i}) ⊕ diag(e^{2r_i})`.
    pub fn squeezed_modes(rs: &[f64]) -> Self {
        let n = rs.len();
        let cov = DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i == j, i < n) {
            (false, _) => 0.0,
            (true, true) => (-2.0 * rs[i]).exp(),
            (true, false) => (2.0 * rs[i - n]).exp(),
        });
        let kind = match rs.first() {
            Some(&r0) if rs.iter().all(|&r| r == r0) => MeasurementKind::Squeezed(r0),
            _ => MeasurementKind::General,
        };
        Self { cov, outcome: None, kind }
    }

    pub fn squeezed(n_modes: usize, r: f64) -> Self {
        Self::squeezed_modes(&vec![r; n_modes])
    }

    /// x-quadrature homodyne on every mode, represented as `squeezed(R_CAP)`.
    pub fn homodyne_x(n_modes: usize) -> Self {
        Self { kind: MeasurementKind::HomodyneX, ..Self::squeezed(n_modes, R_CAP) }
    }

    pub fn homodyne_p(n_modes: usize) -> Self {
        Self { kind: MeasurementKind::HomodyneP, ..Self::squeezed(n_modes, -R_CAP) }
    }

    pub fn general(cov: DMatrix<f64>) -> Result<Self> {
        check_even_square(&cov)?;
        check_symmetric(&cov)?;
        let cov = linalg::symmetrize(&cov);
        check_physical(&cov)?;
        Ok(Self { cov, outcome: None, kind: MeasurementKind::General })
    }

    pub fn with_outcome(mut self, outcome: DVector<f64>) -> Result<Self> {
        if outcome.len() != self.cov.nrows() {
            return Err(Error::DimensionMismatch { expected: self.cov.nrows(), got: outcome.len() });
        }
        self.outcome = Some(outcome);
        Ok(self)
    }

    pub fn n_modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn outcome(&self) -> Option<&DVector<f64>> {
        self.outcome.as_ref()
    }

    pub fn kind(&self) -> &MeasurementKind {
        &self.kind
    }
}

/// Measurement obtained by running the Gaussian unitary `s` before `meas`:
/// covariance `SᵀΓ_M S`, outcome `Sᵀd_M`.
pub fn compose_measurement(meas: &GeneralDyneMeasurement, s: &SymplecticMap) -> Result<GeneralDyneMeasurement> {
    if s.n_modes() != meas.n_modes() {
        return Err(Error::DimensionMismatch { expected: meas.n_modes(), got: s.n_modes() });
    }
    let st = s.matrix.transpose();
    let cov = linalg::symmetrize(&(&st * &meas.cov * &s.matrix));
    let dim = cov.nrows();
    let kind = if linalg::max_abs(&(s.matrix.clone() - DMatrix::identity(dim, dim))) == 0.0 {
        meas.kind.clone()
    } else if linalg::max_abs(&(&cov - DMatrix::identity(dim, dim))) < 1e-12 {
        MeasurementKind::Heterodyne
    } else {
        MeasurementKind::General
    };
    Ok(GeneralDyneMeasurement { cov, outcome: meas.outcome.as_ref().map(|d| &st * d), kind })
}

/// Probability density of the outcome carried by `meas` when measuring `state`.
///
/// The outcome is distributed as a Gaussian with mean `d` and covariance
/// `(γ + Γ_M)/2`; the density is normalized with respect to Lebesgue measure
/// on the `2n` outcome coordinates.
pub fn overlap_probability_density(state: &GaussianState, meas: &GeneralDyneMeasurement) -> Result<f64> {
    if state.n_modes != meas.n_modes() {
        return Err(Error::DimensionMismatch { expected: state.n_modes, got: meas.n_modes() });
    }
    let outcome = meas.outcome.as_ref().ok_or_else(|| domain("measurement has no outcome"))?;
    gaussian_density(&((&state.cov + &meas.cov) * 0.5), &(outcome - &state.disp))
}

/// Density of a centered Gaussian with covariance `sigma` at `b`.
pub(crate) fn gaussian_density(sigma: &DMatrix<f64>, b: &DVector<f64>) -> Result<f64> {
    Ok(gaussian_log_density(sigma, b)?.exp())
}

pub(crate) fn gaussian_log_density(sigma: &DMatrix<f64>, b: &DVector<f64>) -> Result<f64> {
    let ch = linalg::spd_factor(sigma)?;
    let l = ch.l_dirty();
    let ln_det: f64 = (0..l.nrows()).map(|i| 2.0 * l[(i, i)].ln()).sum();
    let quad = b.dot(&ch.solve(b));
    let k = b.len() as f64;
    Ok(-0.5 * quad - 0.5 * ln_det - 0.5 * k * (2.0 * std::f64::consts::PI).ln())
}

/// Lossy-noisy bosonic channel: transmissivity `eta` and thermal input `Ñ_th`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    eta: f64,
    input_thermal: f64,
}

impl ChannelParams {
    pub fn new(eta: f64, input_thermal: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(domain(format!("transmissivity must lie in (0, 1], got {eta}")));
        }
        ensure_nonneg("input thermal photon number", input_thermal)?;
        Ok(Self { eta, input_thermal })
    }

    pub fn pure_loss(eta: f64) -> Result<Self> {
        Self::new(eta, 0.0)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn input_thermal(&self) -> f64 {
        self.input_thermal
    }

    /// `N_th = (1 − η) Ñ_th`.
    pub fn noise_photons(&self) -> f64 {
        (1.0 - self.eta) * self.input_thermal
    }

    pub fn amplitude_scale(&self) -> f64 {
        self.eta.sqrt()
    }
}

/// Output of the channel for coherent input `beta`: a displaced thermal state
/// with amplitude `√η β` and `N_th` noise photons.
pub fn apply_channel(beta: Complex64, ch: &ChannelParams) -> GaussianState {
    GaussianState::displaced_thermal(&[beta * ch.amplitude_scale()], ch.noise_photons())
        .expect("valid channel parameters give a valid state")
}

/// The received ensemble of displaced thermal states over `n_modes` uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceivedEnsemble {
    n_modes: usize,
    noise_photons: f64,
    power_bound: f64,
}

impl ReceivedEnsemble {
    pub fn new(n_modes: usize, noise_photons: f64, power_bound: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(domain("ensemble needs at least one mode"));
        }
        ensure_nonneg("noise photons", noise_photons)?;
        ensure_nonneg("power bound", power_bound)?;
        Ok(Self { n_modes, noise_photons, power_bound })
    }

    pub fn from_channel(n_modes: usize, ch: &ChannelParams, input_power: f64) -> Result<Self> {
        Self::new(n_modes, ch.noise_photons(), ch.eta() * input_power)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn power_bound(&self) -> f64 {
        self.power_bound
    }

    /// `γ_th = (1 + 2N_th) I`.
    pub fn thermal_cov(&self) -> DMatrix<f64> {
        let dim = 2 * self.n_modes;
        DMatrix::identity(dim, dim) * (1.0 + 2.0 * self.noise_photons)
    }

    pub fn symbol_state(&self, alphas: &[Complex64]) -> Result<GaussianState> {
        if alphas.len() != self.n_modes {
            return Err(Error::DimensionMismatch { expected: self.n_modes, got: alphas.len() });
        }
        GaussianState::displaced_thermal(alphas, self.noise_photons)
    }

    /// Whether a discrete prior `(weight, amplitudes)` meets the mean-photon
    /// bound per mode.
    pub fn satisfies_power(&self, prior: &[(f64, Vec<Complex64>)]) -> bool {
        let mean: f64 = prior
            .iter()
            .map(|(w, a)| w * a.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            / self.n_modes as f64;
        mean <= self.power_bound + 1e-12
    }
}
