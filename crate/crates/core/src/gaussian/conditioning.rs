//! Partial Gaussian measurements and the removal of classical feedforward.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{GaussianState, GeneralDyneMeasurement};
use crate::error::{domain, Error, Result};
use crate::linalg::{self, quadrature_indices, select, select_vec};

/// State left on the unmeasured modes after a partial measurement.
///
/// `state.disp() = d_tilde_out + d_tilde_m`, where only `d_tilde_m = K d_M`
/// depends on the outcome.
#[derive(Debug, Clone)]
pub struct ConditionalOutput {
    pub state: GaussianState,
    pub d_tilde_out: DVector<f64>,
    pub d_tilde_m: DVector<f64>,
    /// `K = C (B + Γ_M)⁻¹`.
    pub gain: DMatrix<f64>,
    /// Indices (in the joint system) of the modes that remain.
    pub kept_modes: Vec<usize>,
}

struct Partition {
    kept: Vec<usize>,
    a: DMatrix<f64>,
    c: DMatrix<f64>,
    b: DMatrix<f64>,
    kept_idx: Vec<usize>,
    meas_idx: Vec<usize>,
}

fn partition(joint: &GaussianState, measured: &[usize], meas: &GeneralDyneMeasurement) -> Result<Partition> {
    let n = joint.n_modes();
    let mut seen = vec![false; n];
    for &m in measured {
        if m >= n || seen[m] {
            return Err(domain(format!("bad partition: measured modes {measured:?} of {n}")));
        }
        seen[m] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&m| !seen[m]).collect();
    if measured.is_empty() || kept.is_empty() {
        return Err(domain("bad partition: both subsystems must be non-empty"));
    }
    if meas.n_modes() != measured.len() {
        return Err(Error::DimensionMismatch { expected: measured.len(), got: meas.n_modes() });
    }
    let kept_idx = quadrature_indices(&kept, n);
    let meas_idx = quadrature_indices(measured, n);
    Ok(Partition {
        a: select(joint.cov(), &kept_idx, &kept_idx),
        c: select(joint.cov(), &kept_idx, &meas_idx),
        b: select(joint.cov(), &meas_idx, &meas_idx),
        kept,
        kept_idx,
        meas_idx,
    })
}

/// Conditions `joint` on the outcome of `meas` applied to the `measured`
/// modes.
///
/// With the joint covariance partitioned as `[[A, C], [Cᵀ, B]]` (kept modes
/// first) the output has covariance `A − C(B+Γ_M)⁻¹Cᵀ` and displacement
/// `(d_A − K d_B) + K d_M`.
pub fn condition_on_partial_measurement(
    joint: &GaussianState,
    measured: &[usize],
    meas: &GeneralDyneMeasurement,
) -> Result<ConditionalOutput> {
    let outcome = meas.outcome().ok_or_else(|| domain("measurement has no outcome"))?;
    let p = partition(joint, measured, meas)?;
    let inv = linalg::spd_inverse(&(&p.b + meas.cov()))?;
    let gain = &p.c * inv;
    let cov_out = linalg::symmetrize(&(&p.a - &gain * p.c.transpose()));
    let d_a = select_vec(joint.disp(), &p.kept_idx);
    let d_b = select_vec(joint.disp(), &p.meas_idx);
    let d_tilde_out = d_a - &gain * d_b;
    let d_tilde_m = &gain * outcome;
    let state = GaussianState::new_unchecked(cov_out, &d_tilde_out + &d_tilde_m);
    Ok(ConditionalOutput { state, d_tilde_out, d_tilde_m, gain, kept_modes: p.kept })
}

/// Deterministic replacement for a partial measurement with feedforward,
/// valid for a whole ensemble of Gaussian states sharing one covariance.
#[derive(Debug, Clone)]
pub struct FeedforwardElimination {
    /// Output covariance, the same for every symbol and outcome.
    pub cov_out: DMatrix<f64>,
    /// Gain `K`; the correcting displacement for outcome `d_M` is `−K d_M`.
    pub gain: DMatrix<f64>,
    /// Outcome-independent output displacement per symbol.
    pub corrected_disp: Vec<DVector<f64>>,
    pub kept_modes: Vec<usize>,
    measured: Vec<usize>,
    meas: GeneralDyneMeasurement,
    family: Vec<GaussianState>,
}

/// Builds the trace-preserving map that replaces "measure `measured`, then
/// displace conditionally" for every member of `family`.
///
/// All members must share a covariance matrix (they differ only by
/// displacement, as the received ensemble does); otherwise the correction
/// would depend on the symbol and an error is returned.
pub fn eliminate_feedforward(
    family: &[GaussianState],
    measured: &[usize],
    meas: &GeneralDyneMeasurement,
) -> Result<FeedforwardElimination> {
    let first = family.first().ok_or_else(|| domain("empty ensemble"))?;
    for s in &family[1..] {
        if s.n_modes() != first.n_modes() {
            return Err(Error::DimensionMismatch { expected: first.n_modes(), got: s.n_modes() });
        }
        let scale = linalg::max_abs(first.cov()).max(1.0);
        let dev = linalg::max_abs(&(s.cov() - first.cov())) / scale;
        if dev > 1e-9 {
            return Err(domain(format!("ensemble covariances differ by {dev:e}; correction would be symbol-dependent")));
        }
    }
    let p = partition(first, measured, meas)?;
    let inv = linalg::spd_inverse(&(&p.b + meas.cov()))?;
    let gain = &p.c * inv;
    let cov_out = linalg::symmetrize(&(&p.a - &gain * p.c.transpose()));
    let corrected_disp = family
        .iter()
        .map(|s| select_vec(s.disp(), &p.kept_idx) - &gain * select_vec(s.disp(), &p.meas_idx))
        .collect();
    let bare = GeneralDyneMeasurement { outcome: None, ..meas.clone() };
    Ok(FeedforwardElimination {
        cov_out,
        gain,
        corrected_disp,
        kept_modes: p.kept,
        measured: measured.to_vec(),
        meas: bare,
        family: family.to_vec(),
    })
}

impl FeedforwardElimination {
    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    /// Deterministic output for `symbol`.
    pub fn output(&self, symbol: usize) -> GaussianState {
        GaussianState::new_unchecked(self.cov_out.clone(), self.corrected_disp[symbol].clone())
    }

    /// Conditional output for `symbol` and `outcome` with the correcting
    /// displacement `−K d_M` applied, recomputed from the joint state.
    pub fn corrected_output(&self, symbol: usize, outcome: &DVector<f64>) -> Result<GaussianState> {
        let meas = self.meas.clone().with_outcome(outcome.clone())?;
        let cond = condition_on_partial_measurement(&self.family[symbol], &self.measured, &meas)?;
        cond.state.displaced(&-(&self.gain * outcome))
    }

    /// Characteristic function of the corrected symbol mixture for a given
    /// outcome, `Σ_α P(α) χ_α(x)`.
    pub fn mixture_characteristic(&self, weights: &[f64], outcome: &DVector<f64>, x: &DVector<f64>) -> Result<Complex64> {
        if weights.len() != self.family.len() {
            return Err(Error::DimensionMismatch { expected: self.family.len(), got: weights.len() });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &w) in weights.iter().enumerate() {
            acc += self.corrected_output(i, outcome)?.characteristic(x) * w;
        }
        Ok(acc)
    }
}
