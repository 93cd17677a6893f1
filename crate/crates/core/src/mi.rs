//! Mutual information of joint Gaussian measurements on `n` channel uses.
//!
//! A Gaussian prior with diagonal quadrature powers `P` on displacements,
//! thermal noise `γ_th = (1+2N_th) I` and a measurement
//! `S_Uᵀ γ_M S_U` with `γ_M = diag(e^{−2r_i}) ⊕ diag(e^{2r_i})` give a
//! classical Gaussian channel with noise covariance `(γ_th + S_Uᵀγ_M S_U)/2`.

use std::f64::consts::LN_2;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_nonneg, Error, Result};
use crate::gaussian::{random, SymplecticMap};
use crate::linalg;
use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct MiInstance {
    n: usize,
    nbar: f64,
    power: DVector<f64>,
    nth: f64,
    squeezing: Vec<f64>,
    s_u: SymplecticMap,
}

impl MiInstance {
    /// `power` holds the diagonal of `P` in xxpp order; its mean must not
    /// exceed `nbar`. `s_u` must be orthogonal symplectic.
    pub fn new(nbar: f64, power: Vec<f64>, nth: f64, squeezing: Vec<f64>, s_u: SymplecticMap) -> Result<Self> {
        let n = squeezing.len();
        if n == 0 {
            return Err(domain("need at least one mode"));
        }
        if power.len() != 2 * n {
            return Err(Error::DimensionMismatch { expected: 2 * n, got: power.len() });
        }
        if s_u.n_modes() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s_u.n_modes() });
        }
        ensure_nonneg("nbar", nbar)?;
        ensure_nonneg("nth", nth)?;
        for &p in &power {
            ensure_nonneg("quadrature power", p)?;
        }
        if power.iter().sum::<f64>() / (2 * n) as f64 > nbar + 1e-12 {
            return Err(domain("mean quadrature power exceeds nbar"));
        }
        if squeezing.iter().any(|r| !r.is_finite()) {
            return Err(domain("squeezing must be finite"));
        }
        if !s_u.is_orthogonal(1e-9) || s_u.symplectic_deviation() > linalg::SYMPLECTIC_TOL {
            return Err(domain("S_U must be orthogonal symplectic"));
        }
        Ok(Self { n, nbar, power: DVector::from_vec(power), nth, squeezing, s_u })
    }

    /// One-mode-per-use instance with `S_U = I`.
    pub fn separable(nbar: f64, power: Vec<f64>, nth: f64, squeezing: Vec<f64>) -> Result<Self> {
        let n = squeezing.len();
        Self::new(nbar, power, nth, squeezing, SymplecticMap::identity(n))
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn nth(&self) -> f64 {
        self.nth
    }

    pub fn power(&self) -> &DVector<f64> {
        &self.power
    }

    pub fn squeezing(&self) -> &[f64] {
        &self.squeezing
    }

    pub fn unitary(&self) -> &SymplecticMap {
        &self.s_u
    }

    pub fn with_unitary(&self, s_u: SymplecticMap) -> Result<Self> {
        Self::new(self.nbar, self.power.iter().copied().collect(), self.nth, self.squeezing.clone(), s_u)
    }

    pub fn with_power(&self, power: Vec<f64>) -> Result<Self> {
        Self::new(self.nbar, power, self.nth, self.squeezing.clone(), self.s_u.clone())
    }

    /// Diagonal of `γ_M`.
    pub fn measurement_diagonal(&self) -> Vec<f64> {
        let n = self.n;
        (0..2 * n)
            .map(|i| if i < n { (-2.0 * self.squeezing[i]).exp() } else { (2.0 * self.squeezing[i - n]).exp() })
            .collect()
    }

    /// `γ_th + S_Uᵀ γ_M S_U`.
    pub fn noise_matrix(&self) -> DMatrix<f64> {
        let gm = DMatrix::from_diagonal(&DVector::from_vec(self.measurement_diagonal()));
        let s = self.s_u.matrix();
        let dim = 2 * self.n;
        linalg::symmetrize(&(DMatrix::identity(dim, dim) * (1.0 + 2.0 * self.nth) + s.transpose() * gm * s))
    }
}

/// Total mutual information over the `n` uses, in bits:
/// `½ log₂ det(2P + γ_th + S_UᵀγS_U) / det(γ_th + γ)`.
pub fn mutual_info(inst: &MiInstance) -> Result<f64> {
    let noise = inst.noise_matrix();
    let signal = DMatrix::from_diagonal(&(&inst.power * 2.0));
    let num = linalg::spd_ln_det(&(signal + noise))?;
    let c = 1.0 + 2.0 * inst.nth;
    let den: f64 = inst.measurement_diagonal().iter().map(|g| (c + g).ln()).sum();
    Ok(0.5 * (num - den) / LN_2)
}

/// Water-filling of `total` power over independent Gaussian channels with the
/// given noise variances. Returns the per-channel powers.
pub fn water_filling(noise: &[f64], total: f64) -> Vec<f64> {
    if noise.is_empty() || total <= 0.0 {
        return vec![0.0; noise.len()];
    }
    let min = noise.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut lo, mut hi) = (min, min + total);
    let used = |level: f64| noise.iter().map(|&s| (level - s).max(0.0)).sum::<f64>();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if used(mid) > total {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let level = 0.5 * (lo + hi);
    let mut p: Vec<f64> = noise.iter().map(|&s| (level - s).max(0.0)).collect();
    let scale = total / p.iter().sum::<f64>();
    p.iter_mut().for_each(|v| *v *= scale);
    p
}

/// Best rate with `S_U = I` and the same measurement squeezing, optimizing
/// the diagonal prior by water-filling at full power `2n·N̄`.
pub fn identity_optimum(inst: &MiInstance) -> Result<f64> {
    let c = 1.0 + 2.0 * inst.nth;
    let noise: Vec<f64> = inst.measurement_diagonal().iter().map(|g| 0.5 * (c + g)).collect();
    let power = water_filling(&noise, 2.0 * inst.n as f64 * inst.nbar);
    let id = MiInstance::new(inst.nbar, power, inst.nth, inst.squeezing.clone(), SymplecticMap::identity(inst.n))?;
    mutual_info(&id)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityOptimalityReport {
    pub n: usize,
    pub nbar: f64,
    pub nth: f64,
    pub trials: usize,
    /// `max(I(S_U) − I*_identity)` over trials, bits; `None` for no trials.
    pub max_gap: Option<f64>,
    pub seed: u64,
}

impl IdentityOptimalityReport {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn passed(&self) -> bool {
        self.max_gap.is_none_or(|g| g <= Self::TOLERANCE)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Stream-separated RNG for trial `index` under a user seed.
pub(crate) fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random instance with full power split randomly across quadratures.
pub fn random_instance<R: Rng + ?Sized>(n: usize, nbar: f64, nth: f64, max_r: f64, rng: &mut R) -> Result<MiInstance> {
    let weights: Vec<f64> = (0..2 * n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let sum: f64 = weights.iter().sum();
    let power = weights.iter().map(|w| w / sum * 2.0 * n as f64 * nbar * (1.0 - 1e-15)).collect();
    let squeezing = (0..n).map(|_| rng.random_range(-max_r..=max_r)).collect();
    MiInstance::new(nbar, power, nth, squeezing, random::orthogonal_symplectic(n, rng))
}

/// Samples random passive unitaries `S_U` together with random diagonal
/// priors and measurements, and compares each rate against the identity
/// unitary with the prior re-optimized for the same measurement.
///
/// A positive gap would mean some entangling passive network beats separable
/// detection.
pub fn verify_identity_optimal(n: usize, nbar: f64, nth: f64, trials: usize, seed: u64) -> Result<IdentityOptimalityReport> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    ensure_nonneg("nbar", nbar)?;
    ensure_nonneg("nth", nth)?;
    let gaps: Vec<f64> = par::map_range(trials, |t| -> Result<f64> {
        let mut rng = trial_rng(seed, t as u64);
        let inst = random_instance(n, nbar, nth, 2.0, &mut rng)?;
        Ok(mutual_info(&inst)? - identity_optimum(&inst)?)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let max_gap = gaps.into_iter().reduce(f64::max);
    Ok(IdentityOptimalityReport { n, nbar, nth, trials, max_gap, seed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagrangeAllocation {
    /// Photons per use; the first `t` uses are homodyne.
    pub powers: Vec<f64>,
    pub x: f64,
    pub nu: f64,
    /// Bits per channel use.
    pub rate: f64,
}

/// Power allocation for homodyne on the first `t` of `n` uses and heterodyne
/// on the rest, from the stationarity conditions of the Lagrangian.
pub fn lagrange_allocation(n: usize, t: usize, nbar: f64) -> Result<LagrangeAllocation> {
    if n == 0 || t > n {
        return Err(domain(format!("need 0 <= t <= n with n > 0, got t={t}, n={n}")));
    }
    ensure_nonneg("nbar", nbar)?;
    let x = (n - t) as f64 / n as f64;
    let nu = (4.0 * nbar + 1.0 + 3.0 * x) / (1.0 + x);
    let hom = (nu - 1.0) / 4.0;
    let het = nu / 2.0 - 1.0;
    if t < n && het < 0.0 {
        return Err(Error::Infeasible(format!(
            "heterodyne modes would need {het} photons (nu = {nu} < 2)"
        )));
    }
    let powers = (0..n).map(|i| if i < t { hom } else { het }).collect();
    let rate = 0.5 * (1.0 + x) * nu.log2() - x;
    Ok(LagrangeAllocation { powers, x, nu, rate })
}

/// Best integer time sharing over `t = 0..=n`, skipping infeasible splits.
pub fn best_finite_time_share(n: usize, nbar: f64) -> Result<(usize, LagrangeAllocation)> {
    (0..=n)
        .filter_map(|t| lagrange_allocation(n, t, nbar).ok().map(|a| (t, a)))
        .max_by(|a, b| a.1.rate.total_cmp(&b.1.rate))
        .ok_or_else(|| domain("no feasible allocation"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub bits: f64,
    pub std_error: f64,
    pub samples: usize,
}

const MC_CHUNK: usize = 4096;

/// Plug-in estimate of the mutual information from sampled symbols and
/// outcomes, using the exact conditional and marginal Gaussian densities.
pub fn monte_carlo_mi(inst: &MiInstance, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    if samples < 1000 {
        return Err(domain(format!("need at least 1000 samples, got {samples}")));
    }
    let dim = 2 * inst.n;
    let noise = inst.noise_matrix() * 0.5;
    let marginal = &noise + DMatrix::from_diagonal(inst.power());
    let noise_ch = linalg::spd_factor(&noise)?;
    let marg_ch = linalg::spd_factor(&marginal)?;
    let ln_det = |l: &DMatrix<f64>| (0..l.nrows()).map(|i| 2.0 * l[(i, i)].ln()).sum::<f64>();
    let offset = 0.5 * (ln_det(&marg_ch.l()) - ln_det(&noise_ch.l()));
    let noise_l = noise_ch.l();
    let sd: Vec<f64> = inst.power().iter().map(|p| p.sqrt()).collect();

    let chunks = samples.div_ceil(MC_CHUNK);
    let partial: Vec<(f64, f64)> = par::map_range(chunks, |k| {
        let mut rng = trial_rng(seed, k as u64);
        let count = MC_CHUNK.min(samples - k * MC_CHUNK);
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..count {
            let sym = DVector::from_fn(dim, |i, _| sd[i] * rng.sample::<f64, _>(StandardNormal));
            let z = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
            let w = &noise_l * z;
            let y = &sym + &w;
            let cond = w.dot(&noise_ch.solve(&w));
            let marg = y.dot(&marg_ch.solve(&y));
            let llr = (offset - 0.5 * cond + 0.5 * marg) / LN_2;
            s1 += llr;
            s2 += llr * llr;
        }
        (s1, s2)
    });
    let (s1, s2) = partial.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = samples as f64;
    let mean = s1 / m;
    let var = (s2 / m - mean * mean).max(0.0) * m / (m - 1.0);
    Ok(MonteCarloEstimate { bits: mean, std_error: (var / m).sqrt(), samples })
}
