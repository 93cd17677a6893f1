//! Seeded self-check suites with a JSON report.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::Result;
use crate::gaussian::{
    compose_measurement, condition_on_partial_measurement, eliminate_feedforward, euler_decompose,
    overlap_probability_density, random, GaussianState, GeneralDyneMeasurement,
};
use crate::linalg;
use crate::mi::{self, trial_rng, IdentityOptimalityReport};
use crate::par;
use crate::receivers::{self, DiscreteChannel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    GaussianCore,
    IdentityOptimal,
    Feedforward,
    Oracles,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::GaussianCore => "gaussian-core",
            Suite::IdentityOptimal => "identity-optimal",
            Suite::Feedforward => "feedforward",
            Suite::Oracles => "oracles",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub tolerance: f64,
    pub observed: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `observed <= tolerance`.
    pub fn at_most(name: impl Into<String>, tolerance: f64, observed: f64) -> Self {
        Self { name: name.into(), tolerance, observed, passed: observed <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run(suite: Suite, seed: u64) -> Result<Report> {
    let checks = match suite {
        Suite::GaussianCore => gaussian_core(seed)?,
        Suite::IdentityOptimal => identity_optimal(seed)?,
        Suite::Feedforward => feedforward(seed, 100, 100, 20)?,
        Suite::Oracles => oracles(seed)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::GaussianCore, Suite::IdentityOptimal, Suite::Feedforward, Suite::Oracles] {
                for mut c in run(s, seed)?.checks {
                    c.name = format!("{}/{}", s.as_str(), c.name);
                    all.push(c);
                }
            }
            all
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report { suite, seed, passed, checks })
}

// NaN-propagating maximum, 0 for no values.
fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

fn gaussian_core(seed: u64) -> Result<Vec<Check>> {
    let trials = 200;
    let rows: Vec<[f64; 5]> = par::map_range(trials, |t| -> Result<[f64; 5]> {
        let mut rng = trial_rng(seed, t as u64);
        let n = 1 + t % 4;
        let o = random::orthogonal_symplectic(n, &mut rng);
        let sym_dev = o.symplectic_deviation().max(linalg::orthogonality_deviation(o.matrix()));

        let state = random::state(n, 1.0, 2.0, &mut rng);
        let phys = (-state.min_physical_eigenvalue()).max(0.0);

        let s = random::symplectic(n, 0.8, &mut rng);
        let e = euler_decompose(&s)?;
        let euler = linalg::max_abs(&(e.reconstruct().matrix() - s.matrix()));

        let c = 1.0 + 2.0 * rng.random_range(0.0..2.0);
        let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.5..1.5)).collect();
        let gm = GeneralDyneMeasurement::squeezed_modes(&r);
        let id = DMatrix::<f64>::identity(2 * n, 2 * n) * c;
        let rotated = compose_measurement(&gm, &o)?;
        let lhs = (&id + rotated.cov()).determinant();
        let rhs = (&id + gm.cov()).determinant();
        let det = (lhs - rhs).abs() / rhs;

        let joint = random::state(n + 1, 1.0, 1.0, &mut rng);
        let meas = random::measurement(1, 1.0, &mut rng).with_outcome(random::normal_vector(2, 1.0, &mut rng))?;
        let cond = condition_on_partial_measurement(&joint, &[n], &meas)?;
        let cond_phys = (-cond.state.min_physical_eigenvalue()).max(0.0);
        Ok([sym_dev, phys.max(cond_phys), euler, det, 0.0])
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let col = |k: usize| max_of(rows.iter().map(|r| r[k]));
    let vac = GeneralDyneMeasurement::heterodyne(1).with_outcome(DVector::zeros(2))?;
    let density = overlap_probability_density(&GaussianState::vacuum(1), &vac)?;
    let mut rng = trial_rng(seed, trials as u64);
    let json = max_of((0..20).map(|_| {
        let s = random::state(2, 1.0, 1.0, &mut rng);
        let back = GaussianState::from_json(&s.to_json()).expect("round trip");
        linalg::max_abs(&(back.cov() - s.cov())).max((back.disp() - s.disp()).amax())
    }));
    Ok(vec![
        Check::at_most("orthogonal-symplectic-sampling", 1e-10, col(0)),
        Check::at_most("physicality", linalg::PSD_TOL, col(1)),
        Check::at_most("euler-round-trip", 1e-8, col(2)),
        Check::at_most("passive-determinant-identity", 1e-9, col(3)),
        Check::at_most("vacuum-heterodyne-density", 1e-15, (density - 1.0 / (2.0 * PI)).abs()),
        Check::at_most("json-round-trip", 0.0, json),
    ])
}

fn identity_optimal(seed: u64) -> Result<Vec<Check>> {
    let cases = [(2, 1.0, 0.0), (3, 1.0, 0.0), (2, 2.0, 1.0)];
    cases
        .iter()
        .map(|&(n, nbar, nth)| {
            let r = mi::verify_identity_optimal(n, nbar, nth, 10_000, seed)?;
            let name = format!("max-gap-n{n}-nbar{nbar}-nth{nth}");
            Ok(Check::at_most(name, IdentityOptimalityReport::TOLERANCE, r.max_gap.unwrap_or(0.0)))
        })
        .collect()
}

/// Largest change of the corrected symbol-mixture characteristic function
/// across measurement outcomes, over random circuits.
///
/// Each circuit feeds a displaced-thermal ensemble on `n ≤ 2` modes plus `m ≤ 2`
/// vacuum ancillas through a random symplectic, then measures the ancillas
/// with a random pure general-dyne measurement.
pub fn feedforward_residual(seed: u64, circuits: usize, outcomes: usize, points: usize) -> Result<(f64, f64)> {
    let per: Vec<(f64, f64)> = par::map_range(circuits, |c| -> Result<(f64, f64)> {
        let mut rng = trial_rng(seed, c as u64);
        let n = rng.random_range(1..=2usize);
        let m = rng.random_range(1..=2usize);
        let symbols = 4;
        let nth = rng.random_range(0.0..1.0);
        let s = random::symplectic(n + m, 0.8, &mut rng);
        let aux = GaussianState::vacuum(m);
        let family = (0..symbols)
            .map(|_| {
                let alphas: Vec<Complex64> =
                    (0..n).map(|_| Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))).collect();
                GaussianState::displaced_thermal(&alphas, nth)?.product(&aux).transform(&s)
            })
            .collect::<Result<Vec<_>>>()?;
        let weights: Vec<f64> = {
            let w: Vec<f64> = (0..symbols).map(|_| rng.random_range(0.1..1.0)).collect();
            let t: f64 = w.iter().sum();
            w.iter().map(|v| v / t).collect()
        };
        let measured: Vec<usize> = (n..n + m).collect();
        let meas = random::measurement(m, 1.0, &mut rng);
        let ff = eliminate_feedforward(&family, &measured, &meas)?;
        let xs: Vec<DVector<f64>> = (0..points).map(|_| random::normal_vector(2 * n, 1.0, &mut rng)).collect();
        let reference = DVector::zeros(2 * m);
        let base: Vec<Complex64> =
            xs.iter().map(|x| ff.mixture_characteristic(&weights, &reference, x)).collect::<Result<_>>()?;
        let (mut chi_dev, mut cov_dev) = (0.0f64, 0.0f64);
        for _ in 0..outcomes {
            let d = random::normal_vector(2 * m, 3.0, &mut rng);
            for (x, b) in xs.iter().zip(&base) {
                chi_dev = chi_dev.max((ff.mixture_characteristic(&weights, &d, x)? - b).norm());
            }
            let out = ff.corrected_output(0, &d)?;
            cov_dev = cov_dev.max(linalg::max_abs(&(out.cov() - &ff.cov_out)));
        }
        Ok((chi_dev, cov_dev))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok((max_of(per.iter().map(|p| p.0)), max_of(per.iter().map(|p| p.1))))
}

fn feedforward(seed: u64, circuits: usize, outcomes: usize, points: usize) -> Result<Vec<Check>> {
    let (chi, cov) = feedforward_residual(seed, circuits, outcomes, points)?;
    Ok(vec![
        Check::at_most("outcome-independent-characteristic", 1e-9, chi),
        Check::at_most("outcome-independent-covariance", 1e-9, cov),
    ])
}

fn oracles(seed: u64) -> Result<Vec<Check>> {
    let mut psk = 0.0f64;
    for m in [2, 3, 4, 8, 16, 64, 256] {
        for nbar in [0.01, 0.1, 1.0, 10.0, 100.0] {
            psk = psk.max((receivers::mpsk_holevo(m, nbar)? - receivers::mpsk_holevo_poisson(m, nbar)?).abs());
        }
    }

    let mut tshare = 0.0f64;
    for i in 0..60 {
        let nbar = 0.05 * (1.0 + i as f64);
        let closed = analytic::gaussian_capacity(nbar, 0.0)?.capacity;
        tshare = tshare.max((analytic::optimize_time_share(nbar, 0.0)?.rate - closed).abs());
    }

    let z = receivers::discrete_capacity(&DiscreteChannel::binary(0.0, 0.5)?);

    let n = 1000;
    let mut lagrange = 0.0f64;
    for nbar in [1.8, 2.0, 2.3] {
        let (_, a) = mi::best_finite_time_share(n, nbar)?;
        lagrange = lagrange.max((a.rate - analytic::gaussian_capacity(nbar, 0.0)?.capacity).abs());
    }

    let mut rng = trial_rng(seed, 0);
    let mut z_score = 0.0f64;
    for k in 0..5 {
        let inst = mi::random_instance(1 + k % 2, rng.random_range(0.1..3.0), rng.random_range(0.0..1.0), 1.0, &mut rng)?;
        let est = mi::monte_carlo_mi(&inst, 20_000, seed.wrapping_add(k as u64))?;
        z_score = z_score.max((est.bits - mi::mutual_info(&inst)?).abs() / est.std_error);
    }

    Ok(vec![
        Check::at_most("psk-fourier-vs-poisson", 1e-9, psk),
        Check::at_most("time-share-numeric-vs-closed-form", 1e-9, tshare),
        Check::at_most("z-channel-capacity", 1e-9, (z - 1.25f64.log2()).abs()),
        Check::at_most("finite-n-time-share-vs-limit", 1e-4, lagrange),
        Check::at_most("monte-carlo-standard-errors", 4.0, z_score),
    ])
}
