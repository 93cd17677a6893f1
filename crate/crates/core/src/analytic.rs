//! Closed-form capacities of the lossy-noisy bosonic channel.
//!
//! All rates are in bits. `nbar` is the mean received photon number per mode
//! and `nth` the mean received noise photon number per mode.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_nonneg, Result};

/// `g(x) = (x+1) log₂(x+1) − x log₂ x`, the entropy of a thermal state.
pub fn g_entropy(x: f64) -> Result<f64> {
    ensure_nonneg("mean photon number", x)?;
    Ok(g_unchecked(x))
}

pub(crate) fn g_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        ((x + 1.0) * x.ln_1p() - x * x.ln()) / LN_2
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("transmissivity must lie in (0, 1], got {eta}")))
    }
}

/// Holevo capacity of the pure-loss channel, `g(η N̄)`.
pub fn holevo_pure_loss(eta: f64, nbar_in: f64) -> Result<f64> {
    check_eta(eta)?;
    ensure_nonneg("input photon number", nbar_in)?;
    Ok(g_unchecked(eta * nbar_in))
}

/// Holevo capacity of the thermal-noise channel,
/// `g(ηN̄ + (1−η)N_th) − g((1−η)N_th)` with `N_th` the environment's mean
/// photon number.
pub fn holevo_thermal(eta: f64, nbar_in: f64, input_thermal: f64) -> Result<f64> {
    check_eta(eta)?;
    ensure_nonneg("input photon number", nbar_in)?;
    ensure_nonneg("thermal photon number", input_thermal)?;
    let noise = (1.0 - eta) * input_thermal;
    Ok(g_unchecked(eta * nbar_in + noise) - g_unchecked(noise))
}

/// The same Holevo capacity in received quantities: `g(N̄ + N_th) − g(N_th)`.
pub fn holevo_received(nbar: f64, nth: f64) -> Result<f64> {
    ensure_nonneg("nbar", nbar)?;
    ensure_nonneg("nth", nth)?;
    Ok(g_unchecked(nbar + nth) - g_unchecked(nth))
}

/// Power split across the two quadratures of one mode, `(N₁ + N₂)/2 = N̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    n1: f64,
    n2: f64,
}

impl PowerSplit {
    pub fn new(n1: f64, n2: f64) -> Result<Self> {
        ensure_nonneg("N1", n1)?;
        ensure_nonneg("N2", n2)?;
        Ok(Self { n1, n2 })
    }

    /// `N₂ = 2N̄ − N₁`; requires `0 ≤ N₁ ≤ 2N̄`.
    pub fn from_first(nbar: f64, n1: f64) -> Result<Self> {
        ensure_nonneg("nbar", nbar)?;
        if !(0.0..=2.0 * nbar).contains(&n1) {
            return Err(domain(format!("N1 = {n1} outside [0, 2·{nbar}]")));
        }
        Ok(Self { n1, n2: (2.0 * nbar - n1).max(0.0) })
    }

    pub fn symmetric(nbar: f64) -> Result<Self> {
        Self::from_first(nbar, nbar)
    }

    pub fn n1(&self) -> f64 {
        self.n1
    }

    pub fn n2(&self) -> f64 {
        self.n2
    }

    pub fn nbar(&self) -> f64 {
        0.5 * (self.n1 + self.n2)
    }
}

/// Mutual information of one mode with diagonal signal power `split` and a
/// squeezed measurement `diag(e^{−2r}, e^{2r})` in thermal noise `nth`:
///
/// `½ log₂[(1+2N_th+2N₁+e^{−2r})(1+2N_th+2N₂+e^{2r}) / ((1+2N_th+e^{−2r})(1+2N_th+e^{2r}))]`
pub fn single_mode_mi(split: PowerSplit, r: f64, nth: f64) -> Result<f64> {
    ensure_nonneg("nth", nth)?;
    if r.is_nan() {
        return Err(domain("squeezing must be a number"));
    }
    let c = 1.0 + 2.0 * nth;
    let x = (2.0 * split.n1 / (c + (-2.0 * r).exp())).ln_1p();
    let p = (2.0 * split.n2 / (c + (2.0 * r).exp())).ln_1p();
    Ok(0.5 * (x + p) / LN_2)
}

/// Homodyne Shannon capacity `½ log₂(1 + 4N̄/(1+2N_th))`.
pub fn homodyne_capacity(nbar: f64, nth: f64) -> f64 {
    0.5 * (4.0 * nbar / (1.0 + 2.0 * nth)).ln_1p() / LN_2
}

/// Heterodyne Shannon capacity `log₂(1 + N̄/(1+N_th))`.
pub fn heterodyne_capacity(nbar: f64, nth: f64) -> f64 {
    (nbar / (1.0 + nth)).ln_1p() / LN_2
}

/// `N̄` at which homodyne and heterodyne give the same rate.
pub fn fixed_crossover(nth: f64) -> f64 {
    2.0 * (1.0 + nth) / (1.0 + 2.0 * nth)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedRegime {
    Homodyne,
    Heterodyne,
}

/// Best single fixed measurement on every mode: homodyne below the crossover,
/// heterodyne above.
pub fn fixed_measurement_capacity(nbar: f64, nth: f64) -> Result<(f64, FixedRegime)> {
    ensure_nonneg("nbar", nbar)?;
    ensure_nonneg("nth", nth)?;
    let hom = homodyne_capacity(nbar, nth);
    let het = heterodyne_capacity(nbar, nth);
    if nbar <= fixed_crossover(nth) {
        Ok((hom.max(het), FixedRegime::Homodyne))
    } else {
        Ok((het.max(hom), FixedRegime::Heterodyne))
    }
}

fn nu_equation(nu: f64) -> f64 {
    nu * (1.0 + 2.0 * LN_2 - nu.ln()) - 3.0
}

/// Root of `ν(1 + 2ln2 − ln ν) = 3` on `[4, 20]` (≈ 7.1454), computed once.
pub fn solve_nu_star() -> f64 {
    static NU: OnceLock<f64> = OnceLock::new();
    *NU.get_or_init(|| {
        let (mut lo, mut hi) = (4.0_f64, 20.0_f64);
        // h(4) = 1 > 0, h(20) < 0
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if nu_equation(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut nu = 0.5 * (lo + hi);
        for _ in 0..8 {
            let step = nu_equation(nu) / (2.0 * LN_2 - nu.ln());
            nu -= step;
            if step.abs() < 1e-14 * nu {
                break;
            }
        }
        nu
    })
}

/// Residual `ν(1 + 2ln2 − ln ν) − 3`.
pub fn nu_star_residual(nu: f64) -> f64 {
    nu_equation(nu)
}

/// `(ν*−1)/4`: homodyne is optimal up to here.
pub fn lower_breakpoint() -> f64 {
    (solve_nu_star() - 1.0) / 4.0
}

/// `(ν*−2)/2`: heterodyne is optimal beyond here.
pub fn upper_breakpoint() -> f64 {
    (solve_nu_star() - 2.0) / 2.0
}

/// Slope of the time-sharing segment, `2(log₂ν* − 2)/(ν* − 3)` bits per photon.
pub fn time_share_slope() -> f64 {
    let nu = solve_nu_star();
    2.0 * (nu.log2() - 2.0) / (nu - 3.0)
}

/// Optimal homodyne/heterodyne time sharing on the pure-loss channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeShareSolution {
    /// Fraction of channel uses detected with heterodyne.
    pub x: f64,
    pub nu: f64,
    /// Photons per homodyne mode, `(ν−1)/4` (zero when no mode uses homodyne).
    pub per_mode_hom: f64,
    /// Photons per heterodyne mode, `ν/2 − 1` (zero when no mode uses heterodyne).
    pub per_mode_het: f64,
    pub rate: f64,
}

/// Lagrange-optimal heterodyne fraction `x = (4N̄+1−ν*)/(ν*−3)`, clamped to
/// `[0, 1]` outside the time-sharing window.
pub fn time_share_solution(nbar: f64) -> Result<TimeShareSolution> {
    ensure_nonneg("nbar", nbar)?;
    let nu_star = solve_nu_star();
    let raw = (4.0 * nbar + 1.0 - nu_star) / (nu_star - 3.0);
    let x = raw.clamp(0.0, 1.0);
    let nu = if raw > 0.0 && raw < 1.0 { nu_star } else { (4.0 * nbar + 1.0 + 3.0 * x) / (1.0 + x) };
    let rate = if raw > 0.0 && raw < 1.0 {
        (nu_star.log2() - 2.0) / (nu_star - 3.0) * (2.0 * nbar - 1.0) + 1.0
    } else if x == 0.0 {
        homodyne_capacity(nbar, 0.0)
    } else {
        heterodyne_capacity(nbar, 0.0)
    };
    Ok(TimeShareSolution {
        x,
        nu,
        per_mode_hom: if x < 1.0 { (nu - 1.0) / 4.0 } else { 0.0 },
        per_mode_het: if x > 0.0 { nu / 2.0 - 1.0 } else { 0.0 },
        rate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Homodyne,
    TimeShare,
    Heterodyne,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Homodyne => "homodyne",
            Regime::TimeShare => "time-share",
            Regime::Heterodyne => "heterodyne",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianCapacityResult {
    pub nbar: f64,
    pub nth: f64,
    pub capacity: f64,
    pub regime: Regime,
}

/// Time sharing between homodyne (fraction `1−x`, power `hom_power`) and
/// heterodyne (fraction `x`, power `het_power`) in thermal noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalTimeShare {
    pub x: f64,
    pub hom_power: f64,
    pub het_power: f64,
    pub rate: f64,
}

/// Best power split for a fixed heterodyne fraction `x`.
///
/// Equal marginal rates give `N_e = 2N_h − ½` independently of `N_th`; when
/// that would be negative all power goes to the homodyne modes.
fn split_for_fraction(nbar: f64, nth: f64, x: f64) -> ThermalTimeShare {
    let (hom_power, het_power) = if x >= 1.0 {
        (0.0, nbar)
    } else {
        let nh = (nbar + 0.5 * x) / (1.0 + x);
        let ne = 2.0 * nh - 0.5;
        if ne >= 0.0 || x == 0.0 {
            (if x == 0.0 { nbar } else { nh }, if x == 0.0 { 0.0 } else { ne })
        } else {
            (nbar / (1.0 - x), 0.0)
        }
    };
    let rate = (1.0 - x) * homodyne_capacity(hom_power, nth) + x * heterodyne_capacity(het_power, nth);
    ThermalTimeShare { x, hom_power, het_power, rate }
}

/// Numerically optimal homodyne/heterodyne time sharing at noise `nth`.
///
/// Golden-section search over the heterodyne fraction with the inner power
/// split in closed form. The rate is concave in `x`; endpoints win ties.
pub fn optimize_time_share(nbar: f64, nth: f64) -> Result<ThermalTimeShare> {
    ensure_nonneg("nbar", nbar)?;
    ensure_nonneg("nth", nth)?;
    let f = |x: f64| split_for_fraction(nbar, nth, x).rate;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0_f64, 1.0_f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let interior = split_for_fraction(nbar, nth, 0.5 * (a + b));
    let lo = split_for_fraction(nbar, nth, 0.0);
    let hi = split_for_fraction(nbar, nth, 1.0);
    const TIE: f64 = 1e-14;
    let best = if lo.rate + TIE >= interior.rate && lo.rate + TIE >= hi.rate {
        lo
    } else if interior.rate + TIE >= hi.rate {
        interior
    } else {
        hi
    };
    Ok(best)
}

/// Capacity with coherent-state inputs and the best Gaussian receiver.
///
/// Uses the exact piecewise expression at `nth = 0` and the numerical time
/// sharing of [`optimize_time_share`] otherwise.
pub fn gaussian_capacity(nbar: f64, nth: f64) -> Result<GaussianCapacityResult> {
    ensure_nonneg("nbar", nbar)?;
    ensure_nonneg("nth", nth)?;
    let (capacity, regime) = if nth == 0.0 {
        if nbar <= lower_breakpoint() {
            (homodyne_capacity(nbar, 0.0), Regime::Homodyne)
        } else if nbar <= upper_breakpoint() {
            let nu = solve_nu_star();
            ((nu.log2() - 2.0) / (nu - 3.0) * (2.0 * nbar - 1.0) + 1.0, Regime::TimeShare)
        } else {
            (heterodyne_capacity(nbar, 0.0), Regime::Heterodyne)
        }
    } else {
        let ts = optimize_time_share(nbar, nth)?;
        let regime = if ts.x == 0.0 {
            Regime::Homodyne
        } else if ts.x == 1.0 {
            Regime::Heterodyne
        } else {
            Regime::TimeShare
        };
        (ts.rate, regime)
    };
    Ok(GaussianCapacityResult { nbar, nth, capacity, regime })
}
