//! Photon-counting and discrete-constellation receivers on the pure-loss
//! channel. `nbar` is the mean received photon number per mode.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{domain, ensure_nonneg, Error, Result};
use crate::par;

/// Binary entropy in bits.
pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.ln() + (1.0 - p) * (-p).ln_1p()) / LN_2
}

/// Shannon entropy in bits, skipping zero entries.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>() / LN_2
}

/// Memoryless channel with finite input and output alphabets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteChannel {
    prior: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

const ROW_TOL: f64 = 1e-12;

impl DiscreteChannel {
    /// `rows[x][y] = P(y | x)`; the prior starts uniform.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let inputs = rows.len();
        if inputs == 0 {
            return Err(Error::MalformedChannel("no input symbols".into()));
        }
        let outputs = rows[0].len();
        if outputs == 0 {
            return Err(Error::MalformedChannel("no output symbols".into()));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != outputs {
                return Err(Error::MalformedChannel(format!("row {x} has {} entries, expected {outputs}", row.len())));
            }
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::MalformedChannel(format!("row {x} has a negative or non-finite entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_TOL {
                return Err(Error::MalformedChannel(format!("row {x} sums to {sum}")));
            }
        }
        Ok(Self { prior: vec![1.0 / inputs as f64; inputs], rows })
    }

    pub fn with_prior(mut self, prior: Vec<f64>) -> Result<Self> {
        if prior.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), got: prior.len() });
        }
        if prior.iter().any(|v| !v.is_finite() || *v < 0.0) || (prior.iter().sum::<f64>() - 1.0).abs() > ROW_TOL {
            return Err(Error::MalformedChannel("prior must be a probability vector".into()));
        }
        self.prior = prior;
        Ok(self)
    }

    /// Binary channel with `P(1|0) = e01`, `P(0|1) = e10`.
    pub fn binary(e01: f64, e10: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - e01, e01], vec![e10, 1.0 - e10]])
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Mutual information under the stored prior, bits.
    pub fn mutual_information(&self) -> f64 {
        mutual_information_nats(&self.rows, &self.prior) / LN_2
    }
}

fn output_distribution(rows: &[Vec<f64>], prior: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; rows[0].len()];
    for (row, &p) in rows.iter().zip(prior) {
        for (qy, w) in q.iter_mut().zip(row) {
            *qy += p * w;
        }
    }
    q
}

// D(W_x || q) in nats.
fn divergence(row: &[f64], q: &[f64]) -> f64 {
    row.iter().zip(q).filter(|(w, _)| **w > 0.0).map(|(w, qy)| w * (w / qy).ln()).sum()
}

fn mutual_information_nats(rows: &[Vec<f64>], prior: &[f64]) -> f64 {
    let q = output_distribution(rows, prior);
    rows.iter().zip(prior).filter(|(_, p)| **p > 0.0).map(|(row, p)| p * divergence(row, &q)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub bits: f64,
    pub prior: Vec<f64>,
    /// Upper minus lower bound at termination, bits.
    pub gap: f64,
    pub iterations: usize,
}

const BA_GAP: f64 = 1e-11;
const BA_MAX_ITER: usize = 1_000_000;

/// Blahut–Arimoto iteration with the usual `max_x D(W_x‖q)` upper bound.
pub fn blahut_arimoto(ch: &DiscreteChannel) -> CapacityEstimate {
    let rows = &ch.rows;
    let mut p = vec![1.0 / rows.len() as f64; rows.len()];
    let mut iterations = 0;
    loop {
        let q = output_distribution(rows, &p);
        let d: Vec<f64> = rows.iter().map(|row| divergence(row, &q)).collect();
        let lower: f64 = p.iter().zip(&d).map(|(a, b)| a * b).sum();
        let upper = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gap = (upper - lower) / LN_2;
        if gap < BA_GAP || iterations >= BA_MAX_ITER {
            return CapacityEstimate { bits: (lower / LN_2).max(0.0), prior: p, gap, iterations };
        }
        let dmax = upper;
        let mut total = 0.0;
        for (pi, di) in p.iter_mut().zip(&d) {
            *pi *= (di - dmax).exp();
            total += *pi;
        }
        p.iter_mut().for_each(|v| *v /= total);
        iterations += 1;
    }
}

/// Capacity in bits, maximized over input priors.
pub fn discrete_capacity(ch: &DiscreteChannel) -> f64 {
    blahut_arimoto(ch).bits
}

/// Minimum error probability for two pure states with squared overlap
/// `overlap_sq` and prior `p0` on the first one.
pub fn helstrom_error(overlap_sq: f64, p0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&overlap_sq) || !(0.0..=1.0).contains(&p0) {
        return Err(domain("overlap and prior must lie in [0, 1]"));
    }
    let eps = 1.0 - 4.0 * p0 * (1.0 - p0) * overlap_sq;
    Ok(0.5 * (1.0 - eps.max(0.0).sqrt()))
}

/// Helstrom error of `|α⟩` against `|−α⟩` with `|α|² = nbar`, equal priors.
pub fn dolinar_error_probability(nbar: f64) -> Result<f64> {
    ensure_nonneg("nbar", nbar)?;
    // ½(1 − √(1−s)) with s = e^{−4n̄}, written without the cancellation.
    let s = (-4.0 * nbar).exp();
    let root = (-(-4.0 * nbar).exp_m1()).sqrt();
    Ok(0.5 * s / (1.0 + root))
}

/// BPSK with a Helstrom-limited receiver: a binary symmetric channel.
pub fn bpsk_dolinar_capacity(nbar: f64) -> Result<f64> {
    Ok(1.0 - h2(dolinar_error_probability(nbar)?))
}

/// Mutual information of on-off keying with duty cycle `q`, pulse energy
/// `nbar/q` and an ideal on-off detector (a Z-channel), bits.
pub fn ook_rate(q: f64, nbar: f64) -> f64 {
    if q <= 0.0 || nbar <= 0.0 {
        return 0.0;
    }
    let e = nbar / q;
    let miss = (-e).exp();
    let click = -(-e).exp_m1();
    (h2(q * click) - q * h2(miss)).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OokOptimum {
    pub duty_cycle: f64,
    pub pulse_energy: f64,
    pub bits: f64,
}

const OOK_GRID: usize = 256;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Best on-off keying rate over duty cycles `q ∈ [nbar·10⁻³, 1]`, searched
/// on `ln q`.
pub fn ook_spd_optimum(nbar: f64) -> Result<OokOptimum> {
    ensure_nonneg("nbar", nbar)?;
    if nbar == 0.0 {
        return Ok(OokOptimum { duty_cycle: 1.0, pulse_energy: 0.0, bits: 0.0 });
    }
    let lo = (nbar * 1e-3).min(1.0).ln();
    let f = |u: f64| ook_rate(u.exp(), nbar);
    let step = -lo / (OOK_GRID - 1) as f64;
    let best = (0..OOK_GRID)
        .map(|i| lo + step * i as f64)
        .map(|u| (u, f(u)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is non-empty");
    let (a, b) = ((best.0 - step).max(lo), (best.0 + step).min(0.0));
    let (u, v) = golden_max(f, a, b, 1e-12);
    let (u, v) = if v >= best.1 { (u, v) } else { best };
    let q = u.exp();
    Ok(OokOptimum { duty_cycle: q, pulse_energy: nbar / q, bits: v })
}

pub fn ook_spd_capacity(nbar: f64) -> Result<f64> {
    Ok(ook_spd_optimum(nbar)?.bits)
}

/// Per-slot rate of `M`-ary pulse-position modulation: a pulse of `M·nbar`
/// photons is either detected, revealing its slot, or erased.
pub fn ppm_rate(m: u64, nbar: f64) -> f64 {
    if m < 2 || nbar <= 0.0 {
        return 0.0;
    }
    let mf = m as f64;
    -(-mf * nbar).exp_m1() * mf.log2() / mf
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PpmOptimum {
    pub order: u64,
    pub bits: f64,
}

const PPM_MAX_ORDER: u64 = 1 << 40;

/// Best PPM order: double `M` until the rate stops growing, then scan.
pub fn ppm_spd_optimum(nbar: f64) -> Result<PpmOptimum> {
    ensure_nonneg("nbar", nbar)?;
    if nbar == 0.0 {
        return Ok(PpmOptimum { order: 2, bits: 0.0 });
    }
    let mut m = 2u64;
    while m < PPM_MAX_ORDER && ppm_rate(2 * m, nbar) > ppm_rate(m, nbar) {
        m *= 2;
    }
    let (lo, hi) = ((m / 2).max(2), 2 * m);
    let (order, bits) = (lo..=hi)
        .map(|k| (k, ppm_rate(k, nbar)))
        .fold((2, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    Ok(PpmOptimum { order, bits })
}

pub fn ppm_spd_capacity(nbar: f64) -> Result<f64> {
    Ok(ppm_spd_optimum(nbar)?.bits)
}

const EIGEN_CLAMP: f64 = -1e-12;

fn clamp_spectrum(mut eig: Vec<f64>) -> Result<Vec<f64>> {
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    if min < EIGEN_CLAMP {
        return Err(Error::NotPositive(min));
    }
    eig.iter_mut().for_each(|v| *v = v.max(0.0));
    let sum: f64 = eig.iter().sum();
    eig.iter_mut().for_each(|v| *v /= sum);
    Ok(eig)
}

fn check_psk(m: usize, nbar: f64) -> Result<()> {
    if m < 2 {
        return Err(domain(format!("constellation size must be >= 2, got {m}")));
    }
    ensure_nonneg("nbar", nbar)
}

/// Eigenvalues of `G/M` for the circulant Gram matrix of `M`-PSK with
/// `|α|² = nbar`, from the discrete Fourier transform of its first row.
/// Not clamped; round-off can leave tiny negative values.
pub fn mpsk_gram_spectrum(m: usize, nbar: f64) -> Result<Vec<f64>> {
    check_psk(m, nbar)?;
    let mut row: Vec<Complex64> = (0..m)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / m as f64;
            (-nbar * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta))).exp()
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut row);
    Ok(row.iter().map(|c| c.re / m as f64).collect())
}

/// Spectrum of the average `M`-PSK state: [`mpsk_gram_spectrum`] with
/// round-off negatives above `−1e-12` zeroed and the rest renormalized.
pub fn mpsk_eigenvalues(m: usize, nbar: f64) -> Result<Vec<f64>> {
    clamp_spectrum(mpsk_gram_spectrum(m, nbar)?)
}

/// Holevo rate of `M`-PSK, bits per mode.
pub fn mpsk_holevo(m: usize, nbar: f64) -> Result<f64> {
    Ok(entropy_bits(&mpsk_eigenvalues(m, nbar)?))
}

/// The same spectrum as Poisson photon-number mass folded modulo `M`.
pub fn mpsk_eigenvalues_poisson(m: usize, nbar: f64) -> Result<Vec<f64>> {
    check_psk(m, nbar)?;
    let mut eig = vec![0.0; m];
    if nbar == 0.0 {
        eig[0] = 1.0;
        return Ok(eig);
    }
    let top = (nbar + 40.0 * nbar.sqrt() + 60.0).ceil() as usize;
    let ln_n = nbar.ln();
    let mut ln_p = -nbar;
    for k in 0..=top {
        if k > 0 {
            ln_p += ln_n - (k as f64).ln();
        }
        eig[k % m] += ln_p.exp();
    }
    clamp_spectrum(eig)
}

pub fn mpsk_holevo_poisson(m: usize, nbar: f64) -> Result<f64> {
    Ok(entropy_bits(&mpsk_eigenvalues_poisson(m, nbar)?))
}

/// Constellation sizes `2, 4, …, 2¹⁶` used for the PSK envelope.
pub fn psk_orders() -> impl Iterator<Item = usize> {
    (1..=16).map(|k| 1usize << k)
}

/// Largest `M`-PSK Holevo rate over [`psk_orders`], with the maximizing `M`.
pub fn mpsk_envelope(nbar: f64) -> Result<(usize, f64)> {
    ensure_nonneg("nbar", nbar)?;
    let mut best = (2, f64::NEG_INFINITY);
    for m in psk_orders() {
        let v = mpsk_holevo(m, nbar)?;
        if v > best.1 {
            best = (m, v);
        }
    }
    Ok(best)
}

/// Holevo capacity of the pure-loss channel, `g(nbar)` bits.
pub fn ultimate_holevo(nbar: f64) -> Result<f64> {
    analytic::g_entropy(nbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub nbar: f64,
    pub holevo_nats: f64,
    /// `−n̄ ln n̄ + n̄`.
    pub holevo_expansion: f64,
    pub ook_nats: f64,
    /// `−n̄ ln n̄ − n̄ ln ln(1/n̄)`.
    pub ook_expansion: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Whether the OOK/Holevo ratio strictly increases as `nbar` decreases.
    pub ratio_increasing: bool,
}

/// Low-photon comparison of OOK with photon counting against the Holevo
/// limit on a grid in `(0, 0.1]`.
pub fn asymptotic_scaling_report(grid: &[f64]) -> Result<ScalingReport> {
    if let Some(bad) = grid.iter().find(|&&n| !(n > 0.0 && n <= 0.1)) {
        return Err(domain(format!("grid values must lie in (0, 0.1], got {bad}")));
    }
    let mut rows = par::map_range(grid.len(), |i| -> Result<ScalingRow> {
        let n = grid[i];
        let holevo_nats = analytic::g_unchecked(n) * LN_2;
        let ook_nats = ook_spd_capacity(n)? * LN_2;
        Ok(ScalingRow {
            nbar: n,
            holevo_nats,
            holevo_expansion: -n * n.ln() + n,
            ook_nats,
            ook_expansion: -n * n.ln() - n * (-n.ln()).ln(),
            ratio: ook_nats / holevo_nats,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.nbar.total_cmp(&a.nbar));
    let ratio_increasing = rows.windows(2).all(|w| w[1].ratio > w[0].ratio);
    Ok(ScalingReport { rows, ratio_increasing })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PieSePoint {
    pub nbar: f64,
    /// Bits per mode.
    pub se: f64,
    /// Bits per photon.
    pub pie: f64,
}

impl PieSePoint {
    pub fn new(nbar: f64, se: f64) -> Result<Self> {
        if !(nbar > 0.0 && nbar.is_finite()) {
            return Err(domain(format!("nbar must be positive, got {nbar}")));
        }
        ensure_nonneg("spectral efficiency", se)?;
        Ok(Self { nbar, se, pie: se / nbar })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieSeSeries {
    pub label: String,
    pub points: Vec<PieSePoint>,
}

pub const SERIES_LABELS: [&str; 7] = [
    "holevo-ultimate",
    "gaussian-receiver",
    "bpsk-dolinar",
    "bpsk-holevo",
    "ook-spd",
    "ppm-spd",
    "mpsk-holevo-envelope",
];

fn series_value(label: &str, nbar: f64) -> Result<f64> {
    match label {
        "holevo-ultimate" => ultimate_holevo(nbar),
        "gaussian-receiver" => Ok(analytic::gaussian_capacity(nbar, 0.0)?.capacity),
        "bpsk-dolinar" => bpsk_dolinar_capacity(nbar),
        "bpsk-holevo" => mpsk_holevo(2, nbar),
        "ook-spd" => ook_spd_capacity(nbar),
        "ppm-spd" => ppm_spd_capacity(nbar),
        "mpsk-holevo-envelope" => Ok(mpsk_envelope(nbar)?.1),
        other => Err(domain(format!("unknown series {other}"))),
    }
}

/// Spectral efficiency and photon efficiency of every receiver model on a
/// positive grid, one series per entry of [`SERIES_LABELS`].
pub fn pie_se_curves(grid: &[f64]) -> Result<Vec<PieSeSeries>> {
    if grid.is_empty() {
        return Err(domain("empty nbar grid"));
    }
    let cells = par::map_range(SERIES_LABELS.len() * grid.len(), |i| {
        let (s, k) = (i / grid.len(), i % grid.len());
        PieSePoint::new(grid[k], series_value(SERIES_LABELS[s], grid[k])?)
    });
    let mut cells = cells.into_iter();
    SERIES_LABELS
        .iter()
        .map(|label| {
            let points = cells.by_ref().take(grid.len()).collect::<Result<Vec<_>>>()?;
            Ok(PieSeSeries { label: label.to_string(), points })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_entropy() {
        assert_eq!(h2(0.0), 0.0);
        assert_eq!(h2(1.0), 0.0);
        assert_abs_diff_eq!(h2(0.5), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy_bits(&[0.25; 4]), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn malformed_channels() {
        assert!(DiscreteChannel::new(vec![]).is_err());
        assert!(DiscreteChannel::new(vec![vec![0.5, 0.4]]).is_err());
        assert!(DiscreteChannel::new(vec![vec![1.0], vec![0.5, 0.5]]).is_err());
        assert!(DiscreteChannel::new(vec![vec![1.5, -0.5]]).is_err());
        let ch = DiscreteChannel::binary(0.1, 0.1).unwrap();
        assert!(ch.clone().with_prior(vec![0.5, 0.6]).is_err());
        assert!(ch.with_prior(vec![1.0]).is_err());
    }

    #[test]
    fn simple_capacities() {
        assert_abs_diff_eq!(discrete_capacity(&DiscreteChannel::binary(0.0, 0.0).unwrap()), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(discrete_capacity(&DiscreteChannel::binary(0.5, 0.5).unwrap()), 0.0, epsilon = 1e-9);
        let z = DiscreteChannel::binary(0.0, 0.5).unwrap();
        assert_abs_diff_eq!(discrete_capacity(&z), 1.25f64.log2(), epsilon = 1e-9);
        let bsc = DiscreteChannel::binary(0.11, 0.11).unwrap();
        assert_abs_diff_eq!(discrete_capacity(&bsc), 1.0 - h2(0.11), epsilon = 1e-9);
    }

    #[test]
    fn mutual_information_under_prior() {
        let ch = DiscreteChannel::binary(0.0, 0.0).unwrap().with_prior(vec![0.25, 0.75]).unwrap();
        assert_abs_diff_eq!(ch.mutual_information(), h2(0.25), epsilon = 1e-15);
    }

    #[test]
    fn helstrom_and_dolinar() {
        assert_abs_diff_eq!(helstrom_error(1.0, 0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(helstrom_error(0.0, 0.5).unwrap(), 0.0);
        assert!(helstrom_error(1.1, 0.5).is_err());
        for n in [0.0f64, 0.3, 1.0, 2.0] {
            let direct = helstrom_error((-4.0 * n).exp(), 0.5).unwrap();
            assert_abs_diff_eq!(dolinar_error_probability(n).unwrap(), direct, epsilon = 1e-15);
        }
        let p = dolinar_error_probability(1.0).unwrap();
        assert!((p - 0.004601).abs() < 1e-6, "{p}");
        assert!((bpsk_dolinar_capacity(1.0).unwrap() - 0.9570).abs() < 1e-3);
        assert_abs_diff_eq!(bpsk_dolinar_capacity(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert!(bpsk_dolinar_capacity(30.0).unwrap() > 1.0 - 1e-12);
        assert!(bpsk_dolinar_capacity(-1.0).is_err());
    }

    #[test]
    fn ook_limits() {
        assert_eq!(ook_spd_capacity(0.0).unwrap(), 0.0);
        assert!(ook_spd_capacity(-0.1).is_err());
        let big = ook_spd_capacity(50.0).unwrap();
        assert!(big <= 1.0 && big > 0.999, "{big}");
        let low = ook_spd_capacity(0.01).unwrap();
        assert!(low > analytic::homodyne_capacity(0.01, 0.0), "{low}");
    }

    #[test]
    fn ook_optimum_beats_fine_scan() {
        let nbar = 0.02;
        let opt = ook_spd_optimum(nbar).unwrap();
        let scan = (1..100_000).map(|i| ook_rate(i as f64 / 100_000.0, nbar)).fold(0.0, f64::max);
        assert!(opt.bits >= scan - 1e-9, "{} vs {scan}", opt.bits);
    }

    #[test]
    fn ppm_search() {
        assert_eq!(ppm_spd_capacity(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(ppm_rate(2, 1e3), 0.5, epsilon = 1e-15);
        let opt = ppm_spd_optimum(0.01).unwrap();
        let (m, v) = (2..=10_000u64).map(|m| (m, ppm_rate(m, 0.01))).fold((0, 0.0), |a, c| if c.1 > a.1 { c } else { a });
        assert_eq!(opt.order, m);
        assert_eq!(opt.bits, v);
        // Three slots beat two once the pulse is always detected.
        assert_eq!(ppm_spd_optimum(100.0).unwrap().order, 3);
    }

    #[test]
    fn psk_binary_closed_form() {
        for n in [0.0, 0.2, 1.0, 3.0] {
            let eig = mpsk_eigenvalues(2, n).unwrap();
            let e = (-2.0 * n).exp();
            assert_abs_diff_eq!(eig[0], 0.5 * (1.0 + e), epsilon = 1e-14);
            assert_abs_diff_eq!(mpsk_holevo(2, n).unwrap(), h2(0.5 * (1.0 + e)), epsilon = 1e-13);
        }
        assert!(mpsk_holevo(2, 40.0).unwrap() > 1.0 - 1e-12);
        assert!(mpsk_holevo(1, 1.0).is_err());
    }

    #[test]
    fn psk_routes_agree() {
        for m in [2, 3, 4, 8, 16, 64] {
            for n in [0.0, 0.1, 1.0, 5.0, 30.0] {
                let a = mpsk_holevo(m, n).unwrap();
                let b = mpsk_holevo_poisson(m, n).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn psk_bounded_by_alphabet_and_holevo() {
        for m in [2, 4, 8, 32] {
            for n in [0.01, 0.5, 2.0, 20.0] {
                let v = mpsk_holevo(m, n).unwrap();
                assert!(v <= (m as f64).log2() + 1e-12 && v <= analytic::g_unchecked(n) + 1e-12);
            }
        }
    }

    #[test]
    fn scaling_report_domain() {
        assert!(asymptotic_scaling_report(&[0.2]).is_err());
        assert!(asymptotic_scaling_report(&[0.0]).is_err());
        let r = asymptotic_scaling_report(&[1e-2, 1e-3]).unwrap();
        assert_eq!(r.rows[0].nbar, 1e-2);
        assert!(r.rows[0].ratio > 0.4 && r.rows[0].ratio < 0.9, "{}", r.rows[0].ratio);
    }

    #[test]
    fn pie_se_series() {
        assert!(pie_se_curves(&[]).is_err());
        let curves = pie_se_curves(&[0.01, 1.0]).unwrap();
        assert_eq!(curves.len(), SERIES_LABELS.len());
        for s in &curves {
            for p in &s.points {
                assert!((p.pie * p.nbar - p.se).abs() <= 1e-15 * p.se.max(1.0));
            }
        }
        assert!(PieSePoint::new(0.0, 1.0).is_err());
    }
}
