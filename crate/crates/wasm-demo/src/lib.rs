//! Browser bindings. Each export returns JSON (or a flat array) that
//! `www/main.js` plots on a canvas; the `*_json` functions carry the logic
//! so they can be tested natively.

use bosonic_capacity::analytic::{self, PowerSplit};
use bosonic_capacity::receivers;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Curves {
    nth: f64,
    nbar: Vec<f64>,
    gaussian: Vec<f64>,
    holevo: Vec<f64>,
    homodyne: Vec<f64>,
    heterodyne: Vec<f64>,
    regime: Vec<&'static str>,
}

fn check_points(points: usize) -> Result<(), String> {
    if !(2..=10_000).contains(&points) {
        return Err(format!("points must lie in [2, 10000], got {points}"));
    }
    Ok(())
}

/// Gaussian, Holevo, homodyne and heterodyne capacities on a linear grid
/// `0..=nbar_max`.
pub fn capacity_curves_json(nbar_max: f64, nth: f64, points: usize) -> Result<String, String> {
    check_points(points)?;
    if !(nbar_max > 0.0 && nbar_max.is_finite()) {
        return Err(format!("nbar_max must be positive, got {nbar_max}"));
    }
    let mut c = Curves {
        nth,
        nbar: Vec::with_capacity(points),
        gaussian: Vec::with_capacity(points),
        holevo: Vec::with_capacity(points),
        homodyne: Vec::with_capacity(points),
        heterodyne: Vec::with_capacity(points),
        regime: Vec::with_capacity(points),
    };
    for i in 0..points {
        let n = nbar_max * i as f64 / (points - 1) as f64;
        let g = analytic::gaussian_capacity(n, nth).map_err(|e| e.to_string())?;
        c.nbar.push(n);
        c.gaussian.push(g.capacity);
        c.holevo.push(analytic::holevo_received(n, nth).map_err(|e| e.to_string())?);
        c.homodyne.push(analytic::homodyne_capacity(n, nth));
        c.heterodyne.push(analytic::heterodyne_capacity(n, nth));
        c.regime.push(g.regime.as_str());
    }
    serde_json::to_string(&c).map_err(|e| e.to_string())
}

/// Photon information efficiency against spectral efficiency for every
/// receiver family, on a log grid of pure-loss photon numbers.
pub fn pie_se_json(nbar_min: f64, nbar_max: f64, points: usize) -> Result<String, String> {
    check_points(points)?;
    if !(nbar_min > 0.0 && nbar_min < nbar_max && nbar_max.is_finite()) {
        return Err(format!("need 0 < nbar_min < nbar_max, got {nbar_min} and {nbar_max}"));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| nbar_min * (nbar_max / nbar_min).powf(i as f64 / (points - 1) as f64))
        .collect();
    let series = receivers::pie_se_curves(&grid).map_err(|e| e.to_string())?;
    serde_json::to_string(&series).map_err(|e| e.to_string())
}

/// Single-mode mutual information over quadrature power `N₁ ∈ [0, 2N̄]`
/// (rows) and measurement squeezing `r ∈ [−r_max, r_max]` (columns),
/// row-major.
pub fn landscape(nbar: f64, nth: f64, n1_points: usize, r_points: usize, r_max: f64) -> Result<Vec<f64>, String> {
    check_points(n1_points)?;
    check_points(r_points)?;
    if !(r_max >= 0.0 && r_max.is_finite()) {
        return Err(format!("r_max must be finite and >= 0, got {r_max}"));
    }
    let mut out = Vec::with_capacity(n1_points * r_points);
    for i in 0..n1_points {
        let n1 = 2.0 * nbar * i as f64 / (n1_points - 1) as f64;
        let split = PowerSplit::from_first(nbar, n1.min(2.0 * nbar)).map_err(|e| e.to_string())?;
        for j in 0..r_points {
            let r = -r_max + 2.0 * r_max * j as f64 / (r_points - 1) as f64;
            out.push(analytic::single_mode_mi(split, r, nth).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn capacity_curves(nbar_max: f64, nth: f64, points: usize) -> Result<String, JsError> {
    capacity_curves_json(nbar_max, nth, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pie_se(nbar_min: f64, nbar_max: f64, points: usize) -> Result<String, JsError> {
    pie_se_json(nbar_min, nbar_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn single_mode_landscape(nbar: f64, nth: f64, n1_points: usize, r_points: usize, r_max: f64) -> Result<Vec<f64>, JsError> {
    landscape(nbar, nth, n1_points, r_points, r_max).map_err(|e| JsError::new(&e))
}
