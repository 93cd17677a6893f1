//! Sweep evaluation and emission.

use bosonic_capacity::analytic::{self, FixedRegime};
use bosonic_capacity::output::{self, csv_line, format_number, json_number};
use bosonic_capacity::receivers;
use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Gaussian,
    Holevo,
    Hom,
    Het,
    Fixed,
    OokSpd,
    PpmSpd,
    BpskDolinar,
    MpskHolevo,
    PieSe,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Gaussian => "gaussian",
            Quantity::Holevo => "holevo",
            Quantity::Hom => "hom",
            Quantity::Het => "het",
            Quantity::Fixed => "fixed",
            Quantity::OokSpd => "ook-spd",
            Quantity::PpmSpd => "ppm-spd",
            Quantity::BpskDolinar => "bpsk-dolinar",
            Quantity::MpskHolevo => "mpsk-holevo",
            Quantity::PieSe => "pie-se",
        }
    }

    fn pure_loss_only(self) -> bool {
        matches!(
            self,
            Quantity::OokSpd | Quantity::PpmSpd | Quantity::BpskDolinar | Quantity::MpskHolevo | Quantity::PieSe
        )
    }

    fn has_regime(self) -> bool {
        matches!(self, Quantity::Gaussian | Quantity::Fixed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig4,
    Fig5,
    Fig6,
}

/// Validated sweep request. `nbar` values are transmitted photon numbers;
/// the receiver sees `eta · nbar` in `nth` noise photons.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub quantity: Quantity,
    pub nbar_min: f64,
    pub nbar_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub nth: f64,
    pub eta: f64,
    pub m: Option<usize>,
    pub seed: u64,
    pub format: Format,
}

/// Error kinds, mapped to exit codes 2 and 1.
#[derive(Debug)]
pub enum SweepError {
    Usage(String),
    Domain(String),
}

impl From<bosonic_capacity::Error> for SweepError {
    fn from(e: bosonic_capacity::Error) -> Self {
        SweepError::Domain(e.to_string())
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        let usage = |m: String| Err(SweepError::Usage(m));
        if self.points < 2 {
            return usage(format!("--points must be at least 2, got {}", self.points));
        }
        if !(self.nbar_min.is_finite() && self.nbar_max.is_finite()) || self.nbar_min > self.nbar_max {
            return usage(format!("need nbar-min <= nbar-max, got {} and {}", self.nbar_min, self.nbar_max));
        }
        if self.spacing == Spacing::Log && self.nbar_min <= 0.0 {
            return usage("log spacing needs --nbar-min > 0".into());
        }
        if self.quantity == Quantity::PieSe && self.nbar_min <= 0.0 {
            return usage("pie-se needs --nbar-min > 0".into());
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return usage(format!("--eta must lie in (0, 1], got {}", self.eta));
        }
        if self.quantity == Quantity::MpskHolevo && self.m.is_none() {
            return usage("mpsk-holevo needs --m".into());
        }
        if self.nbar_min < 0.0 {
            return Err(SweepError::Domain(format!("nbar must be >= 0, got {}", self.nbar_min)));
        }
        if !(self.nth.is_finite() && self.nth >= 0.0) {
            return Err(SweepError::Domain(format!("noise photon number must be >= 0, got {}", self.nth)));
        }
        if self.quantity.pure_loss_only() && self.nth != 0.0 {
            return Err(SweepError::Domain(format!("{} is defined for the pure-loss channel only", self.quantity.name())));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.nbar_min + (self.nbar_max - self.nbar_min) * t,
                    Spacing::Log => self.nbar_min * (self.nbar_max / self.nbar_min).powf(t),
                }
            })
            .collect()
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub series: String,
    pub nbar: f64,
    pub nth: f64,
    pub capacity: f64,
    pub regime: Option<&'static str>,
}

fn evaluate(q: Quantity, received: f64, nth: f64, m: Option<usize>) -> Result<(f64, Option<&'static str>), SweepError> {
    Ok(match q {
        Quantity::Gaussian => {
            let r = analytic::gaussian_capacity(received, nth)?;
            (r.capacity, Some(r.regime.as_str()))
        }
        Quantity::Holevo => (analytic::holevo_received(received, nth)?, None),
        Quantity::Hom => (analytic::homodyne_capacity(received, nth), None),
        Quantity::Het => (analytic::heterodyne_capacity(received, nth), None),
        Quantity::Fixed => {
            let (c, regime) = analytic::fixed_measurement_capacity(received, nth)?;
            (c, Some(if regime == FixedRegime::Homodyne { "homodyne" } else { "heterodyne" }))
        }
        Quantity::OokSpd => (receivers::ook_spd_capacity(received)?, None),
        Quantity::PpmSpd => (receivers::ppm_spd_capacity(received)?, None),
        Quantity::BpskDolinar => (receivers::bpsk_dolinar_capacity(received)?, None),
        Quantity::MpskHolevo => (receivers::mpsk_holevo(m.expect("validated"), received)?, None),
        Quantity::PieSe => unreachable!("pie-se has its own emitter"),
    })
}

/// Evaluates every grid point (in parallel) and returns rows in grid order.
pub fn run(cfg: &SweepConfig, series: &str) -> Result<Vec<Row>, SweepError> {
    cfg.validate()?;
    cfg.grid()
        .par_iter()
        .map(|&nbar| {
            let (capacity, regime) = evaluate(cfg.quantity, cfg.eta * nbar, cfg.nth, cfg.m)?;
            Ok(Row { series: series.to_string(), nbar, nth: cfg.nth, capacity, regime })
        })
        .collect()
}

pub fn emit_rows(rows: &[Row], format: Format, with_series: bool, with_regime: bool) -> String {
    match format {
        Format::Csv => {
            let mut header = vec!["nbar", "nth", "capacity_bits"];
            if with_series {
                header.insert(0, "series");
            }
            if with_regime {
                header.push("regime");
            }
            let mut out = csv_line(&header);
            for r in rows {
                let mut fields = vec![format_number(r.nbar), format_number(r.nth), format_number(r.capacity)];
                if with_series {
                    fields.insert(0, r.series.clone());
                }
                if with_regime {
                    fields.push(r.regime.unwrap_or("").to_string());
                }
                out += &csv_line(&fields);
            }
            out
        }
        Format::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut o = Map::new();
                    if with_series {
                        o.insert("series".into(), Value::String(r.series.clone()));
                    }
                    o.insert("nbar".into(), json_number(r.nbar));
                    o.insert("nth".into(), json_number(r.nth));
                    o.insert("capacity_bits".into(), json_number(r.capacity));
                    if with_regime {
                        o.insert("regime".into(), r.regime.map_or(Value::Null, |s| Value::String(s.into())));
                    }
                    Value::Object(o)
                })
                .collect();
            serde_json::to_string_pretty(&records).expect("rows serialize") + "\n"
        }
    }
}

/// Full sweep output for a single-quantity config.
pub fn render(cfg: &SweepConfig) -> Result<String, SweepError> {
    if cfg.quantity == Quantity::PieSe {
        cfg.validate()?;
        let grid: Vec<f64> = cfg.grid().iter().map(|n| n * cfg.eta).collect();
        let series = receivers::pie_se_curves(&grid)?;
        return Ok(match cfg.format {
            Format::Csv => output::pie_se_csv(&series),
            Format::Json => output::pie_se_json(&series),
        });
    }
    let rows = run(cfg, cfg.quantity.name())?;
    Ok(emit_rows(&rows, cfg.format, false, cfg.quantity.has_regime()))
}

/// Figure recipes. `base` supplies the format and seed.
pub fn render_preset(preset: Preset, base: &SweepConfig) -> Result<String, SweepError> {
    let linear = |quantity, max: f64, points, nth| SweepConfig {
        quantity,
        nbar_min: 0.0,
        nbar_max: max,
        points,
        spacing: Spacing::Linear,
        nth,
        eta: 1.0,
        m: None,
        seed: base.seed,
        format: base.format,
    };
    let rows = match preset {
        Preset::Fig4 => {
            let mut rows = Vec::new();
            for q in [Quantity::Gaussian, Quantity::Hom, Quantity::Het] {
                rows.extend(run(&linear(q, 6.0, 121, 0.0), q.name())?);
            }
            rows
        }
        Preset::Fig5 => {
            let mut rows = Vec::new();
            for nth in 0..=5 {
                rows.extend(run(&linear(Quantity::Gaussian, 10.0, 101, nth as f64), &format!("gaussian-nth{nth}"))?);
            }
            rows
        }
        Preset::Fig6 => {
            let cfg = SweepConfig {
                quantity: Quantity::PieSe,
                nbar_min: 1e-4,
                nbar_max: 1e2,
                points: 61,
                spacing: Spacing::Log,
                ..linear(Quantity::PieSe, 0.0, 2, 0.0)
            };
            return render(&cfg);
        }
    };
    Ok(emit_rows(&rows, base.format, true, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(quantity: Quantity) -> SweepConfig {
        SweepConfig {
            quantity,
            nbar_min: 0.01,
            nbar_max: 10.0,
            points: 50,
            spacing: Spacing::Log,
            nth: 0.0,
            eta: 1.0,
            m: None,
            seed: 0,
            format: Format::Csv,
        }
    }

    #[test]
    fn grids() {
        let g = cfg(Quantity::Gaussian).grid();
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.01);
        assert!((g[49] - 10.0).abs() < 1e-12);
        let lin = SweepConfig { spacing: Spacing::Linear, nbar_min: 0.0, nbar_max: 1.0, points: 3, ..cfg(Quantity::Hom) };
        assert_eq!(lin.grid(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn validation() {
        assert!(matches!(SweepConfig { points: 1, ..cfg(Quantity::Hom) }.validate(), Err(SweepError::Usage(_))));
        assert!(matches!(SweepConfig { nbar_min: 0.0, ..cfg(Quantity::Hom) }.validate(), Err(SweepError::Usage(_))));
        assert!(matches!(cfg(Quantity::MpskHolevo).validate(), Err(SweepError::Usage(_))));
        assert!(matches!(SweepConfig { nth: 1.0, ..cfg(Quantity::OokSpd) }.validate(), Err(SweepError::Domain(_))));
        assert!(cfg(Quantity::Gaussian).validate().is_ok());
    }

    #[test]
    fn gaussian_sweep_is_nondecreasing() {
        let rows = run(&cfg(Quantity::Gaussian), "gaussian").unwrap();
        assert!(rows.windows(2).all(|w| w[1].capacity >= w[0].capacity));
    }
}
