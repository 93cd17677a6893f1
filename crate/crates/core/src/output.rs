//! Text formats for emitted series: 12 significant digits, `.` decimal
//! separator, `\n` line endings.

use serde::Serialize;
use serde_json::Value;

use crate::receivers::PieSeSeries;

pub const PIE_SE_HEADER: &str = "series,nbar,se_bits,pie_bits_per_photon";

/// Scientific notation with 12 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        format_number(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

/// JSON number rounded to 12 significant digits; non-finite values become null.
pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

/// Joins fields with commas and appends `\n`.
pub fn csv_line<S: AsRef<str>>(fields: &[S]) -> String {
    let mut line = fields.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn pie_se_csv(series: &[PieSeSeries]) -> String {
    let mut out = String::from(PIE_SE_HEADER);
    out.push('\n');
    for s in series {
        for p in &s.points {
            out += &csv_line(&[s.label.clone(), format_number(p.nbar), format_number(p.se), format_number(p.pie)]);
        }
    }
    out
}

#[derive(Serialize)]
struct PieSeRecord<'a> {
    series: &'a str,
    nbar: Value,
    se_bits: Value,
    pie_bits_per_photon: Value,
}

/// Flat JSON array, one object per point, in series then grid order.
pub fn pie_se_json(series: &[PieSeSeries]) -> String {
    let records: Vec<PieSeRecord> = series
        .iter()
        .flat_map(|s| {
            s.points.iter().map(|p| PieSeRecord {
                series: &s.label,
                nbar: json_number(p.nbar),
                se_bits: json_number(p.se),
                pie_bits_per_photon: json_number(p.pie),
            })
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("records serialize") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::receivers::PieSePoint;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_number(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_number(0.0), "0.00000000000e0");
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(json_number(f64::NAN), Value::Null);
    }

    #[test]
    fn pie_se_formats() {
        let s = vec![PieSeSeries { label: "ook-spd".into(), points: vec![PieSePoint::new(0.5, 0.25).unwrap()] }];
        assert_eq!(
            pie_se_csv(&s),
            "series,nbar,se_bits,pie_bits_per_photon\nook-spd,5.00000000000e-1,2.50000000000e-1,5.00000000000e-1\n"
        );
        let v: Value = serde_json::from_str(&pie_se_json(&s)).unwrap();
        assert_eq!(v[0]["series"], "ook-spd");
        assert_eq!(v[0]["pie_bits_per_photon"], 0.5);
    }
}
