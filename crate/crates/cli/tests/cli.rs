use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bosonic-capacity"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn capacity_records() {
    let o = run(&["capacity", "--nbar", "1", "--nth", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["capacity_bits"].as_f64().unwrap() - 1.16096).abs() < 1e-5);
    assert_eq!(v["regime"], "homodyne");
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["nbar", "nth", "capacity_bits", "regime"]);

    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["capacity", "--nbar", "0"]))).unwrap();
    assert_eq!(v["capacity_bits"].as_f64().unwrap(), 0.0);

    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["capacity", "--nbar", "10", "--nth", "0"]))).unwrap();
    assert!((v["capacity_bits"].as_f64().unwrap() - 11f64.log2()).abs() < 1e-10);
    assert_eq!(v["regime"], "heterodyne");
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["capacity", "--nbar", "1"], 0),
        (&["capacity", "--nbar", "-1"], 1),
        (&["capacity", "--nbar", "1", "--nth", "-0.5"], 1),
        (&["capacity"], 2),
        (&["capacity", "--nbar", "abc"], 2),
        (&["frobnicate"], 2),
        (&[], 2),
        (&["verify", "bogus"], 2),
        (&["sweep"], 2),
        (&["sweep", "--quantity", "nonsense"], 2),
        (&["sweep", "--quantity", "gaussian", "--points", "1"], 2),
        (&["sweep", "--quantity", "gaussian", "--nbar-min", "0"], 2),
        (&["sweep", "--quantity", "gaussian", "--nbar-min", "5", "--nbar-max", "1"], 2),
        (&["sweep", "--quantity", "gaussian", "--eta", "1.5"], 2),
        (&["sweep", "--quantity", "mpsk-holevo"], 2),
        (&["sweep", "--quantity", "gaussian", "--nth", "1", "--input-thermal", "1"], 2),
        (&["sweep", "--quantity", "gaussian", "--preset", "fig4"], 2),
        (&["sweep", "--quantity", "ook-spd", "--nth", "1"], 1),
        (&["sweep", "--quantity", "hom", "--spacing", "linear", "--nbar-min", "-1", "--nbar-max", "1"], 1),
        (&["sweep", "--quantity", "mpsk-holevo", "--m", "1"], 1),
        (&["sweep", "--quantity", "mpsk-holevo", "--m", "8", "--points", "3"], 0),
        (&["verify", "gaussian-core", "--seed", "3"], 0),
    ];
    for (args, code) in cases {
        assert_eq!(run(args).status.code(), Some(*code), "{args:?}");
    }
    let o = bin().args(["capacity", "--nbar", "1"]).env("CAPACITY_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(["capacity", "--nbar", "1"]).env("CAPACITY_THREADS", "2").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn gaussian_sweep_is_monotone_with_fixed_schema() {
    let o = run(&["sweep", "--quantity", "gaussian", "--nbar-min", "0.01", "--nbar-max", "10", "--points", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["nbar", "nth", "capacity_bits", "regime"]);
    assert_eq!(rows.len(), 50);
    let caps: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(caps.windows(2).all(|w| w[1] >= w[0]));
    assert!(stdout(&o).ends_with('\n') && !stdout(&o).contains('\r'));
}

#[test]
fn csv_round_trips_at_twelve_digits() {
    let o = run(&["sweep", "--quantity", "holevo", "--nth", "0.5", "--points", "20"]);
    let (_, rows) = csv_rows(&stdout(&o));
    for r in rows {
        for field in &r {
            let v: f64 = field.parse().unwrap();
            assert_eq!(&format!("{v:.11e}"), field);
        }
        let nbar: f64 = r[0].parse().unwrap();
        let cap: f64 = r[2].parse().unwrap();
        let exact = bosonic_capacity::analytic::holevo_received(nbar, 0.5).unwrap();
        assert!(((cap - exact) / exact).abs() < 1e-11);
    }
}

#[test]
fn identical_flags_give_identical_bytes() {
    for args in [
        &["sweep", "--quantity", "pie-se", "--nbar-min", "1e-3", "--nbar-max", "10", "--points", "6"][..],
        &["sweep", "--preset", "fig5", "--format", "json"][..],
        &["verify", "feedforward", "--seed", "7"][..],
    ] {
        let a = run(args);
        let b = bin().args(args).env("CAPACITY_THREADS", "1").output().unwrap();
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn pie_se_schema() {
    let o = run(&["sweep", "--quantity", "pie-se", "--nbar-min", "0.001", "--nbar-max", "1", "--points", "4"]);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["series", "nbar", "se_bits", "pie_bits_per_photon"]);
    assert_eq!(rows.len(), 7 * 4);
    for r in &rows {
        let (n, se, pie): (f64, f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!((pie * n - se).abs() <= 1e-11 * se.max(1e-300));
    }
    let j = run(&["sweep", "--quantity", "pie-se", "--nbar-min", "0.001", "--nbar-max", "1", "--points", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 28);
    assert!(v[0].get("pie_bits_per_photon").is_some());
}

#[test]
fn fig4_fixed_receivers_touch_envelope_only_at_breakpoints() {
    let o = run(&["sweep", "--preset", "fig4"]);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["series", "nbar", "nth", "capacity_bits"]);
    let series = |name: &str| -> Vec<(f64, f64)> {
        rows.iter().filter(|r| r[0] == name).map(|r| (r[1].parse().unwrap(), r[3].parse().unwrap())).collect()
    };
    let (g, hom, het) = (series("gaussian"), series("hom"), series("het"));
    assert_eq!(g.len(), 121);
    let lo = bosonic_capacity::analytic::lower_breakpoint();
    let hi = bosonic_capacity::analytic::upper_breakpoint();
    for i in 0..g.len() {
        let n = g[i].0;
        let (c, h, e) = (g[i].1, hom[i].1, het[i].1);
        assert!(h <= c + 1e-11 && e <= c + 1e-11);
        if n > 0.0 {
            // homodyne matches the envelope exactly below the lower breakpoint, heterodyne above the upper one
            assert_eq!(h == c, n <= lo, "hom at {n}");
            assert_eq!(e == c, n >= hi, "het at {n}");
        }
    }
}

#[test]
fn fig5_and_fig6_presets() {
    let (header, rows) = csv_rows(&stdout(&run(&["sweep", "--preset", "fig5"])));
    assert_eq!(header, ["series", "nbar", "nth", "capacity_bits"]);
    assert_eq!(rows.len(), 6 * 101);
    let (header, rows) = csv_rows(&stdout(&run(&["sweep", "--preset", "fig6"])));
    assert_eq!(header, ["series", "nbar", "se_bits", "pie_bits_per_photon"]);
    assert_eq!(rows.len(), 7 * 61);
}

#[test]
fn output_file_and_thermal_input() {
    let dir = std::env::temp_dir().join(format!("bosonic-capacity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let o = run(&["sweep", "--quantity", "het", "--eta", "0.5", "--input-thermal", "2", "--points", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let (_, rows) = csv_rows(&text);
    let nbar: f64 = rows[0][0].parse().unwrap();
    let nth: f64 = rows[0][1].parse().unwrap();
    let cap: f64 = rows[0][2].parse().unwrap();
    assert_eq!(nth, 1.0);
    let exact = bosonic_capacity::analytic::heterodyne_capacity(0.5 * nbar, 1.0);
    assert!((cap - exact).abs() < 1e-11 * exact.max(1e-300));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_reports() {
    let o = run(&["verify", "identity-optimal", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "identity-optimal");
    assert_eq!(v["seed"], 7);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["observed"].as_f64().unwrap() <= 1e-9);
    }
    let o = run(&["verify", "feedforward", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["checks"][0]["observed"].as_f64().unwrap() <= 1e-9);

    let o = run(&["verify", "oracles"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stderr).unwrap().contains("seed 0"));
}
