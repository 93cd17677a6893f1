use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bosonic_capacity::analytic;
use bosonic_capacity::output::json_number;
use bosonic_capacity::verify::{self, Suite};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

mod sweep;

use sweep::{Format, Preset, Quantity, Spacing, SweepConfig, SweepError};

/// Capacities of the lossy-noisy bosonic channel under Gaussian,
/// photon-counting and ideal receivers.
#[derive(Parser)]
#[command(name = "bosonic-capacity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gaussian-receiver capacity at a single point.
    #[command(allow_negative_numbers = true)]
    Capacity {
        /// Mean received photons per mode.
        #[arg(long)]
        nbar: f64,
        /// Mean received noise photons per mode.
        #[arg(long, default_value_t = 0.0)]
        nth: f64,
    },
    /// Evaluate a quantity over a photon-number grid.
    Sweep(SweepArgs),
    /// Run a self-check suite and print a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    #[arg(long, value_enum, required_unless_present = "preset")]
    quantity: Option<Quantity>,
    #[arg(long, default_value_t = 0.01)]
    nbar_min: f64,
    #[arg(long, default_value_t = 10.0)]
    nbar_max: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, value_enum, default_value = "log")]
    spacing: Spacing,
    /// Received noise photons per mode.
    #[arg(long, conflicts_with = "input_thermal")]
    nth: Option<f64>,
    /// Transmissivity; the swept nbar is scaled by it before evaluation.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Environment photon number; the receiver sees (1 - eta) times this.
    #[arg(long)]
    input_thermal: Option<f64>,
    /// PSK constellation size.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "quantity")]
    preset: Option<Preset>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    GaussianCore,
    IdentityOptimal,
    Feedforward,
    Oracles,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::GaussianCore => Suite::GaussianCore,
            SuiteArg::IdentityOptimal => Suite::IdentityOptimal,
            SuiteArg::Feedforward => Suite::Feedforward,
            SuiteArg::Oracles => Suite::Oracles,
            SuiteArg::All => Suite::All,
        }
    }
}

enum Failure {
    Usage(String),
    Domain(String),
    Check(String),
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Usage(m) => Failure::Usage(m),
            SweepError::Domain(m) => Failure::Domain(m),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("CAPACITY_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("CAPACITY_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure thread pool: {e}")))
}

fn write_out(text: &str, path: Option<&PathBuf>) -> Result<(), Failure> {
    let res = match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::Domain(format!("write failed: {e}")))
}

fn cmd_capacity(nbar: f64, nth: f64) -> Result<(), Failure> {
    let r = analytic::gaussian_capacity(nbar, nth).map_err(|e| Failure::Domain(e.to_string()))?;
    let record = json!({
        "nbar": json_number(r.nbar),
        "nth": json_number(r.nth),
        "capacity_bits": json_number(r.capacity),
        "regime": r.regime.as_str(),
    });
    write_out(&format!("{record}\n"), None)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let nth = match (args.nth, args.input_thermal) {
        (Some(n), _) => n,
        (None, Some(env)) => (1.0 - args.eta) * env,
        (None, None) => 0.0,
    };
    let cfg = SweepConfig {
        quantity: args.quantity.unwrap_or(Quantity::Gaussian),
        nbar_min: args.nbar_min,
        nbar_max: args.nbar_max,
        points: args.points,
        spacing: args.spacing,
        nth,
        eta: args.eta,
        m: args.m,
        seed: args.seed,
        format: args.format,
    };
    let text = match args.preset {
        Some(p) => sweep::render_preset(p, &cfg)?,
        None => sweep::render(&cfg)?,
    };
    write_out(&text, args.output.as_ref())
}

fn cmd_verify(suite: SuiteArg, seed: Option<u64>) -> Result<(), Failure> {
    let seed = seed.unwrap_or_else(|| {
        eprintln!("note: no --seed given, using seed 0");
        0
    });
    let report = verify::run(suite.into(), seed).map_err(|e| Failure::Domain(e.to_string()))?;
    write_out(&(report.to_json() + "\n"), None)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure::Check(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Capacity { nbar, nth } => cmd_capacity(nbar, nth),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify { suite, seed } => cmd_verify(suite, seed),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) | Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
