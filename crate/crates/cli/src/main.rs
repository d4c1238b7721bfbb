//! Command-line front end: bond-curve shapes, yield curves, limit CGFs and
//! terminal-rate simulation from a JSON model file.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affine_yield::{
    cgf, classify, jcir_self_decomposable, limit_exists, limit_moments, shape_boundaries,
    simulate_terminal_with_workers, solve_term_structure, CurveShape, Error, LimitExistence, NamedModel,
    SampleSummary, SimConfig, Tolerances,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use config::ModelConfig;

const THREADS_ENV: &str = "AFFINE_YIELD_THREADS";

#[derive(Parser)]
#[command(name = "affine-yield", version, about = "Yield curves of one-factor affine short-rate models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report admissibility, shape boundaries and the limit law of a model.
    Describe { config: PathBuf },
    /// Yield and forward curves for one or more short rates, as CSV.
    Curve {
        config: PathBuf,
        /// Comma-separated short rates.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        r0: Vec<f64>,
        #[arg(long, default_value_t = 25.0)]
        x_max: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shape of the yield curve at a short rate, as JSON.
    Classify {
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        r0: f64,
    },
    /// Cumulant generating function of the limit law on [u_min, 0], as CSV.
    Cgf {
        config: PathBuf,
        #[arg(long, default_value_t = -50.0, allow_negative_numbers = true)]
        u_min: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the short rate at a horizon; samples as CSV, summary as JSON.
    Simulate {
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        r0: f64,
        #[arg(long)]
        horizon: f64,
        #[arg(long)]
        paths: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct CliError {
    kind: String,
    message: String,
    code: u8,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { kind: "config_error".into(), message: message.into(), code: 2 }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError { kind: "io_error".into(), message: message.into(), code: 2 }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { kind: e.kind().into(), message: e.to_string(), code: if e.is_numerical() { 3 } else { 2 } }
    }
}

/// 17 significant digits, dot decimal separator.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x > 0.0 {
        "inf".into()
    } else if x < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("+inf")
    } else if x < 0.0 {
        json!("-inf")
    } else {
        Value::Null
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(format!("cannot write to stdout: {e}"))),
    }
}

fn print_json(value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialise");
    write_output(None, &format!("{text}\n"))
}

fn grid(lo: f64, hi: f64, steps: usize, i: usize) -> f64 {
    if i == steps {
        hi
    } else {
        lo + (hi - lo) * i as f64 / steps as f64
    }
}

fn describe(path: &Path) -> Result<(), CliError> {
    let cfg = ModelConfig::load(path)?;
    let params = cfg.validate()?;
    let p = params.params();
    let lambda = params.quasi_mean_reversion();

    let boundaries = match shape_boundaries(&params) {
        Ok(sb) => json!({
            "b_norm": json_num(sb.b_norm),
            "b_asymp": json_num(sb.b_asymp),
            "b_inv": json_num(sb.b_inv.to_f64()),
        }),
        Err(Error::LambdaZero) => json!({
            "note": "quasi-mean-reversion is zero; the long-end yield depends on the short rate",
        }),
        Err(e) => return Err(e.into()),
    };

    let deterministic = params.f_is_linear() && params.r_is_linear() && p.beta != 0.0 && !params.f_is_zero();
    let flat_rate = if deterministic { json_num(-p.b / p.beta) } else { Value::Null };

    let limit = match limit_exists(&params) {
        LimitExistence::Exists => {
            let ld = limit_moments(&params)?;
            json!({ "exists": true, "mean": json_num(ld.mean), "variance": json_num(ld.variance) })
        }
        LimitExistence::DoesNotExist { reason } => json!({ "exists": false, "reason": reason }),
    };

    let self_decomposable = match &cfg {
        ModelConfig::Named(NamedModel::Jcir(j)) => match jcir_self_decomposable(j) {
            Ok(v) => json!(v),
            Err(Error::DeltaNonZero { .. }) => json!("undetermined (delta != 0)"),
            Err(e) => return Err(e.into()),
        },
        _ => Value::Null,
    };

    print_json(&json!({
        "model": cfg.name(),
        "admissible": true,
        "state_space": p.state_space,
        "lambda": json_num(lambda),
        "beta_zero": json_num(params.beta_zero()),
        "boundaries": boundaries,
        "flat_rate": flat_rate,
        "limit": limit,
        "self_decomposable": self_decomposable,
    }))
}

fn curve(path: &Path, r0: &[f64], x_max: f64, steps: usize, out: Option<&Path>) -> Result<(), CliError> {
    if steps == 0 || !(x_max.is_finite() && x_max > 0.0) {
        return Err(CliError::config("need --steps >= 1 and a finite --x-max > 0"));
    }
    let params = ModelConfig::load(path)?.validate()?;
    let ts = solve_term_structure(&params, x_max, Tolerances::default())?;
    let mut csv = String::from("x");
    for r in r0 {
        let _ = write!(csv, ",yield_{r},forward_{r}");
    }
    csv.push('\n');
    for i in 0..=steps {
        let x = grid(0.0, x_max, steps, i);
        csv.push_str(&num(x));
        for &r in r0 {
            let _ = write!(csv, ",{},{}", num(ts.yield_rate(r, x)?), num(ts.forward(r, x)?));
        }
        csv.push('\n');
    }
    write_output(out, &csv)
}

fn classify_cmd(path: &Path, r0: f64) -> Result<(), CliError> {
    let params = ModelConfig::load(path)?.validate()?;
    let shape = classify(&params, r0)?;
    let mut report = json!({ "shape": shape.name() });
    if let CurveShape::Humped { forward_max_x, forward_max_value } = shape {
        report["forward_max_x"] = json_num(forward_max_x);
        report["forward_max_value"] = json_num(forward_max_value);
    }
    print_json(&report)
}

fn cgf_cmd(path: &Path, u_min: f64, steps: usize, out: Option<&Path>) -> Result<(), CliError> {
    if steps == 0 || !(u_min.is_finite() && u_min < 0.0) {
        return Err(CliError::config("need --steps >= 1 and a finite --u-min < 0"));
    }
    let params = ModelConfig::load(path)?.validate()?;
    let mut csv = String::from("u,kappa\n");
    for i in 0..=steps {
        let u = grid(u_min, 0.0, steps, i);
        let _ = writeln!(csv, "{},{}", num(u), num(cgf(&params, u)?));
    }
    write_output(out, &csv)
}

fn worker_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))
        }),
    }
}

fn simulate(
    path: &Path,
    r0: f64,
    horizon: f64,
    paths: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let ModelConfig::Named(model) = ModelConfig::load(path)? else {
        return Err(CliError::config("simulation needs a named model"));
    };
    let cfg = SimConfig { model, r0, horizon, n_paths: paths, seed };
    let samples = simulate_terminal_with_workers(&cfg, worker_count()?)?;
    if let Some(out) = out {
        let mut csv = String::with_capacity(samples.len() * 26 + 2);
        csv.push_str("r\n");
        for &r in &samples {
            csv.push_str(&num(r));
            csv.push('\n');
        }
        write_output(Some(out), &csv)?;
    }
    let s = SampleSummary::from_samples(&samples)?;
    print_json(&json!({
        "model": model.name(),
        "r0": json_num(r0),
        "horizon": json_num(horizon),
        "paths": paths,
        "seed": seed,
        "mean": json_num(s.mean),
        "variance": json_num(s.variance),
        "mean_se": json_num(s.mean_se),
        "variance_se": json_num(s.variance_se),
    }))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Describe { config } => describe(&config),
        Command::Curve { config, r0, x_max, steps, out } => curve(&config, &r0, x_max, steps, out.as_deref()),
        Command::Classify { config, r0 } => classify_cmd(&config, r0),
        Command::Cgf { config, u_min, steps, out } => cgf_cmd(&config, u_min, steps, out.as_deref()),
        Command::Simulate { config, r0, horizon, paths, seed, out } => {
            simulate(&config, r0, horizon, paths, seed, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind, "message": e.message }));
            ExitCode::from(e.code)
        }
    }
}
