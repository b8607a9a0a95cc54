//! Experiment harness:
//!
//! ```text
//! chronos run --experiment <name> [--config <file>] [--key value ...]
//!             --out <path> --format csv|json [--seed N]
//! chronos list
//! ```
//!
//! Exit status: 0 when every check passed, 1 when some check failed,
//! 2 on configuration or usage errors. `CHRONOS_SEED` overrides the config
//! seed; an explicit `--seed` overrides both.

use std::path::PathBuf;
use std::process::ExitCode;

use chronos::experiments::{self, emit, ExperimentConfig, ExperimentKind, ReportFormat};

fn usage() -> String {
    "usage:\n  chronos run --experiment <name> [--config <file>] [--key value ...] \
     --out <path> --format csv|json [--seed N]\n  chronos list"
        .to_string()
}

fn run_command(args: &[String]) -> Result<bool, String> {
    let mut experiment: Option<String> = None;
    let mut config_path: Option<PathBuf> = None;
    let mut out: Option<PathBuf> = None;
    let mut format = ReportFormat::Csv;
    let mut seed_flag: Option<u64> = None;
    let mut overrides: Vec<(String, String)> = Vec::new();

    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(key) = arg.strip_prefix("--") else {
            return Err(format!("unexpected argument '{arg}'\n{}", usage()));
        };
        let value = it
            .next()
            .ok_or_else(|| format!("flag --{key} needs a value\n{}", usage()))?
            .clone();
        match key {
            "experiment" => experiment = Some(value),
            "config" => config_path = Some(PathBuf::from(value)),
            "out" => out = Some(PathBuf::from(value)),
            "format" => {
                format = ReportFormat::from_name(&value).map_err(|e| e.to_string())?;
            }
            "seed" => {
                seed_flag = Some(
                    value
                        .parse()
                        .map_err(|e| format!("bad --seed '{value}': {e}"))?,
                );
            }
            other => overrides.push((other.to_string(), value)),
        }
    }

    // Config file first, then environment, then command line.
    let mut file_pairs: Vec<(String, String)> = Vec::new();
    if let Some(path) = &config_path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        file_pairs = experiments::parse_config_file(&text).map_err(|e| e.to_string())?;
    }
    if experiment.is_none() {
        if let Some((_, v)) = file_pairs.iter().find(|(k, _)| k == "experiment") {
            experiment = Some(v.clone());
        }
    }
    let experiment = experiment.ok_or_else(|| format!("missing --experiment\n{}", usage()))?;
    let kind = ExperimentKind::from_name(&experiment).map_err(|e| e.to_string())?;
    let mut config = ExperimentConfig::new(kind);

    let parse_f64 = |k: &str, v: &str| -> Result<f64, String> {
        v.parse::<f64>()
            .map_err(|e| format!("key '{k}': bad number '{v}': {e}"))
    };
    for (k, v) in &file_pairs {
        match k.as_str() {
            "experiment" => {}
            "seed" => {
                config.seed = v.parse().map_err(|e| format!("bad seed '{v}': {e}"))?;
            }
            _ => config.set(k, parse_f64(k, v)?).map_err(|e| e.to_string())?,
        }
    }
    if let Ok(env_seed) = std::env::var("CHRONOS_SEED") {
        config.seed = env_seed
            .parse()
            .map_err(|e| format!("bad CHRONOS_SEED '{env_seed}': {e}"))?;
    }
    if let Some(seed) = seed_flag {
        config.seed = seed;
    }
    for (k, v) in &overrides {
        config.set(k, parse_f64(k, v)?).map_err(|e| e.to_string())?;
    }

    let report = experiments::run(&config).map_err(|e| e.to_string())?;
    for check in &report.checks {
        println!(
            "{:<44} {:>24.16e}  (tol {:.3e})  {}",
            check.metric,
            check.value,
            check.tolerance,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    println!(
        "{}: {} in {:.0} ms",
        report.experiment,
        if report.passed {
            "all checks passed"
        } else {
            "CHECKS FAILED"
        },
        report.wall_ms
    );

    if let Some(path) = out {
        emit(&report, format, &path).map_err(|e| e.to_string())?;
        println!("report written to {}", path.display());
    }
    Ok(report.passed)
}

fn list_command() {
    println!("experiments:");
    for kind in ExperimentKind::ALL {
        println!("\n  {}  -  {}", kind.name(), kind.description());
        for (name, default, doc) in kind.schema() {
            println!("      --{name:<12} {doc} (default {default})");
        }
    }
    println!(
        "\nseed: --seed N or CHRONOS_SEED (default {})",
        experiments::DEFAULT_SEED
    );
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("run") => match run_command(&args[1..]) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        },
        Some("list") => {
            list_command();
            ExitCode::SUCCESS
        }
        _ => {
            eprintln!("{}", usage());
            ExitCode::from(2)
        }
    }
}
