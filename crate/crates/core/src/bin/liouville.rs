//! Batch front-end for the solver pipeline.
//!
//! ```text
//! liouville --config cfg.json [--experiment NAME] [--out DIR] [--tol-scale F]
//! ```

use std::process::ExitCode;

use clap::Parser;

use liouville_core::experiments::{run, Experiment, RunConfig};

#[derive(Parser)]
#[command(
    name = "liouville",
    version,
    about = "Constructs and verifies blowing-up solutions of the singular Liouville problem"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: String,

    /// Override the experiment named in the config
    /// (identities | kernels | reduction_scan | continuation).
    #[arg(long)]
    experiment: Option<String>,

    /// Override the output directory.
    #[arg(long)]
    out: Option<String>,

    /// Uniformly scale all tolerances (e.g. 100 for a quick pass).
    #[arg(long)]
    tol_scale: Option<f64>,
}

fn experiment_code(e: Experiment) -> u8 {
    match e {
        Experiment::Identities => 2,
        Experiment::Kernels => 3,
        Experiment::ReductionScan => 4,
        Experiment::Continuation => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("LIOUVILLE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }

    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", cli.config);
            return ExitCode::from(1);
        }
    };
    let mut cfg = match RunConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("usage error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(name) = &cli.experiment {
        cfg.experiment = match name.as_str() {
            "identities" => Experiment::Identities,
            "kernels" => Experiment::Kernels,
            "reduction_scan" => Experiment::ReductionScan,
            "continuation" => Experiment::Continuation,
            other => {
                eprintln!("usage error: unknown experiment `{other}`");
                return ExitCode::from(1);
            }
        };
    }
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }
    if let Some(s) = cli.tol_scale {
        if !(s > 0.0) {
            eprintln!("usage error: --tol-scale must be positive");
            return ExitCode::from(1);
        }
        cfg.tolerances.tol_scale = s;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("usage error: {e}");
        return ExitCode::from(1);
    }

    match run(&cfg) {
        Ok(outcome) => {
            print_summary(&cfg, &outcome.report, outcome.ok);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(experiment_code(cfg.experiment))
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(experiment_code(cfg.experiment))
        }
    }
}

fn print_summary(cfg: &RunConfig, report: &serde_json::Value, ok: bool) {
    println!(
        "experiment {:?} | config {} | {}",
        cfg.experiment,
        cfg.hash(),
        if ok { "OK" } else { "NOT CERTIFIED" }
    );
    match cfg.experiment {
        Experiment::Identities => {
            if let Some(rows) = report["identities"].as_array() {
                println!(
                    "{:>5} {:>12} {:>14} {:>11} {:>14} {:>14}",
                    "alpha", "xi", "id1", "id2", "id3", "mass"
                );
                for r in rows {
                    println!(
                        "{:>5} {:>12} {:>14.9} {:>11.3e} {:>14.9} {:>14.9}",
                        r["alpha"],
                        format!("{}+{}i", r["xi"][0], r["xi"][1]),
                        r["id1"].as_f64().unwrap_or(f64::NAN),
                        r["id2"].as_f64().unwrap_or(f64::NAN),
                        r["id3"].as_f64().unwrap_or(f64::NAN),
                        r["quantization"].as_f64().unwrap_or(f64::NAN),
                    );
                }
            }
        }
        Experiment::Continuation => {
            if let Some(rows) = report["rows"].as_array() {
                println!(
                    "{:>12} {:>10} {:>12} {:>12} {:>12} {:>12}",
                    "lambda", "delta", "|b|", "phi_norm", "mass", "farfield"
                );
                for r in rows {
                    let b = (r["b_re"].as_f64().unwrap_or(0.0).powi(2)
                        + r["b_im"].as_f64().unwrap_or(0.0).powi(2))
                    .sqrt();
                    println!(
                        "{:>12.4e} {:>10.5} {:>12.4e} {:>12.5e} {:>12.7} {:>12.5e}",
                        r["lambda"].as_f64().unwrap_or(f64::NAN),
                        r["delta"].as_f64().unwrap_or(f64::NAN),
                        b,
                        r["phi_norm"].as_f64().unwrap_or(f64::NAN),
                        r["mass"].as_f64().unwrap_or(f64::NAN),
                        r["farfield_error"].as_f64().unwrap_or(f64::NAN),
                    );
                }
            }
            if let Some(s) = report["slopes"].as_object() {
                println!("slopes: {}", serde_json::Value::Object(s.clone()));
            }
        }
        _ => {}
    }
}
