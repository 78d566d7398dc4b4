//! `scramblab` — a command-line laboratory for quantum scrambling
//! diagnostics on deformed random-matrix ensembles.
//!
//! Subcommands:
//!
//! * `run` — one `(γ, n, realization)` cell, diagnostics printed to stdout.
//! * `sweep` — a full deterministic sweep into an output directory.
//! * `validate` — numerical environment self-checks.
//! * `plot-data` — distill plot-ready tables from a sweep directory.
//!
//! Exit codes: `0` success, `1` operational failure (failed cells, failed
//! checks, missing artifacts), `2` invalid usage or configuration.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scramblab_core::runner::{self, config::ExperimentConfig};
use scramblab_core::Error;

#[derive(Parser)]
#[command(
    name = "scramblab",
    version,
    about = "Scrambling diagnostics for deformed random-matrix ensembles",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single cell and print its diagnostics.
    Run {
        /// Deformation exponent γ (finite, ≥ 0).
        #[arg(long)]
        gamma: f64,
        /// System size in qubits (1..=12).
        #[arg(long)]
        qubits: u32,
        /// Master seed (overrides the config file's).
        #[arg(long)]
        seed: Option<u64>,
        /// Realization index within the ensemble.
        #[arg(long, default_value_t = 0)]
        realization: u32,
        /// Optional TOML configuration supplying grids and modes.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run a sweep over (qubits × γ × realizations) into a directory.
    Sweep {
        /// TOML configuration (omit to use built-in defaults).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for all artifacts.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: one per CPU).
        #[arg(long)]
        workers: Option<usize>,
        /// Reuse per-cell files from a previous run in the same directory.
        #[arg(long)]
        resume: bool,
    },
    /// Self-check the numerical environment.
    Validate {
        /// Matrix dimensions to check, comma-separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![16usize, 64, 256])]
        dims: Vec<usize>,
    },
    /// Distill plot-ready tables from a sweep directory.
    PlotData {
        /// Sweep output directory (holds results.csv and summary.csv).
        #[arg(long)]
        results: PathBuf,
        /// Directory to write the fig*.csv tables into.
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(path: Option<&PathBuf>) -> scramblab_core::Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn cmd_run(
    gamma: f64,
    qubits: u32,
    seed: Option<u64>,
    realization: u32,
    config_path: Option<&PathBuf>,
) -> scramblab_core::Result<ExitCode> {
    let mut config = load_config(config_path)?;
    if let Some(s) = seed {
        config.master_seed = s;
    }
    // `run_single` validates gamma and qubits; here they came straight off
    // the command line, so a violation is a usage error, not a runtime one.
    let record = runner::run_single(&config, qubits, gamma, realization).map_err(|e| match e {
        Error::Precondition(msg) => Error::InvalidConfig(msg),
        other => other,
    })?;
    println!(
        "cell n_qubits={} gamma={} gamma_index={} realization={}",
        record.n_qubits, record.gamma, record.gamma_index, record.realization
    );
    println!("seed                {}", record.seed);
    println!("regime              {}", record.regime.label());
    println!("hilbert dimension   {}", 1usize << record.n_qubits);
    println!("gap ratio           {:.6}", record.gap_ratio);
    println!("krylov k            {}", record.krylov_k);
    println!("orthonormality      {:.3e}", record.orthonormality_defect);
    println!("recursion residual  {:.3e}", record.recursion_residual);
    println!("spectrum defect     {:.3e}", record.spectrum_defect);
    println!(
        "fidelity integral   {:.6} (time average {:.6})",
        record.fidelity_integral, record.fidelity_mean
    );
    println!(
        "spread integral     {:.6} (time average {:.6})",
        record.spread_integral, record.spread_mean
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(
    config_path: Option<&PathBuf>,
    out: &Path,
    workers: Option<usize>,
    resume: bool,
) -> scramblab_core::Result<ExitCode> {
    let config = load_config(config_path)?;
    let outcome = runner::run_sweep(&config, out, workers, resume)?;
    println!(
        "sweep finished: {} cells ({} computed, {} resumed, {} failed)",
        outcome.cells_total, outcome.cells_completed, outcome.cells_skipped, outcome.cells_failed
    );
    println!("results  {}", outcome.out_dir.join("results.csv").display());
    println!("summary  {}", outcome.out_dir.join("summary.csv").display());
    println!(
        "manifest {}",
        outcome.out_dir.join("manifest.toml").display()
    );
    if outcome.cells_failed > 0 {
        eprintln!(
            "{} cell(s) failed; details in {}",
            outcome.cells_failed,
            outcome.out_dir.join("failures.csv").display()
        );
        for failure in outcome.failures.iter().take(5) {
            eprintln!(
                "  n={} gamma={} realization={}: [{}] {}",
                failure.n_qubits, failure.gamma, failure.realization, failure.code, failure.message
            );
        }
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(dims: &[usize]) -> scramblab_core::Result<ExitCode> {
    // Dimensions come straight off the command line, so a rejected value is
    // a usage error, not a runtime one.
    let report = runner::run_validate(dims).map_err(|e| match e {
        Error::Precondition(msg) => Error::InvalidConfig(msg),
        other => other,
    })?;
    println!(
        "{:<6} {:<26} {:>13} {:>11} {:>8}",
        "dim", "check", "observed", "threshold", "status"
    );
    for row in &report.rows {
        let status = if row.skipped {
            "skipped"
        } else if row.passed {
            "pass"
        } else {
            "FAIL"
        };
        let observed = if row.observed.is_nan() {
            "-".to_string()
        } else {
            format!("{:.3e}", row.observed)
        };
        println!(
            "{:<6} {:<26} {:>13} {:>11} {:>8}",
            row.dim,
            row.check,
            observed,
            format!("{:.0e}", row.threshold),
            status
        );
    }
    if report.all_passed() {
        println!("all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("validation failed");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_plot_data(results: &Path, out: &Path) -> scramblab_core::Result<ExitCode> {
    let outcome = runner::emit_plot_data(results, out)?;
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // Die quietly on SIGPIPE like any other pipeline-friendly tool instead
    // of panicking when a downstream reader (`head`, `less`) closes early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            gamma,
            qubits,
            seed,
            realization,
            config,
        } => cmd_run(*gamma, *qubits, *seed, *realization, config.as_ref()),
        Command::Sweep {
            config,
            out,
            workers,
            resume,
        } => cmd_sweep(config.as_ref(), out, *workers, *resume),
        Command::Validate { dims } => cmd_validate(dims),
        Command::PlotData { results, out } => cmd_plot_data(results, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::InvalidConfig(_)) {
                // Usage-class failure: the inputs were wrong, not the run.
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
