//! Sweep orchestration: deterministic cells, result tables, environment
//! validation, and plot-ready data extraction.
//!
//! A *cell* is one `(n_qubits, γ, realization)` triple. Its Hamiltonian seed
//! derives from the master seed and the cell coordinates alone, so results
//! never depend on worker count or execution order; the only parallelism is
//! *across* cells, and rows are assembled in canonical order (qubits
//! ascending, then `gamma_index`, then realization) after the parallel map.
//!
//! Every cell runs the full diagnostic pipeline:
//!
//! 1. build the Hamiltonian ([`crate::ensembles`]),
//! 2. diagonalize once and take the spectral gap ratio,
//! 3. fidelity series on the fine grid, time-integrated,
//! 4. GHZ-seeded Lanczos to full dimension, health-gated
//!    ([`validate_basis`]), then the spread-complexity series on the coarse
//!    grid, time-integrated.
//!
//! A cell whose basis fails the health gate is recorded in `failures.csv`
//! and excluded from `results.csv` and the bootstrap summaries; the sweep
//! itself keeps going.

pub mod config;

mod artifacts;
mod plot;

pub use artifacts::{
    cell_file_name, coeffs_file_name, read_coeffs_csv, read_modes_csv, read_results_csv,
    read_series_csv, read_summary_csv, series_file_name, ModeRow, FAILURES_HEADER, MODES_HEADER,
    RESULTS_HEADER, SUMMARY_HEADER,
};
pub use plot::{
    emit_plot_data, PlotDataOutcome, FIG1_HEADER, FIG2_HEADER, FIG3_HEADER, FIG4_HEADER,
};

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{
    build_rp, ensemble_member, sample_goe, EnsembleMode, PerturbationSpec, Regime,
};
use crate::error::{Error, Result};
use crate::krylov::{
    lanczos, lanczos_with, validate_basis, ComplexityMode, LanczosOptions, DEFAULT_BREAKDOWN_TOL,
};
use crate::linalg;
use crate::observables::{
    fidelity_series_from, integrate, spread_series_from, SeriesMeta, TimeSeries,
};
use crate::seeds::{self, stream};
use crate::spectral::{diagonalize, gap_ratio, Evolution, GOE_MEAN_GAP_RATIO};
use crate::states::{ghz_state, QubitCount, StateVector};
use crate::stats::bootstrap_ci;

use config::ExperimentConfig;

/// Krylov-basis orthonormality a cell must keep to count as healthy.
pub const CELL_ORTH_TOL: f64 = 1e-8;
/// Largest three-term recursion residual a healthy cell may show.
pub const CELL_RESIDUAL_TOL: f64 = 1e-6;
/// Largest `eig(T)` vs `eig(H)` deviation a healthy full-dimension cell may
/// show.
pub const CELL_SPECTRUM_TOL: f64 = 1e-7;

/// All scalar diagnostics of one completed cell — one `results.csv` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    /// System size in qubits.
    pub n_qubits: u32,
    /// Deformation exponent.
    pub gamma: f64,
    /// Position of `gamma` in the sweep's gamma grid.
    pub gamma_index: usize,
    /// Realization index within the `(n, γ)` ensemble.
    pub realization: u32,
    /// Seed the Hamiltonian was actually built from (derived).
    pub seed: u64,
    /// Phase classification of `gamma`.
    pub regime: Regime,
    /// Mean consecutive-gap ratio of the spectrum.
    pub gap_ratio: f64,
    /// Krylov dimension reached (equals the Hilbert dimension unless the
    /// recursion hit an invariant subspace).
    pub krylov_k: usize,
    /// `max |⟨K_i|K_j⟩ - δ_ij|` of the basis.
    pub orthonormality_defect: f64,
    /// Largest three-term recursion residual.
    pub recursion_residual: f64,
    /// `max |eig(T) - eig(H)|`; NaN when `krylov_k` < dimension (the check
    /// only exists at full dimension).
    pub spectrum_defect: f64,
    /// Time-integrated fidelity.
    pub fidelity_integral: f64,
    /// Matching time average of fidelity.
    pub fidelity_mean: f64,
    /// Time-integrated spread complexity.
    pub spread_integral: f64,
    /// Matching time average of spread complexity.
    pub spread_mean: f64,
}

/// A cell that failed its run — one `failures.csv` row.
#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    /// System size in qubits.
    pub n_qubits: u32,
    /// Deformation exponent.
    pub gamma: f64,
    /// Position of `gamma` in the sweep's gamma grid.
    pub gamma_index: usize,
    /// Realization index.
    pub realization: u32,
    /// Seed the Hamiltonian would have been built from.
    pub seed: u64,
    /// Stable error code ([`Error::code`]).
    pub code: &'static str,
    /// Human-readable message.
    pub message: String,
}

/// One `summary.csv` row: a bootstrap interval for one observable at one
/// `(n, γ)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    /// System size in qubits.
    pub n_qubits: u32,
    /// Deformation exponent.
    pub gamma: f64,
    /// Which observable the interval describes.
    pub observable: String,
    /// Number of realizations that fed the interval.
    pub n_samples: usize,
    /// Mean across realizations.
    pub mean: f64,
    /// Lower interval endpoint.
    pub ci_low: f64,
    /// Upper interval endpoint.
    pub ci_high: f64,
    /// Confidence level.
    pub level: f64,
    /// Bootstrap resamples used.
    pub resamples: usize,
    /// True when the interval collapsed by construction (single sample).
    pub degenerate: bool,
}

/// Tallies of a finished sweep.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Number of planned cells.
    pub cells_total: usize,
    /// Cells computed in this invocation.
    pub cells_completed: usize,
    /// Cells that failed (see `failures.csv`).
    pub cells_failed: usize,
    /// Cells loaded from a previous run via `--resume`.
    pub cells_skipped: usize,
    /// Where the artifacts went.
    pub out_dir: PathBuf,
    /// The failures, in canonical cell order.
    pub failures: Vec<CellFailure>,
}

#[derive(Debug, Clone, Copy)]
struct CellSpec {
    n_qubits: u32,
    gamma: f64,
    gamma_index: usize,
    realization: u32,
}

/// Seed a cell's Hamiltonian is built from, given the sweep master seed.
///
/// Fresh-draw cells key on the full coordinates; perturbed-operator cells
/// derive member seeds from the `(n, γ)` base seed via the ensemble stream.
pub fn cell_hamiltonian_seed(
    config: &ExperimentConfig,
    spec_n: u32,
    gamma_index: usize,
    realization: u32,
) -> u64 {
    match config.ensemble.mode {
        EnsembleMode::FreshDraw => seeds::derive(
            config.master_seed,
            &[
                stream::CELL,
                spec_n as u64,
                gamma_index as u64,
                realization as u64,
            ],
        ),
        EnsembleMode::PerturbedOperator => {
            let base = seeds::derive(
                config.master_seed,
                &[stream::CELL, spec_n as u64, gamma_index as u64],
            );
            seeds::derive(base, &[stream::ENSEMBLE_MEMBER, realization as u64])
        }
    }
}

fn build_cell_hamiltonian(
    config: &ExperimentConfig,
    spec: &CellSpec,
) -> Result<crate::ensembles::RpHamiltonian> {
    match config.ensemble.mode {
        EnsembleMode::FreshDraw => {
            let seed = seeds::derive(
                config.master_seed,
                &[
                    stream::CELL,
                    spec.n_qubits as u64,
                    spec.gamma_index as u64,
                    spec.realization as u64,
                ],
            );
            build_rp(spec.n_qubits, spec.gamma, seed)
        }
        EnsembleMode::PerturbedOperator => {
            let base_seed = seeds::derive(
                config.master_seed,
                &[stream::CELL, spec.n_qubits as u64, spec.gamma_index as u64],
            );
            let base = build_rp(spec.n_qubits, spec.gamma, base_seed)?;
            let pspec = PerturbationSpec {
                epsilon: config.ensemble.epsilon,
                count: config.realizations,
                mode: EnsembleMode::PerturbedOperator,
            };
            ensemble_member(&base, &pspec, base_seed, spec.realization)
        }
    }
}

/// Spread-complexity integral of one cell under one scalarization mode —
/// one `modes.csv` row (together with the cell coordinates).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeIntegral {
    /// The scalarization the series was integrated under.
    pub mode: ComplexityMode,
    /// Time-integrated spread complexity.
    pub spread_integral: f64,
    /// Matching time average.
    pub spread_mean: f64,
}

/// The per-cell time series and Lanczos coefficients, for full-series dumps.
struct CellArtifacts {
    fidelity: TimeSeries,
    spread: TimeSeries,
    a: Vec<f64>,
    b: Vec<f64>,
    /// Per-mode spread integrals; `Some` exactly when `emit_all_modes` is on.
    modes: Option<Vec<ModeIntegral>>,
}

fn run_cell(config: &ExperimentConfig, spec: &CellSpec) -> Result<(CellRecord, CellArtifacts)> {
    let fidelity_grid = config.fidelity_grid.to_grid()?;
    let spread_grid = config.spread_grid.to_grid()?;

    let h = build_cell_hamiltonian(config, spec)?;
    let psi0 = ghz_state(QubitCount::new(spec.n_qubits)?);
    let dim = h.dim();

    let sd = diagonalize(h.matrix())?;
    // A 2-level spectrum has a single gap and no ratio; report NaN rather
    // than refusing the (otherwise well-defined) N = 1 pipeline.
    let r = if dim < 3 { f64::NAN } else { gap_ratio(&sd)? };

    let meta = SeriesMeta {
        gamma: Some(spec.gamma),
        n_qubits: Some(spec.n_qubits),
        seed: Some(h.seed()),
        realization: Some(spec.realization),
    };

    let fidelity = fidelity_series_from(&sd, &psi0, &fidelity_grid)?.with_meta(meta);

    let (basis, _) = lanczos(h.matrix(), &psi0, dim, DEFAULT_BREAKDOWN_TOL)?;
    let health = validate_basis(&basis, h.matrix())?;
    if !health.within(CELL_ORTH_TOL, CELL_RESIDUAL_TOL, CELL_SPECTRUM_TOL) {
        return Err(Error::Numerical(format!(
            "Krylov basis failed its health gate: orthonormality {:.3e} (tol {CELL_ORTH_TOL:e}), \
             recursion residual {:.3e} (tol {CELL_RESIDUAL_TOL:e}), spectrum defect {:?} \
             (tol {CELL_SPECTRUM_TOL:e})",
            health.orthonormality_defect, health.recursion_residual, health.spectrum_defect
        )));
    }

    let spread = spread_series_from(&sd, &basis, &psi0, &spread_grid, config.complexity_mode)?
        .with_meta(meta);

    let f_int = integrate(&fidelity, config.integration)?;
    let s_int = integrate(&spread, config.integration)?;

    let modes = if config.emit_all_modes {
        let mut per_mode = Vec::with_capacity(ComplexityMode::ALL.len());
        for mode in ComplexityMode::ALL {
            let integ = if mode == config.complexity_mode {
                s_int
            } else {
                let series = spread_series_from(&sd, &basis, &psi0, &spread_grid, mode)?;
                integrate(&series, config.integration)?
            };
            per_mode.push(ModeIntegral {
                mode,
                spread_integral: integ.value,
                spread_mean: integ.time_average,
            });
        }
        Some(per_mode)
    } else {
        None
    };

    let record = CellRecord {
        n_qubits: spec.n_qubits,
        gamma: spec.gamma,
        gamma_index: spec.gamma_index,
        realization: spec.realization,
        seed: h.seed(),
        regime: h.regime(),
        gap_ratio: r,
        krylov_k: basis.k(),
        orthonormality_defect: health.orthonormality_defect,
        recursion_residual: health.recursion_residual,
        spectrum_defect: health.spectrum_defect.unwrap_or(f64::NAN),
        fidelity_integral: f_int.value,
        fidelity_mean: f_int.time_average,
        spread_integral: s_int.value,
        spread_mean: s_int.time_average,
    };
    let artifacts = CellArtifacts {
        fidelity,
        spread,
        a: basis.a().to_vec(),
        b: basis.b().to_vec(),
        modes,
    };
    Ok((record, artifacts))
}

/// Run one cell outside a sweep.
///
/// `gamma` is looked up in `config.gammas` to resolve the `gamma_index` that
/// keys the seed derivation; a value not on the grid uses index 0, so ad-hoc
/// points are still deterministic. A cell run this way reproduces the
/// corresponding sweep cell bit for bit.
pub fn run_single(
    config: &ExperimentConfig,
    n_qubits: u32,
    gamma: f64,
    realization: u32,
) -> Result<CellRecord> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::Precondition(format!(
            "gamma must be finite and ≥ 0, got {gamma}"
        )));
    }
    if !(1..=crate::states::MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::Precondition(format!(
            "n_qubits must lie in 1..={}, got {n_qubits}",
            crate::states::MAX_QUBITS
        )));
    }
    let gamma_index = config.gammas.iter().position(|&g| g == gamma).unwrap_or(0);
    let spec = CellSpec {
        n_qubits,
        gamma,
        gamma_index,
        realization,
    };
    run_cell(config, &spec).map(|(record, _)| record)
}

enum CellOutcome {
    Completed(CellRecord, Option<Vec<ModeIntegral>>),
    Skipped(CellRecord, Option<Vec<ModeIntegral>>),
    Failed(CellFailure),
}

fn process_cell(
    config: &ExperimentConfig,
    spec: &CellSpec,
    cells_dir: &Path,
    series_dir: &Path,
    coeffs_dir: &Path,
    resume: bool,
) -> CellOutcome {
    let cell_path = cells_dir.join(artifacts::cell_file_name(
        spec.n_qubits,
        spec.gamma_index,
        spec.realization,
    ));
    let expected_seed =
        cell_hamiltonian_seed(config, spec.n_qubits, spec.gamma_index, spec.realization);

    if resume {
        if let Ok(Some((record, modes))) = artifacts::read_cell_toml(&cell_path) {
            let matches = record.n_qubits == spec.n_qubits
                && record.gamma == spec.gamma
                && record.gamma_index == spec.gamma_index
                && record.realization == spec.realization
                && record.seed == expected_seed
                // A cached cell from a run without per-mode integrals cannot
                // serve a sweep that needs them.
                && (!config.emit_all_modes || modes.is_some());
            if matches {
                return CellOutcome::Skipped(record, modes);
            }
            // Stale record from a different configuration: recompute.
        }
    }

    let failure = |code: &'static str, message: String| {
        CellOutcome::Failed(CellFailure {
            n_qubits: spec.n_qubits,
            gamma: spec.gamma,
            gamma_index: spec.gamma_index,
            realization: spec.realization,
            seed: expected_seed,
            code,
            message,
        })
    };

    let (record, cell_artifacts) = match run_cell(config, spec) {
        Ok(pair) => pair,
        Err(e) => return failure(e.code(), e.to_string()),
    };

    if config.emit_full_series {
        let writes = [
            (
                series_dir.join(artifacts::series_file_name(
                    "fidelity",
                    spec.n_qubits,
                    spec.gamma_index,
                    spec.realization,
                )),
                artifacts::render_series_csv(&cell_artifacts.fidelity),
            ),
            (
                series_dir.join(artifacts::series_file_name(
                    "spread",
                    spec.n_qubits,
                    spec.gamma_index,
                    spec.realization,
                )),
                artifacts::render_series_csv(&cell_artifacts.spread),
            ),
            (
                coeffs_dir.join(artifacts::coeffs_file_name(
                    spec.n_qubits,
                    spec.gamma_index,
                    spec.realization,
                )),
                artifacts::render_coeffs_csv(&cell_artifacts.a, &cell_artifacts.b),
            ),
        ];
        for (path, text) in writes {
            if let Err(e) = artifacts::atomic_write(&path, text.as_bytes()) {
                return failure(e.code(), format!("writing {}: {e}", path.display()));
            }
        }
    }

    // The cell file is written last: its presence certifies that the cell
    // and all of its artifacts are durable, which is what --resume trusts.
    if let Err(e) = artifacts::write_cell_toml(&cell_path, &record, cell_artifacts.modes.as_deref())
    {
        return failure(e.code(), format!("writing {}: {e}", cell_path.display()));
    }
    CellOutcome::Completed(record, cell_artifacts.modes)
}

/// Observables summarized per `(n, γ)` point, with their stable stream
/// indices for bootstrap seed derivation.
const SUMMARY_OBSERVABLES: [(&str, u64); 2] = [("fidelity_integral", 0), ("spread_integral", 1)];

fn summarize(config: &ExperimentConfig, records: &[CellRecord]) -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    for &n in &config.qubit_counts {
        for (gidx, &gamma) in config.gammas.iter().enumerate() {
            let group: Vec<&CellRecord> = records
                .iter()
                .filter(|r| r.n_qubits == n && r.gamma_index == gidx)
                .collect();
            if group.is_empty() {
                continue; // every realization failed; failures.csv tells why
            }
            for (observable, obs_stream) in SUMMARY_OBSERVABLES {
                let samples: Vec<f64> = group
                    .iter()
                    .map(|r| match observable {
                        "fidelity_integral" => r.fidelity_integral,
                        "spread_integral" => r.spread_integral,
                        _ => unreachable!("fixed observable list"),
                    })
                    .collect();
                let seed = seeds::derive(
                    config.master_seed,
                    &[stream::BOOTSTRAP, n as u64, gidx as u64, obs_stream],
                );
                let ci = bootstrap_ci(
                    &samples,
                    config.bootstrap.resamples,
                    config.bootstrap.level,
                    seed,
                )?;
                rows.push(SummaryRow {
                    n_qubits: n,
                    gamma,
                    observable: observable.to_string(),
                    n_samples: samples.len(),
                    mean: ci.mean,
                    ci_low: ci.ci_low,
                    ci_high: ci.ci_high,
                    level: ci.level,
                    resamples: ci.resamples,
                    degenerate: ci.degenerate,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct Manifest<'a> {
    created_epoch_s: u64,
    finished_epoch_s: u64,
    crate_version: &'a str,
    workers: usize,
    resume: bool,
    cells_total: usize,
    cells_completed: usize,
    cells_failed: usize,
    cells_skipped: usize,
    config: &'a ExperimentConfig,
}

fn epoch_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Run a full sweep into `out_dir`.
///
/// `workers` caps the rayon pool (`None` uses the library default); results
/// are identical for any worker count. With `resume`, cells whose per-cell
/// files already exist (and match the configuration) are loaded instead of
/// recomputed.
pub fn run_sweep(
    config: &ExperimentConfig,
    out_dir: &Path,
    workers: Option<usize>,
    resume: bool,
) -> Result<SweepOutcome> {
    config.validate()?;
    let created = epoch_seconds();

    let cells_dir = out_dir.join("cells");
    let series_dir = out_dir.join("series");
    let coeffs_dir = out_dir.join("coeffs");
    std::fs::create_dir_all(&cells_dir)?;
    if config.emit_full_series {
        std::fs::create_dir_all(&series_dir)?;
        std::fs::create_dir_all(&coeffs_dir)?;
    }

    let mut specs = Vec::new();
    for &n in &config.qubit_counts {
        for (gidx, &gamma) in config.gammas.iter().enumerate() {
            for r in 0..config.realizations {
                specs.push(CellSpec {
                    n_qubits: n,
                    gamma,
                    gamma_index: gidx,
                    realization: r,
                });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot build worker pool: {e}")))?;
    let outcomes: Vec<CellOutcome> = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| process_cell(config, spec, &cells_dir, &series_dir, &coeffs_dir, resume))
            .collect()
    });

    let mut records = Vec::new();
    let mut mode_rows = Vec::new();
    let mut failures = Vec::new();
    let mut completed = 0;
    let mut skipped = 0;
    for outcome in outcomes {
        let (record, modes) = match outcome {
            CellOutcome::Completed(r, m) => {
                completed += 1;
                (r, m)
            }
            CellOutcome::Skipped(r, m) => {
                skipped += 1;
                (r, m)
            }
            CellOutcome::Failed(f) => {
                failures.push(f);
                continue;
            }
        };
        if config.emit_all_modes {
            for mode in modes.iter().flatten() {
                mode_rows.push((record.clone(), mode.clone()));
            }
        }
        records.push(record);
    }

    artifacts::atomic_write(
        &out_dir.join("results.csv"),
        artifacts::render_results_csv(&records).as_bytes(),
    )?;
    artifacts::atomic_write(
        &out_dir.join("failures.csv"),
        artifacts::render_failures_csv(&failures).as_bytes(),
    )?;
    if config.emit_all_modes {
        artifacts::atomic_write(
            &out_dir.join("modes.csv"),
            artifacts::render_modes_csv(&mode_rows).as_bytes(),
        )?;
    }
    let summary = summarize(config, &records)?;
    artifacts::atomic_write(
        &out_dir.join("summary.csv"),
        artifacts::render_summary_csv(&summary).as_bytes(),
    )?;
    // The effective configuration is echoed next to the data so a result
    // directory is self-describing and can be re-run or resumed verbatim.
    artifacts::atomic_write(
        &out_dir.join("config.toml"),
        config.to_toml_string()?.as_bytes(),
    )?;

    let manifest = Manifest {
        created_epoch_s: created,
        finished_epoch_s: epoch_seconds(),
        crate_version: env!("CARGO_PKG_VERSION"),
        workers: workers.unwrap_or(0),
        resume,
        cells_total: specs.len(),
        cells_completed: completed,
        cells_failed: failures.len(),
        cells_skipped: skipped,
        config,
    };
    let manifest_text = toml::to_string_pretty(&manifest)
        .map_err(|e| Error::Numerical(format!("manifest serialize error: {e}")))?;
    artifacts::atomic_write(&out_dir.join("manifest.toml"), manifest_text.as_bytes())?;

    Ok(SweepOutcome {
        cells_total: specs.len(),
        cells_completed: completed,
        cells_failed: failures.len(),
        cells_skipped: skipped,
        out_dir: out_dir.to_path_buf(),
        failures,
    })
}

/// One line of an environment validation report.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    /// Matrix dimension the check ran at.
    pub dim: usize,
    /// Stable check name.
    pub check: &'static str,
    /// Measured value (a defect or deviation; smaller is better).
    pub observed: f64,
    /// Largest acceptable value.
    pub threshold: f64,
    /// Whether the check passed (vacuously true when skipped).
    pub passed: bool,
    /// True when the check does not apply at this dimension.
    pub skipped: bool,
}

/// Outcome of [`run_validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// All rows, grouped by dimension in input order.
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    /// True when every applicable check passed.
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed || r.skipped)
    }
}

/// Internal seed namespace for validation draws (arbitrary constant).
const VALIDATE_SEED: u64 = 0x5EED_CAFE;

fn random_complex_state(dim: usize, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut amps = DVector::from_fn(dim, |_, _| {
        Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
    });
    let norm = amps.norm();
    amps /= Complex64::new(norm, 0.0);
    StateVector::try_new(amps)
}

/// Self-check the numerical environment at the given matrix dimensions.
///
/// Runs the GOE sampler, dense eigensolver, unitary evolution, and
/// full-reorthogonalization Lanczos on deterministic draws, and compares
/// pooled gap-ratio statistics against the Gaussian-orthogonal reference
/// (dimensions ≥ 32 only; below that the estimator is too noisy and the row
/// is reported as skipped).
pub fn run_validate(dims: &[usize]) -> Result<ValidationReport> {
    run_validate_with(dims, &LanczosOptions::default())
}

/// [`run_validate`] with explicit Lanczos options — a fault-injection hook
/// for tests that want to watch the checks fail.
#[doc(hidden)]
pub fn run_validate_with(
    dims: &[usize],
    lanczos_options: &LanczosOptions,
) -> Result<ValidationReport> {
    // An empty dimension list is a valid request for an empty report.
    let mut rows = Vec::new();
    for &dim in dims {
        if dim < 2 {
            return Err(Error::Precondition(format!(
                "validation dimensions must be ≥ 2, got {dim}"
            )));
        }
        let goe = sample_goe(dim, seeds::derive(VALIDATE_SEED, &[dim as u64, 0]))?;
        let h = goe.into_entries();

        rows.push(ValidationRow {
            dim,
            check: "goe_symmetry",
            observed: linalg::max_asymmetry(&h),
            threshold: 0.0,
            passed: linalg::max_asymmetry(&h) <= 0.0,
            skipped: false,
        });

        let sd = diagonalize(&h)?;
        let v = sd.eigenvectors();
        let mut gram = v.transpose() * v;
        for i in 0..dim {
            gram[(i, i)] -= 1.0;
        }
        let orth = linalg::max_abs(&gram);
        rows.push(ValidationRow {
            dim,
            check: "eigen_orthonormality",
            observed: orth,
            threshold: 1e-10,
            passed: orth <= 1e-10,
            skipped: false,
        });

        let recon = v * nalgebra::DMatrix::from_diagonal(sd.eigenvalues()) * v.transpose();
        let scale = sd.spectral_range().max(1.0);
        let recon_defect = linalg::max_abs(&(recon - &h)) / scale;
        rows.push(ValidationRow {
            dim,
            check: "eigen_reconstruction",
            observed: recon_defect,
            threshold: 1e-8,
            passed: recon_defect <= 1e-8,
            skipped: false,
        });

        let psi = random_complex_state(dim, seeds::derive(VALIDATE_SEED, &[dim as u64, 1]))?;
        let ev = Evolution::new(&sd, &psi)?;
        let mut drift = 0.0f64;
        for &t in &[0.7, 3.3, 11.1] {
            match ev.state_at(t) {
                Ok(state) => drift = drift.max((state.norm() - 1.0).abs()),
                Err(_) => drift = f64::INFINITY,
            }
        }
        rows.push(ValidationRow {
            dim,
            check: "evolution_unitarity",
            observed: drift,
            threshold: 1e-10,
            passed: drift <= 1e-10,
            skipped: false,
        });

        let (basis, _) = lanczos_with(&h, &psi, dim, lanczos_options)?;
        let health = validate_basis(&basis, &h)?;
        rows.push(ValidationRow {
            dim,
            check: "lanczos_orthonormality",
            observed: health.orthonormality_defect,
            threshold: 1e-10,
            passed: health.orthonormality_defect <= 1e-10,
            skipped: false,
        });
        rows.push(ValidationRow {
            dim,
            check: "lanczos_recursion",
            observed: health.recursion_residual,
            threshold: CELL_RESIDUAL_TOL,
            passed: health.recursion_residual <= CELL_RESIDUAL_TOL,
            skipped: false,
        });
        let (spec_observed, spec_passed, spec_skipped) = match health.spectrum_defect {
            Some(d) => (d, d <= CELL_SPECTRUM_TOL, false),
            // Early breakdown of a random-seed GOE chain would itself be
            // suspicious, so an absent check is reported as a failure.
            None => (f64::NAN, false, false),
        };
        rows.push(ValidationRow {
            dim,
            check: "tridiagonal_spectrum",
            observed: spec_observed,
            threshold: CELL_SPECTRUM_TOL,
            passed: spec_passed,
            skipped: spec_skipped,
        });

        if dim >= 32 {
            let mut acc = 0.0;
            let pool = 8;
            for s in 0..pool {
                let g = sample_goe(dim, seeds::derive(VALIDATE_SEED, &[dim as u64, 2 + s]))?;
                acc += gap_ratio(&diagonalize(g.entries())?)?;
            }
            let deviation = (acc / pool as f64 - GOE_MEAN_GAP_RATIO).abs();
            rows.push(ValidationRow {
                dim,
                check: "goe_gap_ratio_deviation",
                observed: deviation,
                threshold: 0.06,
                passed: deviation <= 0.06,
                skipped: false,
            });
        } else {
            rows.push(ValidationRow {
                dim,
                check: "goe_gap_ratio_deviation",
                observed: f64::NAN,
                threshold: 0.06,
                passed: true,
                skipped: true,
            });
        }
    }
    Ok(ValidationReport { rows })
}
