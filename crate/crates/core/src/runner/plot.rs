//! Plot-ready tables distilled from sweep artifacts.
//!
//! Four tables cover the standard figures:
//!
//! | file | content | needs |
//! |------|---------|-------|
//! | `fig1_fidelity.csv` | time-integrated fidelity vs γ with intervals | `summary.csv` |
//! | `fig2_spread.csv` | time-integrated spread complexity vs γ with intervals | `summary.csv` |
//! | `fig3_early_spread.csv` | realization-averaged spread series per `(n, γ)` | `series/` dumps |
//! | `fig4_bn.csv` | realization-averaged Lanczos couplings `b_n` per `(n, γ)` | `coeffs/` dumps |
//!
//! The first two always succeed against a finished sweep. The last two need
//! the per-cell dumps that only exist when the sweep ran with
//! `emit_full_series = true`; without them this module still writes the
//! first two tables, then reports what is missing.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::artifacts::{
    coeffs_file_name, read_coeffs_csv, read_results_csv, read_series_csv, read_summary_csv,
    series_file_name, write_table,
};
use super::CellRecord;

/// Header of `fig1_fidelity.csv`.
pub const FIG1_HEADER: &str = "n_qubits,gamma,mean,ci_low,ci_high";
/// Header of `fig2_spread.csv`.
pub const FIG2_HEADER: &str = "n_qubits,gamma,mean,ci_low,ci_high";
/// Header of `fig3_early_spread.csv`.
pub const FIG3_HEADER: &str = "n_qubits,gamma,t,spread_mean";
/// Header of `fig4_bn.csv`.
pub const FIG4_HEADER: &str = "n_qubits,gamma,n,b_mean,realizations";

/// What [`emit_plot_data`] wrote.
#[derive(Debug, Clone)]
pub struct PlotDataOutcome {
    /// Paths of the tables written, in figure order.
    pub files: Vec<PathBuf>,
}

/// Completed cells grouped by `(n, γ)` in canonical order.
fn group_cells(records: &[CellRecord]) -> Vec<((u32, usize), f64, Vec<u32>)> {
    let mut groups: Vec<((u32, usize), f64, Vec<u32>)> = Vec::new();
    for r in records {
        let key = (r.n_qubits, r.gamma_index);
        match groups.last_mut() {
            Some((k, _, rs)) if *k == key => rs.push(r.realization),
            _ => groups.push((key, r.gamma, vec![r.realization])),
        }
    }
    groups
}

/// Distill the four plot tables from a sweep directory into `out_dir`.
///
/// `results_dir` must contain `results.csv` and `summary.csv`. The series
/// and coefficient tables additionally need the `series/` and `coeffs/`
/// dumps; when those are absent this writes the two summary-level tables
/// and then fails with a [`Error::MissingArtifact`] explaining that the
/// sweep must be re-run with `emit_full_series = true`.
pub fn emit_plot_data(results_dir: &Path, out_dir: &Path) -> Result<PlotDataOutcome> {
    let summary = read_summary_csv(&results_dir.join("summary.csv"))?;
    let records = read_results_csv(&results_dir.join("results.csv"))?;
    std::fs::create_dir_all(out_dir)?;

    let mut files = Vec::new();
    for (observable, header, name) in [
        ("fidelity_integral", FIG1_HEADER, "fig1_fidelity.csv"),
        ("spread_integral", FIG2_HEADER, "fig2_spread.csv"),
    ] {
        let rows: Vec<String> = summary
            .iter()
            .filter(|s| s.observable == observable)
            .map(|s| {
                format!(
                    "{},{},{},{},{}",
                    s.n_qubits, s.gamma, s.mean, s.ci_low, s.ci_high
                )
            })
            .collect();
        files.push(write_table(&out_dir.join(name), header, &rows)?);
    }

    let groups = group_cells(&records);
    let series_dir = results_dir.join("series");
    let coeffs_dir = results_dir.join("coeffs");

    let missing = |path: &Path| {
        Error::MissingArtifact(format!(
            "{} is missing; the summary-level tables (fig1, fig2) were written, but the \
             series/coefficient tables need per-cell dumps — re-run the sweep with \
             emit_full_series = true",
            path.display()
        ))
    };

    // fig3: realization-averaged spread series.
    let mut fig3_rows = Vec::new();
    for ((n, gidx), gamma, realizations) in &groups {
        let mut times: Vec<f64> = Vec::new();
        let mut sums: Vec<f64> = Vec::new();
        for &r in realizations {
            let path = series_dir.join(series_file_name("spread", *n, *gidx, r));
            if !path.exists() {
                return Err(missing(&path));
            }
            let points = read_series_csv(&path)?;
            if sums.is_empty() {
                times = points.iter().map(|(t, _)| *t).collect();
                sums = vec![0.0; points.len()];
            } else if points.len() != sums.len() {
                return Err(Error::Precondition(format!(
                    "{}: series length {} disagrees with its siblings ({})",
                    path.display(),
                    points.len(),
                    sums.len()
                )));
            }
            for (i, (_, v)) in points.iter().enumerate() {
                sums[i] += v;
            }
        }
        let count = realizations.len() as f64;
        for (t, sum) in times.iter().zip(sums.iter()) {
            fig3_rows.push(format!("{n},{gamma},{t},{}", sum / count));
        }
    }
    files.push(write_table(
        &out_dir.join("fig3_early_spread.csv"),
        FIG3_HEADER,
        &fig3_rows,
    )?);

    // fig4: realization-averaged Lanczos couplings b_n (n ≥ 1; b_0 = 0 is
    // conventional and carries no information).
    let mut fig4_rows = Vec::new();
    for ((n, gidx), gamma, realizations) in &groups {
        let mut acc: Vec<(f64, usize)> = Vec::new();
        for &r in realizations {
            let path = coeffs_dir.join(coeffs_file_name(*n, *gidx, r));
            if !path.exists() {
                return Err(missing(&path));
            }
            for (idx, _a, b) in read_coeffs_csv(&path)? {
                if idx == 0 {
                    continue;
                }
                if acc.len() < idx {
                    acc.resize(idx, (0.0, 0));
                }
                acc[idx - 1].0 += b;
                acc[idx - 1].1 += 1;
            }
        }
        for (i, (sum, count)) in acc.iter().enumerate() {
            fig4_rows.push(format!(
                "{n},{gamma},{},{},{count}",
                i + 1,
                sum / *count as f64
            ));
        }
    }
    files.push(write_table(
        &out_dir.join("fig4_bn.csv"),
        FIG4_HEADER,
        &fig4_rows,
    )?);

    Ok(PlotDataOutcome { files })
}
