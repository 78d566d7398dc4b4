//! On-disk artifact formats for sweeps: CSV tables, per-cell resume files,
//! and series/coefficient dumps.
//!
//! Every writer is deterministic — floats use Rust's shortest round-trip
//! formatting, rows follow canonical cell order — so identical sweeps
//! produce byte-identical tables. All files go through an atomic
//! write-then-rename so interrupted runs never leave half-written
//! artifacts for `--resume` to trip over.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::ComplexityMode;
use crate::observables::TimeSeries;

use super::{CellFailure, CellRecord, ModeIntegral, SummaryRow};

/// Header of `results.csv` (one row per completed cell).
pub const RESULTS_HEADER: &str = "n_qubits,gamma,gamma_index,realization,seed,regime,\
gap_ratio,krylov_k,orthonormality_defect,recursion_residual,spectrum_defect,\
fidelity_integral,fidelity_mean,spread_integral,spread_mean";

/// Header of `failures.csv` (one row per failed cell).
pub const FAILURES_HEADER: &str = "n_qubits,gamma,gamma_index,realization,seed,error_code,message";

/// Header of `summary.csv` (one row per `(n, γ, observable)`).
pub const SUMMARY_HEADER: &str =
    "n_qubits,gamma,observable,n_samples,mean,ci_low,ci_high,level,resamples,degenerate";

/// Header of `modes.csv` (one row per cell per complexity mode).
pub const MODES_HEADER: &str =
    "n_qubits,gamma,gamma_index,realization,mode,spread_integral,spread_mean";

/// Write `bytes` to `path` atomically (same-directory temp file + rename).
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Quote a free-text CSV field (always quoted, inner quotes doubled,
/// newlines flattened so one row stays one line).
fn quote_field(text: &str) -> String {
    let flat = text.replace(['\r', '\n'], " ");
    format!("\"{}\"", flat.replace('"', "\"\""))
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// File name of a per-cell resume record.
pub fn cell_file_name(n_qubits: u32, gamma_index: usize, realization: u32) -> String {
    format!("cell_n{n_qubits}_g{gamma_index}_r{realization}.toml")
}

/// File name of a per-cell series dump (`kind` is `fidelity` or `spread`).
pub fn series_file_name(kind: &str, n_qubits: u32, gamma_index: usize, realization: u32) -> String {
    format!("{kind}_n{n_qubits}_g{gamma_index}_r{realization}.csv")
}

/// File name of a per-cell Lanczos-coefficient dump.
pub fn coeffs_file_name(n_qubits: u32, gamma_index: usize, realization: u32) -> String {
    format!("bn_n{n_qubits}_g{gamma_index}_r{realization}.csv")
}

/// Render `results.csv` for completed cells (assumed already in canonical
/// order).
pub fn render_results_csv(records: &[CellRecord]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n_qubits,
            fmt_f64(r.gamma),
            r.gamma_index,
            r.realization,
            r.seed,
            r.regime.label(),
            fmt_f64(r.gap_ratio),
            r.krylov_k,
            fmt_f64(r.orthonormality_defect),
            fmt_f64(r.recursion_residual),
            fmt_f64(r.spectrum_defect),
            fmt_f64(r.fidelity_integral),
            fmt_f64(r.fidelity_mean),
            fmt_f64(r.spread_integral),
            fmt_f64(r.spread_mean),
        );
    }
    out
}

/// Render `failures.csv` (header always present, even with zero failures).
pub fn render_failures_csv(failures: &[CellFailure]) -> String {
    let mut out = String::from(FAILURES_HEADER);
    out.push('\n');
    for f in failures {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            f.n_qubits,
            fmt_f64(f.gamma),
            f.gamma_index,
            f.realization,
            f.seed,
            f.code,
            quote_field(&f.message),
        );
    }
    out
}

/// Render `summary.csv`.
pub fn render_summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for s in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            s.n_qubits,
            fmt_f64(s.gamma),
            s.observable,
            s.n_samples,
            fmt_f64(s.mean),
            fmt_f64(s.ci_low),
            fmt_f64(s.ci_high),
            fmt_f64(s.level),
            s.resamples,
            s.degenerate,
        );
    }
    out
}

/// Render `modes.csv`: rows are `(cell, mode)` pairs in canonical cell
/// order with modes in [`ComplexityMode::ALL`] order.
pub fn render_modes_csv(rows: &[(CellRecord, ModeIntegral)]) -> String {
    let mut out = String::from(MODES_HEADER);
    out.push('\n');
    for (r, m) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n_qubits,
            fmt_f64(r.gamma),
            r.gamma_index,
            r.realization,
            m.mode.label(),
            fmt_f64(m.spread_integral),
            fmt_f64(m.spread_mean),
        );
    }
    out
}

/// Render a `(t, value)` series dump.
pub fn render_series_csv(series: &TimeSeries) -> String {
    let mut out = String::from("t,value\n");
    for (t, v) in series.iter() {
        let _ = writeln!(out, "{},{}", fmt_f64(t), fmt_f64(v));
    }
    out
}

/// Render an `(n, a, b)` Lanczos-coefficient dump.
pub fn render_coeffs_csv(a: &[f64], b: &[f64]) -> String {
    debug_assert_eq!(a.len(), b.len());
    let mut out = String::from("n,a,b\n");
    for (n, (av, bv)) in a.iter().zip(b.iter()).enumerate() {
        let _ = writeln!(out, "{n},{},{}", fmt_f64(*av), fmt_f64(*bv));
    }
    out
}

/// On-disk shape of a per-cell resume file: the record itself plus, when
/// the sweep computed them, the per-mode spread integrals.
#[derive(Serialize, Deserialize)]
struct CellFile {
    record: CellRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modes: Option<Vec<ModeIntegral>>,
}

/// Write a per-cell resume record.
pub fn write_cell_toml(
    path: &Path,
    record: &CellRecord,
    modes: Option<&[ModeIntegral]>,
) -> Result<()> {
    let file = CellFile {
        record: record.clone(),
        modes: modes.map(<[ModeIntegral]>::to_vec),
    };
    let text = toml::to_string_pretty(&file)
        .map_err(|e| Error::Numerical(format!("cell record serialize error: {e}")))?;
    atomic_write(path, text.as_bytes())
}

/// Read a per-cell resume record; `None` when the file is absent.
pub fn read_cell_toml(path: &Path) -> Result<Option<(CellRecord, Option<Vec<ModeIntegral>>)>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let file: CellFile = toml::from_str(&text)
        .map_err(|e| Error::Precondition(format!("corrupt cell record {}: {e}", path.display())))?;
    Ok(Some((file.record, file.modes)))
}

fn split_line(line: &str, want: usize, path: &Path, line_no: usize) -> Result<Vec<String>> {
    let fields: Vec<String> = line.split(',').map(|s| s.to_string()).collect();
    if fields.len() != want {
        return Err(Error::Precondition(format!(
            "{} line {line_no}: expected {want} fields, found {}",
            path.display(),
            fields.len()
        )));
    }
    Ok(fields)
}

fn parse_num<T: std::str::FromStr>(
    field: &str,
    what: &str,
    path: &Path,
    line_no: usize,
) -> Result<T> {
    field.parse::<T>().map_err(|_| {
        Error::Precondition(format!(
            "{} line {line_no}: cannot parse {what} from {field:?}",
            path.display()
        ))
    })
}

fn read_table(path: &Path, header: &str) -> Result<Vec<(usize, String)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::MissingArtifact(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == header => {}
        Some((_, first)) => {
            return Err(Error::Precondition(format!(
                "{}: unexpected header {first:?}",
                path.display()
            )))
        }
        None => {
            return Err(Error::Precondition(format!(
                "{}: empty file",
                path.display()
            )))
        }
    }
    Ok(lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| (i + 1, l.to_string()))
        .collect())
}

/// Parse `results.csv` back into records.
pub fn read_results_csv(path: &Path) -> Result<Vec<CellRecord>> {
    let mut records = Vec::new();
    for (line_no, line) in read_table(path, RESULTS_HEADER)? {
        let f = split_line(&line, 15, path, line_no)?;
        let regime = crate::ensembles::Regime::from_label(&f[5]).ok_or_else(|| {
            Error::Precondition(format!(
                "{} line {line_no}: unknown regime {:?}",
                path.display(),
                f[5]
            ))
        })?;
        records.push(CellRecord {
            n_qubits: parse_num(&f[0], "n_qubits", path, line_no)?,
            gamma: parse_num(&f[1], "gamma", path, line_no)?,
            gamma_index: parse_num(&f[2], "gamma_index", path, line_no)?,
            realization: parse_num(&f[3], "realization", path, line_no)?,
            seed: parse_num(&f[4], "seed", path, line_no)?,
            regime,
            gap_ratio: parse_num(&f[6], "gap_ratio", path, line_no)?,
            krylov_k: parse_num(&f[7], "krylov_k", path, line_no)?,
            orthonormality_defect: parse_num(&f[8], "orthonormality_defect", path, line_no)?,
            recursion_residual: parse_num(&f[9], "recursion_residual", path, line_no)?,
            spectrum_defect: parse_num(&f[10], "spectrum_defect", path, line_no)?,
            fidelity_integral: parse_num(&f[11], "fidelity_integral", path, line_no)?,
            fidelity_mean: parse_num(&f[12], "fidelity_mean", path, line_no)?,
            spread_integral: parse_num(&f[13], "spread_integral", path, line_no)?,
            spread_mean: parse_num(&f[14], "spread_mean", path, line_no)?,
        });
    }
    Ok(records)
}

/// Parse `summary.csv` back into rows.
pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    for (line_no, line) in read_table(path, SUMMARY_HEADER)? {
        let f = split_line(&line, 10, path, line_no)?;
        rows.push(SummaryRow {
            n_qubits: parse_num(&f[0], "n_qubits", path, line_no)?,
            gamma: parse_num(&f[1], "gamma", path, line_no)?,
            observable: f[2].clone(),
            n_samples: parse_num(&f[3], "n_samples", path, line_no)?,
            mean: parse_num(&f[4], "mean", path, line_no)?,
            ci_low: parse_num(&f[5], "ci_low", path, line_no)?,
            ci_high: parse_num(&f[6], "ci_high", path, line_no)?,
            level: parse_num(&f[7], "level", path, line_no)?,
            resamples: parse_num(&f[8], "resamples", path, line_no)?,
            degenerate: parse_num(&f[9], "degenerate", path, line_no)?,
        });
    }
    Ok(rows)
}

/// Parse a `(t, value)` series dump.
pub fn read_series_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (line_no, line) in read_table(path, "t,value")? {
        let f = split_line(&line, 2, path, line_no)?;
        points.push((
            parse_num(&f[0], "t", path, line_no)?,
            parse_num(&f[1], "value", path, line_no)?,
        ));
    }
    Ok(points)
}

/// Parse an `(n, a, b)` coefficient dump.
pub fn read_coeffs_csv(path: &Path) -> Result<Vec<(usize, f64, f64)>> {
    let mut rows = Vec::new();
    for (line_no, line) in read_table(path, "n,a,b")? {
        let f = split_line(&line, 3, path, line_no)?;
        rows.push((
            parse_num(&f[0], "n", path, line_no)?,
            parse_num(&f[1], "a", path, line_no)?,
            parse_num(&f[2], "b", path, line_no)?,
        ));
    }
    Ok(rows)
}

/// One parsed row of `modes.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeRow {
    /// Qubit count of the cell.
    pub n_qubits: u32,
    /// Deformation parameter of the cell.
    pub gamma: f64,
    /// Index of `gamma` in the sweep grid.
    pub gamma_index: usize,
    /// Realization index of the cell.
    pub realization: u32,
    /// Complexity mode this row reports.
    pub mode: ComplexityMode,
    /// Time-integrated spread complexity under `mode`.
    pub spread_integral: f64,
    /// Time-averaged spread complexity under `mode`.
    pub spread_mean: f64,
}

/// Parse `modes.csv` back into rows.
pub fn read_modes_csv(path: &Path) -> Result<Vec<ModeRow>> {
    let mut rows = Vec::new();
    for (line_no, line) in read_table(path, MODES_HEADER)? {
        let f = split_line(&line, 7, path, line_no)?;
        let mode = ComplexityMode::from_label(&f[4]).ok_or_else(|| {
            Error::Precondition(format!(
                "{} line {line_no}: unknown complexity mode {:?}",
                path.display(),
                f[4]
            ))
        })?;
        rows.push(ModeRow {
            n_qubits: parse_num(&f[0], "n_qubits", path, line_no)?,
            gamma: parse_num(&f[1], "gamma", path, line_no)?,
            gamma_index: parse_num(&f[2], "gamma_index", path, line_no)?,
            realization: parse_num(&f[3], "realization", path, line_no)?,
            mode,
            spread_integral: parse_num(&f[5], "spread_integral", path, line_no)?,
            spread_mean: parse_num(&f[6], "spread_mean", path, line_no)?,
        });
    }
    Ok(rows)
}

/// A generic table writer used by the plot emitters.
pub fn write_table(path: &Path, header: &str, rows: &[String]) -> Result<PathBuf> {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())?;
    Ok(path.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::Regime;

    fn sample_record() -> CellRecord {
        CellRecord {
            n_qubits: 6,
            gamma: 0.1,
            gamma_index: 0,
            realization: 3,
            seed: 0xDEAD_BEEF,
            regime: Regime::Chaotic,
            gap_ratio: 0.531,
            krylov_k: 64,
            orthonormality_defect: 4.4e-16,
            recursion_residual: 1.2e-14,
            spectrum_defect: 5.3e-14,
            fidelity_integral: 1.25,
            fidelity_mean: 0.0625,
            spread_integral: 550.0,
            spread_mean: 0.11,
        }
    }

    #[test]
    fn results_csv_round_trips_exactly() {
        let records = vec![
            sample_record(),
            CellRecord {
                gamma: 5.5,
                gamma_index: 11,
                regime: Regime::Localized,
                spectrum_defect: f64::NAN,
                ..sample_record()
            },
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        atomic_write(&path, render_results_csv(&records).as_bytes()).unwrap();
        let back = read_results_csv(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0], records[0]);
        // The NaN row cannot compare equal; check fields individually.
        assert!(back[1].spectrum_defect.is_nan());
        assert_eq!(back[1].gamma, 5.5);
        assert_eq!(back[1].regime, Regime::Localized);
        // And a second render is byte-identical.
        assert_eq!(render_results_csv(&records), render_results_csv(&records));
    }

    #[test]
    fn failure_messages_survive_commas_and_quotes() {
        let failures = vec![CellFailure {
            n_qubits: 6,
            gamma: 1.0,
            gamma_index: 2,
            realization: 0,
            seed: 99,
            code: "numerical",
            message: "it broke, badly: \"norm\" drifted\nacross lines".into(),
        }];
        let text = render_failures_csv(&failures);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), FAILURES_HEADER);
        let row = lines.next().unwrap();
        assert!(row.contains("\"it broke, badly: \"\"norm\"\" drifted across lines\""));
        assert!(
            lines.next().is_none(),
            "newline in message must not add rows"
        );
    }

    #[test]
    fn cell_record_toml_round_trips_including_nan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cell.toml");
        let mut record = sample_record();
        record.spectrum_defect = f64::NAN;
        write_cell_toml(&path, &record, None).unwrap();
        let (back, modes) = read_cell_toml(&path).unwrap().expect("file exists");
        assert!(back.spectrum_defect.is_nan());
        assert_eq!(back.seed, record.seed);
        assert_eq!(back.regime, record.regime);
        assert!(modes.is_none());

        assert!(read_cell_toml(&dir.path().join("absent.toml"))
            .unwrap()
            .is_none());
    }

    #[test]
    fn cell_record_toml_round_trips_mode_integrals() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cell.toml");
        let record = sample_record();
        let modes: Vec<ModeIntegral> = ComplexityMode::ALL
            .into_iter()
            .enumerate()
            .map(|(i, mode)| ModeIntegral {
                mode,
                spread_integral: 100.0 + i as f64,
                spread_mean: 0.5 + i as f64,
            })
            .collect();
        write_cell_toml(&path, &record, Some(&modes)).unwrap();
        let (back, back_modes) = read_cell_toml(&path).unwrap().expect("file exists");
        assert_eq!(back, record);
        assert_eq!(back_modes.as_deref(), Some(modes.as_slice()));
    }

    #[test]
    fn modes_csv_round_trips_exactly() {
        let record = sample_record();
        let rows: Vec<(CellRecord, ModeIntegral)> = ComplexityMode::ALL
            .into_iter()
            .map(|mode| {
                (
                    record.clone(),
                    ModeIntegral {
                        mode,
                        spread_integral: 321.0625,
                        spread_mean: 0.125,
                    },
                )
            })
            .collect();
        let text = render_modes_csv(&rows);
        assert_eq!(text.lines().next().unwrap(), MODES_HEADER);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("modes.csv");
        atomic_write(&path, text.as_bytes()).unwrap();
        let back = read_modes_csv(&path).unwrap();
        assert_eq!(back.len(), rows.len());
        for (parsed, (rec, mi)) in back.iter().zip(&rows) {
            assert_eq!(parsed.n_qubits, rec.n_qubits);
            assert_eq!(parsed.gamma, rec.gamma);
            assert_eq!(parsed.gamma_index, rec.gamma_index);
            assert_eq!(parsed.realization, rec.realization);
            assert_eq!(parsed.mode, mi.mode);
            assert_eq!(parsed.spread_integral, mi.spread_integral);
            assert_eq!(parsed.spread_mean, mi.spread_mean);
        }
    }

    #[test]
    fn corrupt_artifacts_are_reported_with_location() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        atomic_write(&path, b"wrong,header\n1,2\n").unwrap();
        let err = read_results_csv(&path).unwrap_err();
        assert!(err.to_string().contains("header"), "got: {err}");

        let path2 = dir.path().join("series.csv");
        atomic_write(&path2, b"t,value\n0.1,not_a_number\n").unwrap();
        let err2 = read_series_csv(&path2).unwrap_err();
        assert!(err2.to_string().contains("line 2"), "got: {err2}");

        let missing = read_results_csv(&dir.path().join("nope.csv")).unwrap_err();
        assert!(matches!(missing, Error::MissingArtifact(_)));
    }

    #[test]
    fn series_and_coeffs_round_trip() {
        use crate::observables::{ObservableKind, TimeGrid, TimeSeries};
        let grid = TimeGrid::new(0.5, 3).unwrap();
        let series =
            TimeSeries::new(ObservableKind::Fidelity, grid, vec![1.0, 0.25, 0.0625]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("series.csv");
        atomic_write(&path, render_series_csv(&series).as_bytes()).unwrap();
        let pts = read_series_csv(&path).unwrap();
        assert_eq!(pts, vec![(0.5, 1.0), (1.0, 0.25), (1.5, 0.0625)]);

        let cpath = dir.path().join("coeffs.csv");
        atomic_write(
            &cpath,
            render_coeffs_csv(&[0.5, -0.25], &[0.0, 1.75]).as_bytes(),
        )
        .unwrap();
        assert_eq!(
            read_coeffs_csv(&cpath).unwrap(),
            vec![(0, 0.5, 0.0), (1, -0.25, 1.75)]
        );
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.csv");
        atomic_write(&path, b"x\n").unwrap();
        assert!(path.exists());
        assert!(!path.with_extension("tmp").exists());
        // Overwrite works too.
        atomic_write(&path, b"y\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "y\n");
    }
}
