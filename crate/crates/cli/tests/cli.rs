//! End-to-end tests of the `scramblab` binary: every subcommand is driven
//! through `std::process::Command` exactly as a user would, and the exit
//! codes, stdout/stderr text, and on-disk artifacts are checked.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn scramblab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scramblab"))
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary should launch");
    assert!(
        out.status.success(),
        "expected exit 0, got {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process should exit, not signal")
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A 4-cell configuration (n=2; γ ∈ {0.5, 3.0}; 2 realizations) that runs in
/// well under a second.
fn tiny_config_toml(emit_full_series: bool) -> String {
    format!(
        r#"
master_seed = 2024
qubit_counts = [2]
gammas = [0.5, 3.0]
realizations = 2
emit_full_series = {emit_full_series}

[fidelity_grid]
dt = 0.05
steps = 40

[spread_grid]
dt = 5.0
steps = 8

[bootstrap]
resamples = 64
level = 0.9
"#
    )
}

fn write_tiny_config(dir: &Path, emit_full_series: bool) -> PathBuf {
    let path = dir.join("tiny.toml");
    fs::write(&path, tiny_config_toml(emit_full_series)).unwrap();
    path
}

#[test]
fn validate_passes_on_small_dims() {
    let out = run_ok(scramblab().args(["validate", "--dims", "8,16"]));
    let text = stdout_text(&out);
    assert!(text.contains("goe_symmetry"), "missing check rows:\n{text}");
    assert!(text.contains("pass"), "no passing rows:\n{text}");
    assert!(
        text.contains("all checks passed"),
        "missing final verdict:\n{text}"
    );
    // Gap-ratio statistics need dim ≥ 32, so these dims must show a skip.
    assert!(text.contains("skipped"), "expected a skipped row:\n{text}");
}

#[test]
fn validate_rejects_degenerate_dims_as_usage_errors() {
    let out = scramblab()
        .args(["validate", "--dims", "1"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr_text(&out));
    assert!(stderr_text(&out).contains("dimension"));
}

#[test]
fn run_reports_cell_diagnostics() {
    let out = run_ok(scramblab().args(["run", "--gamma", "0.5", "--qubits", "2", "--seed", "7"]));
    let text = stdout_text(&out);
    for needle in [
        "regime",
        "chaotic",
        "gap ratio",
        "krylov k",
        "fidelity integral",
        "spread integral",
        "hilbert dimension   4",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
    }
}

#[test]
fn run_rejects_bad_arguments_as_usage_errors() {
    let out = scramblab()
        .args(["run", "--gamma", "-1.0", "--qubits", "2"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr_text(&out));
    assert!(stderr_text(&out).contains("gamma"));

    let out = scramblab()
        .args(["run", "--gamma", "0.5", "--qubits", "0"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr_text(&out));
}

#[test]
fn run_handles_the_single_qubit_edge_case() {
    let out = run_ok(scramblab().args(["run", "--gamma", "0", "--qubits", "1", "--seed", "3"]));
    let text = stdout_text(&out);
    assert!(text.contains("hilbert dimension   2"), "stdout: {text}");
    assert!(
        text.contains("gap ratio           NaN"),
        "two levels cannot have a gap ratio; stdout: {text}"
    );
}

#[test]
fn sweep_writes_artifacts_and_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let config = write_tiny_config(dir.path(), false);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");

    let out = run_ok(scramblab().args([
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_a.to_str().unwrap(),
    ]));
    let text = stdout_text(&out);
    assert!(text.contains("4 cells"), "unexpected tally:\n{text}");
    assert!(text.contains("0 failed"), "unexpected tally:\n{text}");

    for name in [
        "results.csv",
        "summary.csv",
        "failures.csv",
        "manifest.toml",
    ] {
        assert!(out_a.join(name).exists(), "{name} missing");
    }

    // Second run into a fresh directory with a different worker count must
    // reproduce the result tables byte for byte.
    run_ok(scramblab().args([
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_b.to_str().unwrap(),
        "--workers",
        "4",
    ]));
    for name in ["results.csv", "summary.csv", "failures.csv"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn sweep_resume_reuses_completed_cells() {
    let dir = TempDir::new().unwrap();
    let config = write_tiny_config(dir.path(), false);
    let out_dir = dir.path().join("out");
    let args = [
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ];

    run_ok(scramblab().args(args));
    let first_results = fs::read(out_dir.join("results.csv")).unwrap();

    let out = run_ok(scramblab().args(args).arg("--resume"));
    let text = stdout_text(&out);
    assert!(
        text.contains("4 resumed"),
        "expected all-resumed tally:\n{text}"
    );
    assert!(
        text.contains("0 computed"),
        "expected no recompute:\n{text}"
    );

    let manifest = fs::read_to_string(out_dir.join("manifest.toml")).unwrap();
    assert!(
        manifest.contains("cells_skipped = 4"),
        "manifest:\n{manifest}"
    );
    assert_eq!(
        first_results,
        fs::read(out_dir.join("results.csv")).unwrap(),
        "resume changed results.csv"
    );
}

#[test]
fn plot_data_emits_all_figures_when_series_were_dumped() {
    let dir = TempDir::new().unwrap();
    let config = write_tiny_config(dir.path(), true);
    let out_dir = dir.path().join("out");
    let plot_dir = dir.path().join("plots");

    run_ok(scramblab().args([
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]));
    let out = run_ok(scramblab().args([
        "plot-data",
        "--results",
        out_dir.to_str().unwrap(),
        "--out",
        plot_dir.to_str().unwrap(),
    ]));
    let text = stdout_text(&out);
    for name in [
        "fig1_fidelity.csv",
        "fig2_spread.csv",
        "fig3_early_spread.csv",
        "fig4_bn.csv",
    ] {
        assert!(text.contains(name), "missing {name} in stdout:\n{text}");
        let body = fs::read_to_string(plot_dir.join(name)).unwrap();
        assert!(body.lines().count() > 1, "{name} has no data rows");
    }
}

#[test]
fn plot_data_without_dumps_fails_but_writes_summary_figures() {
    let dir = TempDir::new().unwrap();
    let config = write_tiny_config(dir.path(), false);
    let out_dir = dir.path().join("out");
    let plot_dir = dir.path().join("plots");

    run_ok(scramblab().args([
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]));
    let out = scramblab()
        .args([
            "plot-data",
            "--results",
            out_dir.to_str().unwrap(),
            "--out",
            plot_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    assert!(
        stderr_text(&out).contains("emit_full_series"),
        "stderr should point at the fix:\n{}",
        stderr_text(&out)
    );
    // The summary-level tables do not need dumps and must still appear.
    assert!(plot_dir.join("fig1_fidelity.csv").exists());
    assert!(plot_dir.join("fig2_spread.csv").exists());
    assert!(!plot_dir.join("fig3_early_spread.csv").exists());
}

#[test]
fn invalid_config_exits_with_usage_code() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "master_seed = \"not a number\"\n").unwrap();
    let out = scramblab()
        .args([
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr_text(&out));
    assert!(stderr_text(&out).contains("invalid config"));
}

#[test]
fn rejected_semantic_config_exits_with_usage_code() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("bad.toml");
    // Parses fine but violates a semantic rule (gammas must increase).
    fs::write(
        &config,
        "qubit_counts = [2]\ngammas = [3.0, 0.5]\nrealizations = 1\n",
    )
    .unwrap();
    let out = scramblab()
        .args([
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr_text(&out));
    assert!(stderr_text(&out).contains("increasing"));
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = scramblab().output().unwrap();
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn run_is_reproducible_for_fixed_seed() {
    let args = ["run", "--gamma", "1.5", "--qubits", "3", "--seed", "99"];
    let first = stdout_text(&run_ok(scramblab().args(args)));
    let second = stdout_text(&run_ok(scramblab().args(args)));
    assert_eq!(first, second, "same seed must print identical diagnostics");
}
