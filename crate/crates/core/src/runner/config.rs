//! Experiment configuration: defaults, TOML round-trip, validation.
//!
//! A configuration fully determines a sweep — every Hamiltonian draw, time
//! grid, and bootstrap stream is keyed off `master_seed` — so two sweeps
//! from the same file produce byte-identical result tables.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::ComplexityMode;
use crate::observables::{IntegrationMethod, TimeGrid};
use crate::states::MAX_QUBITS;

/// Time-grid parameters as written in TOML; converted to a validated
/// [`TimeGrid`] before use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Step size, finite and positive.
    pub dt: f64,
    /// Number of samples, ≥ 1.
    pub steps: usize,
}

impl GridSection {
    /// Convert to a validated grid.
    pub fn to_grid(self) -> Result<TimeGrid> {
        TimeGrid::new(self.dt, self.steps)
    }
}

/// How ensemble members are generated for each `(n, γ)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    /// `fresh-draw`: every realization is an independent Hamiltonian.
    /// `perturbed-operator`: realizations perturb one base draw.
    pub mode: crate::ensembles::EnsembleMode,
    /// Relative Frobenius perturbation strength (perturbed mode only).
    pub epsilon: f64,
}

/// Bootstrap parameters for the per-point summary statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BootstrapSection {
    /// Number of resamples, ≥ 1.
    pub resamples: usize,
    /// Two-sided confidence level in (0, 1).
    pub level: f64,
}

/// Full description of a sweep. See the field docs for the TOML schema;
/// every field has a default, so `{}` is a valid file.
///
/// Scalar fields come before the table-valued ones so the struct serializes
/// to valid TOML directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Root seed; everything else derives from it.
    pub master_seed: u64,
    /// System sizes in qubits, strictly increasing, each in 1..=MAX_QUBITS.
    /// At N = 1 the spectrum has a single gap, so `gap_ratio` is reported
    /// as NaN for those cells.
    pub qubit_counts: Vec<u32>,
    /// Deformation exponents, strictly increasing, finite, ≥ 0. The position
    /// of each value is its `gamma_index` in all outputs.
    pub gammas: Vec<f64>,
    /// Disorder realizations per `(n, γ)` point, ≥ 1.
    pub realizations: u32,
    /// Scalarization used for the spread-complexity series.
    pub complexity_mode: ComplexityMode,
    /// Quadrature rule for time integrals.
    pub integration: IntegrationMethod,
    /// Also write per-cell time series and Lanczos-coefficient artifacts
    /// (required by the series/coefficient plot tables).
    pub emit_full_series: bool,
    /// Also integrate the spread series under every [`ComplexityMode`] and
    /// write the per-mode integrals to `modes.csv`.
    pub emit_all_modes: bool,
    /// Member generation mode.
    pub ensemble: EnsembleSection,
    /// Sampling grid for fidelity series.
    pub fidelity_grid: GridSection,
    /// Sampling grid for spread-complexity series.
    pub spread_grid: GridSection,
    /// Summary-statistics parameters.
    pub bootstrap: BootstrapSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            master_seed: 42,
            qubit_counts: vec![6, 7, 8],
            // Endpoints of the studied range with extra density below γ = 2,
            // where both phase boundaries (γ = 1, 2) sit; the localized tail
            // is flatter and needs fewer points.
            gammas: vec![0.1, 0.3, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0],
            realizations: 20,
            complexity_mode: ComplexityMode::MeanModulus,
            integration: IntegrationMethod::LeftRiemann,
            emit_full_series: false,
            emit_all_modes: false,
            ensemble: EnsembleSection {
                mode: crate::ensembles::EnsembleMode::FreshDraw,
                epsilon: crate::ensembles::PerturbationSpec::DEFAULT_EPSILON,
            },
            fidelity_grid: GridSection {
                dt: 0.01,
                steps: 2000,
            },
            spread_grid: GridSection {
                dt: 100.0,
                steps: 50,
            },
            bootstrap: BootstrapSection {
                resamples: 1000,
                level: 0.95,
            },
        }
    }
}

impl ExperimentConfig {
    /// Check every invariant; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.qubit_counts.is_empty() {
            return Err(Error::InvalidConfig(
                "qubit_counts must be non-empty".into(),
            ));
        }
        for &n in &self.qubit_counts {
            if !(1..=MAX_QUBITS).contains(&n) {
                return Err(Error::InvalidConfig(format!(
                    "qubit_counts entries must lie in 1..={MAX_QUBITS}, got {n}"
                )));
            }
        }
        if !self.qubit_counts.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "qubit_counts must be strictly increasing".into(),
            ));
        }
        if self.gammas.is_empty() {
            return Err(Error::InvalidConfig("gammas must be non-empty".into()));
        }
        for &g in &self.gammas {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "gammas entries must be finite and ≥ 0, got {g}"
                )));
            }
        }
        if !self.gammas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "gammas must be strictly increasing (positions define gamma_index)".into(),
            ));
        }
        if self.realizations == 0 {
            return Err(Error::InvalidConfig("realizations must be ≥ 1".into()));
        }
        self.fidelity_grid
            .to_grid()
            .map_err(|e| Error::InvalidConfig(format!("fidelity_grid: {e}")))?;
        self.spread_grid
            .to_grid()
            .map_err(|e| Error::InvalidConfig(format!("spread_grid: {e}")))?;
        if self.bootstrap.resamples == 0 {
            return Err(Error::InvalidConfig(
                "bootstrap.resamples must be ≥ 1".into(),
            ));
        }
        if !(self.bootstrap.level.is_finite()
            && self.bootstrap.level > 0.0
            && self.bootstrap.level < 1.0)
        {
            return Err(Error::InvalidConfig(format!(
                "bootstrap.level must lie strictly between 0 and 1, got {}",
                self.bootstrap.level
            )));
        }
        if self.ensemble.mode == crate::ensembles::EnsembleMode::PerturbedOperator
            && (!self.ensemble.epsilon.is_finite() || self.ensemble.epsilon <= 0.0)
        {
            return Err(Error::InvalidConfig(format!(
                "ensemble.epsilon must be finite and > 0 in perturbed-operator mode, got {}",
                self.ensemble.epsilon
            )));
        }
        Ok(())
    }

    /// Parse and validate a TOML string.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Load and validate a TOML file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidConfig(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    /// Serialize to TOML.
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| Error::InvalidConfig(format!("config serialize error: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_and_round_trips() {
        let config = ExperimentConfig::default();
        config.validate().unwrap();
        let text = config.to_toml_string().unwrap();
        let back = ExperimentConfig::from_toml_str(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn empty_file_means_all_defaults() {
        let config = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(config, ExperimentConfig::default());
    }

    #[test]
    fn partial_file_overrides_only_named_fields() {
        let config = ExperimentConfig::from_toml_str(
            "master_seed = 7\ngammas = [0.5, 2.5]\n[bootstrap]\nresamples = 50\nlevel = 0.9\n",
        )
        .unwrap();
        assert_eq!(config.master_seed, 7);
        assert_eq!(config.gammas, vec![0.5, 2.5]);
        assert_eq!(config.bootstrap.resamples, 50);
        assert_eq!(
            config.qubit_counts,
            vec![6, 7, 8],
            "untouched field keeps its default"
        );
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = ExperimentConfig::from_toml_str("master_sed = 7\n").unwrap_err();
        assert!(
            matches!(err, Error::InvalidConfig(_)),
            "typoed key must fail loudly, got {err:?}"
        );
    }

    #[test]
    fn kebab_case_enums_parse() {
        let config = ExperimentConfig::from_toml_str(
            "complexity_mode = \"position-weighted\"\nintegration = \"trapezoid\"\n\
             [ensemble]\nmode = \"perturbed-operator\"\nepsilon = 1e-4\n",
        )
        .unwrap();
        assert_eq!(config.complexity_mode, ComplexityMode::PositionWeighted);
        assert_eq!(config.integration, IntegrationMethod::Trapezoid);
        assert_eq!(
            config.ensemble.mode,
            crate::ensembles::EnsembleMode::PerturbedOperator
        );
    }

    #[test]
    fn validation_rejects_each_bad_field() {
        let base = ExperimentConfig::default;

        let mut c = base();
        c.qubit_counts = vec![];
        assert!(c.validate().is_err(), "empty qubit_counts");

        let mut c = base();
        c.qubit_counts = vec![0];
        assert!(c.validate().is_err(), "zero qubits is not a system");

        let mut c = base();
        c.qubit_counts = vec![13];
        assert!(c.validate().is_err(), "beyond the qubit cap");

        let mut c = base();
        c.qubit_counts = vec![1];
        assert!(c.validate().is_ok(), "a single qubit is a valid edge case");

        let mut c = base();
        c.qubit_counts = vec![6, 6];
        assert!(c.validate().is_err(), "duplicate qubit counts");

        let mut c = base();
        c.qubit_counts = vec![8, 6];
        assert!(c.validate().is_err(), "unsorted qubit counts");

        let mut c = base();
        c.gammas = vec![];
        assert!(c.validate().is_err(), "empty gammas");

        let mut c = base();
        c.gammas = vec![-0.1];
        assert!(c.validate().is_err(), "negative gamma");

        let mut c = base();
        c.gammas = vec![0.5, 0.5];
        assert!(c.validate().is_err(), "duplicate gammas");

        let mut c = base();
        c.gammas = vec![2.0, 1.0];
        assert!(c.validate().is_err(), "unsorted gammas");

        let mut c = base();
        c.realizations = 0;
        assert!(c.validate().is_err(), "zero realizations");

        let mut c = base();
        c.fidelity_grid.dt = 0.0;
        assert!(c.validate().is_err(), "zero dt");

        let mut c = base();
        c.spread_grid.steps = 0;
        assert!(c.validate().is_err(), "zero steps");

        let mut c = base();
        c.bootstrap.resamples = 0;
        assert!(c.validate().is_err(), "zero resamples");

        let mut c = base();
        c.bootstrap.level = 1.0;
        assert!(c.validate().is_err(), "level at 1");

        let mut c = base();
        c.ensemble.mode = crate::ensembles::EnsembleMode::PerturbedOperator;
        c.ensemble.epsilon = 0.0;
        assert!(c.validate().is_err(), "perturbed mode with zero epsilon");
    }

    #[test]
    fn load_reports_missing_files_as_config_errors() {
        let err = ExperimentConfig::load(Path::new("/nonexistent/config.toml")).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }
}
