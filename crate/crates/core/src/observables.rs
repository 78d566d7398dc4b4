//! Time grids, fidelity / spread-complexity time series, and their
//! time integrals.
//!
//! Both diagnostics sample a uniform grid `τ_j = j·dt, j = 1..=steps`;
//! `τ = 0` is deliberately excluded because `F(0) = 1` identically and
//! carries no information — instead it is *asserted* (to 1e-12) every time a
//! fidelity series is built, turning any staging bug into a hard error.
//!
//! * **Fidelity** `F(t) = |⟨ψ₀|ψ(t)⟩|²` is evaluated in the eigenbasis:
//!   with `w = Vᵀψ₀`, the overlap is `Σ_n |w_n|² e^{-iE_n t}`, so after one
//!   diagonalization each time point costs O(D) instead of O(D²).
//! * **Spread complexity** `C(t)` projects the evolved state onto a
//!   prebuilt Krylov basis ([`crate::krylov`]) and scalarizes the overlap
//!   profile per [`ComplexityMode`].
//!
//! [`integrate`] turns a series into a time-integrated value (rectangle or
//! trapezoid rule) plus the matching time average.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::krylov::{spread_complexity, ComplexityMode, KrylovBasis};
use crate::linalg;
use crate::spectral::{self, Evolution};
use crate::states::StateVector;

/// Tolerance on the `F(0) = 1` invariant checked while staging a fidelity
/// series.
pub const FIDELITY_AT_ZERO_TOL: f64 = 1e-12;

/// Upper slack tolerated on fidelity values (`F ≤ 1 + this`).
pub const FIDELITY_UPPER_TOL: f64 = 1e-10;

/// Uniform time grid `τ_j = j·dt` for `j = 1..=steps`.
///
/// Deliberately not deserializable: [`TimeGrid::new`] is the only way in,
/// so a grid in hand is always valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    dt: f64,
    steps: usize,
}

impl TimeGrid {
    /// Build a grid; `dt` must be finite and positive, `steps ≥ 1`.
    pub fn new(dt: f64, steps: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Precondition(format!(
                "time step must be finite and positive, got {dt}"
            )));
        }
        if steps == 0 {
            return Err(Error::Precondition(
                "time grid needs at least one step".into(),
            ));
        }
        Ok(Self { dt, steps })
    }

    /// Step size dt.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of samples.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Largest sampled time `steps·dt`.
    pub fn horizon(&self) -> f64 {
        self.dt * self.steps as f64
    }

    /// The sample times `dt, 2·dt, …, steps·dt`.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.steps).map(move |j| j as f64 * self.dt)
    }
}

/// Default grid for fidelity series: fine steps over a short horizon.
pub fn fidelity_grid() -> TimeGrid {
    TimeGrid {
        dt: 0.01,
        steps: 2000,
    }
}

/// Default grid for spread-complexity series: coarse steps over a long
/// horizon, reaching the post-scrambling plateau.
pub fn spread_grid() -> TimeGrid {
    TimeGrid {
        dt: 100.0,
        steps: 50,
    }
}

/// Which diagnostic a series holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableKind {
    /// Return fidelity `|⟨ψ₀|ψ(t)⟩|²`.
    Fidelity,
    /// Krylov spread complexity under the given scalarization.
    Spread(ComplexityMode),
}

impl ObservableKind {
    /// Stable snake_case label for CSV columns and file names.
    pub fn label(self) -> String {
        match self {
            ObservableKind::Fidelity => "fidelity".to_string(),
            ObservableKind::Spread(mode) => format!("spread_{}", mode.label()),
        }
    }
}

/// Optional provenance attached to a series by higher layers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    /// Deformation parameter of the generating ensemble.
    pub gamma: Option<f64>,
    /// System size in qubits.
    pub n_qubits: Option<u32>,
    /// RNG seed of the generating Hamiltonian.
    pub seed: Option<u64>,
    /// Realization index within an ensemble.
    pub realization: Option<u32>,
}

/// A sampled observable: grid, values, kind, and optional provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    kind: ObservableKind,
    grid: TimeGrid,
    values: Vec<f64>,
    meta: SeriesMeta,
}

impl TimeSeries {
    /// Build a series; the value count must match the grid and every value
    /// must be finite.
    pub fn new(kind: ObservableKind, grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.steps() {
            return Err(Error::ShapeMismatch(format!(
                "series has {} values for a grid of {} steps",
                values.len(),
                grid.steps()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "series contains a non-finite value {bad}"
            )));
        }
        Ok(Self {
            kind,
            grid,
            values,
            meta: SeriesMeta::default(),
        })
    }

    /// Attach provenance.
    pub fn with_meta(mut self, meta: SeriesMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Which observable this is.
    pub fn kind(&self) -> ObservableKind {
        self.kind
    }

    /// The sampling grid.
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Sampled values, one per grid point.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Attached provenance.
    pub fn meta(&self) -> &SeriesMeta {
        &self.meta
    }

    /// `(τ_j, value_j)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }
}

/// Return-fidelity series `F(τ_j) = |⟨ψ₀|ψ(τ_j)⟩|²`.
///
/// Diagonalizes `h` once, verifies `F(0) = 1` to [`FIDELITY_AT_ZERO_TOL`],
/// and errors if any sampled value leaves `[0, 1 + FIDELITY_UPPER_TOL]`.
pub fn fidelity_series(
    h: &DMatrix<f64>,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let sd = spectral::diagonalize(h)?;
    fidelity_series_from(&sd, psi0, grid)
}

/// [`fidelity_series`] against an existing decomposition, for callers that
/// reuse one diagonalization across several observables.
pub fn fidelity_series_from(
    sd: &spectral::SpectralDecomposition,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    // w = Vᵀψ₀; the overlap ⟨ψ₀|ψ(t)⟩ = Σ_n |w_n|² e^{-iE_n t}, so the
    // weights |w_n|² are all that is needed.
    let w = linalg::tr_mul_complex(sd.eigenvectors(), psi0.amplitudes());
    let weights: Vec<f64> = w.iter().map(|z| z.norm_sqr()).collect();
    let f0: f64 = weights.iter().sum();
    // F(0) = (Σ|w_n|²)² = ‖ψ₀‖⁴; any deviation means the eigenbasis failed
    // to stay orthonormal.
    if (f0 * f0 - 1.0).abs() > FIDELITY_AT_ZERO_TOL {
        return Err(Error::Numerical(format!(
            "fidelity at t = 0 is {:.17} (must be 1 within {FIDELITY_AT_ZERO_TOL:e})",
            f0 * f0
        )));
    }
    let eigs = sd.eigenvalues();
    let mut values = Vec::with_capacity(grid.steps());
    for t in grid.points() {
        let amp: Complex64 = weights
            .iter()
            .zip(eigs.iter())
            .map(|(&w2, &e)| Complex64::from_polar(w2, -e * t))
            .sum();
        let f = amp.norm_sqr();
        if !f.is_finite() || f > 1.0 + FIDELITY_UPPER_TOL {
            return Err(Error::Numerical(format!(
                "fidelity {f} at t = {t} left [0, 1 + {FIDELITY_UPPER_TOL:e}]"
            )));
        }
        values.push(f);
    }
    TimeSeries::new(ObservableKind::Fidelity, *grid, values)
}

/// Spread-complexity series `C(τ_j)` of `psi0` evolved under `h`, measured
/// against a prebuilt Krylov `basis`.
///
/// Diagonalizes `h` once and evolves through [`Evolution`], so every sample
/// inherits the norm guard of [`StateVector`].
pub fn spread_series(
    h: &DMatrix<f64>,
    basis: &KrylovBasis,
    psi0: &StateVector,
    grid: &TimeGrid,
    mode: ComplexityMode,
) -> Result<TimeSeries> {
    let sd = spectral::diagonalize(h)?;
    spread_series_from(&sd, basis, psi0, grid, mode)
}

/// [`spread_series`] against an existing decomposition, for callers that
/// reuse one diagonalization across several observables.
pub fn spread_series_from(
    sd: &spectral::SpectralDecomposition,
    basis: &KrylovBasis,
    psi0: &StateVector,
    grid: &TimeGrid,
    mode: ComplexityMode,
) -> Result<TimeSeries> {
    if basis.dim() != psi0.dim() {
        return Err(Error::ShapeMismatch(format!(
            "basis dimension {} does not match state dimension {}",
            basis.dim(),
            psi0.dim()
        )));
    }
    let ev = Evolution::new(sd, psi0)?;
    let mut values = Vec::with_capacity(grid.steps());
    for t in grid.points() {
        let psi_t = ev.state_at(t)?;
        values.push(spread_complexity(basis, &psi_t, mode)?);
    }
    TimeSeries::new(ObservableKind::Spread(mode), *grid, values)
}

/// Quadrature rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegrationMethod {
    /// Rectangle rule `dt · Σ_j f(τ_j)` over the `steps` cells of
    /// `[0, horizon]`, sampling each cell at its right edge (τ = 0 is
    /// excluded by the grid). Span: `horizon`.
    LeftRiemann,
    /// Trapezoid rule over the sampled interval `[τ_1, τ_steps]`,
    /// `dt · (f_1/2 + f_2 + … + f_{steps-1} + f_steps/2)`.
    /// Span: `horizon - dt`; needs at least two samples.
    Trapezoid,
}

/// A time integral and its matching time average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratedValue {
    /// The integral under the chosen rule.
    pub value: f64,
    /// `value` divided by the span the rule integrates over — the mean
    /// sampled value (exactly `Σ f_j / steps` for the rectangle rule).
    pub time_average: f64,
    /// Rule that produced it.
    pub method: IntegrationMethod,
}

/// Integrate a series with the given rule.
pub fn integrate(series: &TimeSeries, method: IntegrationMethod) -> Result<IntegratedValue> {
    let dt = series.grid().dt();
    let f = series.values();
    let (value, span) = match method {
        IntegrationMethod::LeftRiemann => (dt * f.iter().sum::<f64>(), series.grid().horizon()),
        IntegrationMethod::Trapezoid => {
            if f.len() < 2 {
                return Err(Error::Precondition(
                    "trapezoid integration needs at least two samples".into(),
                ));
            }
            let interior: f64 = f[1..f.len() - 1].iter().sum();
            let value = dt * (0.5 * f[0] + interior + 0.5 * f[f.len() - 1]);
            (value, series.grid().horizon() - dt)
        }
    };
    if !value.is_finite() {
        return Err(Error::Numerical("time integral is non-finite".into()));
    }
    Ok(IntegratedValue {
        value,
        time_average: value / span,
        method,
    })
}
