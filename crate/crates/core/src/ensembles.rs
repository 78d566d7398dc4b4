//! Rosenzweig-Porter (RP) random-matrix ensembles.
//!
//! The RP Hamiltonian interpolates between chaotic and localized spectral
//! statistics through a single deformation exponent γ:
//!
//! ```text
//! H = H_0 + D^(-γ/2) · H_goe
//! ```
//!
//! where `H_0` is diagonal with i.i.d. standard-normal entries, `H_goe` is a
//! GOE draw, and `D = 2^N` is the Hilbert dimension of an N-qubit register.
//! γ = 0 leaves the GOE block at unit weight (fully chaotic); large γ
//! suppresses it entirely (Poisson statistics of the bare diagonal).
//!
//! GOE convention: `(G + Gᵀ) / 2` with `G` i.i.d. standard normal, giving
//! diagonal variance 1 and off-diagonal variance 1/2.
//!
//! All sampling is keyed by explicit `u64` seeds (ChaCha8 streams derived via
//! [`crate::seeds`]), so every matrix here is a pure function of its
//! arguments. Symmetry is exact by construction — lower triangles are mirrored
//! from upper triangles, never recomputed.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::seeds::{self, stream};
use crate::states::QubitCount;

/// Spectral regime of an RP Hamiltonian as a function of γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `0 ≤ γ < 1`: GOE-like (Wigner-Dyson) level statistics.
    Chaotic,
    /// `1 ≤ γ < 2`: fractal eigenstates (the γ = 1 boundary is classified
    /// here).
    Fractal,
    /// `γ ≥ 2`: localized eigenstates, Poisson level statistics.
    Localized,
}

impl Regime {
    /// Classify a deformation exponent. `gamma` must be finite and ≥ 0.
    pub fn classify(gamma: f64) -> Regime {
        debug_assert!(gamma.is_finite() && gamma >= 0.0);
        if gamma < 1.0 {
            Regime::Chaotic
        } else if gamma < 2.0 {
            Regime::Fractal
        } else {
            Regime::Localized
        }
    }

    /// Stable lowercase label for CSV output.
    pub fn label(self) -> &'static str {
        match self {
            Regime::Chaotic => "chaotic",
            Regime::Fractal => "fractal",
            Regime::Localized => "localized",
        }
    }

    /// Inverse of [`Regime::label`].
    pub fn from_label(label: &str) -> Option<Regime> {
        match label {
            "chaotic" => Some(Regime::Chaotic),
            "fractal" => Some(Regime::Fractal),
            "localized" => Some(Regime::Localized),
            _ => None,
        }
    }
}

/// A single GOE draw: exactly symmetric, dimension ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GoeMatrix {
    entries: DMatrix<f64>,
}

impl GoeMatrix {
    /// Matrix dimension D.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// The symmetric matrix itself.
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Consume into the underlying matrix.
    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }
}

/// Sample a `dim × dim` GOE matrix `(G + Gᵀ)/2` deterministically from `seed`.
///
/// `G` is filled row-major with standard normals from a ChaCha8 stream; the
/// symmetrized upper triangle is mirrored into the lower one, so the result is
/// bitwise symmetric and bitwise reproducible for a given `(dim, seed)`.
pub fn sample_goe(dim: usize, seed: u64) -> Result<GoeMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "GOE dimension must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    // Draw order (row-major) is part of the reproducibility contract, so fill
    // an explicit buffer rather than relying on a container's fill order.
    let mut raw = vec![0.0f64; dim * dim];
    for row in raw.chunks_exact_mut(dim) {
        for x in row.iter_mut() {
            *x = normal.sample(&mut rng);
        }
    }
    let at = |i: usize, j: usize| raw[i * dim + j];
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = at(i, i);
        for j in (i + 1)..dim {
            let v = 0.5 * (at(i, j) + at(j, i));
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(GoeMatrix { entries: m })
}

/// Which count the GOE suppression weight is raised to.
///
/// The deformation weight is `base^(-γ/2)`; the physically standard choice for
/// a qubit register is the Hilbert dimension `D = 2^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingBase {
    /// `base = D = 2^N` (default).
    HilbertDim,
    /// `base = N` (the raw qubit count), for comparison studies.
    QubitCount,
}

/// Construction knobs for [`build_rp_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpOptions {
    /// Upper cap on the qubit count (default [`crate::states::MAX_QUBITS`]).
    pub qubit_cap: u32,
    /// Base of the `base^(-γ/2)` suppression weight.
    pub scaling: ScalingBase,
}

impl Default for RpOptions {
    fn default() -> Self {
        Self {
            qubit_cap: crate::states::MAX_QUBITS,
            scaling: ScalingBase::HilbertDim,
        }
    }
}

/// How a Hamiltonian came to be, for provenance bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Built directly by [`build_rp`].
    Direct,
    /// Fresh independent draw, member `i` of an ensemble.
    FreshMember(u32),
    /// Base draw plus a scaled GOE perturbation, member `i` of an ensemble.
    PerturbedMember(u32),
}

/// A dense real-symmetric RP Hamiltonian with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct RpHamiltonian {
    matrix: DMatrix<f64>,
    gamma: f64,
    seed: u64,
    n_qubits: u32,
    scaling: ScalingBase,
    provenance: Provenance,
}

impl RpHamiltonian {
    /// Hilbert dimension `D = 2^N`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Number of qubits N.
    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Deformation exponent γ.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Seed this matrix was derived from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Spectral regime implied by γ.
    pub fn regime(&self) -> Regime {
        Regime::classify(self.gamma)
    }

    /// Provenance of the matrix.
    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The symmetric matrix itself.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Build an RP Hamiltonian with default options (cap 12 qubits, weight base
/// `D`). See [`build_rp_with`].
pub fn build_rp(n_qubits: u32, gamma: f64, seed: u64) -> Result<RpHamiltonian> {
    build_rp_with(n_qubits, gamma, seed, &RpOptions::default())
}

/// Build `H = H_0 + base^(-γ/2) · H_goe` for an N-qubit register.
///
/// `H_0`'s diagonal and the GOE block come from independent child streams of
/// `seed` ([`stream::RP_DIAGONAL`] and [`stream::RP_GOE`]), so the pair
/// `(n_qubits, seed)` fully determines the matrix, bit for bit.
pub fn build_rp_with(
    n_qubits: u32,
    gamma: f64,
    seed: u64,
    options: &RpOptions,
) -> Result<RpHamiltonian> {
    let qubits = QubitCount::with_cap(n_qubits, options.qubit_cap)?;
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::Precondition(format!(
            "gamma must be finite and non-negative, got {gamma}"
        )));
    }
    let dim = qubits.dim();
    let base = match options.scaling {
        ScalingBase::HilbertDim => dim as f64,
        ScalingBase::QubitCount => n_qubits as f64,
    };
    let weight = base.powf(-gamma / 2.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, &[stream::RP_DIAGONAL]));
    let normal = StandardNormal;
    let goe = sample_goe(dim, seeds::derive(seed, &[stream::RP_GOE]))?;

    // weight * GOE is exactly symmetric (same product both sides); adding the
    // diagonal preserves that.
    let mut matrix = goe.into_entries();
    matrix *= weight;
    for i in 0..dim {
        let h0: f64 = normal.sample(&mut rng);
        matrix[(i, i)] += h0;
    }

    Ok(RpHamiltonian {
        matrix,
        gamma,
        seed,
        n_qubits,
        scaling: options.scaling,
        provenance: Provenance::Direct,
    })
}

/// How ensemble members relate to their base Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleMode {
    /// Each member is an independent RP draw at the same `(N, γ)`.
    FreshDraw,
    /// Each member is `base + ε_abs · G_i` with `G_i` a fresh GOE draw and
    /// `ε_abs = ε · ‖base‖_F / ‖G_i‖_F`, i.e. a fixed relative Frobenius
    /// perturbation of the operator.
    PerturbedOperator,
}

/// Ensemble request: how many members, how they are generated, and (for
/// perturbed ensembles) the relative perturbation strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    /// Relative Frobenius perturbation strength (ignored by
    /// [`EnsembleMode::FreshDraw`]).
    pub epsilon: f64,
    /// Number of members, ≥ 1.
    pub count: u32,
    /// Generation mode.
    pub mode: EnsembleMode,
}

impl PerturbationSpec {
    /// Default relative perturbation strength.
    pub const DEFAULT_EPSILON: f64 = 1e-3;

    /// Validate the request.
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Precondition(
                "ensemble must have at least one member".into(),
            ));
        }
        if self.mode == EnsembleMode::PerturbedOperator
            && (!self.epsilon.is_finite() || self.epsilon <= 0.0)
        {
            return Err(Error::Precondition(format!(
                "perturbed ensembles need finite epsilon > 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Generate the members of an ensemble around `base`.
///
/// Member `i` draws from the child seed `derive(seed, [ENSEMBLE_MEMBER, i])`;
/// members are therefore independent of each other and of generation order.
pub fn build_ensemble(
    base: &RpHamiltonian,
    spec: &PerturbationSpec,
    seed: u64,
) -> Result<Vec<RpHamiltonian>> {
    spec.validate()?;
    let mut members = Vec::with_capacity(spec.count as usize);
    for i in 0..spec.count {
        members.push(ensemble_member(base, spec, seed, i)?);
    }
    Ok(members)
}

/// Generate the single member `index` of the ensemble `(base, spec, seed)`.
///
/// `build_ensemble` is a loop over this function; having it public lets a
/// sweep rebuild one member without rebuilding its siblings.
pub fn ensemble_member(
    base: &RpHamiltonian,
    spec: &PerturbationSpec,
    seed: u64,
    index: u32,
) -> Result<RpHamiltonian> {
    spec.validate()?;
    if index >= spec.count {
        return Err(Error::Precondition(format!(
            "member index {index} out of range for count {}",
            spec.count
        )));
    }
    let member_seed = seeds::derive(seed, &[stream::ENSEMBLE_MEMBER, index as u64]);
    match spec.mode {
        EnsembleMode::FreshDraw => {
            let options = RpOptions {
                scaling: base.scaling,
                ..RpOptions::default()
            };
            let mut member = build_rp_with(base.n_qubits, base.gamma, member_seed, &options)?;
            member.provenance = Provenance::FreshMember(index);
            Ok(member)
        }
        EnsembleMode::PerturbedOperator => {
            let g = sample_goe(base.dim(), member_seed)?;
            let g_norm = g.entries().norm();
            if g_norm == 0.0 {
                return Err(Error::Numerical(
                    "GOE perturbation draw has zero Frobenius norm".into(),
                ));
            }
            let eps_abs = spec.epsilon * base.matrix.norm() / g_norm;
            let matrix = &base.matrix + g.entries() * eps_abs;
            debug_assert_eq!(linalg::max_asymmetry(&matrix), 0.0);
            Ok(RpHamiltonian {
                matrix,
                gamma: base.gamma,
                seed: member_seed,
                n_qubits: base.n_qubits,
                scaling: base.scaling,
                provenance: Provenance::PerturbedMember(index),
            })
        }
    }
}
