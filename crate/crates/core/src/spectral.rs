//! Exact diagonalization and unitary dynamics of real-symmetric Hamiltonians.
//!
//! A [`SpectralDecomposition`] holds eigenvalues in ascending order and an
//! orthogonal eigenvector matrix `V` with a deterministic sign convention
//! (each column's largest-magnitude component is positive, first index wins
//! ties), so decompositions are reproducible bit for bit across runs.
//!
//! Evolution uses `U(t) = V · diag(e^(-i E_n t)) · Vᵀ` with ħ = 1. The
//! full propagator is only materialized on request ([`propagator`]); states
//! are evolved by staged matrix-vector products instead: [`Evolution`]
//! precomputes `w = Vᵀ ψ₀` once, after which each time point costs one
//! diagonal phase multiply and one `D × D` real-matrix product.
//!
//! [`gap_ratio`] gives the standard consecutive-gap ratio statistic
//! `⟨min(g_n, g_{n+1}) / max(g_n, g_{n+1})⟩` used to distinguish chaotic
//! (GOE, ⟨r⟩ ≈ 0.5307) from integrable (Poisson, ⟨r⟩ ≈ 0.3863) spectra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::states::StateVector;

/// Reference value of the mean gap ratio for GOE level statistics.
pub const GOE_MEAN_GAP_RATIO: f64 = 0.5307;

/// Reference value of the mean gap ratio for Poisson level statistics,
/// `2 ln 2 - 1`.
pub const POISSON_MEAN_GAP_RATIO: f64 = 0.386_294_361_119_890_6;

/// Maximum tolerated asymmetry `max|H_ij - H_ji|` before [`diagonalize`]
/// rejects its input.
pub const ASYMMETRY_TOL: f64 = 1e-12;

/// What to do with input whose asymmetry exceeds [`ASYMMETRY_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymmetryPolicy {
    /// Refuse the matrix (default).
    Reject,
    /// Replace `H` by `(H + Hᵀ)/2` and proceed.
    Symmetrize,
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real-symmetric
/// matrix, with the deterministic column-sign convention described in the
/// module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    /// Matrix dimension D.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors; column `n` pairs with eigenvalue `n`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Spectral range `E_max - E_min` (0 for D = 1).
    pub fn spectral_range(&self) -> f64 {
        self.eigenvalues[self.dim() - 1] - self.eigenvalues[0]
    }
}

/// Diagonalize a real-symmetric matrix, rejecting asymmetric input.
pub fn diagonalize(h: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    diagonalize_with(h, AsymmetryPolicy::Reject)
}

/// Diagonalize with an explicit asymmetry policy.
pub fn diagonalize_with(
    h: &DMatrix<f64>,
    policy: AsymmetryPolicy,
) -> Result<SpectralDecomposition> {
    let n = h.nrows();
    if n == 0 {
        return Err(Error::InvalidDimension(
            "cannot diagonalize an empty matrix".into(),
        ));
    }
    if h.ncols() != n {
        return Err(Error::ShapeMismatch(format!(
            "matrix must be square, got {n} x {}",
            h.ncols()
        )));
    }
    if h.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(
            "matrix contains non-finite entries".into(),
        ));
    }

    let asym = linalg::max_asymmetry(h);
    let work = if asym > ASYMMETRY_TOL {
        match policy {
            AsymmetryPolicy::Reject => {
                return Err(Error::Precondition(format!(
                    "matrix is asymmetric (max |H_ij - H_ji| = {asym:e} > {ASYMMETRY_TOL:e})"
                )));
            }
            AsymmetryPolicy::Symmetrize => 0.5 * (h + h.transpose()),
        }
    } else {
        h.clone()
    };

    let eigen = nalgebra::SymmetricEigen::try_new(work, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical(format!("symmetric eigensolver failed at D = {n}")))?;

    // Sort ascending and apply the sign convention in one permutation pass.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .partial_cmp(&eigen.eigenvalues[b])
            .expect("eigenvalues are finite")
    });
    let eigenvalues = DVector::from_fn(n, |i, _| eigen.eigenvalues[order[i]]);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eigen.eigenvectors.column(src);
        // First strictly-largest-magnitude component decides the sign.
        let mut best = 0usize;
        for i in 1..n {
            if col[i].abs() > col[best].abs() {
                best = i;
            }
        }
        let flip = if col[best] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[(i, dst)] = flip * col[i];
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Staged evolution of one initial state: `w = Vᵀ ψ₀` is computed once, then
/// [`Evolution::state_at`] applies phases and rotates back for each `t`.
#[derive(Debug)]
pub struct Evolution<'a> {
    sd: &'a SpectralDecomposition,
    w: DVector<Complex64>,
}

impl<'a> Evolution<'a> {
    /// Prepare to evolve `psi0` under the Hamiltonian behind `sd`.
    pub fn new(sd: &'a SpectralDecomposition, psi0: &StateVector) -> Result<Self> {
        if psi0.dim() != sd.dim() {
            return Err(Error::ShapeMismatch(format!(
                "state dimension {} does not match spectral dimension {}",
                psi0.dim(),
                sd.dim()
            )));
        }
        let w = linalg::tr_mul_complex(&sd.eigenvectors, psi0.amplitudes());
        Ok(Self { sd, w })
    }

    /// `ψ(t) = V · diag(e^(-i E_n t)) · w`. `t` may be any finite real
    /// (negative values evolve backwards).
    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        if !t.is_finite() {
            return Err(Error::Precondition(format!("time must be finite, got {t}")));
        }
        let phased = DVector::from_fn(self.w.len(), |n, _| {
            self.w[n] * Complex64::cis(-self.sd.eigenvalues[n] * t)
        });
        let amps = linalg::mul_complex(&self.sd.eigenvectors, &phased);
        // try_new re-checks the norm, turning any loss of unitarity
        // (|norm - 1| > 1e-10) into a hard error rather than silent drift.
        StateVector::try_new(amps)
            .map_err(|e| Error::Numerical(format!("evolution lost unitarity: {e}")))
    }
}

/// Evolve `psi0` to a single time `t`. For many times on one state, build an
/// [`Evolution`] once instead.
pub fn evolve(sd: &SpectralDecomposition, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Evolution::new(sd, psi0)?.state_at(t)
}

/// Materialize the full propagator `U(t) = V · diag(e^(-i E_n t)) · Vᵀ`.
///
/// O(D³) time and O(D²) complex storage — intended for validation and small
/// systems; the sweep pipeline never calls it.
pub fn propagator(sd: &SpectralDecomposition, t: f64) -> Result<DMatrix<Complex64>> {
    if !t.is_finite() {
        return Err(Error::Precondition(format!("time must be finite, got {t}")));
    }
    let n = sd.dim();
    let v = &sd.eigenvectors;
    // P = V · diag(phase), split into real and imaginary parts so the O(D³)
    // work runs as two real matrix products.
    let mut p_re = DMatrix::zeros(n, n);
    let mut p_im = DMatrix::zeros(n, n);
    for j in 0..n {
        let phase = Complex64::cis(-sd.eigenvalues[j] * t);
        for i in 0..n {
            p_re[(i, j)] = v[(i, j)] * phase.re;
            p_im[(i, j)] = v[(i, j)] * phase.im;
        }
    }
    let u_re = &p_re * v.transpose();
    let u_im = &p_im * v.transpose();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(u_re[(i, j)], u_im[(i, j)])
    }))
}

/// Mean consecutive-gap ratio `⟨r⟩ = ⟨min(g_n, g_{n+1}) / max(g_n, g_{n+1})⟩`
/// over the full (sorted) spectrum. Degenerate neighboring gaps contribute
/// `r_n = 0`. Requires D ≥ 3 (at least two gaps).
pub fn gap_ratio(sd: &SpectralDecomposition) -> Result<f64> {
    let n = sd.dim();
    if n < 3 {
        return Err(Error::InvalidDimension(format!(
            "gap ratio needs at least 3 levels, got {n}"
        )));
    }
    let e = &sd.eigenvalues;
    let mut sum = 0.0;
    for k in 0..(n - 2) {
        let g0 = e[k + 1] - e[k];
        let g1 = e[k + 2] - e[k + 1];
        let (lo, hi) = if g0 < g1 { (g0, g1) } else { (g1, g0) };
        if hi > 0.0 {
            sum += lo / hi;
        }
        // hi == 0 (exact double degeneracy): r_n = 0, nothing to add.
    }
    Ok(sum / (n - 2) as f64)
}
