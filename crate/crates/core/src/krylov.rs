//! Lanczos tridiagonalization and Krylov spread complexity.
//!
//! [`lanczos`] builds an orthonormal Krylov basis `{|K_0⟩, ..., |K_{k-1}⟩}`
//! of a real-symmetric `H` from a unit seed state via the standard three-term
//! recursion
//!
//! ```text
//! |A_{n+1}⟩ = (H - a_n I)|K_n⟩ - b_n |K_{n-1}⟩
//! b_{n+1}   = ‖A_{n+1}⟩‖            (breakdown when below tolerance)
//! |K_{n+1}⟩ = |A_{n+1}⟩ / b_{n+1}
//! a_{n+1}   = ⟨K_{n+1}|H|K_{n+1}⟩
//! ```
//!
//! with **full reorthogonalization**: every candidate is cleaned against all
//! stored vectors with two passes of classical Gram-Schmidt before it is
//! normalized. That is what keeps the basis orthonormal to ~1e-14 out to
//! `k = D`, where plain Lanczos would long have lost orthogonality.
//!
//! The recursion coefficients form the real symmetric tridiagonal matrix
//! [`TridiagonalT`]; at `k = D` its spectrum must reproduce the spectrum of
//! `H` itself, which [`validate_basis`] checks (via an internal Sturm-sequence
//! bisection eigensolver, deliberately independent of the dense one in
//! [`crate::spectral`]).
//!
//! [`spread_complexity`] measures how far a state has spread across the
//! Krylov basis; the scalarization of the overlap profile is chosen by
//! [`ComplexityMode`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral;
use crate::states::StateVector;

/// Default absolute tolerance below which a candidate norm counts as
/// breakdown (an invariant subspace has been exhausted).
pub const DEFAULT_BREAKDOWN_TOL: f64 = 1e-12;

/// Largest imaginary part tolerated on the (mathematically real) diagonal
/// coefficients `a_n`.
pub const IMAG_TOL: f64 = 1e-10;

/// Options for [`lanczos_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Candidate norms below this are treated as breakdown.
    pub breakdown_tol: f64,
    /// Keep full reorthogonalization on. Exists only so fault-injection
    /// tests can watch orthogonality collapse without it; never disable in
    /// production paths.
    pub reorthogonalize: bool,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            breakdown_tol: DEFAULT_BREAKDOWN_TOL,
            reorthogonalize: true,
        }
    }
}

/// Orthonormal Krylov vectors plus their recursion coefficients.
///
/// `b` has the same length as `a`; `b[0] = 0` by convention and `b[n] > 0`
/// for `1 ≤ n < k`.
#[derive(Debug, Clone)]
pub struct KrylovBasis {
    vectors: Vec<DVector<Complex64>>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl KrylovBasis {
    /// Number of basis vectors k (1 ≤ k ≤ D).
    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    /// Hilbert dimension D.
    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    /// Basis vector `|K_i⟩`.
    pub fn vector(&self, i: usize) -> &DVector<Complex64> {
        &self.vectors[i]
    }

    /// Diagonal recursion coefficients `a_0 .. a_{k-1}`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Off-diagonal recursion coefficients `b_0 .. b_{k-1}` with `b_0 = 0`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// The tridiagonal matrix built from the coefficients.
    pub fn tridiagonal(&self) -> TridiagonalT {
        TridiagonalT {
            diag: self.a.clone(),
            off: self.b[1..].to_vec(),
        }
    }
}

/// Real symmetric tridiagonal matrix `T` (diagonal `a`, off-diagonal
/// `b_1 .. b_{k-1}`).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalT {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagonalT {
    /// Construct directly from coefficient slices (`off` one shorter than
    /// `diag`).
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidDimension(
                "tridiagonal matrix needs at least one diagonal entry".into(),
            ));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::ShapeMismatch(format!(
                "off-diagonal length {} must be one less than diagonal length {}",
                off.len(),
                diag.len()
            )));
        }
        Ok(Self { diag, off })
    }

    /// Size k of the matrix.
    pub fn k(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal entries (`len = k - 1`).
    pub fn off_diagonal(&self) -> &[f64] {
        &self.off
    }

    /// Materialize as a dense matrix.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let k = self.k();
        let mut m = DMatrix::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = self.diag[i];
            if i + 1 < k {
                m[(i, i + 1)] = self.off[i];
                m[(i + 1, i)] = self.off[i];
            }
        }
        m
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence / LDLᵀ
    /// pivot count).
    fn count_below(&self, x: f64) -> usize {
        // LDLᵀ pivot count on T - xI. A pivot of exactly zero means x is an
        // eigenvalue of a leading principal submatrix; nudging it negative
        // gives the count for x + ε, which keeps bisection brackets correct.
        let mut count = 0usize;
        let mut q = self.diag[0] - x;
        if q.abs() < 1e-300 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.k() {
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q.abs() < 1e-300 {
                q = -1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues in ascending order, by Sturm bisection.
    ///
    /// Independent of the dense eigensolver in [`crate::spectral`], so the
    /// two can cross-check each other.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let k = self.k();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..k {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off[i - 1].abs();
            }
            if i < k - 1 {
                radius += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        let scale = lo.abs().max(hi.abs()).max(1.0);
        (1..=k)
            .map(|j| {
                let (mut a, mut b) = (lo, hi);
                let mut iter = 0;
                while b - a > 1e-14 * scale && iter < 200 {
                    let mid = 0.5 * (a + b);
                    if self.count_below(mid) >= j {
                        b = mid;
                    } else {
                        a = mid;
                    }
                    iter += 1;
                }
                0.5 * (a + b)
            })
            .collect()
    }
}

/// Run Lanczos with the default options (full reorthogonalization,
/// breakdown tolerance [`DEFAULT_BREAKDOWN_TOL`]).
///
/// Returns the basis and its tridiagonal matrix. The basis has
/// `k ≤ max_k` vectors; `k < max_k` means an invariant subspace was exhausted
/// (benign early termination).
pub fn lanczos(
    h: &DMatrix<f64>,
    seed_state: &StateVector,
    max_k: usize,
    breakdown_tol: f64,
) -> Result<(KrylovBasis, TridiagonalT)> {
    lanczos_with(
        h,
        seed_state,
        max_k,
        &LanczosOptions {
            breakdown_tol,
            ..LanczosOptions::default()
        },
    )
}

/// Lanczos with explicit [`LanczosOptions`].
///
/// The `reorthogonalize: false` path exists for fault-injection tests only.
#[doc(hidden)]
pub fn lanczos_with(
    h: &DMatrix<f64>,
    seed_state: &StateVector,
    max_k: usize,
    options: &LanczosOptions,
) -> Result<(KrylovBasis, TridiagonalT)> {
    let d = h.nrows();
    if h.ncols() != d || d == 0 {
        return Err(Error::ShapeMismatch(format!(
            "Hamiltonian must be square and non-empty, got {d} x {}",
            h.ncols()
        )));
    }
    if seed_state.dim() != d {
        return Err(Error::ShapeMismatch(format!(
            "seed dimension {} does not match Hamiltonian dimension {d}",
            seed_state.dim()
        )));
    }
    if max_k == 0 || max_k > d {
        return Err(Error::InvalidDimension(format!(
            "max_k must be in 1..={d}, got {max_k}"
        )));
    }
    if !(options.breakdown_tol.is_finite() && options.breakdown_tol > 0.0) {
        return Err(Error::Precondition(format!(
            "breakdown tolerance must be finite and positive, got {}",
            options.breakdown_tol
        )));
    }
    let asym = linalg::max_asymmetry(h);
    if asym > spectral::ASYMMETRY_TOL {
        return Err(Error::Precondition(format!(
            "Hamiltonian is asymmetric (max |H_ij - H_ji| = {asym:e})"
        )));
    }

    let diag_coeff = |v: &DVector<Complex64>, hv: &DVector<Complex64>| -> Result<f64> {
        let z = v.dotc(hv);
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Numerical("Lanczos coefficient is non-finite".into()));
        }
        if z.im.abs() > IMAG_TOL {
            return Err(Error::Numerical(format!(
                "diagonal Lanczos coefficient has imaginary part {:e} (tolerance {IMAG_TOL:e})",
                z.im
            )));
        }
        Ok(z.re)
    };

    let mut vectors: Vec<DVector<Complex64>> = vec![seed_state.amplitudes().clone()];
    let mut hv = linalg::mul_complex(h, &vectors[0]);
    let mut a = vec![diag_coeff(&vectors[0], &hv)?];
    let mut b = vec![0.0f64];

    while vectors.len() < max_k {
        let n = vectors.len() - 1;
        // Three-term recursion: A = (H - a_n) K_n - b_n K_{n-1}.
        let mut candidate = hv.clone();
        candidate.axpy(Complex64::new(-a[n], 0.0), &vectors[n], Complex64::ONE);
        if n > 0 {
            candidate.axpy(Complex64::new(-b[n], 0.0), &vectors[n - 1], Complex64::ONE);
        }
        if options.reorthogonalize {
            // Two passes of classical Gram-Schmidt against every stored
            // vector; the second pass removes what rounding left behind.
            for _ in 0..2 {
                for v in &vectors {
                    let c = v.dotc(&candidate);
                    candidate.axpy(-c, v, Complex64::ONE);
                }
            }
        }
        let norm = candidate.norm();
        if !norm.is_finite() {
            return Err(Error::Numerical(
                "Lanczos candidate norm is non-finite".into(),
            ));
        }
        if norm < options.breakdown_tol {
            break; // invariant subspace exhausted — benign early termination
        }
        candidate /= Complex64::new(norm, 0.0);
        hv = linalg::mul_complex(h, &candidate);
        a.push(diag_coeff(&candidate, &hv)?);
        b.push(norm);
        vectors.push(candidate);
    }

    let basis = KrylovBasis { vectors, a, b };
    let tri = basis.tridiagonal();
    Ok((basis, tri))
}

/// Scalarization of the Krylov overlap profile `c_i(t) = ⟨K_i|ψ(t)⟩` into a
/// single spread-complexity number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexityMode {
    /// `(1/k) Σ_i |c_i|` — default; insensitive to the overlaps' phases.
    MeanModulus,
    /// `(1/k) Σ_i Re c_i` — the literal real part of the mean overlap.
    MeanReal,
    /// `(1/k) |Σ_i c_i|` — modulus of the coherent sum.
    CoherentSum,
    /// `Σ_i i·|c_i|² / (k-1)` — mean basis position, normalized to [0, 1]
    /// (0 for k = 1).
    PositionWeighted,
}

impl ComplexityMode {
    /// All modes, in emission order.
    pub const ALL: [ComplexityMode; 4] = [
        ComplexityMode::MeanModulus,
        ComplexityMode::MeanReal,
        ComplexityMode::CoherentSum,
        ComplexityMode::PositionWeighted,
    ];

    /// Stable snake_case label for CSV columns.
    pub fn label(self) -> &'static str {
        match self {
            ComplexityMode::MeanModulus => "mean_modulus",
            ComplexityMode::MeanReal => "mean_real",
            ComplexityMode::CoherentSum => "coherent_sum",
            ComplexityMode::PositionWeighted => "position_weighted",
        }
    }

    /// Inverse of [`label`](Self::label).
    pub fn from_label(label: &str) -> Option<ComplexityMode> {
        ComplexityMode::ALL.into_iter().find(|m| m.label() == label)
    }
}

/// Spread complexity of `psi` over the basis, per `mode`.
pub fn spread_complexity(
    basis: &KrylovBasis,
    psi: &StateVector,
    mode: ComplexityMode,
) -> Result<f64> {
    if psi.dim() != basis.dim() {
        return Err(Error::ShapeMismatch(format!(
            "state dimension {} does not match basis dimension {}",
            psi.dim(),
            basis.dim()
        )));
    }
    let k = basis.k();
    let overlaps: Vec<Complex64> = basis
        .vectors
        .iter()
        .map(|v| v.dotc(psi.amplitudes()))
        .collect();
    let value = match mode {
        ComplexityMode::MeanModulus => overlaps.iter().map(|c| c.norm()).sum::<f64>() / k as f64,
        ComplexityMode::MeanReal => overlaps.iter().map(|c| c.re).sum::<f64>() / k as f64,
        ComplexityMode::CoherentSum => overlaps.iter().sum::<Complex64>().norm() / k as f64,
        ComplexityMode::PositionWeighted => {
            if k == 1 {
                0.0
            } else {
                overlaps
                    .iter()
                    .enumerate()
                    .map(|(i, c)| i as f64 * c.norm_sqr())
                    .sum::<f64>()
                    / (k - 1) as f64
            }
        }
    };
    if !value.is_finite() {
        return Err(Error::Numerical("spread complexity is non-finite".into()));
    }
    Ok(value)
}

/// Health report from [`validate_basis`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisValidation {
    /// `max |⟨K_i|K_j⟩ - δ_ij|`.
    pub orthonormality_defect: f64,
    /// Largest residual of the three-term recursion over interior indices,
    /// `max_n ‖H K_n - (a_n K_n + b_{n+1} K_{n+1} + b_n K_{n-1})‖`.
    pub recursion_residual: f64,
    /// `max |sorted eig(T) - sorted eig(H)|` when `k = D`, else `None`.
    pub spectrum_defect: Option<f64>,
}

impl BasisValidation {
    /// True when every defect is below its tolerance (a `None` spectrum
    /// defect passes vacuously).
    pub fn within(&self, orth_tol: f64, resid_tol: f64, spec_tol: f64) -> bool {
        self.orthonormality_defect < orth_tol
            && self.recursion_residual < resid_tol
            && self.spectrum_defect.is_none_or(|d| d < spec_tol)
    }
}

/// Measure the orthonormality, recursion residual, and (at `k = D`) spectrum
/// agreement of a basis against its Hamiltonian.
pub fn validate_basis(basis: &KrylovBasis, h: &DMatrix<f64>) -> Result<BasisValidation> {
    let d = basis.dim();
    if h.nrows() != d || h.ncols() != d {
        return Err(Error::ShapeMismatch(format!(
            "Hamiltonian is {} x {}, basis dimension is {d}",
            h.nrows(),
            h.ncols()
        )));
    }
    let k = basis.k();

    let mut orth = 0.0f64;
    for i in 0..k {
        for j in i..k {
            let want = if i == j { 1.0 } else { 0.0 };
            let got = basis.vectors[i].dotc(&basis.vectors[j]);
            orth = orth.max((got - Complex64::new(want, 0.0)).norm());
        }
    }

    let mut resid = 0.0f64;
    for n in 0..k.saturating_sub(1) {
        // Indices with K_{n+1} stored; the last vector has no b_{n+1} yet.
        let mut r = linalg::mul_complex(h, &basis.vectors[n]);
        r.axpy(
            Complex64::new(-basis.a[n], 0.0),
            &basis.vectors[n],
            Complex64::ONE,
        );
        r.axpy(
            Complex64::new(-basis.b[n + 1], 0.0),
            &basis.vectors[n + 1],
            Complex64::ONE,
        );
        if n > 0 {
            r.axpy(
                Complex64::new(-basis.b[n], 0.0),
                &basis.vectors[n - 1],
                Complex64::ONE,
            );
        }
        resid = resid.max(r.norm());
    }

    let spectrum_defect = if k == d {
        let t_eigs = basis.tridiagonal().eigenvalues();
        let h_eigs = spectral::diagonalize(h)?;
        let defect = t_eigs
            .iter()
            .zip(h_eigs.eigenvalues().iter())
            .map(|(t, e)| (t - e).abs())
            .fold(0.0f64, f64::max);
        Some(defect)
    } else {
        None
    };

    Ok(BasisValidation {
        orthonormality_defect: orth,
        recursion_residual: resid,
        spectrum_defect,
    })
}
