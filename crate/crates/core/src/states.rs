//! Qubit-register state vectors.
//!
//! Conventions (fixed across the crate):
//!
//! - A register of `N` qubits has Hilbert dimension `D = 2^N`.
//! - Qubit 0 is the **most significant bit** of the computational basis index,
//!   so basis state `|b_0 b_1 ... b_{N-1}⟩` has index `Σ b_q · 2^(N-1-q)`
//!   (see [`basis_index`]).
//! - State vectors are unit-norm by construction; [`StateVector::try_new`]
//!   rejects anything whose norm deviates from 1 by more than
//!   [`StateVector::NORM_TOL`].
//! - [`overlap`] is conjugate-linear in its **first** argument: `⟨a|b⟩`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on register size: `D = 2^12 = 4096` keeps dense `D × D` work
/// (eigensolves, propagators) within memory and runtime sanity on one node.
pub const MAX_QUBITS: u32 = 12;

/// Number of qubits in a register, validated against a cap at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitCount {
    n: u32,
}

impl QubitCount {
    /// A register of `n` qubits, `1 ..= MAX_QUBITS`.
    pub fn new(n: u32) -> Result<Self> {
        Self::with_cap(n, MAX_QUBITS)
    }

    /// Same as [`QubitCount::new`] with a caller-chosen upper cap (still at
    /// least 1 qubit). Exists so embedders can tighten the default limit.
    pub fn with_cap(n: u32, cap: u32) -> Result<Self> {
        if n == 0 || n > cap {
            return Err(Error::InvalidDimension(format!(
                "qubit count must be in 1..={cap}, got {n}"
            )));
        }
        Ok(Self { n })
    }

    /// Number of qubits `N`.
    pub fn get(self) -> u32 {
        self.n
    }

    /// Hilbert-space dimension `D = 2^N`.
    pub fn dim(self) -> usize {
        1usize << self.n
    }
}

/// Computational basis index of `|b_0 b_1 ... b_{N-1}⟩` with qubit 0 as the
/// most significant bit. Each entry must be 0 or 1.
pub fn basis_index(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| {
        debug_assert!(b <= 1, "basis bits must be 0 or 1");
        (acc << 1) | b as usize
    })
}

/// A unit-norm complex state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Maximum allowed deviation of the norm from 1.
    pub const NORM_TOL: f64 = 1e-10;

    /// Wrap an amplitude vector, enforcing finiteness and unit norm.
    pub fn try_new(amps: DVector<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension(
                "state vector must have at least one amplitude".into(),
            ));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical(
                "state vector contains non-finite amplitudes".into(),
            ));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::Precondition(format!(
                "state vector must be unit-norm (|norm - 1| <= {:e}), got norm {norm:.17}",
                Self::NORM_TOL
            )));
        }
        Ok(Self { amps })
    }

    /// Dimension `D` of the underlying Hilbert space.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Amplitudes in the computational basis.
    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// Euclidean norm (1 up to [`StateVector::NORM_TOL`] by construction).
    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }
}

/// The N-qubit GHZ state `(|00...0⟩ + |11...1⟩) / √2`.
///
/// Amplitudes sit at basis indices `0` and `2^N - 1`; for a single qubit this
/// is the `|+⟩` state.
pub fn ghz_state(n: QubitCount) -> StateVector {
    let dim = n.dim();
    let mut amps = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[0] = amp;
    amps[dim - 1] = amp;
    StateVector::try_new(amps).expect("GHZ construction is exactly unit-norm")
}

/// Inner product `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::ShapeMismatch(format!(
            "overlap of states with dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.amps.dotc(&b.amps))
}
