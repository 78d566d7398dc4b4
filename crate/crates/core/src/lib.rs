//! Numerical laboratory for scrambling diagnostics on Rosenzweig-Porter (RP)
//! random-matrix ensembles.
//!
//! The crate builds dense real-symmetric RP Hamiltonians that interpolate from
//! chaotic (GOE-like) to localized (Poisson-like) spectra as the deformation
//! exponent γ grows, evolves GHZ initial states under them by exact
//! diagonalization, and measures two scrambling diagnostics:
//!
//! - time-integrated state fidelity `F_A`, and
//! - time-integrated Krylov spread complexity `C_A` built on a Lanczos basis
//!   with full reorthogonalization.
//!
//! Module map:
//!
//! - [`seeds`]      — deterministic child-seed derivation (splitmix64 mixing)
//! - [`states`]     — qubit-register state vectors, GHZ construction, overlaps
//! - [`ensembles`]  — GOE sampling, RP construction, perturbed/fresh ensembles
//! - [`spectral`]   — dense symmetric eigensolve, unitary evolution, gap ratios
//! - [`krylov`]     — Lanczos tridiagonalization, spread complexity, basis checks
//! - [`observables`]— fidelity/spread time series on uniform grids, integration
//! - [`stats`]      — percentile bootstrap CIs, percentiles, Spearman rank corr.
//! - [`runner`]     — seeded sweep pipeline, CSV artifacts, self-validation
//!
//! Everything downstream of a `(master seed, coordinates)` pair is
//! deterministic: reruns and different worker counts produce byte-identical
//! artifacts.

pub mod ensembles;
pub mod error;
pub mod krylov;
pub mod observables;
pub mod runner;
pub mod seeds;
pub mod spectral;
pub mod states;
pub mod stats;

mod linalg;

pub use error::{Error, Result};
