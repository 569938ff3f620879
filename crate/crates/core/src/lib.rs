//! Exact dense simulation of the quantum delayed-choice experiment.
//!
//! The crate is organised bottom-up:
//!
//! * [`quantum`] holds statevectors, density matrices, gates, projectors and
//!   the partial trace / post-selection machinery for up to four qubits.
//! * [`circuit`] builds the single-ancilla (QDCE) and entangled-ancilla
//!   (EA-QDCE) circuits and simulates them.
//! * [`analytic`] has the closed-form intensities, the hidden-variable model
//!   and the fringe visibility.
//! * [`experiment`] drives parameter sweeps, shot sampling and device noise.
//! * [`io`] writes CSV, SVG and JSON artifacts and loads sweep configs.
//!
//! Basis ordering: qubit 0 is the most significant bit of a basis index, so
//! index `0b110` on three qubits reads `q0=1, q1=1, q2=0`.

pub mod analytic;
pub mod circuit;
mod error;
pub mod experiment;
pub mod io;
pub mod quantum;

pub use error::{Error, Result};

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Algebraic identities on a single operation.
    pub const ALGEBRAIC: f64 = 1e-12;
    /// Results of composed gate sequences.
    pub const COMPOSED: f64 = 1e-10;
    /// Largest imaginary part tolerated in a real-valued expectation.
    pub const IMAG_GUARD: f64 = 1e-9;
    /// Smallest eigenvalue still accepted as positive semidefinite.
    pub const PSD: f64 = -1e-10;
    /// Post-selection branches below this probability are impossible.
    pub const IMPOSSIBLE_BRANCH: f64 = 1e-14;
    /// Normalisation slack for probability distributions.
    pub const DISTRIBUTION: f64 = 1e-9;
}
