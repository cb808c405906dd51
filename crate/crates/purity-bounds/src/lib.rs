//! Purity-based bounds on entanglement and coherence, with simulated
//! purity-detection protocols.
//!
//! The crate has three layers:
//!
//! - [`linalg`]: self-contained dense complex linear algebra for small
//!   (dim ≤ 64) Hermitian operators — tensor products, partial trace,
//!   dephasing, a cyclic-Jacobi eigensolver, von Neumann entropy.
//! - [`bounds`]: closed-form extremal spectra of the entropy at fixed
//!   purity, and the derived lower/upper bounds on coherent information,
//!   relative entropy of coherence, and multi-information.
//! - protocol simulators that estimate purities from synthetic
//!   measurement data: [`shadow`] (randomized single-qubit Clifford
//!   measurements), [`collective`] (two-copy Bell-state measurements),
//!   and [`tomography`] (full Pauli tomography baseline with linear
//!   inversion and physical projection).
//!
//! [`sweep`] ties the layers together into the experiment driver used by
//! the `qpb` command-line tool: θ-sweeps over state families, noise
//! sweeps, and deterministic CSV emission.
//!
//! With the default `parallel` feature, snapshot sampling and sweep
//! points run on rayon. Results are bit-identical with and without the
//! feature: every reduction uses a fixed pairwise summation tree and
//! every Monte Carlo sample draws from its own counter-derived RNG
//! stream.

pub mod bounds;
pub mod collective;
mod error;
mod exec;
pub mod linalg;
pub mod rng;
pub mod shadow;
pub mod states;
pub mod sweep;
pub mod tomography;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
