//! Coherent-state families over truncated bosonic Fock spaces.
//!
//! The crate builds the coherent, binomial, multinomial, negative binomial and
//! negative multinomial states as explicit amplitude vectors and checks the
//! identities that tie them to probability theory and to the Lie algebras
//! su(2), su(1,1), su(r+1) and su(r,1):
//!
//! * [`fock`]: enumerated occupation-number bases, state vectors, sparse
//!   operators and the matrix exponential.
//! * [`distributions`]: closed-form pmfs, generating functions, Poisson
//!   limits, multiple-Poisson slicing and the waiting-time Monte Carlo.
//! * [`states`]: the five state families and their number statistics.
//! * [`algebra`]: bilinear and Holstein-Primakoff realizations, constraint
//!   subspaces and structure-constant verification.
//! * [`generation`]: exponential, displacement, sequential and dynamical
//!   generation of the same states.
//! * [`measure`]: fixed-M projectors, CP^r measures and quadrature checks of
//!   the resolution of unity.
//! * [`suites`]: named verification suites with JSON reports.
//!
//! Data-parallel inner loops (Monte Carlo replicates, quadrature nodes, grid
//! sweeps) run on rayon when the `parallel` feature is enabled and fall back
//! to sequential loops otherwise; results are bit-identical either way.

pub mod algebra;
pub mod distributions;
pub mod error;
pub mod exec;
pub mod fock;
pub mod generation;
pub mod measure;
pub mod states;
pub mod suites;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;

/// Default relative tolerance of [`fock::op_exponential`] and
/// [`fock::expm_apply`].
pub const DEFAULT_EXPM_TOL: f64 = 1e-12;

/// Default tail-mass tolerance used when choosing or validating cutoffs.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
