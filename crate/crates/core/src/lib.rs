//! Spectral-Galerkin simulation and numerical verification for the wave
//! equation `φ_tt - div(A ∇φ) = f` on the unit square with
//! `A = diag(1, r^α)`, degenerate on the side `r = 0`.
//!
//! The crate is organized bottom-up:
//!
//! * [`params`] and [`cutoff`]: parameters, admissibility checks and smooth cutoffs.
//! * [`radial`]: weighted Sturm-Liouville eigenpairs by exact-integral P1
//!   elements and tridiagonal bisection.
//! * [`wave`]: modal time evolution, energies, boundary traces and interior
//!   observation norms.
//! * [`hardy`]: subcritical and critical Hardy-type best constants.
//! * [`carleman`]: the Carleman weight, the conjugated operator and its
//!   residuals, and weighted component integrals.
//! * [`observability`]: ratio experiments built on the above.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleman;
pub mod cutoff;
pub mod error;
pub mod exec;
pub mod hardy;
pub mod observability;
pub mod params;
pub mod radial;
pub mod report;
pub mod stats;
pub mod wave;

pub use error::{Error, Result};
pub use exec::Execution;
