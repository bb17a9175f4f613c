//! The degenerate radial Sturm-Liouville problem `-(r^α R')' = ρ R` on
//! `(0, 1)` and its power-weighted relatives.

pub mod assembly;
pub mod eigen;
pub mod frobenius;
pub mod identity;
pub mod mesh;
pub mod tridiag;

pub use assembly::{assemble_weighted_system, power_moment, BoundaryConditions, WeightedMatrices};
pub use eigen::{solve_eigenpairs, FluxMethod, MassTreatment, RadialEigenpair, SolverOptions};
pub use frobenius::FrobeniusMode;
pub use identity::{elliptic_identity_residual, IdentityReport};
pub use mesh::{build_graded_mesh, default_grading, MeshKind, RadialMesh};
pub use tridiag::SymTridiag;

use crate::error::Result;

/// Dirichlet eigenpairs of `-(r^α R')' = ρ R` on a graded mesh of `[0, 1]`.
pub fn dirichlet_spectrum(
    alpha: f64,
    cells: usize,
    grading: f64,
    k_max: usize,
    opts: SolverOptions,
) -> Result<(WeightedMatrices, Vec<RadialEigenpair>)> {
    let mesh = build_graded_mesh(cells, grading)?;
    let m = assemble_weighted_system(&mesh, alpha, 0.0, BoundaryConditions::DirichletDirichlet)?;
    let pairs = solve_eigenpairs(&m, k_max, opts)?;
    Ok((m, pairs))
}
