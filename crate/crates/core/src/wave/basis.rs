use serde::Serialize;

use crate::error::{Error, Result};
use crate::radial::{
    assemble_weighted_system, build_graded_mesh, solve_eigenpairs, BoundaryConditions, MassTreatment, RadialEigenpair,
    SolverOptions, SymTridiag, WeightedMatrices,
};

/// Discrete Dirichlet eigenbasis `{R_k}` of `-(r^α ∂ᵣ ·)'` used for the
/// separated expansion `Σ sin(nπθ) R_k(r)`.
#[derive(Debug, Clone)]
pub struct RadialBasis {
    alpha: f64,
    matrices: WeightedMatrices,
    pairs: Vec<RadialEigenpair>,
    mass: SymTridiag,
    treatment: MassTreatment,
}

/// Metadata describing how a basis was computed.
#[derive(Debug, Clone, Serialize)]
pub struct BasisInfo {
    pub alpha: f64,
    pub cells: usize,
    pub grading: f64,
    pub k_max: usize,
    pub mass: MassTreatment,
}

impl RadialBasis {
    pub fn compute(alpha: f64, cells: usize, grading: f64, k_max: usize, opts: SolverOptions) -> Result<Self> {
        let mesh = build_graded_mesh(cells, grading)?;
        let matrices = assemble_weighted_system(&mesh, alpha, 0.0, BoundaryConditions::DirichletDirichlet)?;
        let pairs = solve_eigenpairs(&matrices, k_max, opts)?;
        Ok(Self::from_parts(alpha, matrices, pairs, opts.mass))
    }

    pub fn from_parts(alpha: f64, matrices: WeightedMatrices, pairs: Vec<RadialEigenpair>, treatment: MassTreatment) -> Self {
        let mass = matrices.mass_for(treatment);
        Self { alpha, matrices, pairs, mass, treatment }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k_max(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[RadialEigenpair] {
        &self.pairs
    }

    pub fn matrices(&self) -> &WeightedMatrices {
        &self.matrices
    }

    pub fn nodes(&self) -> &[f64] {
        self.matrices.mesh.nodes()
    }

    /// `ρ_k`, 1-based.
    pub fn rho(&self, k: usize) -> f64 {
        self.pairs[k - 1].rho
    }

    /// `R_k'(1)`, 1-based.
    pub fn flux(&self, k: usize) -> f64 {
        self.pairs[k - 1].flux_at_1
    }

    /// `R_k(r)` by piecewise-linear interpolation.
    pub fn mode_value(&self, k: usize, r: f64) -> f64 {
        self.matrices.mesh.interpolate(&self.pairs[k - 1].values, r)
    }

    /// `R_k'(r)`, cell-wise exact for the piecewise-linear interpolant.
    pub fn mode_slope(&self, k: usize, r: f64) -> f64 {
        self.matrices.mesh.slope(&self.pairs[k - 1].values, r)
    }

    /// Discrete inner products `(R_k, v)` for a nodal vector `v`, `k = 1..=k_max`.
    pub fn project_nodal(&self, nodal: &[f64], k_max: usize) -> Vec<f64> {
        let v = self.matrices.restrict(nodal);
        let mv = self.mass.apply(&v);
        self.pairs[..k_max]
            .iter()
            .map(|p| {
                let x = self.matrices.restrict(&p.values);
                x.iter().zip(&mv).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Squared discrete `L²(0,1)` norm of a nodal vector.
    pub fn nodal_norm_sq(&self, nodal: &[f64]) -> f64 {
        self.mass.quad(&self.matrices.restrict(nodal))
    }

    pub fn check_truncation(&self, k_max: usize) -> Result<()> {
        if k_max > self.k_max() || k_max == 0 {
            return Err(Error::TruncationTooSmall { requested: k_max, available: self.k_max() });
        }
        Ok(())
    }

    pub fn info(&self) -> BasisInfo {
        BasisInfo {
            alpha: self.alpha,
            cells: self.matrices.mesh.cells(),
            grading: self.matrices.mesh.grading(),
            k_max: self.k_max(),
            mass: self.treatment,
        }
    }
}
