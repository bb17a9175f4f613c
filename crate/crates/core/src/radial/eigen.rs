use serde::{Deserialize, Serialize};

use super::assembly::WeightedMatrices;
use super::tridiag::{dot, inverse_iteration, m_orthonormalize, smallest_eigenvalues, SymTridiag};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// How the mass matrix enters the eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassTreatment {
    /// Row-sum lumping, solved as the standard problem `D^{-1/2} K D^{-1/2}`.
    #[default]
    Lumped,
    /// Consistent Galerkin mass; bisection on the inertia of `K - μM`.
    Consistent,
}

/// Recovery of the boundary derivative `R'(b)` at the right endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FluxMethod {
    /// Residual of the weak form tested against the last hat function.
    #[default]
    Variational,
    /// Second-order one-sided difference on the last three nodes.
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverOptions {
    pub mass: MassTreatment,
    pub flux: FluxMethod,
    pub exec: Execution,
}

/// One computed eigenpair of `-(r^p R')' = ρ r^q R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialEigenpair {
    /// 1-based index.
    pub k: usize,
    pub rho: f64,
    /// Nodal values on the full mesh, boundary nodes included.
    pub values: Vec<f64>,
    /// `R'(b)` at the right endpoint; zero under a natural condition there.
    pub flux_at_1: f64,
    /// `∫ r^p (R')² dr`.
    pub weighted_energy: f64,
}

impl WeightedMatrices {
    /// The mass matrix used by `treatment`, as a tridiagonal matrix.
    pub fn mass_for(&self, treatment: MassTreatment) -> SymTridiag {
        match treatment {
            MassTreatment::Lumped => SymTridiag::from_diagonal(&self.lumped),
            MassTreatment::Consistent => self.mass.clone(),
        }
    }

    /// `R'(b)` from the weak-form residual on the last cell.
    pub fn variational_flux(&self, rho: f64, nodal: &[f64]) -> f64 {
        if !self.bc.right_constrained() {
            return 0.0;
        }
        let nodes = self.mesh.nodes();
        let e = self.mesh.cells() - 1;
        let prev = nodal[e];
        let kc = self.cell_stiffness[e];
        let mlr = self.cell_mass[e][1];
        // (K R)_N - ρ (M R)_N with R_N = 0
        let weak = -kc * prev - rho * mlr * prev;
        weak / nodes[e + 1].powf(self.p)
    }

    /// `R'(b)` from the quadratic through the last three nodes.
    pub fn one_sided_flux(&self, nodal: &[f64]) -> f64 {
        let x = self.mesh.nodes();
        let n = x.len() - 1;
        let (x0, x1, x2) = (x[n], x[n - 1], x[n - 2]);
        let (f0, f1, f2) = (nodal[n], nodal[n - 1], nodal[n - 2]);
        f0 * (2.0 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2))
            + f1 * (x0 - x2) / ((x1 - x0) * (x1 - x2))
            + f2 * (x0 - x1) / ((x2 - x0) * (x2 - x1))
    }
}

/// Smallest `k_max` eigenpairs of `K x = ρ M x`.
///
/// Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
/// iteration followed by a Gram-Schmidt pass in the mass inner product.
pub fn solve_eigenpairs(m: &WeightedMatrices, k_max: usize, opts: SolverOptions) -> Result<Vec<RadialEigenpair>> {
    let n = m.dofs();
    if k_max > n {
        return Err(Error::TruncationTooSmall { requested: k_max, available: n });
    }
    let (a, mass, unscale) = match opts.mass {
        MassTreatment::Lumped => {
            let a = m.stiffness.congruence_scaled(&m.lumped);
            let unscale: Vec<f64> = m.lumped.iter().map(|d| 1.0 / d.sqrt()).collect();
            (a, SymTridiag::identity(n), Some(unscale))
        }
        MassTreatment::Consistent => (m.stiffness.clone(), m.mass.clone(), None),
    };
    let rhos = smallest_eigenvalues(&a, &mass, k_max, opts.exec);
    let vecs: Vec<Result<Vec<f64>>> = opts.exec.map(k_max, |j| inverse_iteration(&a, &mass, rhos[j], j));
    let mut ys = vecs.into_iter().collect::<Result<Vec<_>>>()?;
    m_orthonormalize(&mass, &mut ys);

    let mut out = Vec::with_capacity(k_max);
    for (j, y) in ys.into_iter().enumerate() {
        let x: Vec<f64> = match &unscale {
            Some(s) => y.iter().zip(s).map(|(v, si)| v * si).collect(),
            None => y,
        };
        let rho = rhos[j];
        let values = m.expand(&x);
        let flux = match opts.flux {
            FluxMethod::Variational => {
                let f = m.variational_flux(rho, &values);
                if f.is_finite() {
                    f
                } else {
                    m.one_sided_flux(&values)
                }
            }
            FluxMethod::OneSided => m.one_sided_flux(&values),
        };
        let weighted_energy = dot(&x, &m.stiffness.apply(&x));
        out.push(RadialEigenpair { k: j + 1, rho, values, flux_at_1: flux, weighted_energy });
    }
    Ok(out)
}
