//! Piecewise-linear Galerkin matrices for the power-weighted forms
//! `∫ r^p u' v'` and `∫ r^q u v`, integrated in closed form.

use serde::{Deserialize, Serialize};

use super::mesh::RadialMesh;
use super::tridiag::SymTridiag;
use crate::error::{Error, Result};

/// Which endpoints carry a homogeneous Dirichlet condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryConditions {
    DirichletDirichlet,
    DirichletLeftOnly,
    DirichletRightOnly,
}

impl BoundaryConditions {
    pub fn left_constrained(self) -> bool {
        matches!(self, Self::DirichletDirichlet | Self::DirichletLeftOnly)
    }

    pub fn right_constrained(self) -> bool {
        matches!(self, Self::DirichletDirichlet | Self::DirichletRightOnly)
    }
}

/// `∫_a^b r^m dr`, with the logarithmic case `m = -1`.
fn power_integral(a: f64, b: f64, m: f64) -> f64 {
    if m == -1.0 {
        if a == 0.0 {
            return f64::INFINITY;
        }
        return ((b - a) / a).ln_1p();
    }
    if a == 0.0 {
        return if m + 1.0 > 0.0 { b.powf(m + 1.0) / (m + 1.0) } else { f64::INFINITY };
    }
    (b.powf(m + 1.0) - a.powf(m + 1.0)) / (m + 1.0)
}

/// `∫_a^b r^m s^j dr` with `s = (r - a)/(b - a)`, `j ∈ {0, 1, 2}`.
///
/// For cells far from the origin (`h/a ≤ ½`) the binomial expansion
/// `h a^m Σ_k C(m,k) (h/a)^k / (k + j + 1)` avoids the cancellation of
/// the direct moment formula.
pub fn power_moment(a: f64, b: f64, m: f64, j: u32) -> f64 {
    let h = b - a;
    if a == 0.0 {
        let e = m + j as f64 + 1.0;
        return if e > 0.0 { b.powf(m + 1.0) / e } else { f64::INFINITY };
    }
    let x = h / a;
    if x <= 0.5 {
        let mut binom = 1.0;
        let mut xk = 1.0;
        let mut sum = 0.0;
        for k in 0..400u32 {
            let term = binom * xk / (k + j + 1) as f64;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() && k > 2 {
                break;
            }
            binom *= (m - k as f64) / (k + 1) as f64;
            xk *= x;
        }
        return h * a.powf(m) * sum;
    }
    let ia = |i: f64| power_integral(a, b, m + i);
    match j {
        0 => ia(0.0),
        1 => (ia(1.0) - a * ia(0.0)) / h,
        _ => (ia(2.0) - 2.0 * a * ia(1.0) + a * a * ia(0.0)) / (h * h),
    }
}

/// Assembled stiffness and mass matrices restricted to the free nodes.
#[derive(Debug, Clone)]
pub struct WeightedMatrices {
    pub stiffness: SymTridiag,
    /// Consistent mass matrix.
    pub mass: SymTridiag,
    /// Row-sum lumped mass.
    pub lumped: Vec<f64>,
    pub p: f64,
    pub q: f64,
    pub bc: BoundaryConditions,
    /// Node indices of the degrees of freedom.
    pub free: Vec<usize>,
    /// `∫ r^p dr / h²` per cell.
    pub cell_stiffness: Vec<f64>,
    /// `[m_LL, m_LR, m_RR]` per cell.
    pub cell_mass: Vec<[f64; 3]>,
    pub mesh: RadialMesh,
}

impl WeightedMatrices {
    pub fn dofs(&self) -> usize {
        self.free.len()
    }

    /// Nodal vector (one value per mesh node) from a dof vector.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.mesh.nodes().len()];
        for (&node, &v) in self.free.iter().zip(x) {
            full[node] = v;
        }
        full
    }

    /// Dof vector from nodal values; constrained entries are dropped.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&i| full[i]).collect()
    }
}

/// Assemble `K_p` and `M_q` on `mesh` with piecewise-linear elements.
///
/// At a left endpoint `r = 0` the weights must be integrable against the
/// basis functions that survive the boundary condition: `p > -1` always,
/// `q > -2` when the node at 0 is constrained, `q > -1` otherwise.
pub fn assemble_weighted_system(mesh: &RadialMesh, p: f64, q: f64, bc: BoundaryConditions) -> Result<WeightedMatrices> {
    if mesh.left() == 0.0 {
        if !(p > -1.0) {
            return Err(Error::DivergentWeight { exponent: p, context: "stiffness weight r^p at r = 0" });
        }
        let q_min = if bc.left_constrained() { -2.0 } else { -1.0 };
        if !(q > q_min) {
            return Err(Error::DivergentWeight { exponent: q, context: "mass weight r^q at r = 0" });
        }
    }
    let nodes = mesh.nodes();
    let cells = mesh.cells();
    let mut cell_stiffness = Vec::with_capacity(cells);
    let mut cell_mass = Vec::with_capacity(cells);
    for e in 0..cells {
        let (a, b) = (nodes[e], nodes[e + 1]);
        let h = b - a;
        cell_stiffness.push(power_moment(a, b, p, 0) / (h * h));
        let m0 = power_moment(a, b, q, 0);
        let m1 = power_moment(a, b, q, 1);
        let m2 = power_moment(a, b, q, 2);
        let ll = if m0.is_finite() { m0 - 2.0 * m1 + m2 } else { f64::INFINITY };
        cell_mass.push([ll, m1 - m2, m2]);
    }

    let first = usize::from(bc.left_constrained());
    let last = if bc.right_constrained() { cells - 1 } else { cells };
    let free: Vec<usize> = (first..=last).collect();
    let n = free.len();
    let mut kd = vec![0.0; n];
    let mut ko = vec![0.0; n.saturating_sub(1)];
    let mut md = vec![0.0; n];
    let mut mo = vec![0.0; n.saturating_sub(1)];
    let mut lumped = vec![0.0; n];
    let dof = |node: usize| -> Option<usize> { (node >= first && node <= last).then(|| node - first) };
    for e in 0..cells {
        let kc = cell_stiffness[e];
        let [ll, lr, rr] = cell_mass[e];
        let (l, r) = (dof(e), dof(e + 1));
        if let Some(i) = l {
            kd[i] += kc;
            md[i] += ll;
            lumped[i] += ll + lr;
        }
        if let Some(i) = r {
            kd[i] += kc;
            md[i] += rr;
            lumped[i] += lr + rr;
        }
        if let (Some(i), Some(_)) = (l, r) {
            ko[i] -= kc;
            mo[i] += lr;
        }
    }
    Ok(WeightedMatrices {
        stiffness: SymTridiag::new(kd, ko),
        mass: SymTridiag::new(md, mo),
        lumped,
        p,
        q,
        bc,
        free,
        cell_stiffness,
        cell_mass,
        mesh: mesh.clone(),
    })
}
