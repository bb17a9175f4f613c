use serde::{Deserialize, Serialize};

use super::assembly::WeightedMatrices;
use super::eigen::{MassTreatment, RadialEigenpair};
use super::tridiag::dot;

/// Both sides of `‖g‖² = μ²‖u‖² + ‖∂ᵣ(r^α u')‖² + 2μ ∫ r^α |u'|²` for
/// `g = μ u - ∂ᵣ(r^α u')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `‖g‖²` from the modal expansion `g = Σ c_k (μ + ρ_k) R_k`.
    pub lhs: f64,
    pub rhs: f64,
    pub mass_term: f64,
    pub divergence_term: f64,
    pub energy_term: f64,
    pub relative_residual: f64,
}

/// Evaluate the elliptic identity for `u = Σ c_k R_k`.
///
/// The left side uses the modal expansion, the right side the nodal vector:
/// `‖u‖²` and `∫ r^α |u'|²` from the mass and stiffness matrices, and
/// `∂ᵣ(r^α u')` as `-M⁻¹ K u`.
pub fn elliptic_identity_residual(
    m: &WeightedMatrices,
    pairs: &[RadialEigenpair],
    mass: MassTreatment,
    mu: f64,
    coeffs: &[f64],
) -> IdentityReport {
    let mm = m.mass_for(mass);
    let mut u = vec![0.0; m.dofs()];
    let mut lhs = 0.0;
    for (p, &c) in pairs.iter().zip(coeffs) {
        let x = m.restrict(&p.values);
        u.iter_mut().zip(&x).for_each(|(a, b)| *a += c * b);
        lhs += c * c * (mu + p.rho) * (mu + p.rho);
    }
    let ku = m.stiffness.apply(&u);
    let div = mm.solve(&ku);
    let mass_term = mu * mu * mm.quad(&u);
    let divergence_term = mm.quad(&div);
    let energy_term = 2.0 * mu * dot(&u, &ku);
    let rhs = mass_term + divergence_term + energy_term;
    let relative_residual = if lhs > 0.0 { (lhs - rhs).abs() / lhs } else { (lhs - rhs).abs() };
    IdentityReport { lhs, rhs, mass_term, divergence_term, energy_term, relative_residual }
}
