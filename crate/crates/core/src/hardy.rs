//! Hardy-type inequalities: the subcritical bound
//! `∫ r^{α-2} u² ≤ 4/(1-α)² ∫ r^α (u')²` and the critical truncated
//! constants on `(δ, 1)` with weights `(1/r, r)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::radial::tridiag::smallest_eigenvalues;
use crate::radial::{assemble_weighted_system, BoundaryConditions, MassTreatment, MeshKind, RadialMesh, WeightedMatrices};
use crate::stats::{linear_fit, LinearFit};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha, expected: "0 < alpha < 1" });
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange { delta });
    }
    Ok(())
}

/// `4 / (1 - α)²`.
pub fn subcritical_constant(alpha: f64) -> f64 {
    4.0 / ((1.0 - alpha) * (1.0 - alpha))
}

/// Radial test function for the subcritical check.
#[derive(Debug, Clone)]
pub enum TestFunction {
    /// `Σ c_i r^{e_i}` as `(c_i, e_i)` pairs.
    PowerSum(Vec<(f64, f64)>),
    /// Piecewise-linear function with the given nodal values on a mesh of `[0, b]`.
    Nodal { mesh: RadialMesh, values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyCheck {
    /// `∫ r^{α-2} u²`.
    pub lhs: f64,
    /// `∫ r^α (u')²`.
    pub rhs: f64,
    pub constant: f64,
    pub rhs_times_constant: f64,
    pub holds: bool,
    /// `constant·rhs / lhs`; infinite when `lhs = 0`.
    pub margin: f64,
}

/// Evaluates both sides of the subcritical inequality with exact integrals.
pub fn subcritical_hardy_check(u: &TestFunction, alpha: f64) -> Result<HardyCheck> {
    check_alpha(alpha)?;
    let (lhs, rhs) = match u {
        TestFunction::PowerSum(terms) => {
            let terms: Vec<(f64, f64)> = terms.iter().copied().filter(|(c, _)| *c != 0.0).collect();
            let at_zero: f64 = terms.iter().filter(|(_, e)| *e == 0.0).map(|(c, _)| c).sum();
            if at_zero != 0.0 {
                return Err(Error::BoundaryViolation { value: at_zero });
            }
            if let Some((_, e)) = terms.iter().find(|(_, e)| *e < 0.0) {
                return Err(Error::BoundaryViolation { value: if *e < 0.0 { f64::INFINITY } else { 0.0 } });
            }
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            for &(ci, ei) in &terms {
                for &(cj, ej) in &terms {
                    let d = ei + ej + alpha - 1.0;
                    if !(d > 0.0) {
                        return Err(Error::DivergentWeight {
                            exponent: ei.min(ej),
                            context: "test function too singular for the Hardy integrals",
                        });
                    }
                    lhs += ci * cj / d;
                    rhs += ci * cj * ei * ej / d;
                }
            }
            (lhs, rhs)
        }
        TestFunction::Nodal { mesh, values } => {
            if mesh.left() != 0.0 {
                return Err(Error::InvalidMeshSpec("Hardy test mesh must start at r = 0".into()));
            }
            if values.len() != mesh.nodes().len() {
                return Err(Error::GridMismatch(format!("{} nodal values on {} nodes", values.len(), mesh.nodes().len())));
            }
            if values[0] != 0.0 {
                return Err(Error::BoundaryViolation { value: values[0] });
            }
            let m = assemble_weighted_system(mesh, alpha, alpha - 2.0, BoundaryConditions::DirichletLeftOnly)?;
            let x = m.restrict(values);
            (m.mass.quad(&x), m.stiffness.quad(&x))
        }
    };
    let constant = subcritical_constant(alpha);
    let bound = constant * rhs;
    Ok(HardyCheck {
        lhs,
        rhs,
        constant,
        rhs_times_constant: bound,
        holds: lhs <= bound,
        margin: if lhs > 0.0 { bound / lhs } else { f64::INFINITY },
    })
}

/// Boundary conditions for the critical truncated problem on `(δ, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalBc {
    /// `u(1) = 0`, `u(δ)` free.
    Mixed,
    /// `u(δ) = u(1) = 0`.
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalMethod {
    /// Weights `(r, 1/r)` on a geometric mesh of `(δ, 1)`.
    #[default]
    Direct,
    /// `x = -ln r`: unweighted problem on a uniform mesh of `(0, |ln δ|)`.
    LogTransform,
}

/// `4|ln δ|²/π²` (mixed) or `|ln δ|²/π²` (Dirichlet).
pub fn exact_critical_constant(delta: f64, bc: CriticalBc) -> Result<f64> {
    check_delta(delta)?;
    let l = delta.ln().abs();
    Ok(match bc {
        CriticalBc::Mixed => 4.0 * l * l / (PI * PI),
        CriticalBc::Dirichlet => l * l / (PI * PI),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardySettings {
    pub cells: usize,
    /// Grading of the `[0, 1]` mesh for subcritical runs; ignored by critical runs.
    pub grading: f64,
    pub mass: MassTreatment,
    pub exec: Execution,
}

impl Default for HardySettings {
    fn default() -> Self {
        Self { cells: 4096, grading: 3.0, mass: MassTreatment::Consistent, exec: Execution::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeshInfo {
    pub cells: usize,
    pub kind: MeshKind,
    pub left: f64,
    pub right: f64,
}

impl From<&RadialMesh> for MeshInfo {
    fn from(m: &RadialMesh) -> Self {
        Self { cells: m.cells(), kind: m.kind(), left: m.left(), right: m.right() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyReport {
    pub critical: bool,
    pub alpha: f64,
    pub delta: Option<f64>,
    pub bc: String,
    pub method: Option<CriticalMethod>,
    pub numerical_best_constant: f64,
    /// `4/(1-α)²` for subcritical runs, the exact constant for critical ones.
    pub reference_constant: f64,
    pub ratio: f64,
    pub relative_error: f64,
    pub mass: MassTreatment,
    /// Relative change of the constant when lumped mass replaces the
    /// consistent one (or vice versa); `None` if not computed.
    pub lumping_perturbation: Option<f64>,
    pub mesh: MeshInfo,
}

/// `max ∫ r^q u² / ∫ r^p (u')²` over the discrete space, i.e. `1/μ₁`.
fn max_rayleigh(m: &WeightedMatrices, mass: MassTreatment, exec: Execution) -> Result<f64> {
    let mm = m.mass_for(mass);
    let mu = smallest_eigenvalues(&m.stiffness, &mm, 1, exec);
    match mu.first() {
        Some(&mu) if mu > 0.0 => Ok(1.0 / mu),
        _ => Err(Error::ConvergenceFailure { index: 1, reason: "no positive eigenvalue".into() }),
    }
}

fn other(mass: MassTreatment) -> MassTreatment {
    match mass {
        MassTreatment::Lumped => MassTreatment::Consistent,
        MassTreatment::Consistent => MassTreatment::Lumped,
    }
}

/// Subcritical best-constant variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubcriticalBc {
    /// `u(0) = 0`, `u(1)` free.
    LeftDirichlet,
    BothDirichlet,
}

/// Largest discrete Rayleigh quotient `∫ r^{α-2} u² / ∫ r^α (u')²` on `mesh`.
pub fn best_subcritical_constant_on(
    alpha: f64,
    mesh: &RadialMesh,
    bc: SubcriticalBc,
    settings: &HardySettings,
) -> Result<HardyReport> {
    check_alpha(alpha)?;
    let bcs = match bc {
        SubcriticalBc::LeftDirichlet => BoundaryConditions::DirichletLeftOnly,
        SubcriticalBc::BothDirichlet => BoundaryConditions::DirichletDirichlet,
    };
    let m = assemble_weighted_system(mesh, alpha, alpha - 2.0, bcs)?;
    let c = max_rayleigh(&m, settings.mass, settings.exec)?;
    let c_other = max_rayleigh(&m, other(settings.mass), settings.exec)?;
    let bound = subcritical_constant(alpha);
    Ok(HardyReport {
        critical: false,
        alpha,
        delta: None,
        bc: serde_json::to_value(bc).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        method: None,
        numerical_best_constant: c,
        reference_constant: bound,
        ratio: c / bound,
        relative_error: (c - bound).abs() / bound,
        mass: settings.mass,
        lumping_perturbation: Some(c_other / c - 1.0),
        mesh: MeshInfo::from(mesh),
    })
}

/// [`best_subcritical_constant_on`] with a graded mesh of `settings.cells` cells.
pub fn best_subcritical_constant(alpha: f64, bc: SubcriticalBc, settings: &HardySettings) -> Result<HardyReport> {
    let mesh = RadialMesh::graded(0.0, 1.0, settings.cells, settings.grading)?;
    best_subcritical_constant_on(alpha, &mesh, bc, settings)
}

/// Numerical critical constant on `(δ, 1)`.
pub fn critical_truncated_constant(
    delta: f64,
    bc: CriticalBc,
    method: CriticalMethod,
    settings: &HardySettings,
) -> Result<HardyReport> {
    check_delta(delta)?;
    let (mesh, p, q, bcs) = match method {
        CriticalMethod::Direct => {
            let bcs = match bc {
                CriticalBc::Mixed => BoundaryConditions::DirichletRightOnly,
                CriticalBc::Dirichlet => BoundaryConditions::DirichletDirichlet,
            };
            (RadialMesh::geometric(delta, 1.0, settings.cells)?, 1.0, -1.0, bcs)
        }
        CriticalMethod::LogTransform => {
            // x = 0 is r = 1, x = L is r = δ
            let bcs = match bc {
                CriticalBc::Mixed => BoundaryConditions::DirichletLeftOnly,
                CriticalBc::Dirichlet => BoundaryConditions::DirichletDirichlet,
            };
            (RadialMesh::uniform(0.0, delta.ln().abs(), settings.cells)?, 0.0, 0.0, bcs)
        }
    };
    let m = assemble_weighted_system(&mesh, p, q, bcs)?;
    let c = max_rayleigh(&m, settings.mass, settings.exec)?;
    let c_other = max_rayleigh(&m, other(settings.mass), settings.exec)?;
    let exact = exact_critical_constant(delta, bc)?;
    Ok(HardyReport {
        critical: true,
        alpha: 1.0,
        delta: Some(delta),
        bc: match bc {
            CriticalBc::Mixed => "mixed".into(),
            CriticalBc::Dirichlet => "dirichlet".into(),
        },
        method: Some(method),
        numerical_best_constant: c,
        reference_constant: exact,
        ratio: c / exact,
        relative_error: (c - exact).abs() / exact,
        mass: settings.mass,
        lumping_perturbation: Some(c_other / c - 1.0),
        mesh: MeshInfo::from(&mesh),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupFit {
    pub deltas: Vec<f64>,
    pub constants: Vec<f64>,
    #[serde(flatten)]
    pub fit: LinearFit,
}

fn check_scan(deltas: &[f64]) -> Result<()> {
    if deltas.len() < 4 {
        return Err(Error::InsufficientData(format!("{} values of delta, need at least 4", deltas.len())));
    }
    for &d in deltas {
        check_delta(d)?;
    }
    let lo = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = deltas.iter().copied().fold(0.0, f64::max);
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InsufficientData(format!("deltas span {:.2} decades, need 2", (hi / lo).log10())));
    }
    Ok(())
}

/// Fit `ln C = slope · ln|ln δ| + intercept` for given constants.
pub fn blowup_fit_from(deltas: &[f64], constants: &[f64]) -> Result<BlowupFit> {
    check_scan(deltas)?;
    let x: Vec<f64> = deltas.iter().map(|d| d.ln().abs().ln()).collect();
    let y: Vec<f64> = constants.iter().map(|c| c.ln()).collect();
    Ok(BlowupFit { deltas: deltas.to_vec(), constants: constants.to_vec(), fit: linear_fit(&x, &y)? })
}

/// Numerical constants at each `δ` and their log-log blow-up fit.
pub fn blowup_rate_fit(deltas: &[f64], bc: CriticalBc, method: CriticalMethod, settings: &HardySettings) -> Result<BlowupFit> {
    check_scan(deltas)?;
    let inner = HardySettings { exec: Execution::Sequential, ..*settings };
    let constants = settings
        .exec
        .map(deltas.len(), |i| critical_truncated_constant(deltas[i], bc, method, &inner).map(|r| r.numerical_best_constant))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    blowup_fit_from(deltas, &constants)
}
