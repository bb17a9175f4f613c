//! Grid residual of `e^{sσ}h = P⁺η + P⁻η` for `η = e^{sσ}kζφ`.
//!
//! `h` is built analytically from the modal solution and the cutoffs; the
//! η-derivatives in `P⁺ + P⁻` are second-order centered differences with
//! step `h_fd` at a fixed lattice of sample points, while the σ factors
//! stay analytic. Everything carries the common factor `e^{-M}`,
//! `M = max sσ` over the lattice, so only ratios are meaningful.

use serde::{Deserialize, Serialize};

use super::solution::ModalSolution;
use super::weight::{apply_conjugated, eval_xi_sigma, FieldJet};
use crate::cutoff::CutoffSpec;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::CarlemanParams;
use crate::stats::{loglog_fit, ScaledValue};

/// Cell-centered sample points on `(0,1) × (r_min,1) × (0,T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualLattice {
    pub n_theta: usize,
    pub n_r: usize,
    pub n_t: usize,
    pub r_min: f64,
}

impl Default for ResidualLattice {
    fn default() -> Self {
        Self { n_theta: 24, n_r: 12, n_t: 48, r_min: 0.1 }
    }
}

impl ResidualLattice {
    fn axis(n: usize, a: f64, b: f64) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualReport {
    pub h: f64,
    /// Discrete `L²` norm of `e^{sσ}h - (P⁺ + P⁻)η`.
    pub residual: ScaledValue,
    /// Discrete `L²` norm of `e^{sσ}h`.
    pub reference: ScaledValue,
    pub relative: f64,
}

struct Setup<'a> {
    phi: &'a ModalSolution,
    zeta: CutoffSpec,
    k: CutoffSpec,
    p: &'a CarlemanParams,
    shift: f64,
}

impl Setup<'_> {
    /// `e^{sσ - M} k ζ φ`.
    fn eta(&self, theta: f64, r: f64, t: f64) -> f64 {
        let phi = self.phi.eval(theta, r, t).value;
        let sigma = (self.p.lambda * self.p.xi(theta, r, t)).exp();
        (self.p.s * sigma - self.shift).exp() * self.k.eval(t).value * self.zeta.eval(theta).value * phi
    }

    fn fd_jet(&self, theta: f64, r: f64, t: f64, h: f64) -> FieldJet {
        let a = self.p.alpha;
        let c = self.eta(theta, r, t);
        let (tp, tm) = (self.eta(theta, r, t + h), self.eta(theta, r, t - h));
        let (qp, qm) = (self.eta(theta + h, r, t), self.eta(theta - h, r, t));
        let (rp, rm) = (self.eta(theta, r + h, t), self.eta(theta, r - h, t));
        let h2 = h * h;
        let radial = ((r + 0.5 * h).powf(a) * (rp - c) - (r - 0.5 * h).powf(a) * (c - rm)) / h2;
        FieldJet {
            value: c,
            t: (tp - tm) / (2.0 * h),
            tt: (tp - 2.0 * c + tm) / h2,
            theta: (qp - qm) / (2.0 * h),
            r: (rp - rm) / (2.0 * h),
            div_a_grad: (qp - 2.0 * c + qm) / h2 + radial,
        }
    }

    /// `e^{sσ - M} h` with `f = 0`.
    fn source(&self, theta: f64, r: f64, t: f64) -> f64 {
        let j = self.phi.eval(theta, r, t);
        let z = self.zeta.eval(theta);
        let k = self.k.eval(t);
        let h = 2.0 * z.value * k.d1 * j.t + z.value * j.value * k.d2 - 2.0 * k.value * z.d1 * j.theta - k.value * j.value * z.d2;
        let sigma = (self.p.lambda * self.p.xi(theta, r, t)).exp();
        (self.p.s * sigma - self.shift).exp() * h
    }
}

/// Residual norm at one finite-difference step.
pub fn conjugation_residual(
    phi: &ModalSolution,
    zeta: CutoffSpec,
    k_cutoff: CutoffSpec,
    params: &CarlemanParams,
    lattice: &ResidualLattice,
    h: f64,
    exec: Execution,
) -> Result<ResidualReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::GridMismatch(format!("finite-difference step {h} must be positive")));
    }
    if lattice.n_theta == 0 || lattice.n_r == 0 || lattice.n_t == 0 || !(lattice.r_min >= 0.0 && lattice.r_min < 1.0) {
        return Err(Error::GridMismatch(format!("invalid residual lattice {lattice:?}")));
    }
    let rs = ResidualLattice::axis(lattice.n_r, lattice.r_min, 1.0);
    if rs[0] - h <= 0.0 {
        return Err(Error::DegenerateCellTouched { r: rs[0], h });
    }
    let thetas = ResidualLattice::axis(lattice.n_theta, 0.0, 1.0);
    let ts = ResidualLattice::axis(lattice.n_t, 0.0, params.horizon);
    // ξ ≤ 1 + 1 at t = t₀; a common shift keeps e^{sσ} finite
    let shift = params.s * (params.lambda * 2.0).exp();
    let setup = Setup { phi, zeta, k: k_cutoff, p: params, shift };
    let cell =
        (1.0 / lattice.n_theta as f64) * ((1.0 - lattice.r_min) / lattice.n_r as f64) * (params.horizon / lattice.n_t as f64);
    let sums = exec.map(ts.len(), |l| {
        let t = ts[l];
        let (mut res, mut refn) = (0.0, 0.0);
        for &th in &thetas {
            for &r in &rs {
                let w = eval_xi_sigma(params, th, r, t);
                let jet = setup.fd_jet(th, r, t, h);
                let lhs = setup.source(th, r, t);
                let d = lhs - apply_conjugated(&w, params.s, &jet).total();
                res += d * d;
                refn += lhs * lhs;
            }
        }
        (res, refn)
    });
    let (res, refn) = sums.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let residual = ScaledValue::new((res * cell).sqrt(), -shift);
    let reference = ScaledValue::new((refn * cell).sqrt(), -shift);
    let relative = if refn > 0.0 {
        (res / refn).sqrt()
    } else if res == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(ResidualReport { h, residual, reference, relative })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub levels: Vec<ResidualReport>,
    /// `log₂` of consecutive residual ratios.
    pub orders: Vec<f64>,
    /// Least-squares order over all levels.
    pub fitted_order: f64,
}

/// Residuals at `h0, h0/2, …` (`levels` values) and observed orders.
#[allow(clippy::too_many_arguments)]
pub fn residual_convergence(
    phi: &ModalSolution,
    zeta: CutoffSpec,
    k_cutoff: CutoffSpec,
    params: &CarlemanParams,
    lattice: &ResidualLattice,
    h0: f64,
    levels: usize,
    exec: Execution,
) -> Result<ConvergenceReport> {
    let reports = (0..levels)
        .map(|i| conjugation_residual(phi, zeta, k_cutoff, params, lattice, h0 / f64::powi(2.0, i as i32), exec))
        .collect::<Result<Vec<_>>>()?;
    let orders: Vec<f64> = reports.windows(2).map(|w| (w[0].residual.mantissa / w[1].residual.mantissa).log2()).collect();
    let hs: Vec<f64> = reports.iter().map(|r| r.h).collect();
    let vs: Vec<f64> = reports.iter().map(|r| r.residual.mantissa).collect();
    let fitted_order = loglog_fit(&hs, &vs).map(|f| f.slope).unwrap_or(f64::NAN);
    Ok(ConvergenceReport { levels: reports, orders, fitted_order })
}
