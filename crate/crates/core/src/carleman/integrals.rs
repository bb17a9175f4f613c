//! Weighted component integrals of the localized Carleman estimate and the
//! empirical constant `Ĉ = (LHS₁ + LHS₂) / (R_trace + R_interior)`.
//!
//! Integrals use composite 5-point Gauss-Legendre rules with panel edges at
//! the cutoff breakpoints. Each weighted integral is accumulated with its
//! own peak `M` of `2sσ` subtracted and restricted to the window where
//! `2sσ ≥ M - 60`; panels are sized so that `2sσ` changes by at most
//! [`QuadratureGrid::panel_variation`] across one panel. Near `r = 0` the substitution
//! `r = u^q`, `q = 2/(1-α)`, removes the `r^{-α}` singularity of `r^α(φ_r)²`.

use serde::{Deserialize, Serialize};

use super::solution::{Factors, ModalSolution};
use crate::cutoff::{CutoffSpec, Jet};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::{CarlemanParams, DomainSpec};
use crate::stats::ScaledValue;

const GL5_X: [f64; 5] = [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
const GL5_W: [f64; 5] =
    [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];

/// Contributions below `e^{-WINDOW}` of an integral's peak are dropped.
const WINDOW: f64 = 60.0;
/// Below this radius the singular substitution is used.
const R_SPLIT: f64 = 0.25;

fn gauss_panels(a: f64, b: f64, panels: usize, out: &mut Vec<(f64, f64)>) {
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in GL5_X.iter().zip(&GL5_W) {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
}

/// Base panel densities (panels per unit length); raised locally where the
/// weight or the solution varies faster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureGrid {
    pub theta_density: f64,
    pub r_density: f64,
    pub t_density: f64,
    /// Maximal change of the exponent `2sσ` across one panel.
    pub panel_variation: f64,
    /// Panels per break-point interval at least; cutoff bands need them.
    pub min_panels: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self { theta_density: 24.0, r_density: 12.0, t_density: 2.0, panel_variation: 1.5, min_panels: 8 }
    }
}

impl QuadratureGrid {
    pub fn refined(self) -> Self {
        Self {
            theta_density: 2.0 * self.theta_density,
            r_density: 2.0 * self.r_density,
            t_density: 2.0 * self.t_density,
            panel_variation: 0.5 * self.panel_variation,
            min_panels: 2 * self.min_panels,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComponentIntegrals {
    pub lambda: f64,
    pub s: f64,
    /// `sλ∬ σ[(ψ_t)² + A∇ψ·∇ψ] e^{2sσ}` over `(3δ₀,1-3δ₀)×(0,1)×(0,T)`.
    pub lhs_gradient: ScaledValue,
    /// `s³λ³∬ σ³ψ² e^{2sσ}` over the same region.
    pub lhs_zeroth: ScaledValue,
    /// `sλ∬ σ(∂ᵣφ)² e^{2sσ}` over `(δ₀,1-δ₀)×{1}×(0,T)`.
    pub trace: ScaledValue,
    /// The same trace integral without the factor `e^{2sσ}`.
    pub trace_unweighted: f64,
    /// `∬_{ω×(0,T)} (s²φ² + A∇φ·∇φ + φ_t²) e^{2sσ}`.
    pub interior: ScaledValue,
    /// `∬_{ω×(0,T)} (k_tφ_t + k_ttφ)² e^{2sσ}`.
    pub commutator: ScaledValue,
    /// `(lhs_gradient + lhs_zeroth) / (trace + interior)`.
    pub c_hat: f64,
}

/// Integration region: unions of break-point lists per axis.
struct Region {
    theta: Vec<Vec<f64>>,
    /// `None` means the top side `r = 1`.
    r: Option<(f64, f64)>,
    t: Vec<Vec<f64>>,
}

/// What the integrand sees at one node.
struct Node<'a> {
    theta: f64,
    zeta: Jet,
    sin: &'a [Factors],
    r: f64,
    r_alpha: f64,
    rad: &'a [Factors],
    k: Jet,
    time: &'a [Factors],
    sigma: f64,
}

impl Node<'_> {
    /// `(φ, φ_t, φ_θ, φ_r)`.
    fn phi(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for q in 0..self.sin.len() {
            let (s, r, t) = (self.sin[q], self.rad[q], self.time[q]);
            out[0] += t.f * s.f * r.f;
            out[1] += t.d1 * s.f * r.f;
            out[2] += t.f * s.d1 * r.f;
            out[3] += t.f * s.f * r.d1;
        }
        out
    }
}

struct Integrator<'a> {
    phi: &'a ModalSolution,
    p: &'a CarlemanParams,
    grid: &'a QuadratureGrid,
    zeta: CutoffSpec,
    k: CutoffSpec,
    omega_max: f64,
    exec: Execution,
}

impl Integrator<'_> {
    fn two_s(&self) -> f64 {
        2.0 * self.p.s
    }

    fn r_part(&self, r: f64) -> f64 {
        r.powf(2.0 - self.p.alpha)
    }

    fn t_part(&self, t: f64) -> f64 {
        self.p.beta * (t - self.p.t0) * (t - self.p.t0)
    }

    fn min_t_part(&self, pieces: &[Vec<f64>]) -> f64 {
        let mut m = f64::INFINITY;
        for b in pieces {
            let (lo, hi) = (b[0], b[b.len() - 1]);
            m = m.min(if lo <= self.p.t0 && self.p.t0 <= hi { 0.0 } else { self.t_part(lo).min(self.t_part(hi)) });
        }
        m
    }

    /// Panel count for `[a, b]` given a base density and the largest rate of
    /// change of the exponent on that interval.
    fn panels(&self, len: f64, density: f64, rate: f64) -> usize {
        ((len * density.max(rate / self.grid.panel_variation)).ceil() as usize).max(self.grid.min_panels)
    }

    fn clip(breaks: &[f64], lo: f64, hi: f64) -> Vec<(f64, f64)> {
        breaks
            .windows(2)
            .filter_map(|w| {
                let (a, b) = (w[0].max(lo), w[1].min(hi));
                (b > a).then_some((a, b))
            })
            .collect()
    }

    fn integrate(&self, region: &Region, weighted: bool, f: impl Fn(&Node) -> [f64; 2] + Sync) -> [ScaledValue; 2] {
        let (s2, l) = (self.two_s(), self.p.lambda);
        let th_hi = region.theta.iter().map(|b| b[b.len() - 1]).fold(0.0, f64::max);
        let r_hi = region.r.map_or(1.0, |r| r.1);
        let xi_max = th_hi * th_hi + self.r_part(r_hi) - self.min_t_part(&region.t);
        let sigma_max = (l * xi_max).exp();
        let (shift, xi_cut) = if weighted {
            let m = s2 * sigma_max;
            let cut = if m > WINDOW { ((m - WINDOW) / s2).ln() / l } else { f64::NEG_INFINITY };
            (m, cut)
        } else {
            (0.0, f64::NEG_INFINITY)
        };
        // rate of the exponent per unit length, bounded by its peak value
        let rate = if weighted { s2 * l * sigma_max } else { 0.0 };
        // about two panels per period of the fastest mode
        let osc = 0.5 * self.omega_max;

        // θ window: θ² ≥ ξ_cut - r_hi part + min t part
        let th_lo = (xi_cut - self.r_part(r_hi) + self.min_t_part(&region.t)).max(0.0).sqrt();
        let mut theta_rule = vec![];
        for b in &region.theta {
            for (a, c) in Self::clip(b, th_lo, f64::INFINITY) {
                let n = self.panels(c - a, self.grid.theta_density.max(osc), rate * 2.0 * c);
                gauss_panels(a, c, n, &mut theta_rule);
            }
        }
        let r_rule: Vec<(f64, f64)> = match region.r {
            None => vec![(1.0, 1.0)],
            Some((ra, rb)) => {
                let floor = (xi_cut - th_hi * th_hi + self.min_t_part(&region.t)).max(0.0);
                let r_lo = floor.powf(1.0 / (2.0 - self.p.alpha)).max(ra);
                let mut out = vec![];
                let r_rate = rate * (2.0 - self.p.alpha);
                if r_lo < R_SPLIT.min(rb) {
                    let q = 2.0 / (1.0 - self.p.alpha);
                    let (ua, ub) = (r_lo.powf(1.0 / q), R_SPLIT.min(rb).powf(1.0 / q));
                    let mut u = vec![];
                    let n = self.panels(ub - ua, self.grid.r_density.max(osc), r_rate * q);
                    gauss_panels(ua, ub, n, &mut u);
                    out.extend(u.into_iter().map(|(x, w)| (x.powf(q), w * q * x.powf(q - 1.0))));
                }
                let a = r_lo.max(R_SPLIT);
                if rb > a {
                    gauss_panels(a, rb, self.panels(rb - a, self.grid.r_density.max(osc), r_rate), &mut out);
                }
                out
            }
        };
        // t window: β(t - t₀)² ≤ θ_hi² + r_hi part - ξ_cut
        let reach = (th_hi * th_hi + self.r_part(r_hi) - xi_cut).max(0.0);
        let half = if reach.is_finite() { (reach / self.p.beta).sqrt() } else { f64::INFINITY };
        let mut t_rule = vec![];
        for b in &region.t {
            for (a, c) in Self::clip(b, self.p.t0 - half, self.p.t0 + half) {
                let far = (a - self.p.t0).abs().max((c - self.p.t0).abs());
                let n = self.panels(c - a, self.grid.t_density.max(osc), rate * 2.0 * self.p.beta * far);
                gauss_panels(a, c, n, &mut t_rule);
            }
        }

        let th_tab: Vec<(Jet, Vec<Factors>)> =
            theta_rule.iter().map(|&(x, _)| (self.zeta.eval(x), self.phi.theta_factors(x))).collect();
        let r_tab: Vec<(f64, f64, Vec<Factors>)> =
            r_rule.iter().map(|&(x, _)| (self.r_part(x), x.powf(self.p.alpha), self.phi.radial_factors(x))).collect();
        let parts = self.exec.map(t_rule.len(), |it| {
            let (t, wt) = t_rule[it];
            let time = self.phi.time_factors(t);
            let k = self.k.eval(t);
            let tq = self.t_part(t);
            let mut acc = [0.0f64; 2];
            for (i, &(th, wth)) in theta_rule.iter().enumerate() {
                let (zeta, ref sin) = th_tab[i];
                for (j, &(r, wr)) in r_rule.iter().enumerate() {
                    let (rp, r_alpha, ref rad) = r_tab[j];
                    let sigma = (l * (th * th + rp - tq)).exp();
                    let node = Node { theta: th, zeta, sin, r, r_alpha, rad, k, time: &time, sigma };
                    let v = f(&node);
                    let e = if weighted { (s2 * sigma - shift).exp() } else { 1.0 };
                    let w = wt * wth * wr * e;
                    acc[0] += w * v[0];
                    acc[1] += w * v[1];
                }
            }
            acc
        });
        let (a, b) = parts.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x[0], acc.1 + x[1]));
        [ScaledValue::new(a, shift), ScaledValue::new(b, shift)]
    }
}

/// Component integrals for one `(λ, s)` carried by `params`.
pub fn carleman_component_integrals(
    phi: &ModalSolution,
    params: &CarlemanParams,
    domain: &DomainSpec,
    grid: &QuadratureGrid,
    exec: Execution,
) -> Result<ComponentIntegrals> {
    if (params.delta0 - domain.delta0()).abs() > 1e-15 {
        return Err(Error::GridMismatch(format!("params use delta0 = {}, domain uses {}", params.delta0, domain.delta0())));
    }
    if (phi.alpha() - params.alpha).abs() > 1e-15 {
        return Err(Error::GridMismatch(format!("solution alpha {} differs from params alpha {}", phi.alpha(), params.alpha)));
    }
    let (s, l) = (params.s, params.lambda);
    let d = domain.delta0();
    let w = domain.strip_width();
    let (e, tt) = (params.epsilon, params.horizon);
    let full_t = vec![vec![0.0, e, 2.0 * e, params.t0, tt - 2.0 * e, tt - e, tt]];
    let strips = vec![vec![0.0, 2.0 * d, 3.0 * d, w], vec![1.0 - w, 1.0 - 3.0 * d, 1.0 - 2.0 * d, 1.0]];
    let omega_max = phi.frequencies().into_iter().fold(0.0, f64::max);
    let ig = Integrator { phi, p: params, grid, zeta: domain.theta_cutoff(), k: params.time_cutoff(), omega_max, exec };

    let lhs_region = Region { theta: vec![vec![3.0 * d, 1.0 - 3.0 * d]], r: Some((0.0, 1.0)), t: full_t.clone() };
    let [lhs_gradient, lhs_zeroth] = ig.integrate(&lhs_region, true, |n| {
        let [v, vt, vth, vr] = n.phi();
        let z = n.zeta;
        let psi = n.k.value * z.value * v;
        let psi_t = z.value * (n.k.d1 * v + n.k.value * vt);
        let psi_th = n.k.value * (z.d1 * v + z.value * vth);
        let psi_r = n.k.value * z.value * vr;
        let grad = psi_t * psi_t + psi_th * psi_th + n.r_alpha * psi_r * psi_r;
        [s * l * n.sigma * grad, (s * l * n.sigma).powi(3) * psi * psi]
    });

    let trace_region =
        Region { theta: vec![vec![d, 2.0 * d, 3.0 * d, 1.0 - 3.0 * d, 1.0 - 2.0 * d, 1.0 - d]], r: None, t: full_t.clone() };
    let trace_integrand = |n: &Node| {
        let [_, _, _, vr] = n.phi();
        debug_assert!(n.r == 1.0);
        let v = s * l * n.sigma * vr * vr;
        [v, 0.0]
    };
    let [trace, _] = ig.integrate(&trace_region, true, trace_integrand);
    let [trace_unweighted, _] = ig.integrate(&trace_region, false, trace_integrand);

    let interior_region = Region { theta: strips.clone(), r: Some((0.0, 1.0)), t: full_t };
    let [interior, _] = ig.integrate(&interior_region, true, |n| {
        let [v, vt, vth, vr] = n.phi();
        debug_assert!(n.theta >= 0.0);
        [s * s * v * v + vth * vth + n.r_alpha * vr * vr + vt * vt, 0.0]
    });
    let bands = vec![vec![e, 2.0 * e], vec![tt - 2.0 * e, tt - e]];
    let commutator_region = Region { theta: strips, r: Some((0.0, 1.0)), t: bands };
    let [commutator, _] = ig.integrate(&commutator_region, true, |n| {
        let [v, vt, _, _] = n.phi();
        let c = n.k.d1 * vt + n.k.d2 * v;
        [c * c, 0.0]
    });

    let num = lhs_gradient.plus(lhs_zeroth);
    let den = trace.plus(interior);
    let c_hat = if den.mantissa > 0.0 { num.ratio(den) } else { f64::NAN };
    Ok(ComponentIntegrals {
        lambda: l,
        s,
        lhs_gradient,
        lhs_zeroth,
        trace,
        trace_unweighted: trace_unweighted.mantissa,
        interior,
        commutator,
        c_hat,
    })
}

/// One row of an `(λ, s)` scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub s: f64,
    pub c_hat: f64,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
}

/// `Ĉ` over the listed `(λ, s)` points; other parameters from `params`.
pub fn carleman_scan(
    phi: &ModalSolution,
    params: &CarlemanParams,
    domain: &DomainSpec,
    grid: &QuadratureGrid,
    points: &[(f64, f64)],
    exec: Execution,
) -> Result<Vec<ScanRow>> {
    points
        .iter()
        .map(|&(lambda, s)| {
            let p = params.with_scan_point(lambda, s);
            let c = carleman_component_integrals(phi, &p, domain, grid, exec)?;
            Ok(ScanRow {
                lambda,
                s,
                c_hat: c.c_hat,
                ln_lhs: c.lhs_gradient.plus(c.lhs_zeroth).ln_abs(),
                ln_rhs: c.trace.plus(c.interior).ln_abs(),
            })
        })
        .collect()
}
