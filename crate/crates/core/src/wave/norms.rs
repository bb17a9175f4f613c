//! Boundary trace and interior observation norms over `(0, T)`.
//!
//! The θ-integrals are closed-form sine/cosine overlaps and the radial
//! integrals use discrete orthonormality of the eigenbasis. Time integrals
//! are exact by default; a trapezoid rule is available for comparison.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::modal::ModalCoefficients;
use super::oscillation::{cross_integral, Oscillator};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::DomainSpec;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TimeQuadrature {
    #[default]
    Exact,
    Trapezoid {
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    pub quadrature: TimeQuadrature,
    pub exec: Execution,
}

/// Portion of the top side `r = 1` over which the trace is integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceSegment {
    Full,
    /// `θ ∈ (δ₀, 1 - δ₀)`.
    Restricted {
        delta0: f64,
    },
}

/// `∫_a^b cos(jπθ) dθ`.
fn cos_integral(j: i64, a: f64, b: f64) -> f64 {
    if j == 0 {
        b - a
    } else {
        let jp = j as f64 * PI;
        ((jp * b).sin() - (jp * a).sin()) / jp
    }
}

/// `∫_a^b sin(nπθ) sin(mπθ) dθ`.
pub fn sine_overlap(n: usize, m: usize, a: f64, b: f64) -> f64 {
    let (n, m) = (n as i64, m as i64);
    0.5 * (cos_integral(n - m, a, b) - cos_integral(n + m, a, b))
}

/// `∫_S cos(jπθ) dθ` over the lateral strips `S = (0, L) ∪ (1 - L, 1)`.
fn strip_cos_integral(j: i64, width: f64) -> f64 {
    if j == 0 {
        2.0 * width
    } else {
        let jp = j as f64 * PI;
        let parity = if j % 2 == 0 { 2.0 } else { 0.0 };
        parity * (jp * width).sin() / jp
    }
}

fn amp_osc(state: &ModalCoefficients, i: usize) -> Oscillator {
    Oscillator::amplitude(state.a[i], state.b[i], state.omega[i])
}

fn vel_osc(state: &ModalCoefficients, i: usize) -> Oscillator {
    Oscillator::velocity(state.a[i], state.b[i], state.omega[i])
}

/// Symmetric θ-overlap matrix over `1..=n_max`, row-major.
fn overlap_matrix(n_max: usize, entry: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut g = vec![0.0; n_max * n_max];
    for n in 1..=n_max {
        for m in n..=n_max {
            let v = entry(n, m);
            g[(n - 1) * n_max + m - 1] = v;
            g[(m - 1) * n_max + n - 1] = v;
        }
    }
    g
}

fn trapezoid_weights(horizon: f64, samples: usize) -> Vec<(f64, f64)> {
    let m = samples.max(1);
    let h = horizon / m as f64;
    (0..=m).map(|i| (i as f64 * h, if i == 0 || i == m { 0.5 * h } else { h })).collect()
}

/// `∬_{segment × (0,T)} (∂ᵣφ)²` with `∂ᵣφ|_{r=1} = Σ amp_{nk} sin(nπθ) R_k'(1)`.
pub fn boundary_trace_norm(state: &ModalCoefficients, horizon: f64, segment: TraceSegment, opts: NormOptions) -> Result<f64> {
    let (lo, hi) = match segment {
        TraceSegment::Full => (0.0, 1.0),
        TraceSegment::Restricted { delta0 } => {
            if !(0.0..0.5).contains(&delta0) {
                return Err(Error::OutOfRange { name: "delta0", value: delta0, expected: "0 <= delta0 < 1/2" });
            }
            (delta0, 1.0 - delta0)
        }
    };
    let (nm, km) = (state.n_max, state.k_max);
    let flux: Vec<f64> = (1..=km).map(|k| state.basis().flux(k)).collect();
    let g = match segment {
        TraceSegment::Full => overlap_matrix(nm, |n, m| if n == m { 0.5 } else { 0.0 }),
        TraceSegment::Restricted { .. } => overlap_matrix(nm, |n, m| sine_overlap(n, m, lo, hi)),
    };
    let value = match opts.quadrature {
        TimeQuadrature::Exact => opts.exec.sum(nm, |n0| {
            let mut row = 0.0;
            for m0 in n0..nm {
                let gnm = g[n0 * nm + m0];
                if gnm == 0.0 {
                    continue;
                }
                let mut s = 0.0;
                for k in 0..km {
                    let x = amp_osc(state, n0 * km + k);
                    for l in 0..km {
                        let y = amp_osc(state, m0 * km + l);
                        s += flux[k] * flux[l] * cross_integral(&x, &y, horizon);
                    }
                }
                row += if m0 == n0 { gnm * s } else { 2.0 * gnm * s };
            }
            row
        }),
        TimeQuadrature::Trapezoid { samples } => {
            let nodes = trapezoid_weights(horizon, samples);
            opts.exec.sum(nodes.len(), |j| {
                let (t, w) = nodes[j];
                let c: Vec<f64> = (0..nm).map(|n0| (0..km).map(|k| flux[k] * amp_osc(state, n0 * km + k).at(t)).sum()).collect();
                let mut q = 0.0;
                for n0 in 0..nm {
                    for m0 in 0..nm {
                        q += g[n0 * nm + m0] * c[n0] * c[m0];
                    }
                }
                w * q
            })
        }
    };
    Ok(value)
}

/// `∬_{S×(0,1)×(0,T)} [(φ_t)² + A∇φ·∇φ + φ²]` over lateral strips of width `width`.
///
/// `width = 1/2` covers all of `Ω`, where the value equals `2∫E + ∬φ²`.
pub fn interior_strip_norm(state: &ModalCoefficients, width: f64, horizon: f64, opts: NormOptions) -> Result<f64> {
    if !(width > 0.0 && width <= 0.5) {
        return Err(Error::OutOfRange { name: "strip_width", value: width, expected: "0 < width <= 1/2" });
    }
    let (nm, km) = (state.n_max, state.k_max);
    let gs = overlap_matrix(nm, |n, m| {
        let (n, m) = (n as i64, m as i64);
        0.5 * (strip_cos_integral(n - m, width) - strip_cos_integral(n + m, width))
    });
    // ∫_S cos(nπθ) cos(mπθ) times nπ·mπ
    let gc = overlap_matrix(nm, |n, m| {
        let (ni, mi) = (n as i64, m as i64);
        0.5 * (strip_cos_integral(ni - mi, width) + strip_cos_integral(ni + mi, width)) * (n as f64 * PI) * (m as f64 * PI)
    });
    let rho: Vec<f64> = (1..=km).map(|k| state.basis().rho(k)).collect();
    let value = match opts.quadrature {
        TimeQuadrature::Exact => opts.exec.sum(nm, |n0| {
            let mut row = 0.0;
            for m0 in n0..nm {
                let (s_nm, c_nm) = (gs[n0 * nm + m0], gc[n0 * nm + m0]);
                let mut s = 0.0;
                for (k, rk) in rho.iter().enumerate() {
                    let (i, j) = (n0 * km + k, m0 * km + k);
                    let aa = cross_integral(&amp_osc(state, i), &amp_osc(state, j), horizon);
                    let vv = cross_integral(&vel_osc(state, i), &vel_osc(state, j), horizon);
                    s += s_nm * (vv + (rk + 1.0) * aa) + c_nm * aa;
                }
                row += if m0 == n0 { s } else { 2.0 * s };
            }
            row
        }),
        TimeQuadrature::Trapezoid { samples } => {
            let nodes = trapezoid_weights(horizon, samples);
            opts.exec.sum(nodes.len(), |j| {
                let (t, w) = nodes[j];
                let amp: Vec<f64> = (0..state.len()).map(|i| amp_osc(state, i).at(t)).collect();
                let vel: Vec<f64> = (0..state.len()).map(|i| vel_osc(state, i).at(t)).collect();
                let mut q = 0.0;
                for (k, rk) in rho.iter().enumerate() {
                    for n0 in 0..nm {
                        for m0 in 0..nm {
                            let (i, j) = (n0 * km + k, m0 * km + k);
                            q += gs[n0 * nm + m0] * (vel[i] * vel[j] + (rk + 1.0) * amp[i] * amp[j])
                                + gc[n0 * nm + m0] * amp[i] * amp[j];
                        }
                    }
                }
                w * q
            })
        }
    };
    Ok(value)
}

/// Interior observation term over `ω = [(0,4δ₀) ∪ (1-4δ₀,1)] × (0,1)`.
pub fn interior_observation_norm(state: &ModalCoefficients, domain: &DomainSpec, horizon: f64, opts: NormOptions) -> Result<f64> {
    interior_strip_norm(state, domain.strip_width(), horizon, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub horizon: f64,
    pub delta0: f64,
    pub quadrature: TimeQuadrature,
    pub full_trace_norm_sq: f64,
    pub restricted_trace_norm_sq: f64,
    pub interior_norm_sq: f64,
    /// Set when a trapezoid rule changes by more than 0.1% under doubling.
    pub under_resolved: bool,
}

fn report_once(state: &ModalCoefficients, domain: &DomainSpec, horizon: f64, opts: NormOptions) -> Result<[f64; 3]> {
    Ok([
        boundary_trace_norm(state, horizon, TraceSegment::Full, opts)?,
        boundary_trace_norm(state, horizon, TraceSegment::Restricted { delta0: domain.delta0() }, opts)?,
        interior_observation_norm(state, domain, horizon, opts)?,
    ])
}

pub fn trace_report(state: &ModalCoefficients, domain: &DomainSpec, horizon: f64, opts: NormOptions) -> Result<TraceReport> {
    let v = report_once(state, domain, horizon, opts)?;
    let under_resolved = match opts.quadrature {
        TimeQuadrature::Exact => false,
        TimeQuadrature::Trapezoid { samples } => {
            let fine = NormOptions { quadrature: TimeQuadrature::Trapezoid { samples: 2 * samples }, ..opts };
            let w = report_once(state, domain, horizon, fine)?;
            v.iter().zip(&w).any(|(a, b)| (a - b).abs() > 1e-3 * b.abs())
        }
    };
    Ok(TraceReport {
        horizon,
        delta0: domain.delta0(),
        quadrature: opts.quadrature,
        full_trace_norm_sq: v[0],
        restricted_trace_norm_sq: v[1],
        interior_norm_sq: v[2],
        under_resolved,
    })
}
