use std::f64::consts::PI;

use crate::error::Result;
use crate::radial::FrobeniusMode;

#[derive(Debug, Clone)]
struct Term {
    n: usize,
    mode: FrobeniusMode,
    a: f64,
    b: f64,
    omega: f64,
}

/// Exact solution `φ = Σ amp(t) sin(nπθ) R_k(r)` of the homogeneous
/// equation, with `R_k` from the convergent Frobenius series so that every
/// derivative is available in closed form.
#[derive(Debug, Clone)]
pub struct ModalSolution {
    alpha: f64,
    terms: Vec<Term>,
}

/// Values and derivatives of `φ` at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolutionJet {
    pub value: f64,
    pub t: f64,
    pub tt: f64,
    pub theta: f64,
    pub theta_theta: f64,
    pub r: f64,
    pub rr: f64,
    /// `Div(A∇φ)`.
    pub div_a_grad: f64,
}

/// Per-term factors of a separated product at fixed `θ`, `r` or `t`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Factors {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
}

impl ModalSolution {
    pub fn zero(alpha: f64) -> Self {
        Self { alpha, terms: vec![] }
    }

    /// `(n, k, a, b)`: amplitude `a cos ωt + (b/ω) sin ωt` of `sin(nπθ)R_k(r)`.
    pub fn from_modes(alpha: f64, modes: &[(usize, usize, f64, f64)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(modes.len());
        for &(n, k, a, b) in modes {
            let mode = FrobeniusMode::find(alpha, k)?;
            let omega = ((n as f64 * PI).powi(2) + mode.rho).sqrt();
            terms.push(Term { n, mode, a, b, omega });
        }
        Ok(Self { alpha, terms })
    }

    pub fn single(alpha: f64, n: usize, k: usize, a: f64, b: f64) -> Result<Self> {
        Self::from_modes(alpha, &[(n, k, a, b)])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.a == 0.0 && t.b == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.a *= c;
            t.b *= c;
        }
        out
    }

    /// `ω` of each term.
    pub fn frequencies(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.omega).collect()
    }

    /// `sin(nπθ)` with its first two θ-derivatives, per term.
    pub(crate) fn theta_factors(&self, theta: f64) -> Vec<Factors> {
        self.terms
            .iter()
            .map(|t| {
                let w = t.n as f64 * PI;
                let (s, c) = (w * theta).sin_cos();
                Factors { f: s, d1: w * c, d2: -w * w * s }
            })
            .collect()
    }

    /// `R_k(r)`, `R_k'(r)`, `R_k''(r)` per term; `r > 0`.
    pub(crate) fn radial_factors(&self, r: f64) -> Vec<Factors> {
        self.terms
            .iter()
            .map(|t| {
                let (f, d1, d2) = t.mode.eval(r);
                Factors { f, d1, d2 }
            })
            .collect()
    }

    /// Amplitude and its first two time derivatives per term.
    pub(crate) fn time_factors(&self, time: f64) -> Vec<Factors> {
        self.terms
            .iter()
            .map(|t| {
                let (s, c) = (t.omega * time).sin_cos();
                let amp = t.a * c + t.b / t.omega * s;
                Factors { f: amp, d1: -t.a * t.omega * s + t.b * c, d2: -t.omega * t.omega * amp }
            })
            .collect()
    }

    /// `-ρ_k` per term, so that `∂ᵣ(r^α R_k') = -ρ_k R_k`.
    pub(crate) fn radial_operator(&self) -> Vec<f64> {
        self.terms.iter().map(|t| -t.mode.rho).collect()
    }

    pub fn eval(&self, theta: f64, r: f64, t: f64) -> SolutionJet {
        let th = self.theta_factors(theta);
        let rf = self.radial_factors(r);
        let tf = self.time_factors(t);
        let lr = self.radial_operator();
        let mut j = SolutionJet::default();
        for i in 0..self.terms.len() {
            let (a, b, c) = (th[i], rf[i], tf[i]);
            j.value += c.f * a.f * b.f;
            j.t += c.d1 * a.f * b.f;
            j.tt += c.d2 * a.f * b.f;
            j.theta += c.f * a.d1 * b.f;
            j.theta_theta += c.f * a.d2 * b.f;
            j.r += c.f * a.f * b.d1;
            j.rr += c.f * a.f * b.d2;
            j.div_a_grad += c.f * (a.d2 * b.f + a.f * lr[i] * b.f);
        }
        j
    }

    /// `∂ᵣφ(θ, 1, t)`.
    pub fn trace_flux(&self, theta: f64, t: f64) -> f64 {
        let th = self.theta_factors(theta);
        let tf = self.time_factors(t);
        self.terms.iter().enumerate().map(|(i, term)| tf[i].f * th[i].f * term.mode.flux_at_1()).sum()
    }

    /// `E = ½∫_Ω (φ_t² + A∇φ·∇φ)`, constant in time.
    ///
    /// Cross terms vanish because distinct `(n, k)` pairs are orthogonal;
    /// repeated pairs are merged first.
    pub fn energy(&self) -> f64 {
        let mut merged: Vec<(usize, usize, f64, f64, f64)> = vec![];
        for t in &self.terms {
            match merged.iter_mut().find(|m| m.0 == t.n && m.1 == t.mode.k) {
                Some(m) => {
                    m.2 += t.a;
                    m.3 += t.b;
                }
                None => merged.push((t.n, t.mode.k, t.a, t.b, t.omega)),
            }
        }
        merged.iter().map(|&(_, _, a, b, w)| 0.25 * (b * b + w * w * a * a)).sum()
    }
}
