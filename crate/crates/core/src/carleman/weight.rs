//! The Carleman weight `σ = e^{λξ}`, `ξ = θ² + r^{2-α} - β(t - t₀)²`, and
//! the conjugated operator `P⁺ + P⁻` in pointwise form.

use serde::Serialize;

use crate::params::CarlemanParams;

/// `ξ`, `σ` and all their derivatives at one point of `Ω̄ × ℝ`.
///
/// Spatial vectors are in `(θ, r)` order. At `r = 0` the radial Hessian
/// entries contain `(2-α)(1-α)r^{-α}` and are returned as `+∞` with
/// `rr_unbounded` set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightPoint {
    pub theta: f64,
    pub r: f64,
    pub t: f64,
    pub xi: f64,
    pub sigma: f64,
    pub grad_xi: [f64; 2],
    pub xi_t: f64,
    pub xi_tt: f64,
    /// `A∇ξ = (2θ, (2-α) r)`.
    pub a_grad_xi: [f64; 2],
    /// `[[ξ_θθ, ξ_θr], [ξ_rθ, ξ_rr]]`.
    pub hess_xi: [[f64; 2]; 2],
    pub grad_sigma: [f64; 2],
    pub sigma_t: f64,
    pub sigma_tt: f64,
    pub a_grad_sigma: [f64; 2],
    pub div_a_grad_sigma: f64,
    pub grad_sigma_tt: [f64; 2],
    pub hess_sigma: [[f64; 2]; 2],
    pub rr_unbounded: bool,
}

/// Evaluates the full derivative package at `(θ, r, t)`, `r ≥ 0`.
pub fn eval_xi_sigma(p: &CarlemanParams, theta: f64, r: f64, t: f64) -> WeightPoint {
    let (a, l, b) = (p.alpha, p.lambda, p.beta);
    let dt = t - p.t0;
    let r2a = r.powf(2.0 - a);
    let xi = theta * theta + r2a - b * dt * dt;
    let sigma = (l * xi).exp();
    let xi_r = (2.0 - a) * r.powf(1.0 - a);
    let grad_xi = [2.0 * theta, xi_r];
    let xi_t = -2.0 * b * dt;
    let xi_tt = -2.0 * b;
    let a_grad_xi = [2.0 * theta, (2.0 - a) * r];
    let rr_unbounded = r == 0.0;
    let xi_rr = if rr_unbounded { f64::INFINITY } else { (2.0 - a) * (1.0 - a) * r.powf(-a) };
    let hess_xi = [[2.0, 0.0], [0.0, xi_rr]];

    let ls = l * sigma;
    let grad_sigma = [ls * grad_xi[0], ls * grad_xi[1]];
    let sigma_t = ls * xi_t;
    // σ_tt = λσξ_tt + λ²σξ_t²
    let tt_factor = l * xi_tt + l * l * xi_t * xi_t;
    let sigma_tt = sigma * tt_factor;
    let a_grad_sigma = [ls * a_grad_xi[0], ls * a_grad_xi[1]];
    let a_grad_dot = a_grad_xi[0] * grad_xi[0] + a_grad_xi[1] * grad_xi[1];
    let div_a_grad_sigma = (4.0 - a) * ls + l * ls * a_grad_dot;
    let grad_sigma_tt = [tt_factor * grad_sigma[0], tt_factor * grad_sigma[1]];
    let mut hess_sigma = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            hess_sigma[i][j] = ls * hess_xi[i][j] + l * ls * grad_xi[i] * grad_xi[j];
        }
    }
    WeightPoint {
        theta,
        r,
        t,
        xi,
        sigma,
        grad_xi,
        xi_t,
        xi_tt,
        a_grad_xi,
        hess_xi,
        grad_sigma,
        sigma_t,
        sigma_tt,
        a_grad_sigma,
        div_a_grad_sigma,
        grad_sigma_tt,
        hess_sigma,
        rr_unbounded,
    }
}

/// `b(ξ) = ξ_t² - A∇ξ·∇ξ = 4β²(t-t₀)² - [4θ² + (2-α)² r^{2-α}]`.
pub fn eval_b(p: &CarlemanParams, theta: f64, r: f64, t: f64) -> f64 {
    let dt = t - p.t0;
    let a = p.alpha;
    4.0 * p.beta * p.beta * dt * dt - (4.0 * theta * theta + (2.0 - a) * (2.0 - a) * r.powf(2.0 - a))
}

/// `(∂ₜₜ - Div A∇)²σ`, the integrand of the lower-order term `J₃`.
///
/// With `Lσ = λσh`, `h = ξ_tt - Div(A∇ξ) + λ b(ξ)`, the product rule gives
/// `L²σ = λ²σ[h² + 8β² + 8 + (2-α)³] + λ³σ[32θ² + 2(2-α)⁴r^{2-α} - 32β³(t-t₀)²]`.
/// Bounded up to `r = 0`.
pub fn wave_operator_squared_sigma(p: &CarlemanParams, theta: f64, r: f64, t: f64) -> f64 {
    let (a, b, l) = (p.alpha, p.beta, p.lambda);
    let dt = t - p.t0;
    let sigma = (l * p.xi(theta, r, t)).exp();
    let rp = r.powf(2.0 - a);
    let h = -2.0 * b - (4.0 - a) + l * eval_b(p, theta, r, t);
    let lower = h * h + 8.0 * b * b + 8.0 + (2.0 - a).powi(3);
    let upper = 32.0 * theta * theta + 2.0 * (2.0 - a).powi(4) * rp - 32.0 * b.powi(3) * dt * dt;
    l * l * sigma * (lower + l * upper)
}

/// Pointwise derivatives of a function `η(θ, r, t)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldJet {
    pub value: f64,
    pub t: f64,
    pub tt: f64,
    pub theta: f64,
    pub r: f64,
    /// `Div(A∇η) = η_θθ + ∂ᵣ(r^α η_r)`.
    pub div_a_grad: f64,
}

/// The four pieces of `P⁺η + P⁻η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugatedParts {
    /// `η_tt - Div(A∇η)`.
    pub p1_plus: f64,
    /// `s²η[(σ_t)² - A∇σ·∇σ]`.
    pub p2_plus: f64,
    /// `2s[-η_t σ_t + ∇η·A∇σ]`.
    pub p1_minus: f64,
    /// `sη[-σ_tt + Div(A∇σ)]`.
    pub p2_minus: f64,
}

impl ConjugatedParts {
    pub fn plus(&self) -> f64 {
        self.p1_plus + self.p2_plus
    }

    pub fn minus(&self) -> f64 {
        self.p1_minus + self.p2_minus
    }

    pub fn total(&self) -> f64 {
        self.plus() + self.minus()
    }
}

pub fn apply_conjugated(w: &WeightPoint, s: f64, eta: &FieldJet) -> ConjugatedParts {
    let grad_dot = w.a_grad_sigma[0] * w.grad_sigma[0] + w.a_grad_sigma[1] * w.grad_sigma[1];
    ConjugatedParts {
        p1_plus: eta.tt - eta.div_a_grad,
        p2_plus: s * s * eta.value * (w.sigma_t * w.sigma_t - grad_dot),
        p1_minus: 2.0 * s * (-eta.t * w.sigma_t + eta.theta * w.a_grad_sigma[0] + eta.r * w.a_grad_sigma[1]),
        p2_minus: s * eta.value * (-w.sigma_tt + w.div_a_grad_sigma),
    }
}
