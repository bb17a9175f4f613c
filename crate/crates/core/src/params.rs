//! Scalar parameters of the degenerate problem and admissibility checks
//! for the Carleman weight.

use serde::{Deserialize, Serialize};

use crate::cutoff::CutoffSpec;
use crate::error::{Error, Result};

/// Degeneracy exponent `α` of the coefficient `w = r^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyParams {
    alpha: f64,
    critical: bool,
}

impl DegeneracyParams {
    /// Weakly degenerate regime, `0 < α < 1`.
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::OutOfRange { name: "alpha", value: alpha, expected: "0 < alpha < 1" });
        }
        Ok(Self { alpha, critical: false })
    }

    /// The endpoint `α = 1`, admitted only by the critical Hardy computations.
    pub fn critical() -> Self {
        Self { alpha: 1.0, critical: true }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_critical(&self) -> bool {
        self.critical
    }

    /// `w(r) = r^α`.
    pub fn weight(&self, r: f64) -> f64 {
        r.powf(self.alpha)
    }

    /// Diagonal of `A = diag(1, r^α)` in `(θ, r)` order.
    pub fn diffusion(&self, r: f64) -> [f64; 2] {
        [1.0, self.weight(r)]
    }

    /// Hardy constant `4 / (1 - α)²`.
    pub fn hardy_constant(&self) -> f64 {
        4.0 / ((1.0 - self.alpha) * (1.0 - self.alpha))
    }
}

/// Geometry of the localization: `δ₀` and the regions it induces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    delta0: f64,
}

impl DomainSpec {
    pub fn new(delta0: f64) -> Result<Self> {
        if !(delta0 > 0.0 && delta0 < 1.0 / 32.0) {
            return Err(Error::OutOfRange { name: "delta0", value: delta0, expected: "0 < delta0 < 1/32" });
        }
        Ok(Self { delta0 })
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// Half-width `4δ₀` of each lateral strip of the interior region `ω`.
    pub fn strip_width(&self) -> f64 {
        4.0 * self.delta0
    }

    /// `θ ∈ (0, 4δ₀) ∪ (1 - 4δ₀, 1)`.
    pub fn in_omega(&self, theta: f64) -> bool {
        let w = self.strip_width();
        (theta > 0.0 && theta < w) || (theta > 1.0 - w && theta < 1.0)
    }

    /// `θ ∈ (δ₀, 1 - δ₀)`, the tangential extent of `Ω₀`.
    pub fn in_omega0(&self, theta: f64) -> bool {
        theta > self.delta0 && theta < 1.0 - self.delta0
    }

    /// The observed segment `(δ₀, 1 - δ₀)` of the top side `r = 1`.
    pub fn restricted_segment(&self) -> (f64, f64) {
        (self.delta0, 1.0 - self.delta0)
    }

    /// Tangential region `(3δ₀, 1 - 3δ₀)` where ζ ≡ 1.
    pub fn plateau(&self) -> (f64, f64) {
        (3.0 * self.delta0, 1.0 - 3.0 * self.delta0)
    }

    pub fn theta_cutoff(&self) -> CutoffSpec {
        CutoffSpec::theta(self.delta0)
    }
}

/// `max{4 δ₀^{-1/2}, √(8/β)}`: any horizon strictly above it is admissible.
pub fn observation_time_threshold(delta0: f64, beta: f64) -> Result<f64> {
    if !(delta0 > 0.0) {
        return Err(Error::NonPositiveInput { name: "delta0", value: delta0 });
    }
    if !(beta > 0.0) {
        return Err(Error::NonPositiveInput { name: "beta", value: beta });
    }
    Ok((4.0 / delta0.sqrt()).max((8.0 / beta).sqrt()))
}

/// Upper end of the admissible `β` interval, `½ min{⅛(2-α)², δ₀}`.
pub fn beta_upper_bound(alpha: f64, delta0: f64) -> f64 {
    0.5 * (0.125 * (2.0 - alpha) * (2.0 - alpha)).min(delta0)
}

/// Resolution of the grid on `Ω̄ × [0, T]` used to certify `ε` and `γ̂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificationGrid {
    pub points_per_unit: usize,
}

impl Default for CertificationGrid {
    fn default() -> Self {
        Self { points_per_unit: 256 }
    }
}

impl CertificationGrid {
    pub fn refined(self) -> Self {
        Self { points_per_unit: 2 * self.points_per_unit }
    }
}

/// Carleman weight parameters together with the derived cutoff quantities
/// `γ, γ̂, ε, A₀, A₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlemanParams {
    pub alpha: f64,
    pub delta0: f64,
    pub lambda: f64,
    pub s: f64,
    pub beta: f64,
    /// Center time of the weight.
    pub t0: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub gamma: f64,
    pub gamma_hat: f64,
    pub epsilon: f64,
    #[serde(rename = "A0")]
    pub a0: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
    pub threshold: f64,
}

impl CarlemanParams {
    /// The time cutoff `k` built from `ε` and `T`.
    pub fn time_cutoff(&self) -> CutoffSpec {
        CutoffSpec::time(self.epsilon, self.horizon)
    }

    /// Same parameters with different `(λ, s)`; derived quantities that
    /// depend on `λ` are refreshed.
    pub fn with_scan_point(&self, lambda: f64, s: f64) -> Self {
        let mut p = *self;
        p.lambda = lambda;
        p.s = s;
        p.a0 = (-lambda * p.gamma_hat).exp();
        p.a1 = (-2.0 * lambda * p.gamma_hat).exp();
        p
    }

    /// `ξ = θ² + r^{2-α} - β(t - t₀)²`.
    pub fn xi(&self, theta: f64, r: f64, t: f64) -> f64 {
        let dt = t - self.t0;
        theta * theta + r.powf(2.0 - self.alpha) - self.beta * dt * dt
    }

    /// Check both admissibility inequalities for `(ε, γ̂)` on a grid.
    pub fn certify(&self, grid: CertificationGrid) -> bool {
        let ext = spatial_extremes(self.alpha, grid);
        certify_epsilon(self, ext, grid, self.epsilon)
    }
}

/// Raw parameter block as read from a JSON configuration document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub alpha: f64,
    pub delta0: f64,
    pub beta: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_s")]
    pub s: f64,
}

fn default_lambda() -> f64 {
    1.0
}

fn default_s() -> f64 {
    2.0
}

impl ParamsConfig {
    pub fn validate(&self) -> Result<CarlemanParams> {
        let domain = DomainSpec::new(self.delta0)?;
        validate_carleman_params(self.alpha, &domain, self.beta, self.horizon, self.lambda, self.s)
    }
}

/// Min and max of `θ² + r^{2-α}` over the spatial certification grid.
fn spatial_extremes(alpha: f64, grid: CertificationGrid) -> (f64, f64) {
    let n = grid.points_per_unit.max(1);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let r_part: Vec<f64> = (0..=n).map(|j| (j as f64 / n as f64).powf(2.0 - alpha)).collect();
    for i in 0..=n {
        let th = i as f64 / n as f64;
        for &rp in &r_part {
            let v = th * th + rp;
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

/// Time samples of the uniform certification grid inside `[a, b]`, plus
/// both endpoints.
fn time_samples(horizon: f64, grid: CertificationGrid, a: f64, b: f64) -> Vec<f64> {
    let n = ((grid.points_per_unit as f64) * horizon).ceil().max(1.0) as usize;
    let mut out = vec![a, b];
    for i in 0..=n {
        let t = horizon * i as f64 / n as f64;
        if t >= a && t <= b {
            out.push(t);
        }
    }
    out
}

fn certify_epsilon(p: &CarlemanParams, ext: (f64, f64), grid: CertificationGrid, eps: f64) -> bool {
    let (min_space, max_space) = ext;
    let t = p.horizon;
    let time_part = |s: f64| p.beta * (s - p.t0) * (s - p.t0);
    let early = time_samples(t, grid, 0.0, 2.0 * eps);
    let late = time_samples(t, grid, t - 2.0 * eps, t);
    let ends_ok = early.iter().chain(late.iter()).all(|&s| max_space - time_part(s) <= -2.0 * p.gamma_hat);
    if !ends_ok {
        return false;
    }
    time_samples(t, grid, p.t0 - eps, p.t0 + eps).iter().all(|&s| min_space - time_part(s) >= -p.gamma_hat)
}

/// Validate `(α, δ₀, β, T, λ, s)` and derive `γ, γ̂, ε, A₀, A₁` with `t₀ = T/2`.
pub fn validate_carleman_params(
    alpha: f64,
    domain: &DomainSpec,
    beta: f64,
    horizon: f64,
    lambda: f64,
    s: f64,
) -> Result<CarlemanParams> {
    validate_carleman_params_on(alpha, domain, beta, horizon, lambda, s, CertificationGrid::default())
}

pub fn validate_carleman_params_on(
    alpha: f64,
    domain: &DomainSpec,
    beta: f64,
    horizon: f64,
    lambda: f64,
    s: f64,
    grid: CertificationGrid,
) -> Result<CarlemanParams> {
    DegeneracyParams::new(alpha)?;
    for (name, v) in [("beta", beta), ("T", horizon), ("lambda", lambda), ("s", s)] {
        if !(v > 0.0) {
            return Err(Error::NonPositiveInput { name, value: v });
        }
    }
    if s < 2.0 {
        return Err(Error::OutOfRange { name: "s", value: s, expected: "s >= 2" });
    }
    let delta0 = domain.delta0();
    let bound = beta_upper_bound(alpha, delta0);
    if beta >= bound {
        return Err(Error::BetaOutOfRange { beta, bound });
    }
    let threshold = observation_time_threshold(delta0, beta)?;
    if horizon <= threshold {
        return Err(Error::TimeTooShort { horizon, threshold });
    }

    // half of the largest γ allowed by min{δ₀, β}·T² > 8 + 4γ
    let gamma = (delta0.min(beta) * horizon * horizon - 8.0) / 8.0;
    let gamma_hat = gamma / 4.0;
    let mut p = CarlemanParams {
        alpha,
        delta0,
        lambda,
        s,
        beta,
        t0: horizon / 2.0,
        horizon,
        gamma,
        gamma_hat,
        epsilon: 0.0,
        a0: (-lambda * gamma_hat).exp(),
        a1: (-2.0 * lambda * gamma_hat).exp(),
        threshold,
    };

    let ext = spatial_extremes(alpha, grid);
    let cap = horizon / 16.0 * (1.0 - 1e-9);
    let eps = if certify_epsilon(&p, ext, grid, cap) {
        cap
    } else {
        let (mut lo, mut hi) = (0.0, cap);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if certify_epsilon(&p, ext, grid, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    if !(eps > 0.0) {
        return Err(Error::NoAdmissibleEpsilon);
    }
    p.epsilon = eps;
    Ok(p)
}
