//! Smooth cutoff functions built from the classical `exp(-1/x)` ramp.

use serde::{Deserialize, Serialize};

/// Value and first two derivatives of a scalar function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const ZERO: Jet = Jet { value: 0.0, d1: 0.0, d2: 0.0 };
    pub const ONE: Jet = Jet { value: 1.0, d1: 0.0, d2: 0.0 };

    fn scaled(self, inv_width: f64, sign: f64) -> Jet {
        Jet { value: self.value, d1: sign * self.d1 * inv_width, d2: self.d2 * inv_width * inv_width }
    }
}

/// `f(x) = exp(-1/x)` for `x > 0`, zero otherwise, with two derivatives.
fn mollifier(x: f64) -> (f64, f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let f = (-1.0 / x).exp();
    if f == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let x2 = x * x;
    (f, f / x2, f * (1.0 - 2.0 * x) / (x2 * x2))
}

/// Smooth monotone step: 0 for `x <= 0`, 1 for `x >= 1`, C^inf in between.
///
/// `S = f(x) / (f(x) + f(1 - x))`; derivatives are analytic.
pub fn smooth_step(x: f64) -> Jet {
    if x <= 0.0 {
        return Jet::ZERO;
    }
    if x >= 1.0 {
        return Jet::ONE;
    }
    let (f, f1, f2) = mollifier(x);
    let (g0, g1m, g2m) = mollifier(1.0 - x);
    // g(x) = f(1-x): g' = -f'(1-x), g'' = f''(1-x)
    let (g, g1, g2) = (g0, -g1m, g2m);
    let d = f + g;
    let d1 = f1 + g1;
    let n = f1 * g - f * g1;
    let n1 = f2 * g - f * g2;
    Jet { value: f / d, d1: n / (d * d), d2: (n1 * d - 2.0 * n * d1) / (d * d * d) }
}

/// A cutoff profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CutoffSpec {
    /// ζ(θ): zero on `[0, 2δ₀) ∪ (1-2δ₀, 1]`, one on `(3δ₀, 1-3δ₀)`.
    Theta { delta0: f64 },
    /// k(t): zero outside `(ε, T-ε)`, one on `(2ε, T-2ε)`.
    Time { epsilon: f64, horizon: f64 },
    /// Identically one.
    Unit,
}

impl CutoffSpec {
    pub fn theta(delta0: f64) -> Self {
        CutoffSpec::Theta { delta0 }
    }

    pub fn time(epsilon: f64, horizon: f64) -> Self {
        CutoffSpec::Time { epsilon, horizon }
    }

    /// Ramp up on `[lo, lo + w]`, plateau, ramp down on `[hi - w, hi]`.
    fn bump(x: f64, lo: f64, hi: f64, w: f64) -> Jet {
        let mid = 0.5 * (lo + hi);
        let inv = 1.0 / w;
        if x <= mid {
            smooth_step((x - lo) * inv).scaled(inv, 1.0)
        } else {
            smooth_step((hi - x) * inv).scaled(inv, -1.0)
        }
    }

    pub fn eval(&self, x: f64) -> Jet {
        match *self {
            CutoffSpec::Theta { delta0 } => Self::bump(x, 2.0 * delta0, 1.0 - 2.0 * delta0, delta0),
            CutoffSpec::Time { epsilon, horizon } => Self::bump(x, epsilon, horizon - epsilon, epsilon),
            CutoffSpec::Unit => Jet::ONE,
        }
    }

    /// Transition bands where the cutoff is strictly between 0 and 1.
    pub fn transition_bands(&self) -> Vec<(f64, f64)> {
        match *self {
            CutoffSpec::Theta { delta0 } => vec![(2.0 * delta0, 3.0 * delta0), (1.0 - 3.0 * delta0, 1.0 - 2.0 * delta0)],
            CutoffSpec::Time { epsilon, horizon } => vec![(epsilon, 2.0 * epsilon), (horizon - 2.0 * epsilon, horizon - epsilon)],
            CutoffSpec::Unit => vec![],
        }
    }
}

/// ζ(θ) and its derivatives. Total on `[0, 1]`.
pub fn eval_cutoff_theta(spec: &CutoffSpec, theta: f64) -> Jet {
    spec.eval(theta)
}

/// k(t) and its derivatives. Total on ℝ.
pub fn eval_cutoff_time(spec: &CutoffSpec, t: f64) -> Jet {
    spec.eval(t)
}

/// Measured constants `max|ζ'|·δ₀` and `max|ζ''|·δ₀²` on a uniform grid
/// of `samples` points over `[0, 1]`.
pub fn theta_derivative_constants(delta0: f64, samples: usize) -> (f64, f64) {
    let spec = CutoffSpec::theta(delta0);
    let mut c1: f64 = 0.0;
    let mut c2: f64 = 0.0;
    let n = samples.max(2);
    for i in 0..n {
        let th = i as f64 / (n - 1) as f64;
        let j = spec.eval(th);
        c1 = c1.max(j.d1.abs() * delta0);
        c2 = c2.max(j.d2.abs() * delta0 * delta0);
    }
    (c1, c2)
}
