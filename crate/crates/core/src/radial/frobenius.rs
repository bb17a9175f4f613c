//! Series form of the Dirichlet radial eigenfunctions.
//!
//! Near `r = 0` the solution of `-(r^α R')' = ρ R` vanishing at the origin is
//! `R = Σ_j c_j r^{e_j}` with `e_j = (1-α) + j(2-α)` and
//! `c_{j+1} e_{j+1} (j+1)(2-α) = -ρ c_j`. The series converges on all of
//! `[0, 1]`, so it gives smooth eigenfunctions with exact derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_TERMS: usize = 600;
/// Largest admissible series term at `r = 1`. The alternating sum cancels
/// down to `O(1)`, so beyond this only about three digits of `R(1)` remain.
const MAX_PEAK: f64 = 1e11;

fn peak_term(alpha: f64, rho: f64) -> f64 {
    coefficients(alpha, rho).iter().fold(0.0, |m, c| m.max(c.abs()))
}

fn coefficients(alpha: f64, rho: f64) -> Vec<f64> {
    let step = 2.0 - alpha;
    let mut c = vec![1.0];
    let mut peak: f64 = 1.0;
    for j in 0..MAX_TERMS {
        let e_next = (1.0 - alpha) + (j + 1) as f64 * step;
        let next = -rho * c[j] / (e_next * (j + 1) as f64 * step);
        c.push(next);
        peak = peak.max(next.abs());
        if next.abs() < 1e-20 * peak && j > 4 {
            break;
        }
    }
    c
}

/// Value at `r = 1` of the unnormalized solution with `c₀ = 1`.
pub fn shooting_value(alpha: f64, rho: f64) -> f64 {
    coefficients(alpha, rho).iter().sum()
}

/// A normalized radial eigenfunction with `∫₀¹ R² dr = 1` and `R > 0` near 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusMode {
    pub alpha: f64,
    pub k: usize,
    pub rho: f64,
    coeffs: Vec<f64>,
}

impl FrobeniusMode {
    /// The `k`-th (1-based) Dirichlet eigenpair, located by scanning the sign
    /// of `R(1; ρ)` and refining by bisection. Fails once cancellation in
    /// the series makes the sign of `R(1)` unreliable (from about `k = 10`).
    pub fn find(alpha: f64, k: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || k == 0 {
            return Err(Error::OutOfRange { name: "alpha", value: alpha, expected: "0 <= alpha < 1, k >= 1" });
        }
        let step = 0.05;
        let mut lo = 0.0;
        let mut f_lo = shooting_value(alpha, lo);
        let mut found = 0;
        let limit = 4.0e4;
        while lo < limit {
            let hi = lo + step;
            if peak_term(alpha, hi) > MAX_PEAK {
                return Err(Error::ConvergenceFailure { index: k, reason: format!("series cancellation beyond rho = {hi:.1}") });
            }
            let f_hi = shooting_value(alpha, hi);
            if f_lo.signum() != f_hi.signum() {
                found += 1;
                if found == k {
                    let rho = refine(alpha, lo, hi, f_lo);
                    return Ok(Self::with_eigenvalue(alpha, k, rho));
                }
            }
            lo = hi;
            f_lo = f_hi;
        }
        Err(Error::ConvergenceFailure { index: k, reason: "series root scan exhausted".into() })
    }

    fn with_eigenvalue(alpha: f64, k: usize, rho: f64) -> Self {
        let c = coefficients(alpha, rho);
        let step = 2.0 - alpha;
        let e: Vec<f64> = (0..c.len()).map(|j| (1.0 - alpha) + j as f64 * step).collect();
        let mut norm2 = 0.0;
        for i in 0..c.len() {
            for j in 0..c.len() {
                norm2 += c[i] * c[j] / (e[i] + e[j] + 1.0);
            }
        }
        let s = 1.0 / norm2.sqrt();
        Self { alpha, k, rho, coeffs: c.into_iter().map(|v| v * s).collect() }
    }

    fn exponent(&self, j: usize) -> f64 {
        (1.0 - self.alpha) + j as f64 * (2.0 - self.alpha)
    }

    /// `(R, R', R'')` at `r > 0`.
    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let e = self.exponent(j);
            let p = r.powf(e - 2.0);
            v += c * p * r * r;
            d1 += c * e * p * r;
            d2 += c * e * (e - 1.0) * p;
        }
        (v, d1, d2)
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.eval(r).0
    }

    /// `R'(1)`.
    pub fn flux_at_1(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(j, c)| c * self.exponent(j)).sum()
    }

    /// `∂ᵣ(r^α R')`, which equals `-ρ R`.
    pub fn divergence_term(&self, r: f64) -> f64 {
        -self.rho * self.value(r)
    }
}

fn refine(alpha: f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = shooting_value(alpha, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn laplacian_limit_is_sine() {
        let m = FrobeniusMode::find(0.0, 3).unwrap();
        assert!((m.rho - 9.0 * PI * PI).abs() < 1e-9);
        let r = 0.37;
        let exact = 2f64.sqrt() * (3.0 * PI * r).sin();
        assert!((m.value(r) - exact).abs() < 1e-10);
        assert!((m.flux_at_1() - 2f64.sqrt() * 3.0 * PI * (3.0 * PI).cos()).abs() < 1e-8);
    }

    #[test]
    fn satisfies_the_ode() {
        let alpha = 0.5;
        let m = FrobeniusMode::find(alpha, 2).unwrap();
        for &r in &[0.05, 0.3, 0.8, 0.99] {
            let (v, d1, d2) = m.eval(r);
            // (r^α R')' = α r^{α-1} R' + r^α R''
            let lhs = alpha * r.powf(alpha - 1.0) * d1 + r.powf(alpha) * d2;
            assert!((lhs + m.rho * v).abs() < 1e-9 * m.rho, "r={r}");
        }
        assert!(m.value(1.0).abs() < 1e-10);
    }
}
