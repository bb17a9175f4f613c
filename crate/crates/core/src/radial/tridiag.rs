//! Symmetric tridiagonal pencils `A x = μ M x`: Sturm-sequence bisection for
//! eigenvalues and inverse iteration for eigenvectors.

use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// Sub/super-diagonal, length `n - 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        debug_assert_eq!(off.len() + 1, diag.len().max(1));
        Self { diag, off }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![1.0; n], vec![0.0; n.saturating_sub(1)])
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self::new(d.to_vec(), vec![0.0; d.len().saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n.saturating_sub(1) {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.apply(y))
    }

    pub fn quad(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    /// `D^{-1/2} A D^{-1/2}` for a positive diagonal `d`.
    pub fn congruence_scaled(&self, d: &[f64]) -> Self {
        let s: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
        let diag = self.diag.iter().zip(&s).map(|(a, si)| a * si * si).collect();
        let off = self.off.iter().enumerate().map(|(i, b)| b * s[i] * s[i + 1]).collect();
        Self::new(diag, off)
    }

    fn inf_norm(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// `self - mu * other`.
    fn shifted(&self, mu: f64, other: &SymTridiag) -> SymTridiag {
        let diag = self.diag.iter().zip(&other.diag).map(|(a, m)| a - mu * m).collect();
        let off = self.off.iter().zip(&other.off).map(|(a, m)| a - mu * m).collect();
        SymTridiag::new(diag, off)
    }

    /// Solve `self · x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        TridiagLu::factor(self).solve(b)
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Number of eigenvalues of the pencil `(a, m)` strictly below `mu`.
///
/// By Sylvester's law of inertia this is the number of negative pivots in
/// the `LDLᵀ` factorization of `a - mu·m` when `m` is positive definite.
pub fn count_below(a: &SymTridiag, m: &SymTridiag, mu: f64) -> usize {
    let n = a.n();
    let mut count = 0;
    let mut d_prev = 1.0;
    for i in 0..n {
        let diag = a.diag[i] - mu * m.diag[i];
        let mut d = if i == 0 {
            diag
        } else {
            let e = a.off[i - 1] - mu * m.off[i - 1];
            diag - e * e / d_prev
        };
        if d == 0.0 {
            let scale = a.diag[i].abs() + (mu * m.diag[i]).abs();
            d = -f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
        d_prev = d;
    }
    count
}

/// LU factorization of a (not necessarily symmetric) tridiagonal matrix
/// with row interchanges.
struct TridiagLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(a: &SymTridiag) -> Self {
        let n = a.n();
        let mut d = a.diag.clone();
        let mut du = a.off.clone();
        let mut dl = a.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut mult = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let tiny = f64::EPSILON * a.inf_norm().max(f64::MIN_POSITIVE);
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                mult[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                let f = d[i] / dl[i];
                mult[i] = f;
                swapped[i] = true;
                d[i] = dl[i];
                let old_d = d[i + 1];
                d[i + 1] = du[i] - f * old_d;
                du[i] = old_d;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du2[i];
                }
            }
            dl[i] = 0.0;
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        Self { d, du, du2, mult, swapped }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut x = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= self.mult[i] * x[i];
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            if i + 1 < n {
                v -= self.du[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= self.du2[i] * x[i + 2];
            }
            x[i] = v / self.d[i];
        }
        x
    }
}

/// The `index`-th (0-based) eigenvalue of the pencil by bisection on the
/// inertia count, given `count_below(lo) <= index < count_below(hi)`.
fn bisect(a: &SymTridiag, m: &SymTridiag, index: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
        if count_below(a, m, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest `count` eigenvalues of `a x = μ m x`, ascending.
pub fn smallest_eigenvalues(a: &SymTridiag, m: &SymTridiag, count: usize, exec: Execution) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    let mut lo = 0.0;
    let mut step = 1.0;
    while count_below(a, m, lo) > 0 {
        lo = -step;
        step *= 2.0;
    }
    let mut hi = 1.0;
    while count_below(a, m, hi) < count {
        hi *= 2.0;
    }
    exec.map(count, |j| bisect(a, m, j, lo, hi))
}

/// Eigenvector of the pencil for an accurate eigenvalue `mu`, normalized in
/// the `m` inner product with a positive leading entry.
pub fn inverse_iteration(a: &SymTridiag, m: &SymTridiag, mu: f64, index: usize) -> Result<Vec<f64>> {
    let n = a.n();
    let lu = TridiagLu::factor(&a.shifted(mu, m));
    let mut y: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_7 + index as f64).sin()).collect();
    let scale = a.inf_norm() + mu.abs() * m.inf_norm();
    let mut last = f64::INFINITY;
    for _ in 0..12 {
        let rhs = m.apply(&y);
        let z = lu.solve(&rhs);
        let norm = m.quad(&z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::ConvergenceFailure { index, reason: "degenerate iterate".into() });
        }
        y = z.iter().map(|v| v / norm).collect();
        let ay = a.apply(&y);
        let my = m.apply(&y);
        let rq = dot(&y, &ay);
        let res = ay.iter().zip(&my).map(|(u, v)| (u - rq * v).abs()).fold(0.0, f64::max);
        last = res / scale;
        if last <= 1e-12 {
            orient(&mut y);
            return Ok(y);
        }
    }
    Err(Error::ConvergenceFailure { index, reason: format!("relative residual {last:.3e} after 12 inverse iterations") })
}

/// Make the first non-negligible entry positive.
fn orient(y: &mut [f64]) {
    let peak = y.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if let Some(first) = y.iter().find(|v| v.abs() > 1e-8 * peak) {
        if *first < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// Modified Gram-Schmidt in the `m` inner product, in place.
pub fn m_orthonormalize(m: &SymTridiag, vectors: &mut [Vec<f64>]) {
    for i in 0..vectors.len() {
        let (done, rest) = vectors.split_at_mut(i);
        let v = &mut rest[0];
        for u in done.iter() {
            let c = m.bilinear(u, v);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
        let norm = m.quad(v).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
}
