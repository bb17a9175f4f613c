use serde::Serialize;

use super::weight::{eval_xi_sigma, WeightPoint};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::CarlemanParams;

/// Tensor grid over `[0,1]_θ × [r_min,1]_r × [0,T]_t`, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceTimeGrid {
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
    pub t: Vec<f64>,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

impl SpaceTimeGrid {
    pub fn uniform(n_theta: usize, n_r: usize, n_t: usize, r_min: f64, horizon: f64) -> Result<Self> {
        if n_theta == 0 || n_r == 0 || n_t == 0 {
            return Err(Error::GridMismatch("grid needs at least one interval per axis".into()));
        }
        if !(0.0..1.0).contains(&r_min) || !(horizon > 0.0) {
            return Err(Error::GridMismatch(format!("invalid extents r_min = {r_min}, T = {horizon}")));
        }
        Ok(Self { theta: linspace(0.0, 1.0, n_theta), r: linspace(r_min, 1.0, n_r), t: linspace(0.0, horizon, n_t) })
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.theta.len(), self.r.len(), self.t.len()]
    }

    pub fn len(&self) -> usize {
        self.theta.len() * self.r.len() * self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index, `t` fastest.
    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.r.len() + j) * self.t.len() + l
    }

    pub fn point(&self, idx: usize) -> (f64, f64, f64) {
        let nt = self.t.len();
        let nr = self.r.len();
        let l = idx % nt;
        let j = (idx / nt) % nr;
        let i = idx / (nt * nr);
        (self.theta[i], self.r[j], self.t[l])
    }
}

/// Values on a [`SpaceTimeGrid`] in its flat order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub shape: [usize; 3],
    pub values: Vec<f64>,
}

impl GridField {
    pub fn sample(grid: &SpaceTimeGrid, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        Self {
            shape: grid.shape(),
            values: (0..grid.len())
                .map(|i| {
                    let (th, r, t) = grid.point(i);
                    f(th, r, t)
                })
                .collect(),
        }
    }
}

/// The weight and its derivative package at every node of a grid.
#[derive(Debug, Clone)]
pub struct WeightField {
    pub grid: SpaceTimeGrid,
    pub params: CarlemanParams,
    pub points: Vec<WeightPoint>,
}

impl WeightField {
    pub fn build(params: &CarlemanParams, grid: SpaceTimeGrid, exec: Execution) -> Self {
        let points = exec.map(grid.len(), |i| {
            let (th, r, t) = grid.point(i);
            eval_xi_sigma(params, th, r, t)
        });
        Self { grid, params: *params, points }
    }

    fn check(&self, f: &GridField) -> Result<()> {
        if f.shape != self.grid.shape() || f.values.len() != self.points.len() {
            return Err(Error::GridMismatch(format!(
                "field shape {:?} does not match weight grid {:?}",
                f.shape,
                self.grid.shape()
            )));
        }
        Ok(())
    }
}

/// `η = e^{sσ} ψ` pointwise.
pub fn conjugate_field(psi: &GridField, weight: &WeightField) -> Result<GridField> {
    weight.check(psi)?;
    let s = weight.params.s;
    let values = psi.values.iter().zip(&weight.points).map(|(v, w)| v * (s * w.sigma).exp()).collect();
    Ok(GridField { shape: psi.shape, values })
}

/// `ψ = e^{-sσ} η` pointwise.
pub fn deconjugate_field(eta: &GridField, weight: &WeightField) -> Result<GridField> {
    weight.check(eta)?;
    let s = weight.params.s;
    let values = eta.values.iter().zip(&weight.points).map(|(v, w)| v * (-s * w.sigma).exp()).collect();
    Ok(GridField { shape: eta.shape, values })
}
