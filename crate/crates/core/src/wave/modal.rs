use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::basis::RadialBasis;
use crate::error::{Error, Result};

/// Modal state `φ = Σ amp_{nk}(t) sin(nπθ) R_k(r)` at time `time`.
///
/// `a` holds amplitudes and `b` velocities at that time, so a state returned
/// by [`evolve`] is itself valid initial data. Storage is row-major with `n`
/// outer and `k` inner, both 1-based in the public accessors.
#[derive(Debug, Clone)]
pub struct ModalCoefficients {
    pub n_max: usize,
    pub k_max: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub omega: Vec<f64>,
    pub time: f64,
    basis: Arc<RadialBasis>,
}

impl ModalCoefficients {
    pub fn zeros(basis: Arc<RadialBasis>, n_max: usize, k_max: usize) -> Result<Self> {
        basis.check_truncation(k_max)?;
        if n_max == 0 {
            return Err(Error::TruncationTooSmall { requested: 0, available: 0 });
        }
        let mut omega = Vec::with_capacity(n_max * k_max);
        for n in 1..=n_max {
            let mu = (n as f64 * PI).powi(2);
            for k in 1..=k_max {
                omega.push((mu + basis.rho(k)).sqrt());
            }
        }
        let len = n_max * k_max;
        Ok(Self { n_max, k_max, a: vec![0.0; len], b: vec![0.0; len], omega, time: 0.0, basis })
    }

    /// State with the listed `(n, k, a, b)` modes set and all others zero.
    pub fn from_modes(basis: Arc<RadialBasis>, n_max: usize, k_max: usize, modes: &[(usize, usize, f64, f64)]) -> Result<Self> {
        let mut state = Self::zeros(basis, n_max, k_max)?;
        for &(n, k, a, b) in modes {
            let i = state.checked_index(n, k)?;
            state.a[i] += a;
            state.b[i] += b;
        }
        Ok(state)
    }

    pub fn basis(&self) -> &Arc<RadialBasis> {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn index(&self, n: usize, k: usize) -> usize {
        (n - 1) * self.k_max + (k - 1)
    }

    fn checked_index(&self, n: usize, k: usize) -> Result<usize> {
        if n == 0 || k == 0 || n > self.n_max || k > self.k_max {
            return Err(Error::TruncationTooSmall { requested: n.max(k), available: self.n_max.min(self.k_max) });
        }
        Ok(self.index(n, k))
    }

    /// `(n, k)` of a flat index, 1-based.
    pub fn mode_of(&self, i: usize) -> (usize, usize) {
        (i / self.k_max + 1, i % self.k_max + 1)
    }

    pub fn amplitude(&self, n: usize, k: usize) -> f64 {
        self.a[self.index(n, k)]
    }

    pub fn velocity(&self, n: usize, k: usize) -> f64 {
        self.b[self.index(n, k)]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&x| x == 0.0)
    }

    /// `c₁·self + c₂·other`; both must share basis and truncation.
    pub fn combine(&self, c1: f64, other: &Self, c2: f64) -> Result<Self> {
        if self.n_max != other.n_max || self.k_max != other.k_max || !Arc::ptr_eq(&self.basis, &other.basis) {
            return Err(Error::GridMismatch("states use different bases or truncations".into()));
        }
        let mut out = self.clone();
        for i in 0..out.len() {
            out.a[i] = c1 * self.a[i] + c2 * other.a[i];
            out.b[i] = c1 * self.b[i] + c2 * other.b[i];
        }
        Ok(out)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.a.iter_mut().for_each(|x| *x *= c);
        out.b.iter_mut().for_each(|x| *x *= c);
        out
    }

    /// `‖φ‖²_{L²(Ω)} = ½ Σ amp²`.
    pub fn l2_norm_sq(&self) -> f64 {
        0.5 * self.a.iter().map(|x| x * x).sum::<f64>()
    }

    /// `‖φ_t‖²_{L²(Ω)} = ½ Σ vel²`.
    pub fn velocity_l2_norm_sq(&self) -> f64 {
        0.5 * self.b.iter().map(|x| x * x).sum::<f64>()
    }

    /// `‖φ‖²_{H¹₀(Ω;w)} = ∫ φ² + A∇φ·∇φ = ½ Σ (1 + ω²) amp²`.
    pub fn weighted_h1_norm_sq(&self) -> f64 {
        0.5 * self.a.iter().zip(&self.omega).map(|(a, w)| (1.0 + w * w) * a * a).sum::<f64>()
    }

    /// `φ(θ, r)` at the state's time.
    pub fn eval(&self, theta: f64, r: f64) -> f64 {
        let radial: Vec<f64> = (1..=self.k_max).map(|k| self.basis.mode_value(k, r)).collect();
        let mut total = 0.0;
        for n in 1..=self.n_max {
            let s = (n as f64 * PI * theta).sin();
            let row = &self.a[(n - 1) * self.k_max..n * self.k_max];
            total += s * row.iter().zip(&radial).map(|(a, r)| a * r).sum::<f64>();
        }
        total
    }
}

/// Initial data, either as explicit modal coefficients or as a sampled field.
pub enum InitialData<'a> {
    Zero,
    /// `(n, k, coefficient)` triples of `Σ c sin(nπθ) R_k(r)`.
    Modal(Vec<(usize, usize, f64)>),
    /// Callable `(θ, r) ↦ value`, sampled on `θ_samples` trapezoid intervals
    /// and on the radial mesh nodes.
    Field {
        f: &'a (dyn Fn(f64, f64) -> f64 + Sync),
        theta_samples: usize,
    },
}

fn project_one(data: &InitialData<'_>, basis: &RadialBasis, n_max: usize, k_max: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; n_max * k_max];
    match data {
        InitialData::Zero => {}
        InitialData::Modal(terms) => {
            for &(n, k, c) in terms {
                if n == 0 || k == 0 || n > n_max || k > k_max {
                    return Err(Error::TruncationTooSmall { requested: n.max(k), available: n_max.min(k_max) });
                }
                out[(n - 1) * k_max + (k - 1)] += c;
            }
        }
        InitialData::Field { f, theta_samples } => {
            let m = *theta_samples;
            if m < 2 {
                return Err(Error::InvalidMeshSpec(format!("theta_samples = {m} < 2")));
            }
            let nodes = basis.nodes();
            let h = 1.0 / m as f64;
            // interior θ samples only; trapezoid end terms carry sin(nπθ) = 0
            for i in 1..m {
                let theta = i as f64 * h;
                let nodal: Vec<f64> = nodes.iter().map(|&r| f(theta, r)).collect();
                let proj = basis.project_nodal(&nodal, k_max);
                for n in 1..=n_max {
                    let s = 2.0 * h * (n as f64 * PI * theta).sin();
                    for k in 0..k_max {
                        out[(n - 1) * k_max + k] += s * proj[k];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Modal projection of `(φ⁰, φ¹)`: `a_{nk} = 2 ∫∫ φ⁰ sin(nπθ) R_k dθ dr` with
/// the discrete mass inner product in `r`, and likewise `b_{nk}` from `φ¹`.
pub fn project_initial_data(
    phi0: &InitialData<'_>,
    phi1: &InitialData<'_>,
    basis: Arc<RadialBasis>,
    n_max: usize,
    k_max: usize,
) -> Result<ModalCoefficients> {
    let mut state = ModalCoefficients::zeros(basis, n_max, k_max)?;
    state.a = project_one(phi0, &state.basis, n_max, k_max)?;
    state.b = project_one(phi1, &state.basis, n_max, k_max)?;
    Ok(state)
}

/// Discrete `‖φ‖²_{L²(Ω)}` of a field (same quadrature as the projection)
/// minus `½ Σ a²`: the squared reconstruction error by Parseval.
pub fn projection_defect(f: &(dyn Fn(f64, f64) -> f64 + Sync), theta_samples: usize, state: &ModalCoefficients) -> f64 {
    let basis = state.basis();
    let h = 1.0 / theta_samples as f64;
    let mut norm = 0.0;
    for i in 1..theta_samples {
        let theta = i as f64 * h;
        let nodal: Vec<f64> = basis.nodes().iter().map(|&r| f(theta, r)).collect();
        norm += h * basis.nodal_norm_sq(&nodal);
    }
    norm - state.l2_norm_sq()
}

/// Exact modal evolution from `state.time` to `t` with `f = 0`.
pub fn evolve(state: &ModalCoefficients, t: f64) -> ModalCoefficients {
    let dt = t - state.time;
    let mut out = state.clone();
    for i in 0..state.len() {
        let w = state.omega[i];
        let (s, c) = (w * dt).sin_cos();
        let (a, b) = (state.a[i], state.b[i]);
        out.a[i] = a * c + b / w * s;
        out.b[i] = -a * w * s + b * c;
    }
    out.time = t;
    out
}

/// Per-mode forcing samples `f̂_{nk}(s_j)`, `s_j = state.time + j·dt`.
#[derive(Debug, Clone)]
pub struct ModalForcing {
    pub dt: f64,
    /// One series per mode in the state's flat index order.
    pub series: Vec<Vec<f64>>,
}

impl ModalForcing {
    /// Samples `g(n, k, s)` on `steps + 1` points starting at `start`.
    pub fn sample(state: &ModalCoefficients, dt: f64, steps: usize, g: impl Fn(usize, usize, f64) -> f64) -> Self {
        let series = (0..state.len())
            .map(|i| {
                let (n, k) = state.mode_of(i);
                (0..=steps).map(|j| g(n, k, state.time + j as f64 * dt)).collect()
            })
            .collect();
        Self { dt, series }
    }
}

/// Forced evolution: free evolution plus the trapezoid Duhamel integrals
/// `∫ sin(ω(t-s))/ω f̂(s) ds` (amplitude) and `∫ cos(ω(t-s)) f̂(s) ds` (velocity).
pub fn duhamel_forcing(state: &ModalCoefficients, forcing: &ModalForcing, t: f64) -> Result<ModalCoefficients> {
    if forcing.series.len() != state.len() {
        return Err(Error::GridMismatch(format!("forcing has {} modes, state has {}", forcing.series.len(), state.len())));
    }
    if !(forcing.dt > 0.0) {
        return Err(Error::GridMismatch(format!("time step {} is not positive", forcing.dt)));
    }
    let span = t - state.time;
    let steps_f = span / forcing.dt;
    let steps = steps_f.round();
    if span < 0.0 || (steps_f - steps).abs() > 1e-9 * steps.max(1.0) {
        return Err(Error::GridMismatch(format!("t = {t} is not on the forcing grid of step {}", forcing.dt)));
    }
    let steps = steps as usize;
    let mut out = evolve(state, t);
    for (i, series) in forcing.series.iter().enumerate() {
        if series.len() < steps + 1 {
            return Err(Error::GridMismatch(format!("forcing series {i} has {} samples, need {}", series.len(), steps + 1)));
        }
        let w = state.omega[i];
        let (mut amp, mut vel) = (0.0, 0.0);
        for (j, &f) in series[..=steps].iter().enumerate() {
            let weight = if j == 0 || j == steps { 0.5 } else { 1.0 } * forcing.dt;
            let (s, c) = (w * (span - j as f64 * forcing.dt)).sin_cos();
            amp += weight * s / w * f;
            vel += weight * c * f;
        }
        out.a[i] += amp;
        out.b[i] += vel;
    }
    Ok(out)
}

/// `E = ¼ Σ (vel² + ω² amp²)`.
pub fn energy(state: &ModalCoefficients) -> f64 {
    let (k, p) = energy_split(state);
    k + p
}

/// Kinetic and potential parts `(¼ Σ vel², ¼ Σ ω² amp²)`.
pub fn energy_split(state: &ModalCoefficients) -> (f64, f64) {
    let kinetic = 0.25 * state.b.iter().map(|v| v * v).sum::<f64>();
    let potential = 0.25 * state.a.iter().zip(&state.omega).map(|(a, w)| w * w * a * a).sum::<f64>();
    (kinetic, potential)
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub times: Vec<f64>,
    #[serde(rename = "E")]
    pub energy: Vec<f64>,
    pub kinetic: Vec<f64>,
    pub potential: Vec<f64>,
}

impl EnergyReport {
    /// `max_t |E(t) - E(0)| / E(0)`, or the absolute drift when `E(0) = 0`.
    pub fn max_relative_drift(&self) -> f64 {
        let Some(&e0) = self.energy.first() else { return 0.0 };
        let scale = if e0 > 0.0 { e0 } else { 1.0 };
        self.energy.iter().map(|e| (e - e0).abs() / scale).fold(0.0, f64::max)
    }
}

/// Energy time series at `samples + 1` equispaced times in `[0, horizon]`.
pub fn energy_series(state: &ModalCoefficients, horizon: f64, samples: usize) -> EnergyReport {
    let n = samples.max(1);
    let mut report = EnergyReport { times: vec![], energy: vec![], kinetic: vec![], potential: vec![] };
    for i in 0..=n {
        let t = state.time + horizon * i as f64 / n as f64;
        let s = evolve(state, t);
        let (k, p) = energy_split(&s);
        report.times.push(t);
        report.energy.push(k + p);
        report.kinetic.push(k);
        report.potential.push(p);
    }
    report
}

/// Damped Gaussian data `a, b ~ N(0,1)/(n² + k²)` for ensemble member `member`.
///
/// Each mode draws from its own stream keyed by `(seed, member, n, k)`, so
/// raising the truncation extends the same datum instead of redrawing it.
pub fn random_modal_data(
    basis: Arc<RadialBasis>,
    n_max: usize,
    k_max: usize,
    seed: u64,
    member: u64,
) -> Result<ModalCoefficients> {
    let mut state = ModalCoefficients::zeros(basis, n_max, k_max)?;
    for n in 1..=n_max {
        for k in 1..=k_max {
            let mut key = [0u8; 32];
            key[..8].copy_from_slice(&seed.to_le_bytes());
            key[8..16].copy_from_slice(&member.to_le_bytes());
            key[16..24].copy_from_slice(&(n as u64).to_le_bytes());
            key[24..].copy_from_slice(&(k as u64).to_le_bytes());
            let mut rng = ChaCha8Rng::from_seed(key);
            let damp = 1.0 / (n * n + k * k) as f64;
            let i = state.index(n, k);
            state.a[i] = damp * rng.sample::<f64, _>(StandardNormal);
            state.b[i] = damp * rng.sample::<f64, _>(StandardNormal);
        }
    }
    Ok(state)
}
