//! Observability experiments: energy versus boundary trace and interior
//! observation, the high-mode obstruction for a pure trace estimate, and
//! stability of the hidden-trace ratio under truncation.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::{observation_time_threshold, DomainSpec};
use crate::stats::{loglog_fit, summarize, LinearFit, Summary};
use crate::wave::{
    boundary_trace_norm, energy, interior_observation_norm, random_modal_data, ModalCoefficients, NormOptions, RadialBasis,
    TraceSegment,
};

/// Horizon used when none is given: 10% above the observation threshold.
pub fn default_horizon(delta0: f64, beta: f64) -> Result<f64> {
    Ok(1.1 * observation_time_threshold(delta0, beta)?)
}

/// Observation setting shared by every record of an experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ObservationSetup {
    pub delta0: f64,
    pub beta: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub threshold: f64,
}

impl ObservationSetup {
    /// Fails with `TimeTooShort` unless `T` exceeds the threshold.
    pub fn new(domain: &DomainSpec, beta: f64, horizon: f64) -> Result<Self> {
        let threshold = observation_time_threshold(domain.delta0(), beta)?;
        if !(horizon > threshold) {
            return Err(Error::TimeTooShort { horizon, threshold });
        }
        Ok(Self { delta0: domain.delta0(), beta, horizon, threshold })
    }

    pub fn with_default_horizon(domain: &DomainSpec, beta: f64) -> Result<Self> {
        Self::new(domain, beta, default_horizon(domain.delta0(), beta)?)
    }

    fn domain(&self) -> DomainSpec {
        DomainSpec::new(self.delta0).expect("validated on construction")
    }
}

/// `E(0)` against the restricted trace and the interior term.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ObservabilityRecord {
    pub energy: f64,
    pub trace_restricted: f64,
    pub interior: f64,
    /// `E(0) / (trace + interior)`; `NaN` when degenerate.
    pub ratio: f64,
    /// Zero datum: the ratio is `0/0` and the record is excluded.
    pub degenerate: bool,
}

pub fn observability_ratio(
    state: &ModalCoefficients,
    setup: &ObservationSetup,
    opts: NormOptions,
) -> Result<ObservabilityRecord> {
    let domain = setup.domain();
    let e0 = energy(state);
    let trace = boundary_trace_norm(state, setup.horizon, TraceSegment::Restricted { delta0: setup.delta0 }, opts)?;
    let interior = interior_observation_norm(state, &domain, setup.horizon, opts)?;
    let den = trace + interior;
    let degenerate = state.is_zero() || den == 0.0;
    Ok(ObservabilityRecord {
        energy: e0,
        trace_restricted: trace,
        interior,
        ratio: if degenerate { f64::NAN } else { e0 / den },
        degenerate,
    })
}

/// One row of the obstruction scan for the datum `sin(nπθ) R₁(r)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ObstructionRow {
    pub n: usize,
    pub omega: f64,
    pub energy: f64,
    /// Trace over the full top side.
    pub trace_full: f64,
    pub trace_ratio: f64,
    pub record: ObservabilityRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionScan {
    pub setup: ObservationSetup,
    pub rows: Vec<ObstructionRow>,
    /// Slope of `ln(E(0)/trace)` against `ln n`.
    pub trace_fit: LinearFit,
    /// `max/min` of `E(0)/(trace + interior)` over the scan.
    pub combined_spread: f64,
}

/// Single-mode data `a = 1, b = 0` on `(n, 1)` for each `n`.
pub fn high_mode_obstruction_scan(
    basis: Arc<RadialBasis>,
    n_values: &[usize],
    setup: &ObservationSetup,
    exec: Execution,
) -> Result<ObstructionScan> {
    if n_values.len() < 4 {
        return Err(Error::InsufficientData(format!("{} mode numbers, need at least 4", n_values.len())));
    }
    let (lo, hi) = n_values.iter().fold((usize::MAX, 0), |(a, b), &n| (a.min(n), b.max(n)));
    // three octaves, so that {8, 16, 32, 64} qualifies
    if lo == 0 || hi < 8 * lo {
        return Err(Error::InsufficientData(format!("mode numbers {lo}..{hi} span less than a factor 8")));
    }
    let opts = NormOptions { exec: Execution::Sequential, ..NormOptions::default() };
    let rows = exec
        .map(n_values.len(), |i| {
            let n = n_values[i];
            let state = ModalCoefficients::from_modes(basis.clone(), n, 1, &[(n, 1, 1.0, 0.0)])?;
            let trace_full = boundary_trace_norm(&state, setup.horizon, TraceSegment::Full, opts)?;
            let record = observability_ratio(&state, setup, opts)?;
            let omega = state.omega[state.index(n, 1)];
            Ok(ObstructionRow { n, omega, energy: record.energy, trace_full, trace_ratio: record.energy / trace_full, record })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.trace_ratio).collect();
    let trace_fit = loglog_fit(&ns, &ratios)?;
    let combined = summarize(&rows.iter().map(|r| r.record.ratio).collect::<Vec<_>>())?;
    Ok(ObstructionScan { setup: *setup, rows, trace_fit, combined_spread: combined.max / combined.min })
}

/// Closed form of the full-side trace for `sin(nπθ) R_k(r) cos(ωt)`.
pub fn single_mode_trace(flux: f64, omega: f64, horizon: f64) -> f64 {
    flux * flux * 0.5 * (0.5 * horizon + (2.0 * omega * horizon).sin() / (4.0 * omega))
}

/// Hidden-trace ratio of one datum: full-side trace over
/// `‖φ⁰‖²_{H¹₀(w)} + ‖φ¹‖²`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HiddenTraceRecord {
    pub member: u64,
    pub trace_full: f64,
    pub data_norm_sq: f64,
    pub ratio: f64,
    pub degenerate: bool,
}

pub fn hidden_trace_ratio(state: &ModalCoefficients, horizon: f64, member: u64, opts: NormOptions) -> Result<HiddenTraceRecord> {
    let trace_full = boundary_trace_norm(state, horizon, TraceSegment::Full, opts)?;
    let data_norm_sq = state.weighted_h1_norm_sq() + state.velocity_l2_norm_sq();
    let degenerate = data_norm_sq == 0.0;
    Ok(HiddenTraceRecord {
        member,
        trace_full,
        data_norm_sq,
        ratio: if degenerate { f64::NAN } else { trace_full / data_norm_sq },
        degenerate,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleLevel {
    pub n_max: usize,
    pub k_max: usize,
    pub records: Vec<HiddenTraceRecord>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct HiddenTraceEnsemble {
    pub seed: u64,
    pub members: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub coarse: EnsembleLevel,
    pub fine: EnsembleLevel,
    /// `max(fine) / max(coarse) - 1`.
    pub max_increase: f64,
}

fn ensemble_level(
    basis: &Arc<RadialBasis>,
    n_max: usize,
    k_max: usize,
    seed: u64,
    members: usize,
    horizon: f64,
    exec: Execution,
) -> Result<EnsembleLevel> {
    let opts = NormOptions { exec: Execution::Sequential, ..NormOptions::default() };
    let records = exec
        .map(members, |m| {
            let state = random_modal_data(basis.clone(), n_max, k_max, seed, m as u64)?;
            hidden_trace_ratio(&state, horizon, m as u64, opts)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = records.iter().filter(|r| !r.degenerate).map(|r| r.ratio).collect();
    let summary = summarize(&ratios)?;
    Ok(EnsembleLevel { n_max, k_max, records, summary })
}

/// Seeded ensemble at truncation `(n, k)` and at `(2n, 2k)`; member `m` of
/// the fine level extends member `m` of the coarse one.
pub fn hidden_trace_ratio_ensemble(
    basis: Arc<RadialBasis>,
    seed: u64,
    members: usize,
    truncation: (usize, usize),
    horizon: f64,
    exec: Execution,
) -> Result<HiddenTraceEnsemble> {
    if members == 0 {
        return Err(Error::InsufficientData("empty ensemble".into()));
    }
    let (n, k) = truncation;
    basis.check_truncation(2 * k)?;
    let coarse = ensemble_level(&basis, n, k, seed, members, horizon, exec)?;
    let fine = ensemble_level(&basis, 2 * n, 2 * k, seed, members, horizon, exec)?;
    let max_increase = fine.summary.max / coarse.summary.max - 1.0;
    Ok(HiddenTraceEnsemble { seed, members, horizon, coarse, fine, max_increase })
}
