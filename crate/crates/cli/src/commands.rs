//! Parameter blocks and drivers for each subcommand.

use std::path::PathBuf;
use std::sync::Arc;

use degenwave::carleman::{
    carleman_component_integrals, carleman_scan, residual_convergence, wave_operator_squared_sigma, ComponentIntegrals,
    ConvergenceReport, ModalSolution, QuadratureGrid, ResidualLattice, ScanRow,
};
use degenwave::hardy::{
    best_subcritical_constant, blowup_rate_fit, critical_truncated_constant, exact_critical_constant, BlowupFit, CriticalBc,
    CriticalMethod, HardySettings, SubcriticalBc,
};
use degenwave::observability::{
    default_horizon, hidden_trace_ratio_ensemble, high_mode_obstruction_scan, HiddenTraceEnsemble, ObservationSetup,
    ObstructionScan,
};
use degenwave::params::{
    beta_upper_bound, observation_time_threshold, validate_carleman_params, CarlemanParams, CertificationGrid, DomainSpec,
};
use degenwave::radial::{default_grading, dirichlet_spectrum, FluxMethod, MassTreatment, SolverOptions};
use degenwave::report::{write_csv, write_json, FORMAT_VERSION};
use degenwave::wave::{energy_series, random_modal_data, trace_report, BasisInfo, NormOptions, RadialBasis};
use degenwave::Execution;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Where artifacts go and which seed drives random data.
pub struct RunContext {
    pub subcommand: &'static str,
    pub out: PathBuf,
    pub seed: u64,
}

/// Resolved configuration echoed into every artifact. The output directory
/// is left out so that reruns elsewhere produce identical files.
#[derive(Serialize)]
struct Echo<'a, P> {
    subcommand: &'a str,
    seed: u64,
    degenwave_version: &'static str,
    format_version: u32,
    params: &'a P,
}

impl RunContext {
    fn echo<'a, P>(&'a self, params: &'a P) -> Echo<'a, P> {
        Echo {
            subcommand: self.subcommand,
            seed: self.seed,
            degenwave_version: env!("CARGO_PKG_VERSION"),
            format_version: FORMAT_VERSION,
            params,
        }
    }

    fn prepare(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| CliError::config("out", format!("cannot create {}: {e}", self.out.display())))
    }

    fn csv<P: Serialize, R: Serialize>(&self, name: &str, params: &P, rows: &[R]) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        write_csv(&path, &self.echo(params), rows)?;
        Ok(path)
    }

    fn json<P: Serialize, R: Serialize>(&self, name: &str, params: &P, report: &R) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        write_json(&path, &self.echo(params), report)?;
        Ok(path)
    }
}

/// `β` defaults to 98% of its upper bound and `T` to 10% above the threshold.
fn resolve_gate(alpha: f64, delta0: f64, beta: Option<f64>, horizon: Option<f64>) -> Result<(f64, f64), CliError> {
    let beta = beta.unwrap_or(0.98 * beta_upper_bound(alpha, delta0));
    let horizon = match horizon {
        Some(t) => t,
        None => default_horizon(delta0, beta)?,
    };
    Ok((beta, horizon))
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumParams {
    pub alpha: f64,
    /// Number of cells.
    pub n: usize,
    /// Mesh grading; `max{2, 3/(1-α)}` when absent.
    pub grading: Option<f64>,
    pub k_max: usize,
    pub mass: MassTreatment,
    pub flux: FluxMethod,
}

impl Default for SpectrumParams {
    fn default() -> Self {
        Self { alpha: 0.5, n: 2048, grading: None, k_max: 10, mass: MassTreatment::default(), flux: FluxMethod::default() }
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    k: usize,
    rho: f64,
    flux: f64,
    weighted_energy: f64,
}

pub fn spectrum(ctx: &RunContext, p: &SpectrumParams) -> Result<Vec<PathBuf>, CliError> {
    let grading = p.grading.unwrap_or(default_grading(p.alpha));
    let p = &SpectrumParams { grading: Some(grading), ..p.clone() };
    let opts = SolverOptions { mass: p.mass, flux: p.flux, exec: Execution::default() };
    let (_, pairs) = dirichlet_spectrum(p.alpha, p.n, grading, p.k_max, opts)?;
    let rows: Vec<SpectrumRow> =
        pairs.iter().map(|e| SpectrumRow { k: e.k, rho: e.rho, flux: e.flux_at_1, weighted_energy: e.weighted_energy }).collect();
    ctx.prepare()?;
    Ok(vec![ctx.csv("spectrum.csv", p, &rows)?])
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateParams {
    pub alpha: f64,
    pub cells: usize,
    pub grading: Option<f64>,
    pub n_max: usize,
    pub k_max: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub samples: usize,
    /// Ensemble member of the seeded random datum.
    pub member: u64,
    pub delta0: f64,
}

impl Default for SimulateParams {
    fn default() -> Self {
        Self { alpha: 0.5, cells: 1024, grading: None, n_max: 8, k_max: 8, horizon: 10.0, samples: 200, member: 0, delta0: 0.01 }
    }
}

#[derive(Serialize)]
struct SimulateRow {
    t: f64,
    #[serde(rename = "E")]
    energy: f64,
    kinetic: f64,
    potential: f64,
    trace_full: f64,
    trace_restricted: f64,
    interior: f64,
}

#[derive(Serialize)]
struct SimulateSummary {
    basis: BasisInfo,
    initial_energy: f64,
    max_relative_drift: f64,
    final_trace_full: f64,
    final_trace_restricted: f64,
    final_interior: f64,
}

pub fn simulate(ctx: &RunContext, p: &SimulateParams) -> Result<Vec<PathBuf>, CliError> {
    if !(p.horizon > 0.0) {
        return Err(CliError::config("T", "must be positive"));
    }
    let domain = DomainSpec::new(p.delta0)?;
    let grading = p.grading.unwrap_or(default_grading(p.alpha));
    let p = &SimulateParams { grading: Some(grading), ..p.clone() };
    let basis = Arc::new(RadialBasis::compute(p.alpha, p.cells, grading, p.k_max, SolverOptions::default())?);
    let state = random_modal_data(basis.clone(), p.n_max, p.k_max, ctx.seed, p.member)?;
    let series = energy_series(&state, p.horizon, p.samples);
    let mut rows = Vec::with_capacity(series.times.len());
    for (i, &t) in series.times.iter().enumerate() {
        let [full, restricted, interior] = if t > 0.0 {
            let r = trace_report(&state, &domain, t, NormOptions::default())?;
            [r.full_trace_norm_sq, r.restricted_trace_norm_sq, r.interior_norm_sq]
        } else {
            [0.0; 3]
        };
        rows.push(SimulateRow {
            t,
            energy: series.energy[i],
            kinetic: series.kinetic[i],
            potential: series.potential[i],
            trace_full: full,
            trace_restricted: restricted,
            interior,
        });
    }
    let last = rows.last().expect("at least one sample");
    let summary = SimulateSummary {
        basis: basis.info(),
        initial_energy: series.energy[0],
        max_relative_drift: series.max_relative_drift(),
        final_trace_full: last.trace_full,
        final_trace_restricted: last.trace_restricted,
        final_interior: last.interior,
    };
    ctx.prepare()?;
    Ok(vec![ctx.csv("simulate.csv", p, &rows)?, ctx.json("simulate.json", p, &summary)?])
}

// ---------------------------------------------------------------- hardy

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HardyParams {
    /// Critical truncated problem instead of the subcritical one.
    pub critical: bool,
    /// Single subcritical exponent; overrides `alphas`.
    pub alpha: Option<f64>,
    pub alphas: Vec<f64>,
    /// Subcritical refinement ladder.
    pub refinements: Vec<usize>,
    /// Cells for critical runs, or a single subcritical resolution.
    pub cells: Option<usize>,
    pub delta: f64,
    /// Optional blow-up scan in `δ` (critical only).
    pub deltas: Vec<f64>,
    /// `mixed`/`dirichlet` (critical) or `left-dirichlet`/`both-dirichlet`.
    pub bc: Option<String>,
    pub method: CriticalMethod,
    pub mass: MassTreatment,
    pub grading: f64,
}

impl Default for HardyParams {
    fn default() -> Self {
        Self {
            critical: false,
            alpha: None,
            alphas: (1..=9).map(|i| i as f64 / 10.0).collect(),
            refinements: vec![512, 2048, 8192],
            cells: None,
            delta: 0.01,
            deltas: vec![],
            bc: None,
            method: CriticalMethod::default(),
            mass: HardySettings::default().mass,
            grading: 3.0,
        }
    }
}

fn parse_bc<T: serde::de::DeserializeOwned>(bc: &Option<String>, default: &str) -> Result<T, CliError> {
    let name = bc.as_deref().unwrap_or(default);
    serde_json::from_value(serde_json::Value::String(name.into())).map_err(|e| CliError::config("bc", e.to_string()))
}

#[derive(Serialize)]
struct CriticalOut {
    delta: f64,
    bc: CriticalBc,
    method: CriticalMethod,
    cells: usize,
    #[serde(rename = "C_num")]
    c_num: f64,
    #[serde(rename = "C_exact")]
    c_exact: f64,
    rel_error: f64,
    blowup: Option<BlowupFit>,
}

#[derive(Serialize)]
struct SubcriticalRow {
    alpha: f64,
    cells: usize,
    #[serde(rename = "C_num")]
    c_num: f64,
    #[serde(rename = "C_bound")]
    c_bound: f64,
    rel_gap: f64,
}

#[derive(Serialize)]
struct SubcriticalOut {
    bc: SubcriticalBc,
    rows: Vec<SubcriticalRow>,
    /// Best constants increase with `N` for every `α`.
    monotone: bool,
    below_bound: bool,
}

pub fn hardy(ctx: &RunContext, p: &HardyParams) -> Result<Vec<PathBuf>, CliError> {
    let base = HardySettings { grading: p.grading, mass: p.mass, ..HardySettings::default() };
    if p.critical {
        let bc: CriticalBc = parse_bc(&p.bc, "mixed")?;
        let settings = HardySettings { cells: p.cells.unwrap_or(4096), ..base };
        let r = critical_truncated_constant(p.delta, bc, p.method, &settings)?;
        let blowup = if p.deltas.is_empty() { None } else { Some(blowup_rate_fit(&p.deltas, bc, p.method, &settings)?) };
        let out = CriticalOut {
            delta: p.delta,
            bc,
            method: p.method,
            cells: settings.cells,
            c_num: r.numerical_best_constant,
            c_exact: exact_critical_constant(p.delta, bc)?,
            rel_error: r.relative_error,
            blowup,
        };
        ctx.prepare()?;
        return Ok(vec![ctx.json("hardy.json", p, &out)?]);
    }
    let bc: SubcriticalBc = parse_bc(&p.bc, "left-dirichlet")?;
    let alphas = p.alpha.map(|a| vec![a]).unwrap_or_else(|| p.alphas.clone());
    let ladder = p.cells.map(|n| vec![n]).unwrap_or_else(|| p.refinements.clone());
    let mut rows = vec![];
    let mut monotone = true;
    for &alpha in &alphas {
        let mut prev = 0.0;
        for &cells in &ladder {
            let r = best_subcritical_constant(alpha, bc, &HardySettings { cells, ..base })?;
            monotone &= r.numerical_best_constant > prev;
            prev = r.numerical_best_constant;
            rows.push(SubcriticalRow {
                alpha,
                cells,
                c_num: r.numerical_best_constant,
                c_bound: r.reference_constant,
                rel_gap: 1.0 - r.ratio,
            });
        }
    }
    let below_bound = rows.iter().all(|r| r.c_num < r.c_bound * (1.0 + 1e-6));
    ctx.prepare()?;
    let csv = ctx.csv("hardy.csv", p, &rows)?;
    let json = ctx.json("hardy.json", p, &SubcriticalOut { bc, rows, monotone, below_bound })?;
    Ok(vec![csv, json])
}

// ---------------------------------------------------------------- carleman-check

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CarlemanCheckParams {
    pub alpha: f64,
    pub delta0: f64,
    pub beta: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub lambda: f64,
    pub s: f64,
    /// `(n, k, a, b)` terms of the exact test solution.
    pub modes: Vec<(usize, usize, f64, f64)>,
    pub h0: f64,
    pub levels: usize,
    pub lattice: ResidualLattice,
    /// Also evaluate the weighted component integrals.
    pub integrals: bool,
    pub quadrature: QuadratureGrid,
    /// Extra `(λ, s)` points for the empirical-constant scan.
    pub scan: Vec<(f64, f64)>,
}

impl Default for CarlemanCheckParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            delta0: 0.01,
            beta: None,
            horizon: None,
            lambda: 1.0,
            s: 2.0,
            modes: vec![(1, 1, 1.0, 0.0)],
            h0: 2.5e-4,
            levels: 6,
            lattice: ResidualLattice::default(),
            integrals: true,
            quadrature: QuadratureGrid::default(),
            scan: vec![],
        }
    }
}

/// Largest `|(∂ₜₜ + 𝒜)²σ| / σ` over the residual lattice, i.e. the size of
/// the `J₃` integrand relative to the weight.
#[derive(Serialize)]
struct J3Summary {
    points: usize,
    max_over_sigma: f64,
    at: [f64; 3],
}

fn j3_summary(p: &CarlemanParams, lattice: &ResidualLattice) -> J3Summary {
    let axis = |n: usize, a: f64, b: f64| -> Vec<f64> { (0..n).map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64).collect() };
    let mut best = J3Summary { points: 0, max_over_sigma: 0.0, at: [0.0; 3] };
    for &th in &axis(lattice.n_theta, 0.0, 1.0) {
        for &r in &axis(lattice.n_r, lattice.r_min, 1.0) {
            for &t in &axis(lattice.n_t, 0.0, p.horizon) {
                let v = (wave_operator_squared_sigma(p, th, r, t) / (p.lambda * p.xi(th, r, t)).exp()).abs();
                best.points += 1;
                if v > best.max_over_sigma {
                    best.max_over_sigma = v;
                    best.at = [th, r, t];
                }
            }
        }
    }
    best
}

#[derive(Serialize)]
struct CarlemanOut {
    params: CarlemanParams,
    residual: ConvergenceReport,
    integrals: Option<ComponentIntegrals>,
    scan: Vec<ScanRow>,
    j3_integrand: J3Summary,
}

#[derive(Serialize)]
struct ResidualRow {
    h: f64,
    ln_residual: f64,
    ln_reference: f64,
    relative: f64,
}

pub fn carleman_check(ctx: &RunContext, p: &CarlemanCheckParams) -> Result<Vec<PathBuf>, CliError> {
    let domain = DomainSpec::new(p.delta0)?;
    let (beta, horizon) = resolve_gate(p.alpha, p.delta0, p.beta, p.horizon)?;
    let p = &CarlemanCheckParams { beta: Some(beta), horizon: Some(horizon), ..p.clone() };
    let params = validate_carleman_params(p.alpha, &domain, beta, horizon, p.lambda, p.s)?;
    if p.levels < 2 {
        return Err(CliError::config("levels", "need at least two levels for an order"));
    }
    if !(p.h0 > 0.0) {
        return Err(CliError::config("h0", "must be positive"));
    }
    let phi = ModalSolution::from_modes(p.alpha, &p.modes)?;
    let exec = Execution::default();
    let residual =
        residual_convergence(&phi, domain.theta_cutoff(), params.time_cutoff(), &params, &p.lattice, p.h0, p.levels, exec)?;
    let integrals =
        if p.integrals { Some(carleman_component_integrals(&phi, &params, &domain, &p.quadrature, exec)?) } else { None };
    let scan = carleman_scan(&phi, &params, &domain, &p.quadrature, &p.scan, exec)?;
    let rows: Vec<ResidualRow> = residual
        .levels
        .iter()
        .map(|l| ResidualRow {
            h: l.h,
            ln_residual: l.residual.ln_abs(),
            ln_reference: l.reference.ln_abs(),
            relative: l.relative,
        })
        .collect();
    let j3_integrand = j3_summary(&params, &p.lattice);
    ctx.prepare()?;
    let mut out = vec![ctx.csv("carleman_residual.csv", p, &rows)?];
    if !scan.is_empty() {
        out.push(ctx.csv("carleman_scan.csv", p, &scan)?);
    }
    out.push(ctx.json("carleman.json", p, &CarlemanOut { params, residual, integrals, scan, j3_integrand })?);
    Ok(out)
}

// ---------------------------------------------------------------- observability

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObservabilityParams {
    pub alpha: f64,
    pub cells: usize,
    pub grading: Option<f64>,
    /// Radial modes in the basis; must cover twice `k_max`.
    pub basis_modes: usize,
    pub delta0: f64,
    pub beta: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub members: usize,
    pub n_max: usize,
    pub k_max: usize,
    /// Angular indices of the obstruction scan; empty skips it.
    pub obstruction: Vec<usize>,
}

impl Default for ObservabilityParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            cells: 1024,
            grading: None,
            basis_modes: 32,
            delta0: 0.01,
            beta: None,
            horizon: None,
            members: 100,
            n_max: 16,
            k_max: 16,
            obstruction: vec![8, 16, 32, 64],
        }
    }
}

#[derive(Serialize)]
struct ObservabilityOut {
    setup: ObservationSetup,
    basis: BasisInfo,
    ensemble: HiddenTraceEnsemble,
    obstruction: Option<ObstructionScan>,
}

#[derive(Serialize)]
struct EnsembleRow {
    member: u64,
    ratio_coarse: f64,
    ratio_fine: f64,
}

#[derive(Serialize)]
struct ObstructionCsvRow {
    n: usize,
    omega: f64,
    energy: f64,
    trace_full: f64,
    trace_ratio: f64,
    combined_ratio: f64,
}

pub fn observability(ctx: &RunContext, p: &ObservabilityParams) -> Result<Vec<PathBuf>, CliError> {
    let domain = DomainSpec::new(p.delta0)?;
    let (beta, horizon) = resolve_gate(p.alpha, p.delta0, p.beta, p.horizon)?;
    let setup = ObservationSetup::new(&domain, beta, horizon)?;
    let grading = p.grading.unwrap_or(default_grading(p.alpha));
    let p = &ObservabilityParams { beta: Some(beta), horizon: Some(horizon), grading: Some(grading), ..p.clone() };
    let basis = Arc::new(RadialBasis::compute(p.alpha, p.cells, grading, p.basis_modes, SolverOptions::default())?);
    let exec = Execution::default();
    let ensemble = hidden_trace_ratio_ensemble(basis.clone(), ctx.seed, p.members, (p.n_max, p.k_max), horizon, exec)?;
    let obstruction = if p.obstruction.is_empty() {
        None
    } else {
        Some(high_mode_obstruction_scan(basis.clone(), &p.obstruction, &setup, exec)?)
    };
    let members: Vec<EnsembleRow> = ensemble
        .coarse
        .records
        .iter()
        .zip(&ensemble.fine.records)
        .map(|(c, f)| EnsembleRow { member: c.member, ratio_coarse: c.ratio, ratio_fine: f.ratio })
        .collect();
    ctx.prepare()?;
    let mut out = vec![ctx.csv("ensemble.csv", p, &members)?];
    if let Some(scan) = &obstruction {
        let rows: Vec<ObstructionCsvRow> = scan
            .rows
            .iter()
            .map(|r| ObstructionCsvRow {
                n: r.n,
                omega: r.omega,
                energy: r.energy,
                trace_full: r.trace_full,
                trace_ratio: r.trace_ratio,
                combined_ratio: r.record.ratio,
            })
            .collect();
        out.push(ctx.csv("obstruction.csv", p, &rows)?);
    }
    out.push(ctx.json("observability.json", p, &ObservabilityOut { setup, basis: basis.info(), ensemble, obstruction })?);
    Ok(out)
}

// ---------------------------------------------------------------- validate-params

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateParams {
    pub alpha: f64,
    pub delta0: f64,
    pub beta: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub lambda: f64,
    pub s: f64,
}

impl Default for ValidateParams {
    fn default() -> Self {
        Self { alpha: 0.5, delta0: 0.01, beta: None, horizon: None, lambda: 1.0, s: 2.0 }
    }
}

#[derive(Serialize)]
struct ValidateOut {
    params: CarlemanParams,
    beta_upper_bound: f64,
    threshold: f64,
    /// The derived `(ε, γ̂)` also pass on a grid twice as fine.
    certified_on_refined_grid: bool,
}

pub fn validate_params(ctx: &RunContext, p: &ValidateParams) -> Result<Vec<PathBuf>, CliError> {
    let domain = DomainSpec::new(p.delta0)?;
    let (beta, horizon) = resolve_gate(p.alpha, p.delta0, p.beta, p.horizon)?;
    let p = &ValidateParams { beta: Some(beta), horizon: Some(horizon), ..p.clone() };
    let params = validate_carleman_params(p.alpha, &domain, beta, horizon, p.lambda, p.s)?;
    let out = ValidateOut {
        params,
        beta_upper_bound: beta_upper_bound(p.alpha, p.delta0),
        threshold: observation_time_threshold(p.delta0, beta)?,
        certified_on_refined_grid: params.certify(CertificationGrid::default().refined()),
    };
    ctx.prepare()?;
    Ok(vec![ctx.json("params.json", p, &out)?])
}
