//! Acceptance runner: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use degenwave::carleman::{residual_convergence, ModalSolution, ResidualLattice};
use degenwave::hardy::*;
use degenwave::observability::{hidden_trace_ratio_ensemble, high_mode_obstruction_scan, ObservationSetup};
use degenwave::params::{beta_upper_bound, observation_time_threshold, validate_carleman_params, DomainSpec};
use degenwave::radial::{default_grading, dirichlet_spectrum, elliptic_identity_residual, RadialMesh, SolverOptions};
use degenwave::wave::{energy_series, random_modal_data, RadialBasis};
use degenwave::{Error, Execution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{random_left_dirichlet, shooting_rho1};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: Error) -> String {
    format!("error: {e}")
}

fn settings(cells: usize) -> HardySettings {
    HardySettings { cells, ..HardySettings::default() }
}

fn critical(bc: CriticalBc) -> Result<(f64, f64, String), String> {
    let mut values = [0.0; 2];
    let mut detail = String::new();
    let mut ok = true;
    for (i, delta) in [(-PI).exp(), 0.01].into_iter().enumerate() {
        let start = Instant::now();
        let r = critical_truncated_constant(delta, bc, CriticalMethod::Direct, &settings(4096)).map_err(err)?;
        let exact = exact_critical_constant(delta, bc).map_err(err)?;
        let rel = (r.numerical_best_constant / exact - 1.0).abs();
        ok &= rel <= 5e-3;
        values[i] = r.numerical_best_constant;
        detail += &format!(
            "delta={delta:.4e} C={:.6} exact={exact:.6} rel={rel:.2e} ({:.2}s); ",
            r.numerical_best_constant,
            start.elapsed().as_secs_f64()
        );
    }
    if ok {
        Ok((values[0], values[1], detail))
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Outcome {
    critical(CriticalBc::Mixed).map(|(_, _, d)| d)
}

fn criterion_2() -> Outcome {
    let (m0, m1, _) = critical(CriticalBc::Mixed)?;
    let (d0, d1, detail) = critical(CriticalBc::Dirichlet)?;
    let ratios = [m0 / d0, m1 / d1];
    let ok = ratios.iter().all(|q| (q / 4.0 - 1.0).abs() <= 1e-2);
    check(ok, format!("{detail}mixed/dirichlet = {:.5}, {:.5}", ratios[0], ratios[1]))
}

fn criterion_3() -> Outcome {
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut detail = String::new();
    let mut ok = true;
    for bc in [CriticalBc::Mixed, CriticalBc::Dirichlet] {
        let f = blowup_rate_fit(&deltas, bc, CriticalMethod::Direct, &settings(8192)).map_err(err)?;
        ok &= (f.fit.slope - 2.0).abs() <= 0.05;
        detail += &format!("{bc:?} slope={:.4} ", f.fit.slope);
    }
    check(ok, detail)
}

fn criterion_4() -> Outcome {
    let mesh = RadialMesh::graded(0.0, 1.0, 256, 3.0).map_err(err)?;
    let mut violations = 0;
    let mut monotone = true;
    let mut below = true;
    let mut worst_gap = f64::INFINITY;
    for i in 1..=9 {
        let alpha = i as f64 / 10.0;
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + i);
        for _ in 0..1000 {
            let values = random_left_dirichlet(&mut rng, &mesh);
            let c = subcritical_hardy_check(&TestFunction::Nodal { mesh: mesh.clone(), values }, alpha).map_err(err)?;
            violations += usize::from(!c.holds);
        }
        let bound = 4.0 / ((1.0 - alpha) * (1.0 - alpha));
        let mut prev = 0.0;
        for n in [512, 2048, 8192] {
            let r = best_subcritical_constant(alpha, SubcriticalBc::LeftDirichlet, &settings(n)).map_err(err)?;
            let c = r.numerical_best_constant;
            below &= c < bound * (1.0 + 1e-6);
            monotone &= c > prev;
            prev = c;
        }
        worst_gap = worst_gap.min(1.0 - prev / bound);
    }
    check(
        violations == 0 && monotone && below,
        format!("violations={violations}/9000 below_bound={below} increasing={monotone} min gap at N=8192: {worst_gap:.3e}"),
    )
}

fn criterion_5() -> Outcome {
    let opts = SolverOptions::default();
    let (_, pairs) = dirichlet_spectrum(0.0, 2048, 1.0, 5, opts).map_err(err)?;
    let worst = pairs.iter().map(|p| (p.rho / (p.k as f64 * PI).powi(2) - 1.0).abs()).fold(0.0, f64::max);
    let oracle = shooting_rho1(0.5);
    let (_, pairs) = dirichlet_spectrum(0.5, 8192, default_grading(0.5), 1, opts).map_err(err)?;
    let rel = (pairs[0].rho / oracle - 1.0).abs();
    check(
        worst <= 1e-4 && rel < 5e-6,
        format!("alpha=0 max rel={worst:.2e}; alpha=0.5 rho1={:.8} oracle={oracle:.8} rel={rel:.2e}", pairs[0].rho),
    )
}

fn criterion_6() -> Outcome {
    let opts = SolverOptions::default();
    let (m, pairs) = dirichlet_spectrum(0.5, 8192, default_grading(0.5), 3, opts).map_err(err)?;
    let cases: [(f64, &[f64]); 4] =
        [(0.0, &[1.0]), (PI * PI, &[1.0, 1.0]), (4.0 * PI * PI, &[0.3, -0.7, 0.2]), (9.0 * PI * PI, &[0.0, 1.0, -1.0])];
    let worst = cases
        .iter()
        .map(|(mu, c)| elliptic_identity_residual(&m, &pairs, opts.mass, *mu, c).relative_residual)
        .fold(0.0, f64::max);
    check(worst <= 1e-6, format!("max relative residual={worst:.2e}"))
}

fn criterion_7(basis: &Arc<RadialBasis>) -> Outcome {
    let mut worst = 0.0f64;
    for member in 0..5 {
        let s = random_modal_data(basis.clone(), 16, 12, 7, member).map_err(err)?;
        worst = worst.max(energy_series(&s, 40.0, 1000).max_relative_drift());
    }
    check(worst <= 1e-12, format!("max relative drift={worst:.2e} over 5 seeded data, 1000 samples each"))
}

fn criterion_8() -> Outcome {
    let d = DomainSpec::new(0.01).map_err(err)?;
    let p = validate_carleman_params(0.5, &d, 0.0049, 50.0, 1.0, 2.0).map_err(err)?;
    let phi = ModalSolution::single(0.5, 1, 1, 1.0, 0.0).map_err(err)?;
    let conv = residual_convergence(
        &phi,
        d.theta_cutoff(),
        p.time_cutoff(),
        &p,
        &ResidualLattice::default(),
        2.5e-4,
        6,
        Execution::default(),
    )
    .map_err(err)?;
    let finest = conv.levels.last().map(|l| l.relative).unwrap_or(f64::INFINITY);
    let ok = (conv.fitted_order - 2.0).abs() <= 0.1 && conv.orders[2..].iter().all(|o| (o - 2.0).abs() <= 0.1) && finest <= 1e-3;
    let orders: Vec<String> = conv.orders.iter().map(|o| format!("{o:.3}")).collect();
    check(ok, format!("fitted order={:.3} level orders=[{}] finest relative={finest:.2e}", conv.fitted_order, orders.join(", ")))
}

fn observation_setup() -> Result<ObservationSetup, String> {
    let d = DomainSpec::new(0.01).map_err(err)?;
    ObservationSetup::with_default_horizon(&d, 0.98 * beta_upper_bound(0.5, 0.01)).map_err(err)
}

fn criterion_9(basis: &Arc<RadialBasis>) -> Outcome {
    let s = observation_setup()?;
    let scan = high_mode_obstruction_scan(basis.clone(), &[8, 16, 32, 64], &s, Execution::default()).map_err(err)?;
    let slope = scan.trace_fit.slope;
    check(
        (1.9..=2.1).contains(&slope) && scan.combined_spread <= 10.0,
        format!("slope={slope:.4} combined max/min={:.3} T={:.3}", scan.combined_spread, s.horizon),
    )
}

fn criterion_10(basis: &Arc<RadialBasis>) -> Outcome {
    let s = observation_setup()?;
    let e = hidden_trace_ratio_ensemble(basis.clone(), 2024, 100, (16, 16), s.horizon, Execution::default()).map_err(err)?;
    check(
        e.coarse.records.len() == 100 && e.max_increase <= 0.05,
        format!(
            "max ratio (16,16)={:.5} (32,32)={:.5} increase={:.2}%",
            e.coarse.summary.max,
            e.fine.summary.max,
            100.0 * e.max_increase
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut mismatches = 0;
    let mut points = 0;
    for i in 0..10 {
        let delta0 = 0.002 + 0.003 * i as f64;
        let domain = DomainSpec::new(delta0).map_err(err)?;
        for j in 0..10 {
            let alpha = 0.05 + 0.1 * j as f64;
            let beta = (0.05 + 0.1 * ((i + j) % 10) as f64) * beta_upper_bound(alpha, delta0);
            let thr = observation_time_threshold(delta0, beta).map_err(err)?;
            let closed = (4.0 / delta0.sqrt()).max((8.0 / beta).sqrt());
            let accepts = |t| validate_carleman_params(alpha, &domain, beta, t, 1.0, 2.0).is_ok();
            let rejects =
                |t| matches!(validate_carleman_params(alpha, &domain, beta, t, 1.0, 2.0), Err(Error::TimeTooShort { .. }));
            let ok = (thr / closed - 1.0).abs() <= 1e-14
                && accepts(closed * (1.0 + 1e-9))
                && rejects(closed)
                && rejects(closed * (1.0 - 1e-9));
            mismatches += usize::from(!ok);
            points += 1;
        }
    }
    check(mismatches == 0, format!("{mismatches} mismatches over {points} boundary points"))
}

fn main() -> ExitCode {
    let basis = Arc::new(RadialBasis::compute(0.5, 1024, 2.0, 32, SolverOptions::default()).expect("radial basis"));
    let criteria: Vec<Criterion> = vec![
        ("critical mixed constant", Box::new(criterion_1)),
        ("critical dirichlet constant", Box::new(criterion_2)),
        ("blow-up rate", Box::new(criterion_3)),
        ("subcritical hardy", Box::new(criterion_4)),
        ("eigensolver oracle", Box::new(criterion_5)),
        ("elliptic identity", Box::new(criterion_6)),
        ("energy conservation", Box::new(|| criterion_7(&basis))),
        ("conjugation identity", Box::new(criterion_8)),
        ("high-mode obstruction", Box::new(|| criterion_9(&basis))),
        ("hidden trace boundedness", Box::new(|| criterion_10(&basis))),
        ("parameter gate", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS [{name}] {d} ({secs:.1}s)", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{name}] {d} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
