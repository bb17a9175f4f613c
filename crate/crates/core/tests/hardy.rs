use std::f64::consts::PI;

use approx::assert_relative_eq;
use degenwave::hardy::*;
use degenwave::radial::{MassTreatment, RadialMesh};
use degenwave::Error;
use proptest::prelude::*;

mod common;
use common::random_left_dirichlet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn settings(cells: usize) -> HardySettings {
    HardySettings { cells, ..HardySettings::default() }
}

#[test]
fn zero_function_holds_trivially() {
    let c = subcritical_hardy_check(&TestFunction::PowerSum(vec![]), 0.5).unwrap();
    assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
    assert!(c.holds);
}

#[test]
fn quadratic_example_closed_form() {
    // u = r - r², α = 1/2: ∫ r^{1/2}(1-r)² = 16/105, ∫ r^{1/2}(1-2r)² = 22/105
    let u = TestFunction::PowerSum(vec![(1.0, 1.0), (-1.0, 2.0)]);
    let c = subcritical_hardy_check(&u, 0.5).unwrap();
    assert_relative_eq!(c.lhs, 16.0 / 105.0, max_relative = 1e-14);
    assert_relative_eq!(c.rhs, 22.0 / 105.0, max_relative = 1e-14);
    assert_eq!(c.constant, 16.0);
    assert!(c.holds);
    assert_relative_eq!(c.margin, 22.0, max_relative = 1e-13);
}

#[test]
fn near_singular_power_has_smaller_margin() {
    let c = subcritical_hardy_check(&TestFunction::PowerSum(vec![(1.0, 0.9)]), 0.5).unwrap();
    assert_relative_eq!(c.lhs, 1.0 / 1.3, max_relative = 1e-14);
    assert_relative_eq!(c.rhs, 0.81 / 1.3, max_relative = 1e-14);
    assert!(c.holds && c.margin < 22.0);
}

#[test]
fn boundary_and_integrability_errors() {
    let u = TestFunction::PowerSum(vec![(1.0, 0.0), (-1.0, 1.0)]);
    assert!(matches!(subcritical_hardy_check(&u, 0.5), Err(Error::BoundaryViolation { .. })));
    let u = TestFunction::PowerSum(vec![(1.0, 0.2)]);
    assert!(matches!(subcritical_hardy_check(&u, 0.5), Err(Error::DivergentWeight { .. })));
    let mesh = RadialMesh::uniform(0.0, 1.0, 4).unwrap();
    let u = TestFunction::Nodal { mesh, values: vec![0.1, 0.2, 0.3, 0.2, 0.0] };
    assert!(matches!(subcritical_hardy_check(&u, 0.5), Err(Error::BoundaryViolation { .. })));
}

#[test]
fn nodal_interpolant_converges_to_closed_form() {
    let mut prev = f64::INFINITY;
    for &n in &[64usize, 256, 1024] {
        let mesh = RadialMesh::graded(0.0, 1.0, n, 2.0).unwrap();
        let values: Vec<f64> = mesh.nodes().iter().map(|r| r * (1.0 - r)).collect();
        let c = subcritical_hardy_check(&TestFunction::Nodal { mesh, values }, 0.5).unwrap();
        let err = (c.lhs - 16.0 / 105.0).abs() + (c.rhs - 22.0 / 105.0).abs();
        assert!(err < prev);
        prev = err;
    }
    assert!(prev < 1e-5);
}

#[test]
fn no_violations_over_random_fem_vectors() {
    let mesh = RadialMesh::graded(0.0, 1.0, 256, 3.0).unwrap();
    for (i, &alpha) in [0.1, 0.3, 0.5, 0.7, 0.9].iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        for _ in 0..1000 {
            let values = random_left_dirichlet(&mut rng, &mesh);
            let c = subcritical_hardy_check(&TestFunction::Nodal { mesh: mesh.clone(), values }, alpha).unwrap();
            assert!(c.holds, "alpha {alpha}: lhs {} > {}", c.lhs, c.rhs_times_constant);
        }
    }
}

#[test]
fn subcritical_best_constant_below_bound_and_increasing() {
    for &alpha in &[0.1, 0.5, 0.9] {
        let bound = 4.0 / ((1.0 - alpha) * (1.0 - alpha));
        let mut prev = 0.0;
        for &n in &[512usize, 2048, 8192] {
            let r = best_subcritical_constant(alpha, SubcriticalBc::LeftDirichlet, &settings(n)).unwrap();
            assert!(r.numerical_best_constant < bound * (1.0 + 1e-6));
            assert!(r.numerical_best_constant > prev, "alpha {alpha}, N {n}");
            prev = r.numerical_best_constant;
            assert!(r.lumping_perturbation.unwrap().is_finite());
        }
    }
}

#[test]
fn both_dirichlet_not_above_left_dirichlet() {
    for &alpha in &[0.1, 0.5] {
        let l = best_subcritical_constant(alpha, SubcriticalBc::LeftDirichlet, &settings(1024)).unwrap();
        let b = best_subcritical_constant(alpha, SubcriticalBc::BothDirichlet, &settings(1024)).unwrap();
        assert!(b.numerical_best_constant <= l.numerical_best_constant);
    }
    let r = best_subcritical_constant(0.1, SubcriticalBc::LeftDirichlet, &settings(1024)).unwrap();
    assert!(r.numerical_best_constant < 4.0 / 0.81);
}

#[test]
fn exact_critical_examples() {
    let d = (-PI).exp();
    assert_relative_eq!(exact_critical_constant(d, CriticalBc::Mixed).unwrap(), 4.0, max_relative = 1e-14);
    assert_relative_eq!(exact_critical_constant(d, CriticalBc::Dirichlet).unwrap(), 1.0, max_relative = 1e-14);
    assert!(exact_critical_constant(1.0 - 1e-12, CriticalBc::Mixed).unwrap() < 1e-20);
    assert_relative_eq!(exact_critical_constant(0.01, CriticalBc::Mixed).unwrap(), 8.594, max_relative = 1e-3);
    for bad in [0.0, 1.0, -0.5, 2.0] {
        assert!(matches!(exact_critical_constant(bad, CriticalBc::Mixed), Err(Error::DeltaOutOfRange { .. })));
    }
}

#[test]
fn direct_and_log_transform_agree() {
    for &delta in &[1e-1, 1e-2, 1e-3, 1e-4] {
        for bc in [CriticalBc::Mixed, CriticalBc::Dirichlet] {
            let d = critical_truncated_constant(delta, bc, CriticalMethod::Direct, &settings(4096)).unwrap();
            let l = critical_truncated_constant(delta, bc, CriticalMethod::LogTransform, &settings(4096)).unwrap();
            assert!(d.relative_error < 5e-3 && l.relative_error < 5e-3);
            assert_relative_eq!(d.numerical_best_constant, l.numerical_best_constant, max_relative = 5e-3);
        }
        let m = critical_truncated_constant(delta, CriticalBc::Mixed, CriticalMethod::Direct, &settings(4096)).unwrap();
        let dd = critical_truncated_constant(delta, CriticalBc::Dirichlet, CriticalMethod::Direct, &settings(4096)).unwrap();
        assert_relative_eq!(m.numerical_best_constant / dd.numerical_best_constant, 4.0, max_relative = 1e-2);
    }
}

#[test]
fn blowup_fit_of_exact_constants() {
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
    for bc in [CriticalBc::Mixed, CriticalBc::Dirichlet] {
        let c: Vec<f64> = deltas.iter().map(|d| exact_critical_constant(*d, bc).unwrap()).collect();
        let f = blowup_fit_from(&deltas, &c).unwrap();
        assert!((f.fit.slope - 2.0).abs() < 1e-12 && (f.fit.r_squared - 1.0).abs() < 1e-12);
    }
    let cm: Vec<f64> = deltas.iter().map(|d| exact_critical_constant(*d, CriticalBc::Mixed).unwrap()).collect();
    let cd: Vec<f64> = deltas.iter().map(|d| exact_critical_constant(*d, CriticalBc::Dirichlet).unwrap()).collect();
    let gap = blowup_fit_from(&deltas, &cm).unwrap().fit.intercept - blowup_fit_from(&deltas, &cd).unwrap().fit.intercept;
    assert!((gap - 4f64.ln()).abs() < 1e-12);
    assert!(matches!(blowup_fit_from(&deltas[..3], &cm[..3]), Err(Error::InsufficientData(_))));
    assert!(matches!(blowup_fit_from(&[0.1, 0.09, 0.08, 0.07], &cm), Err(Error::InsufficientData(_))));
}

#[test]
fn blowup_fit_of_numerical_constants() {
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
    let mixed = blowup_rate_fit(&deltas, CriticalBc::Mixed, CriticalMethod::Direct, &settings(8192)).unwrap();
    assert!((mixed.fit.slope - 2.0).abs() <= 0.05, "{}", mixed.fit.slope);
    let dir = blowup_rate_fit(&deltas, CriticalBc::Dirichlet, CriticalMethod::Direct, &settings(8192)).unwrap();
    assert!((dir.fit.slope - 2.0).abs() <= 0.05);
    assert!((mixed.fit.intercept - dir.fit.intercept - 4f64.ln()).abs() < 0.02);
}

#[test]
fn lumped_mass_is_reported_as_perturbation() {
    let s = HardySettings { mass: MassTreatment::Lumped, ..settings(1024) };
    let r = best_subcritical_constant(0.5, SubcriticalBc::LeftDirichlet, &s).unwrap();
    assert_eq!(r.mass, MassTreatment::Lumped);
    let c = best_subcritical_constant(0.5, SubcriticalBc::LeftDirichlet, &settings(1024)).unwrap();
    assert_relative_eq!(
        r.lumping_perturbation.unwrap(),
        c.numerical_best_constant / r.numerical_best_constant - 1.0,
        max_relative = 1e-9
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn power_sums_satisfy_subcritical_bound(
        alpha in 0.05..0.95f64,
        c in proptest::collection::vec(-3.0..3.0f64, 1..5),
        e in proptest::collection::vec(0.0..3.0f64, 1..5),
    ) {
        let floor = (1.0 - alpha) / 2.0 + 1e-3;
        let terms: Vec<(f64, f64)> = c.iter().zip(&e).map(|(c, e)| (*c, floor + e)).collect();
        let chk = subcritical_hardy_check(&TestFunction::PowerSum(terms), alpha).unwrap();
        prop_assert!(chk.lhs >= -1e-12 && chk.rhs >= -1e-12);
        prop_assert!(chk.lhs <= chk.rhs_times_constant * (1.0 + 1e-9) + 1e-12);
    }
}
