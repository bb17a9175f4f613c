use std::f64::consts::PI;

use approx::assert_relative_eq;
use degenwave::radial::*;
use degenwave::Error;
use proptest::prelude::*;

mod common;
use common::shooting_rho1;

#[test]
fn mesh_examples() {
    assert_eq!(build_graded_mesh(4, 1.0).unwrap().nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
    assert_eq!(build_graded_mesh(4, 2.0).unwrap().nodes(), &[0.0, 0.0625, 0.25, 0.5625, 1.0]);
    assert!(matches!(build_graded_mesh(1, 1.0), Err(Error::InvalidMeshSpec(_))));
    assert!(matches!(build_graded_mesh(8, 0.5), Err(Error::InvalidMeshSpec(_))));
}

#[test]
fn unweighted_matrices_are_textbook() {
    let mesh = build_graded_mesh(4, 1.0).unwrap();
    let m = assemble_weighted_system(&mesh, 0.0, 0.0, BoundaryConditions::DirichletDirichlet).unwrap();
    let h = 0.25;
    assert_eq!(m.dofs(), 3);
    for i in 0..3 {
        assert_relative_eq!(m.stiffness.diag[i], 2.0 / h, max_relative = 1e-14);
        assert_relative_eq!(m.mass.diag[i], 4.0 * h / 6.0, max_relative = 1e-14);
    }
    for i in 0..2 {
        assert_relative_eq!(m.stiffness.off[i], -1.0 / h, max_relative = 1e-14);
        assert_relative_eq!(m.mass.off[i], h / 6.0, max_relative = 1e-14);
    }
}

#[test]
fn weighted_stiffness_uses_closed_form_cell_integrals() {
    let alpha = 0.5;
    let mesh = build_graded_mesh(5, 2.0).unwrap();
    let m = assemble_weighted_system(&mesh, alpha, 0.0, BoundaryConditions::DirichletDirichlet).unwrap();
    let x = mesh.nodes();
    for c in 0..5 {
        let (a, b) = (x[c], x[c + 1]);
        let expect = (b.powf(alpha + 1.0) - a.powf(alpha + 1.0)) / ((alpha + 1.0) * (b - a) * (b - a));
        assert_relative_eq!(m.cell_stiffness[c], expect, max_relative = 1e-13);
    }
}

#[test]
fn integrability_guard() {
    let mesh = build_graded_mesh(16, 2.0).unwrap();
    assert!(assemble_weighted_system(&mesh, 0.5, -1.5, BoundaryConditions::DirichletDirichlet).is_ok());
    let err = assemble_weighted_system(&mesh, 0.5, -2.5, BoundaryConditions::DirichletDirichlet).unwrap_err();
    assert!(matches!(err, Error::DivergentWeight { .. }));
    let err = assemble_weighted_system(&mesh, 0.5, -1.5, BoundaryConditions::DirichletRightOnly).unwrap_err();
    assert!(matches!(err, Error::DivergentWeight { .. }));
}

#[test]
fn laplacian_limit() {
    let (_, pairs) = dirichlet_spectrum(0.0, 2048, 1.0, 5, SolverOptions::default()).unwrap();
    for p in &pairs {
        assert!((p.rho / (p.k as f64 * PI).powi(2) - 1.0).abs() <= 1e-4);
    }
}

#[test]
fn first_eigenvalue_matches_shooting_oracle() {
    for alpha in [0.25, 0.5, 0.75] {
        let oracle = shooting_rho1(alpha);
        let (_, pairs) = dirichlet_spectrum(alpha, 8192, default_grading(alpha), 1, SolverOptions::default()).unwrap();
        let rel = (pairs[0].rho / oracle - 1.0).abs();
        assert!(rel < 5e-6, "alpha {alpha}: fem {} oracle {oracle} rel {rel}", pairs[0].rho);
        // the series-based mode agrees with the same oracle
        let f = FrobeniusMode::find(alpha, 1).unwrap();
        assert!((f.rho / oracle - 1.0).abs() < 1e-9);
    }
}

#[test]
fn series_modes_refuse_high_indices() {
    assert!(FrobeniusMode::find(0.5, 9).is_ok());
    assert!(matches!(FrobeniusMode::find(0.5, 12), Err(Error::ConvergenceFailure { .. })));
}

#[test]
fn eigenpair_invariants() {
    let opts = SolverOptions::default();
    let (m, pairs) = dirichlet_spectrum(0.5, 1024, 2.0, 6, opts).unwrap();
    let mass = m.mass_for(opts.mass);
    for (i, p) in pairs.iter().enumerate() {
        assert!(p.rho > 0.0);
        if i > 0 {
            assert!(p.rho > pairs[i - 1].rho);
        }
        let x = m.restrict(&p.values);
        for q in &pairs {
            let y = m.restrict(&q.values);
            let g = mass.bilinear(&x, &y);
            assert!((g - if p.k == q.k { 1.0 } else { 0.0 }).abs() <= 1e-10);
        }
        let rayleigh = m.stiffness.quad(&x) / mass.quad(&x);
        assert!((rayleigh - p.rho).abs() <= 1e-10 * p.rho);
        assert!((p.weighted_energy - p.rho).abs() <= 1e-8 * p.rho);
    }
    assert!(pairs[0].flux_at_1 < 0.0);
}

/// Consistent mass gives a Ritz upper bound that decreases under refinement;
/// lumping may approach from below. Both converge at order two on the
/// default grading.
#[test]
fn eigenvalue_convergence_order() {
    for alpha in [0.1, 0.5, 0.9] {
        let g = default_grading(alpha);
        for mass in [MassTreatment::Consistent, MassTreatment::Lumped] {
            let opts = SolverOptions { mass, ..SolverOptions::default() };
            let rho = |n| dirichlet_spectrum(alpha, n, g, 1, opts).unwrap().1[0].rho;
            let (a, b, c) = (rho(1024), rho(2048), rho(4096));
            if mass == MassTreatment::Consistent {
                assert!(a > b && b > c);
            }
            let order = ((a - b) / (b - c)).log2();
            assert!(order >= 1.8, "alpha {alpha} {mass:?} order {order}");
        }
    }
}

/// On the fixed grading `g = 2` the rate falls to `2(1-α)` as `α → 1`.
#[test]
fn fixed_grading_rate_degrades_with_alpha() {
    let f = FrobeniusMode::find(0.75, 1).unwrap().rho;
    let err = |n| dirichlet_spectrum(0.75, n, 2.0, 1, SolverOptions::default()).unwrap().1[0].rho / f - 1.0;
    let order = (err(1024) / err(2048)).log2();
    assert!((order - 0.5).abs() < 0.05, "order {order}");
}

#[test]
fn first_eigenvalue_is_continuous_in_alpha() {
    let mut prev: Option<f64> = None;
    for i in 1..=19 {
        let alpha = i as f64 * 0.05;
        let r = dirichlet_spectrum(alpha, 512, default_grading(alpha), 1, SolverOptions::default()).unwrap().1[0].rho;
        if let Some(p) = prev {
            // exact ρ₁ falls by less than 15% per 0.05 step on this range
            assert!(r < p && p - r < 0.15 * p, "jump at alpha {alpha}");
        }
        prev = Some(r);
    }
}

#[test]
fn elliptic_identity() {
    let opts = SolverOptions::default();
    let (m, pairs) = dirichlet_spectrum(0.5, 8192, default_grading(0.5), 3, opts).unwrap();
    let r = elliptic_identity_residual(&m, &pairs, opts.mass, 0.0, &[1.0]);
    assert_relative_eq!(r.lhs, pairs[0].rho * pairs[0].rho, max_relative = 1e-12);
    assert!(r.relative_residual <= 1e-6);
    for (mu, c) in [(PI * PI, vec![1.0]), (PI * PI, vec![1.0, 1.0]), (4.0 * PI * PI, vec![0.3, -0.7, 0.2])] {
        let r = elliptic_identity_residual(&m, &pairs, opts.mass, mu, &c);
        assert!(r.relative_residual <= 1e-6, "mu {mu}: {}", r.relative_residual);
    }
}

#[test]
fn too_many_modes_is_an_error() {
    let mesh = build_graded_mesh(4, 1.0).unwrap();
    let m = assemble_weighted_system(&mesh, 0.5, 0.0, BoundaryConditions::DirichletDirichlet).unwrap();
    assert!(solve_eigenpairs(&m, 10, SolverOptions::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn mesh_nodes_are_graded_powers(n in 2usize..200, g in 1.0f64..4.0) {
        let mesh = build_graded_mesh(n, g).unwrap();
        let x = mesh.nodes();
        prop_assert_eq!(x.len(), n + 1);
        prop_assert_eq!(x[0], 0.0);
        prop_assert_eq!(x[n], 1.0);
        for j in 1..=n {
            prop_assert!(x[j] > x[j - 1]);
            prop_assert!((x[j] - (j as f64 / n as f64).powf(g)).abs() < 1e-14);
        }
    }

    #[test]
    fn mass_is_positive_definite(alpha in 0.05f64..0.95, seed in 0u64..1000) {
        let mesh = build_graded_mesh(64, 2.0).unwrap();
        let m = assemble_weighted_system(&mesh, alpha, 0.0, BoundaryConditions::DirichletDirichlet).unwrap();
        let x: Vec<f64> = (0..m.dofs()).map(|i| ((i as u64 * 7919 + seed) % 97) as f64 / 97.0 - 0.5).collect();
        prop_assume!(x.iter().any(|v| *v != 0.0));
        prop_assert!(m.mass.quad(&x) > 0.0);
        prop_assert!(m.stiffness.quad(&x) >= 0.0);
    }
}
