//! Oracles shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use std::f64::consts::PI;

use degenwave::radial::RadialMesh;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Shooting oracle for `-(r^α R')' = ρR`, `R(0) = 0`, returning `R(1)`.
///
/// With `u = r^{1-α}/(1-α)` and `z = r^α R'` the system becomes
/// `R_u = z`, `z_u = -ρ r(u)^α R`, which is regular at `u = 0`. The start
/// `R = u, z = 1` at `r = 10⁻¹²` is the leading term of the regular series.
pub fn shoot(alpha: f64, rho: f64, steps: usize) -> f64 {
    let a1 = 1.0 - alpha;
    let r_of = |u: f64| (a1 * u).powf(1.0 / a1);
    let u0 = 1e-12f64.powf(a1) / a1;
    let u1 = 1.0 / a1;
    let h = (u1 - u0) / steps as f64;
    let f = |u: f64, y: [f64; 2]| [y[1], -rho * r_of(u).powf(alpha) * y[0]];
    let mut y = [u0, 1.0];
    let mut u = u0;
    for _ in 0..steps {
        let k1 = f(u, y);
        let k2 = f(u + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f(u + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f(u + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        u += h;
    }
    y[0]
}

/// First root of `R(1; ρ)` by bracketing and bisection, with step doubling
/// until two resolutions agree.
pub fn shooting_rho1(alpha: f64) -> f64 {
    let solve = |steps: usize| {
        let mut lo = 0.5;
        while shoot(alpha, lo + 0.5, steps) > 0.0 {
            lo += 0.5;
        }
        let mut hi = lo + 0.5;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if shoot(alpha, mid, steps) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut steps = 2000;
    let mut prev = solve(steps);
    loop {
        steps *= 2;
        let next = solve(steps);
        if (next - prev).abs() < 1e-10 * next {
            return next;
        }
        prev = next;
    }
}

/// Random nodal vector vanishing at `r = 0`: a rough walk, a near-extremal
/// power or a smooth sine series.
pub fn random_left_dirichlet(rng: &mut ChaCha8Rng, mesh: &RadialMesh) -> Vec<f64> {
    let nodes = mesh.nodes();
    let mut v = vec![0.0; nodes.len()];
    match rng.random_range(0..3) {
        // rough random walk
        0 => {
            for i in 1..v.len() {
                v[i] = v[i - 1] + rng.random_range(-1.0..1.0);
            }
        }
        // near-extremal power with random exponent
        1 => {
            let e = rng.random_range(0.01..1.01);
            let c: f64 = rng.random_range(-2.0..2.0);
            for (i, r) in nodes.iter().enumerate() {
                v[i] = c * r.powf(e);
            }
        }
        // random smooth sine series vanishing at 0
        _ => {
            let coeffs: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            for (i, r) in nodes.iter().enumerate() {
                v[i] = coeffs.iter().enumerate().map(|(j, c)| c * ((j as f64 + 0.5) * PI * r).sin()).sum();
            }
        }
    }
    v[0] = 0.0;
    v
}
