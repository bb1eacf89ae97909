//! Problems with known answers.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use monopole_core::classical::{
    default_time_step, integrate_orbit, radial_period, ClassicalState, DRIFT_LIMIT,
};
use monopole_core::fdm::{build_hamiltonian_with, eigensolve, RadialGrid, Selection};
use monopole_core::model::{potential, Well};
use monopole_core::scattering::{fit_arctan, phase_at, phase_shift, DEFAULT_STEP};
use monopole_core::{MonopoleConfig, PotentialKind};

fn lowest(grid: &RadialGrid, k: usize, v: impl Fn(f64) -> f64) -> Vec<f64> {
    let h = build_hamiltonian_with(grid, v);
    eigensolve(grid, &h, Selection::Lowest(k)).eigenvalues
}

/// Observed order from errors on grids with spacing h and h/2.
fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

#[test]
fn particle_in_a_box_converges_quadratically() {
    let exact = |n: usize| (n * n) as f64;
    let coarse = lowest(&RadialGrid::new(0.0, PI, 201).unwrap(), 4, |_| 0.0);
    let fine = lowest(&RadialGrid::new(0.0, PI, 401).unwrap(), 4, |_| 0.0);
    for n in 1..=4 {
        let (ec, ef) = (exact(n) - coarse[n - 1], exact(n) - fine[n - 1]);
        assert!(
            ec > 0.0 && ef > 0.0,
            "discrete levels lie below the exact ones"
        );
        let p = order(ec, ef);
        assert!((p - 2.0).abs() < 0.05, "n = {n}: order {p}");
        // closed form of the discrete spectrum
        let h = PI / 400.0;
        let discrete = 4.0 / (h * h) * (0.5 * n as f64 * h).sin().powi(2);
        assert_relative_eq!(fine[n - 1], discrete, max_relative = 1e-10);
    }
}

#[test]
fn harmonic_oscillator_converges_quadratically() {
    let coarse = lowest(&RadialGrid::new(0.0, 20.0, 801).unwrap(), 5, |x| {
        (x - 10.0).powi(2)
    });
    let fine = lowest(&RadialGrid::new(0.0, 20.0, 1601).unwrap(), 5, |x| {
        (x - 10.0).powi(2)
    });
    for n in 0..5 {
        let exact = 2.0 * n as f64 + 1.0;
        let p = order((exact - coarse[n]).abs(), (exact - fine[n]).abs());
        assert!((p - 2.0).abs() < 0.05, "n = {n}: order {p}");
        assert_relative_eq!(fine[n], exact, max_relative = 1e-4);
    }
}

#[test]
fn free_phase_matches_table_and_limit() {
    let table: [(i32, [f64; 3]); 5] = [
        (0, [0.78414519, 0.78527319, 0.78533568]),
        (1, [-0.78165724, -0.78502309, -0.78521063]),
        (2, [-2.33739599, -2.35431984, -2.35525716]),
        (3, [-3.88335873, -3.92261499, -3.92480292]),
        (4, [-5.41878629, -5.48991364, -5.49385036]),
    ];
    for (m, row) in table {
        for sign in [1, -1] {
            let config = MonopoleConfig::free(sign * m);
            let mu = phase_at(&config, 1.0, &[100.0, 1000.0, 2000.0], DEFAULT_STEP).unwrap();
            for (got, want) in mu.iter().zip(row) {
                assert!(
                    (got - want).abs() < 1e-6,
                    "M = {}: {got} vs {want}",
                    sign * m
                );
            }
            let limit = (1.0 - 2.0 * m as f64) * PI / 4.0;
            let inf = phase_shift(&config, 1.0).unwrap().mu_inf;
            assert!(
                (inf - limit).abs() < 1e-6,
                "M = {}: {inf} vs {limit}",
                sign * m
            );
        }
    }
}

#[test]
fn phase_is_even_in_m_without_monopole() {
    for m in 1..=6 {
        for eps in [0.3, 1.0, 7.5] {
            let a = phase_at(&MonopoleConfig::free(m), eps, &[50.0, 400.0], DEFAULT_STEP).unwrap();
            let b = phase_at(&MonopoleConfig::free(-m), eps, &[50.0, 400.0], DEFAULT_STEP).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn synthetic_resonance_is_recovered() {
    for &(centre, gamma, offset, slope) in &[
        (844.9168, 1.4e-6, -99.24, 0.0),
        (12.5, 0.03, 0.7, 0.02),
        (300.0, 2.0, -3.0, -0.01),
    ] {
        let es: Vec<f64> = (0..41)
            .map(|k| centre + gamma * (-10.0 + 0.5 * k as f64))
            .collect();
        let ds: Vec<f64> = es
            .iter()
            .map(|e| offset + slope * (e - centre) + ((e - centre) / gamma).atan())
            .collect();
        let fit = fit_arctan(&es, &ds, centre + 0.3 * gamma, 1.6 * gamma);
        assert_relative_eq!(fit.centre, centre, max_relative = 1e-6);
        assert_relative_eq!(fit.gamma, gamma, max_relative = 1e-6);
        assert!((fit.offset - offset).abs() < 1e-6);
    }
}

#[test]
fn classical_energy_is_conserved() {
    for (lambda, m, eps) in [
        (100.0, 1, 400.0),
        (100.0, -3, 700.0),
        (20.0, 1, 40.0),
        (100.0, 0, 300.0),
    ] {
        let config = MonopoleConfig::new(lambda, m).unwrap();
        let well = Well::new(&config, PotentialKind::Classical).unwrap();
        let rho0 = if well.rho_min > 0.0 {
            well.rho_min
        } else {
            0.05
        };
        let p0 = (eps - potential(rho0, &config, PotentialKind::Classical).unwrap()).sqrt();
        let dt = default_time_step(&config, eps).unwrap();
        let t_end = 4.0 * radial_period(&config, eps).unwrap();
        let start = ClassicalState {
            rho: rho0,
            p_rho: p0,
            phi: 0.0,
        };
        let orbit = integrate_orbit(&config, start, t_end, dt)
            .unwrap_or_else(|e| panic!("λ = {lambda}, M = {m}: {e:?} {start:?}"));
        assert!(
            orbit.max_drift < DRIFT_LIMIT,
            "λ = {lambda}, M = {m}: drift {}",
            orbit.max_drift
        );
    }
}

#[test]
fn potential_scales_with_lambda_squared() {
    let small = MonopoleConfig::new(10.0, 1).unwrap();
    let large = MonopoleConfig::new(100.0, 10).unwrap();
    for k in 0..200 {
        let rho = 0.01 * 1.05f64.powi(k);
        let a = potential(rho, &small, PotentialKind::Classical).unwrap() / 100.0;
        let b = potential(rho, &large, PotentialKind::Classical).unwrap() / 10_000.0;
        assert_relative_eq!(a, b, max_relative = 1e-13);
    }
}
