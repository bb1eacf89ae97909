//! Classical planar motion: Hamilton's equations in the reduced radial
//! form, orbit classification, circular orbits and the harmonic estimate of
//! the number of bound states.
//!
//! With `H = p² + V_cl(ρ)` the radial system is `ρ̇ = 2p`, `ṗ = -V_cl'(ρ)` and
//! the angle follows from `φ̇ = 2 (M + λ shift(ρ)) / ρ²`. The canonical
//! angular momentum `M` is a parameter, never a state variable.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;
use crate::model::{
    potential_extrema, turning_points, ExtremumKind, MonopoleConfig, PotentialKind, Well,
};
use crate::numeric::{trapezoid, Endpoint, TurningPointQuadrature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub rho: f64,
    pub p_rho: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClass {
    BoundEnclosing,
    BoundNonEnclosing,
    Boundary,
    Scattering,
    CircularStable,
    CircularUnstable,
    /// Too few radial periods inside the window to decide.
    Indeterminate,
}

impl OrbitClass {
    pub fn name(&self) -> &'static str {
        match self {
            OrbitClass::BoundEnclosing => "bound-enclosing",
            OrbitClass::BoundNonEnclosing => "bound-non-enclosing",
            OrbitClass::Boundary => "boundary",
            OrbitClass::Scattering => "scattering",
            OrbitClass::CircularStable => "circular-stable",
            OrbitClass::CircularUnstable => "circular-unstable",
            OrbitClass::Indeterminate => "indeterminate",
        }
    }
}

/// A time-sampled trajectory with the diagnostics used to classify it.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub config: MonopoleConfig,
    /// `(t, state)` samples, decimated to at most [`MAX_SAMPLES`] entries.
    pub samples: Vec<(f64, ClassicalState)>,
    pub energy: f64,
    pub classification: OrbitClass,
    /// Largest relative energy error seen during integration.
    pub max_drift: f64,
    /// Radial extrema, refined between steps.
    pub rho_min: f64,
    pub rho_max: f64,
    /// Completed radial periods (inner turning points passed).
    pub radial_periods: usize,
    /// `true` if `φ̇` took both signs.
    pub phi_dot_reverses: bool,
    /// Accumulated angle divided by elapsed time.
    pub mean_phi_dot: f64,
    /// Left the escape radius moving outwards.
    pub escaped: bool,
    pub escape_radius: f64,
}

pub const MAX_SAMPLES: usize = 100_000;
/// Relative energy error that aborts an integration.
pub const DRIFT_LIMIT: f64 = 1e-8;
/// Reflection radius for orbits through the origin (`M = 0`).
pub const RHO_FLOOR: f64 = 1e-6;

fn phi_dot(config: &MonopoleConfig, rho: f64) -> f64 {
    let s = math::sqrt(1.0 + rho * rho);
    2.0 * (config.m / (rho * rho) + config.lambda / (s * (1.0 + s)))
}

fn energy_of(config: &MonopoleConfig, rho: f64, p: f64) -> f64 {
    p * p + config.classical(rho)
}

/// Period of small oscillations about the well minimum, `2π/sqrt(2 V'')`.
pub fn harmonic_period(config: &MonopoleConfig) -> Option<f64> {
    let well = Well::new(config, PotentialKind::Classical).ok()?;
    let curvature = if well.rho_min == 0.0 {
        0.5 * config.lambda * config.lambda
    } else {
        config.classical_second_derivative(well.rho_min)
    };
    (curvature > 0.0).then(|| 2.0 * PI / math::sqrt(2.0 * curvature))
}

/// Default step: a two-thousandth of the shortest local oscillation period
/// `2π/sqrt(2 V'')` over the region the orbit can reach at `energy`. For
/// small orbits this is the harmonic period at the well minimum.
pub fn default_time_step(config: &MonopoleConfig, energy: f64) -> Option<f64> {
    let mut period = harmonic_period(config)?;
    if let Ok(tp) = turning_points(config, PotentialKind::Classical, energy) {
        if tp.roots.len() >= 2 {
            let (a, b) = (tp.roots[0], tp.roots[1]);
            for k in 0..=256 {
                let rho = a + (b - a) * k as f64 / 256.0;
                let curvature = config.classical_second_derivative(rho);
                if curvature > 0.0 {
                    period = period.min(2.0 * PI / math::sqrt(2.0 * curvature));
                }
            }
        }
    }
    Some(period / 2000.0)
}

/// Radial period of a bound orbit, `∫ dρ / sqrt(ε - V)` between the two
/// innermost turning points (from the origin when `M = 0`).
pub fn radial_period(config: &MonopoleConfig, energy: f64) -> Result<f64> {
    let well = Well::new(config, PotentialKind::Classical)?;
    let wp = well.points(energy)?;
    let inner = if wp.inner == 0.0 {
        Endpoint::Regular
    } else {
        Endpoint::TurningPoint
    };
    let f = |x: f64| {
        let d = energy - config.classical(x);
        if d > 0.0 {
            1.0 / math::sqrt(d)
        } else {
            0.0
        }
    };
    let half = TurningPointQuadrature::default().integrate(
        f,
        wp.inner,
        wp.outer,
        (inner, Endpoint::TurningPoint),
    );
    // Through the origin the orbit crosses the well twice per radial period.
    Ok(if wp.inner == 0.0 { 2.0 * half } else { half })
}

/// Integrates the orbit with a fourth-order symplectic (Yoshida) scheme.
///
/// The angle is accumulated with Simpson's rule, using a cubic Hermite
/// midpoint for the radius. For `M = 0` a passage through the origin is
/// folded back onto `ρ > 0` by `(ρ, p) → (-ρ, -p)` and `φ → φ + π`.
/// Integration stops early once the orbit passes twice the outermost
/// turning point (or barrier) radius moving outwards.
pub fn integrate_orbit(
    config: &MonopoleConfig,
    initial: ClassicalState,
    t_end: f64,
    dt: f64,
) -> Result<Orbit> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "time step must be positive",
        });
    }
    if !(initial.rho > 0.0) {
        return Err(Error::Domain { rho: initial.rho });
    }
    if !(initial.p_rho.is_finite() && initial.phi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p_rho",
            value: initial.p_rho,
            reason: "initial momentum and angle must be finite",
        });
    }
    if !(t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            value: t_end,
            reason: "must be non-negative",
        });
    }
    let energy = energy_of(config, initial.rho, initial.p_rho);
    let escape_radius = escape_radius(config, energy, initial.rho);
    let through_origin = config.m == 0.0;

    let w1 = 1.0 / (2.0 - math::pow(2.0, 1.0 / 3.0));
    let w0 = -math::pow(2.0, 1.0 / 3.0) * w1;
    let drifts = [0.5 * w1, 0.5 * (w0 + w1), 0.5 * (w0 + w1), 0.5 * w1];
    let kicks = [w1, w0, w1];

    let steps = math::ceil_usize(t_end / dt);
    let stride = steps / MAX_SAMPLES + 1;
    let mut samples = Vec::with_capacity(steps / stride + 2);
    let (mut rho, mut p, mut phi) = (initial.rho, initial.p_rho, initial.phi);
    samples.push((0.0, initial));
    let scale = energy.abs().max(f64::MIN_POSITIVE);
    let mut max_drift = 0.0f64;
    let (mut rho_min, mut rho_max) = (rho, rho);
    let mut radial_periods = 0;
    let mut seen_pos = false;
    let mut seen_neg = false;
    let mut escaped = false;
    let mut t = 0.0;
    let track_sign = |w: f64, pos: &mut bool, neg: &mut bool| {
        if w > 0.0 {
            *pos = true;
        } else if w < 0.0 {
            *neg = true;
        }
    };
    track_sign(phi_dot(config, rho), &mut seen_pos, &mut seen_neg);

    for step in 1..=steps {
        let (rho0, p0) = (rho, p);
        rho += drifts[0] * dt * 2.0 * p;
        for k in 0..3 {
            p -= kicks[k] * dt * config.classical_derivative(rho);
            rho += drifts[k + 1] * dt * 2.0 * p;
        }
        let rho_mid = 0.5 * (rho0 + rho) + dt * (2.0 * p0 - 2.0 * p) / 8.0;
        phi += dt / 6.0
            * (phi_dot(config, rho0) + 4.0 * phi_dot(config, rho_mid) + phi_dot(config, rho));
        t = step as f64 * dt;

        if through_origin && rho < RHO_FLOOR {
            if rho < 0.0 {
                rho = -rho;
                p = -p;
                phi += PI;
                radial_periods += 1;
            }
            rho_min = rho_min.min(rho);
        } else if rho <= 0.0 || !rho.is_finite() {
            return Err(Error::EnergyDrift {
                time: t,
                drift: f64::INFINITY,
            });
        }

        // Radial turning points between steps: Δρ ≈ p²/V' from the last state.
        if p0 < 0.0 && p >= 0.0 {
            radial_periods += 1;
            rho_min = rho_min.min(refine_turn(config, rho, p));
        } else if p0 > 0.0 && p <= 0.0 {
            rho_max = rho_max.max(refine_turn(config, rho, p));
        }
        rho_min = rho_min.min(rho);
        rho_max = rho_max.max(rho);
        track_sign(phi_dot(config, rho), &mut seen_pos, &mut seen_neg);

        let drift = (energy_of(config, rho, p) - energy).abs() / scale;
        max_drift = max_drift.max(drift);
        if drift > DRIFT_LIMIT {
            return Err(Error::EnergyDrift { time: t, drift });
        }
        if step % stride == 0 || step == steps {
            samples.push((t, ClassicalState { rho, p_rho: p, phi }));
        }
        if rho > escape_radius && p > 0.0 {
            escaped = true;
            if samples.last().map(|s| s.0) != Some(t) {
                samples.push((t, ClassicalState { rho, p_rho: p, phi }));
            }
            break;
        }
    }

    let mut orbit = Orbit {
        config: *config,
        samples,
        energy,
        classification: OrbitClass::Indeterminate,
        max_drift,
        rho_min,
        rho_max,
        radial_periods,
        phi_dot_reverses: seen_pos && seen_neg,
        mean_phi_dot: if t > 0.0 {
            (phi - initial.phi) / t
        } else {
            0.0
        },
        escaped,
        escape_radius,
    };
    orbit.classification = classify_orbit(&orbit);
    Ok(orbit)
}

fn refine_turn(config: &MonopoleConfig, rho: f64, p: f64) -> f64 {
    let dv = config.classical_derivative(rho);
    if dv == 0.0 {
        rho
    } else {
        rho + p * p / dv
    }
}

fn escape_radius(config: &MonopoleConfig, energy: f64, rho0: f64) -> f64 {
    let mut r = rho0;
    if let Ok(tp) = turning_points(config, PotentialKind::Classical, energy) {
        if let Some(&last) = tp.roots.last() {
            r = r.max(last);
        }
    }
    for e in potential_extrema(config, PotentialKind::Classical) {
        if e.kind == ExtremumKind::Maximum {
            r = r.max(e.rho);
        }
    }
    2.0 * r
}

/// Classification from the orbit diagnostics.
///
/// Escaped orbits scatter; orbits whose radius barely moves are circular;
/// bound orbits need three radial periods, after which `M = 0` gives the
/// boundary class and a reversal of `φ̇` marks loops that do not enclose the
/// origin.
pub fn classify_orbit(orbit: &Orbit) -> OrbitClass {
    if orbit.escaped {
        return OrbitClass::Scattering;
    }
    if orbit.rho_max - orbit.rho_min <= 1e-6 * orbit.rho_max {
        let rho = 0.5 * (orbit.rho_max + orbit.rho_min);
        return if orbit.config.classical_second_derivative(rho) > 0.0 {
            OrbitClass::CircularStable
        } else {
            OrbitClass::CircularUnstable
        };
    }
    if orbit.radial_periods < 3 {
        return OrbitClass::Indeterminate;
    }
    if orbit.config.m == 0.0 {
        OrbitClass::Boundary
    } else if orbit.phi_dot_reverses {
        OrbitClass::BoundNonEnclosing
    } else {
        OrbitClass::BoundEnclosing
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularOrbit {
    pub rho: f64,
    /// `V_cl/λ²` at the orbit.
    pub energy: f64,
    pub stability: Stability,
}

/// Circular orbits of the shape `V_cl/λ²` for the given `M/λ`: stable at
/// interior minima of nonzero energy, unstable at maxima.
pub fn circular_orbits(m_over_lambda: f64) -> Result<Vec<CircularOrbit>> {
    let config = MonopoleConfig::from_ratio(m_over_lambda)?;
    Ok(potential_extrema(&config, PotentialKind::Classical)
        .into_iter()
        .filter(|e| e.rho > 0.0 && e.value > 1e-12)
        .map(|e| CircularOrbit {
            rho: e.rho,
            energy: e.value,
            stability: match e.kind {
                ExtremumKind::Minimum => Stability::Stable,
                ExtremumKind::Maximum => Stability::Unstable,
            },
        })
        .collect())
}

/// Well width and depth of `V_cl/λ²` used by the harmonic estimate:
/// the width at the barrier-top level and the full depth. `None` without a
/// well.
pub fn well_shape(m_over_lambda: f64) -> Option<(f64, f64)> {
    let config = MonopoleConfig::from_ratio(m_over_lambda).ok()?;
    let well = Well::new(&config, PotentialKind::Classical).ok()?;
    let depth = well.v_peak - well.v_min;
    if !(depth > 0.0) {
        return None;
    }
    let rim = well.v_peak - 1e-9 * well.v_peak;
    let wp = well.points(rim).ok()?;
    Some((wp.outer - wp.inner, depth))
}

/// Harmonic-oscillator estimate of the number of bound states at fixed `M`,
/// `N = w λ sqrt(d/2)` with `w` and `d` from [`well_shape`]; zero without a
/// well.
pub fn harmonic_state_count(config: &MonopoleConfig) -> f64 {
    match well_shape(config.m_over_lambda()) {
        Some((w, d)) => w * config.lambda * math::sqrt(0.5 * d),
        None => 0.0,
    }
}

/// Total harmonic estimate summed over `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEstimate {
    pub lambda: f64,
    pub total: f64,
    /// `total / λ²`, independent of λ.
    pub coefficient: f64,
}

/// Points on the `M/λ` axis used by [`total_bound_estimate`].
pub const RATIO_POINTS: usize = 2001;

/// `N_b = Σ_M N_{M/λ} ≈ λ² ∫ N_{M/λ}/λ d(M/λ)`, by the trapezoid rule on
/// `M/λ ∈ (-1, (M/λ)_max)`.
pub fn total_bound_estimate(lambda: f64) -> Result<BoundEstimate> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "must be positive",
        });
    }
    let (xs, ys) = scaled_count_curve(RATIO_POINTS);
    let coefficient = trapezoid(&xs, &ys);
    Ok(BoundEstimate {
        lambda,
        total: coefficient * lambda * lambda,
        coefficient,
    })
}

/// `(M/λ, N_{M/λ}/λ)` on a uniform grid of `n` points.
pub fn scaled_count_curve(n: usize) -> (Vec<f64>, Vec<f64>) {
    let lo = -1.0 + 5e-4;
    let hi = crate::model::m_over_lambda_max();
    let xs: Vec<f64> = (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect();
    let ys = xs
        .iter()
        .map(|&x| match well_shape(x) {
            Some((w, d)) => w * math::sqrt(0.5 * d),
            None => 0.0,
        })
        .collect();
    (xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(lambda: f64, m: f64) -> MonopoleConfig {
        MonopoleConfig::with_real_m(lambda, m).unwrap()
    }

    fn well_start(config: &MonopoleConfig, energy: f64) -> ClassicalState {
        let well = Well::new(config, PotentialKind::Classical).unwrap();
        let rho = if well.rho_min > 0.0 {
            well.rho_min
        } else {
            1e-3
        };
        ClassicalState {
            rho,
            p_rho: math::sqrt(energy - config.classical(rho)),
            phi: 0.0,
        }
    }

    #[test]
    fn bound_orbit_matches_turning_points() {
        let c = cfg(100.0, -1.0);
        let start = well_start(&c, 400.0);
        let dt = default_time_step(&c, 400.0).unwrap();
        let orbit =
            integrate_orbit(&c, start, 4.0 * radial_period(&c, 400.0).unwrap(), dt).unwrap();
        let tp = turning_points(&c, PotentialKind::Classical, 400.0).unwrap();
        assert!(
            (orbit.rho_min - tp.roots[0]).abs() < 1e-6,
            "{} {}",
            orbit.rho_min,
            tp.roots[0]
        );
        assert!(
            (orbit.rho_max - tp.roots[1]).abs() < 1e-6,
            "{} {}",
            orbit.rho_max,
            tp.roots[1]
        );
        assert!(orbit.max_drift < DRIFT_LIMIT);
        assert_eq!(orbit.classification, OrbitClass::BoundNonEnclosing);
    }

    #[test]
    fn classes_by_sign_of_m() {
        let run = |c: &MonopoleConfig| {
            let dt = default_time_step(c, 400.0).unwrap();
            let t_end = 4.0 * radial_period(c, 400.0).unwrap();
            integrate_orbit(c, well_start(c, 400.0), t_end, dt).unwrap()
        };
        let c = cfg(100.0, 1.0);
        let o = run(&c);
        assert_eq!(o.classification, OrbitClass::BoundEnclosing);
        let c0 = cfg(100.0, 0.0);
        let o0 = run(&c0);
        assert_eq!(o0.classification, OrbitClass::Boundary);
        assert!(o0.max_drift < DRIFT_LIMIT);
        let cn = cfg(100.0, -1.0);
        let on = run(&cn);
        // Same sense of circulation for either sign of M.
        assert!(o.mean_phi_dot > 0.0 && on.mean_phi_dot > 0.0);
    }

    #[test]
    fn scattering_orbit() {
        let c = cfg(100.0, 1.0);
        let well = Well::new(&c, PotentialKind::Classical).unwrap();
        let exit = well.exit_point(400.0).unwrap().unwrap();
        let rho = 1.1 * exit;
        let start = ClassicalState {
            rho,
            p_rho: math::sqrt(400.0 - c.classical(rho)),
            phi: 0.0,
        };
        let o = integrate_orbit(&c, start, 100.0, 1e-4).unwrap();
        assert_eq!(o.classification, OrbitClass::Scattering);
        assert!(o.samples.windows(2).all(|w| w[1].1.rho > w[0].1.rho));
    }

    #[test]
    fn circular_orbit_stays_circular() {
        let x = 0.05;
        let c = cfg(100.0, 100.0 * x);
        let orbits = circular_orbits(x).unwrap();
        let stable = orbits
            .iter()
            .find(|o| o.stability == Stability::Stable)
            .unwrap();
        let start = ClassicalState {
            rho: stable.rho,
            p_rho: 0.0,
            phi: 0.0,
        };
        let period = harmonic_period(&c).unwrap();
        let o = integrate_orbit(&c, start, 1000.0 * period, period / 2000.0).unwrap();
        assert!(o.rho_max - o.rho_min < 1e-8);
        assert_eq!(o.classification, OrbitClass::CircularStable);
    }

    #[test]
    fn circular_orbit_counts() {
        let two = circular_orbits(0.05).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].stability, Stability::Stable);
        assert_eq!(two[1].stability, Stability::Unstable);
        let one = circular_orbits(-0.5).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].stability, Stability::Unstable);
        assert!(circular_orbits(0.1).unwrap().is_empty());
    }

    #[test]
    fn harmonic_count_scaling_and_limits() {
        let a = harmonic_state_count(&cfg(100.0, 2.0));
        let b = harmonic_state_count(&cfg(200.0, 4.0));
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-12);
        let xm = crate::model::m_over_lambda_max();
        let near = harmonic_state_count(&cfg(1.0, xm - 1e-4));
        assert!(near < 0.01);
        assert_eq!(harmonic_state_count(&cfg(1.0, 0.2)), 0.0);
    }

    #[test]
    fn total_estimate_coefficient() {
        let e = total_bound_estimate(100.0).unwrap();
        assert!((e.coefficient - 0.13).abs() < 0.013, "{}", e.coefficient);
        let e50 = total_bound_estimate(50.0).unwrap();
        assert_relative_eq!(e50.coefficient, e.coefficient, max_relative = 1e-12);
    }
}
