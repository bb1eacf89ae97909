//! Variable phase method for the radial scattering problem.
//!
//! Writing the scattering solution as `C(z) sin(z + μ(z))` with `z = sqrt(ε) ρ`
//! turns the radial equation into the first-order phase equation
//! `dμ/dz = -V_eff(z, ε) sin²(z + μ)`. Its limit `μ(∞)` gives the phase shift,
//! which jumps by π across each quasi-bound resonance; fitting an arctan to
//! the jump gives the resonance width and lifetime.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::math;
use crate::model::{MonopoleConfig, PotentialKind, Well};
use crate::numeric::GaussLegendre;
use crate::semiclassical;

/// Default integration step, `2π · 10⁻³`.
pub const DEFAULT_STEP: f64 = 2.0 * PI * 1e-3;
pub const DEFAULT_Z_MAX: f64 = 2000.0;
/// Starting point of the integration, seeded with `μ = μ'(0) z₀`.
pub const Z_START: f64 = 1e-4;
/// Near the origin the step is limited to this fraction of `z`.
const ORIGIN_STEP_FRACTION: f64 = 0.05;
const MAX_PHASE_JUMP: f64 = 0.5;
const MAX_HALVINGS: usize = 10;

/// Slope `μ'(0)` that matches the small-`z` behaviour `ψ ∝ z^{|M|+1/2}`.
pub fn mu_initial_slope(m: f64) -> f64 {
    if m >= 0.0 {
        -(m - 0.5) / (m + 0.5)
    } else {
        -(m + 0.5) / (m - 0.5)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrace {
    pub config: MonopoleConfig,
    pub epsilon: f64,
    pub z_max: f64,
    pub step: f64,
    pub z: Vec<f64>,
    pub mu: Vec<f64>,
}

fn check_inputs(epsilon: f64, step: f64) -> Result<()> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            reason: "scattering energy must be positive",
        });
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
            reason: "step must be positive",
        });
    }
    Ok(())
}

/// Integrates the phase equation with classical RK4 and returns `μ` at each
/// of the increasing `marks`; steps are shortened to land on every mark.
///
/// A step whose phase change exceeds 0.5 rad is halved and retried, at most
/// ten times.
pub fn phase_at(
    config: &MonopoleConfig,
    epsilon: f64,
    marks: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    check_inputs(epsilon, step)?;
    let kind = PotentialKind::ScatteringEffective { epsilon };
    let v = |z: f64| kind.eval(config, z);
    let rhs = |vz: f64, z: f64, mu: f64| {
        let s = math::sin(z + mu);
        -vz * s * s
    };
    let mut out = Vec::with_capacity(marks.len());
    let mut z = Z_START;
    let mut mu = mu_initial_slope(config.m) * Z_START;
    let mut vz = v(z);
    for &target in marks {
        if target < z {
            return Err(Error::InvalidParameter {
                name: "z",
                value: target,
                reason: "marks must increase and exceed the starting point",
            });
        }
        while z < target {
            let mut h = step.min(ORIGIN_STEP_FRACTION * z).min(target - z);
            let mut halvings = 0;
            loop {
                let vm = v(z + 0.5 * h);
                let z1 = if h == target - z { target } else { z + h };
                let v1 = v(z1);
                let k1 = rhs(vz, z, mu);
                let k2 = rhs(vm, z + 0.5 * h, mu + 0.5 * h * k1);
                let k3 = rhs(vm, z + 0.5 * h, mu + 0.5 * h * k2);
                let k4 = rhs(v1, z + h, mu + h * k3);
                let dmu = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if dmu.abs() <= MAX_PHASE_JUMP && dmu.is_finite() {
                    mu += dmu;
                    z = z1;
                    vz = v1;
                    break;
                }
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    return Err(Error::StepRejected { z });
                }
                h *= 0.5;
            }
        }
        out.push(mu);
    }
    Ok(out)
}

/// Phase function from `z = 0` to `z_max`, sampled at unit spacing in `z`
/// (and at `z_max`).
pub fn integrate_phase(
    config: &MonopoleConfig,
    epsilon: f64,
    z_max: f64,
    step: f64,
) -> Result<PhaseTrace> {
    if !(z_max > 1.0) {
        return Err(Error::InvalidParameter {
            name: "z_max",
            value: z_max,
            reason: "must exceed 1",
        });
    }
    let mut z: Vec<f64> = (1..).map(|k| k as f64).take_while(|&k| k < z_max).collect();
    z.push(z_max);
    let mut mu = phase_at(config, epsilon, &z, step)?;
    z.insert(0, 0.0);
    mu.insert(0, 0.0);
    Ok(PhaseTrace {
        config: *config,
        epsilon,
        z_max,
        step,
        z,
        mu,
    })
}

/// `∫_Z^∞ V_eff dz`, by `z = Z/u` on `(0, 1]`.
fn tail_integral(config: &MonopoleConfig, epsilon: f64, z: f64) -> f64 {
    let kind = PotentialKind::ScatteringEffective { epsilon };
    let gl = GaussLegendre::new(64);
    gl.integrate(
        &mut |u: f64| kind.eval(config, z / u) * z / (u * u),
        0.0,
        1.0,
    )
}

/// `μ(∞)` from `μ(Z)`: averaging `sin²` to 1/2 over the remaining tail
/// plus the leading oscillatory term.
pub fn extrapolate_tail(config: &MonopoleConfig, epsilon: f64, z: f64, mu: f64) -> f64 {
    let vz = PotentialKind::ScatteringEffective { epsilon }.eval(config, z);
    mu - 0.5 * tail_integral(config, epsilon, z) - 0.25 * vz * math::sin(2.0 * (z + mu))
}

/// Phase shift at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    pub epsilon: f64,
    /// `δ = μ(∞) + (|M| - 1/2) π/2`.
    pub delta: f64,
    /// Tail-corrected `μ(∞)` from `z_max`.
    pub mu_inf: f64,
    /// Raw `μ` at `z_max/2` and `z_max`.
    pub mu_half: f64,
    pub mu_max: f64,
    /// `2 μ(z_max) - μ(z_max/2)`.
    pub richardson: f64,
}

/// Orbital index `l = |M| - 1/2` of the centrifugal term.
pub fn orbital_index(m: f64) -> f64 {
    m.abs() - 0.5
}

/// Phase shift with default step and `z_max = 2000`.
pub fn phase_shift(config: &MonopoleConfig, epsilon: f64) -> Result<PhaseShift> {
    phase_shift_with(config, epsilon, DEFAULT_Z_MAX, DEFAULT_STEP)
}

/// Phase shift from one integration to `z_max`, tail-extrapolated at
/// `z_max/2` and `z_max`; the two extrapolations must agree to 0.01 rad.
pub fn phase_shift_with(
    config: &MonopoleConfig,
    epsilon: f64,
    z_max: f64,
    step: f64,
) -> Result<PhaseShift> {
    let marks = [0.5 * z_max, z_max];
    let mu = phase_at(config, epsilon, &marks, step)?;
    let inf_half = extrapolate_tail(config, epsilon, marks[0], mu[0]);
    let inf_max = extrapolate_tail(config, epsilon, marks[1], mu[1]);
    let difference = (inf_max - inf_half).abs();
    if difference > 0.01 {
        return Err(Error::TailNotConverged { difference });
    }
    Ok(PhaseShift {
        epsilon,
        delta: inf_max + orbital_index(config.m) * FRAC_PI_2,
        mu_inf: inf_max,
        mu_half: mu[0],
        mu_max: mu[1],
        richardson: 2.0 * mu[1] - mu[0],
    })
}

/// An energy interval containing one phase jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceBracket {
    pub lo: f64,
    pub hi: f64,
    pub delta_lo: f64,
    pub delta_hi: f64,
    /// Width estimate `w / (2 tan(Δ/2))` from the final interval.
    pub gamma_estimate: f64,
    /// The jump was still confined to one half at 10⁻¹² relative width.
    pub unresolvable: bool,
}

impl ResonanceBracket {
    pub fn centre(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub coarse_points: usize,
    pub z_max: f64,
    pub step: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            coarse_points: 1024,
            z_max: DEFAULT_Z_MAX,
            step: DEFAULT_STEP,
        }
    }
}

/// Uniform energies of the coarse scan.
pub fn coarse_grid(eps_lo: f64, eps_hi: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|k| eps_lo + (eps_hi - eps_lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Coarse phase scan followed by refinement of each jump larger than π/2.
pub fn scan_resonances(
    config: &MonopoleConfig,
    eps_lo: f64,
    eps_hi: f64,
    options: ScanOptions,
) -> Result<Vec<ResonanceBracket>> {
    if !(eps_lo < eps_hi && eps_lo > 0.0) {
        return Err(Error::Bracketing {
            a: eps_lo,
            b: eps_hi,
        });
    }
    let grid = coarse_grid(eps_lo, eps_hi, options.coarse_points);
    let mut samples = Vec::with_capacity(grid.len());
    for &e in &grid {
        samples.push((
            e,
            phase_shift_with(config, e, options.z_max, options.step)?.delta,
        ));
    }
    refine_jumps(config, &samples, options)
}

/// Finds phase rises larger than π/2 in `(ε, δ)` samples and narrows each.
///
/// Rises are looked for between neighbours first and then across strides of
/// 2, 4, 8, ... samples, so resonances broader than the sample spacing are
/// caught once; a wider candidate overlapping an accepted one is skipped.
/// Rises are measured above the background slope, taken as the median slope
/// between neighbouring samples. Each candidate is halved, keeping the half that carries at least π/2 of
/// the rise, until the rise splits between both halves (the interval is then
/// comparable to the width) or, for an unresolvable jump, the interval
/// reaches 10⁻¹² relative width.
pub fn refine_jumps(
    config: &MonopoleConfig,
    samples: &[(f64, f64)],
    options: ScanOptions,
) -> Result<Vec<ResonanceBracket>> {
    let delta = |e: f64| phase_shift_with(config, e, options.z_max, options.step).map(|p| p.delta);
    let background = median_slope(samples);
    let rise = |(e0, d0): (f64, f64), (e1, d1): (f64, f64)| d1 - d0 - background * (e1 - e0);
    let mut accepted: Vec<(usize, usize)> = Vec::new();
    let mut stride = 1;
    while stride < samples.len() {
        for i in 0..samples.len() - stride {
            let j = i + stride;
            if rise(samples[i], samples[j]) <= FRAC_PI_2 {
                continue;
            }
            if accepted.iter().any(|&(a, b)| i < b && a < j) {
                continue;
            }
            accepted.push((i, j));
        }
        stride *= 2;
    }
    accepted.sort_unstable();
    let mut out = Vec::with_capacity(accepted.len());
    for (i, j) in accepted {
        let ((mut lo, mut d_lo), (mut hi, mut d_hi)) = (samples[i], samples[j]);
        let mut unresolvable = false;
        loop {
            if hi - lo <= 1e-12 * hi.abs() {
                unresolvable = true;
                break;
            }
            let mid = 0.5 * (lo + hi);
            let d_mid = delta(mid)?;
            if rise((lo, d_lo), (mid, d_mid)) >= FRAC_PI_2 {
                hi = mid;
                d_hi = d_mid;
            } else if rise((mid, d_mid), (hi, d_hi)) >= FRAC_PI_2 {
                lo = mid;
                d_lo = d_mid;
            } else {
                break;
            }
        }
        let jump = rise((lo, d_lo), (hi, d_hi)).min(PI - 1e-12);
        out.push(ResonanceBracket {
            lo,
            hi,
            delta_lo: d_lo,
            delta_hi: d_hi,
            gamma_estimate: (hi - lo) / (2.0 * math::tan(0.5 * jump)),
            unresolvable,
        });
    }
    Ok(out)
}

fn median_slope(samples: &[(f64, f64)]) -> f64 {
    let mut slopes: Vec<f64> = samples
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .filter(|s| s.is_finite())
        .collect();
    if slopes.is_empty() {
        return 0.0;
    }
    slopes.sort_unstable_by(f64::total_cmp);
    let k = slopes.len() / 2;
    if slopes.len() % 2 == 0 {
        0.5 * (slopes[k - 1] + slopes[k])
    } else {
        slopes[k]
    }
}

/// Fitted resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub epsilon_n: f64,
    pub gamma: f64,
    /// Background phase at the centre, `δ(ε_n)` without the arctan term.
    pub delta_offset: f64,
    /// Background slope `dδ/dε` near the resonance.
    pub slope: f64,
    /// Lifetime `1/(2Γ)`.
    pub tau: f64,
    pub max_residual: f64,
}

/// Result of [`fit_arctan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArctanFit {
    pub offset: f64,
    pub centre: f64,
    pub gamma: f64,
    pub slope: f64,
    pub max_residual: f64,
}

/// Levenberg–Marquardt fit of `δ₀ + s (ε - ε_ref) + arctan((ε - ε_n)/Γ)`,
/// with `ε_ref` and `Γ_guess` used to scale the problem. `offset` is the
/// background at `ε_n`.
pub fn fit_arctan(energies: &[f64], phases: &[f64], eps_ref: f64, gamma_guess: f64) -> ArctanFit {
    let g0 = gamma_guess.abs().max(f64::MIN_POSITIVE);
    let xs: Vec<f64> = energies.iter().map(|e| (e - eps_ref) / g0).collect();
    let model = |p: &[f64; 4], x: f64| p[0] + p[3] * x + math::atan((x - p[1]) / p[2]);
    let sse = |p: &[f64; 4]| -> f64 {
        xs.iter()
            .zip(phases)
            .map(|(&x, &y)| {
                let r = y - model(p, x);
                r * r
            })
            .sum()
    };
    let mid = phases.len() / 2;
    let mut p = [phases[mid], 0.0, 1.0, 0.0];
    let mut cost = sse(&p);
    let mut damping = 1e-3;
    for _ in 0..500 {
        let mut jtj = [[0.0; 4]; 4];
        let mut jtr = [0.0; 4];
        for (&x, &y) in xs.iter().zip(phases) {
            let u = (x - p[1]) / p[2];
            let d = 1.0 / (1.0 + u * u);
            let j = [1.0, -d / p[2], -u * d / p[2], x];
            let r = y - model(&p, x);
            for a in 0..4 {
                jtr[a] += j[a] * r;
                for b in 0..4 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut m = jtj;
            for (a, row) in m.iter_mut().enumerate() {
                row[a] += damping * jtj[a][a].max(1e-300);
            }
            let Some(dp) = solve4(m, jtr) else {
                damping *= 10.0;
                continue;
            };
            let mut trial = [p[0] + dp[0], p[1] + dp[1], p[2] + dp[2], p[3] + dp[3]];
            trial[2] = trial[2].abs().max(1e-300);
            let c = sse(&trial);
            if c < cost {
                let step: f64 = dp.iter().map(|v| v.abs()).fold(0.0, f64::max);
                p = trial;
                cost = c;
                damping = (damping * 0.3).max(1e-15);
                improved = step > 1e-15;
                break;
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let max_residual = xs
        .iter()
        .zip(phases)
        .map(|(&x, &y)| (y - model(&p, x)).abs())
        .fold(0.0, f64::max);
    ArctanFit {
        offset: p[0] + p[3] * p[1],
        centre: eps_ref + p[1] * g0,
        gamma: p[2] * g0,
        slope: p[3] / g0,
        max_residual,
    }
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 || !a[pivot][col].is_finite() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Number of phase samples used by [`fit_resonance`].
pub const FIT_SAMPLES: usize = 41;
/// Largest accepted fit residual, rad.
pub const FIT_TOLERANCE: f64 = 0.05;

/// Half-widths of the fit window in units of `Γ_est`, tried in order.
const FIT_SPANS: [f64; 3] = [10.0, 5.0, 3.0];

/// Fits the arctan form to phase samples spanning `±10 Γ_est` about the
/// bracket centre. Broad resonances whose background bends over that window
/// are refitted on `±5 Γ_est`, then `±3 Γ_est`.
pub fn fit_resonance(
    config: &MonopoleConfig,
    bracket: &ResonanceBracket,
    options: ScanOptions,
) -> Result<Resonance> {
    if bracket.unresolvable {
        return Err(Error::UnresolvableWidth {
            epsilon: bracket.centre(),
        });
    }
    let centre = bracket.centre();
    let gamma = bracket.gamma_estimate.max(0.5 * (bracket.hi - bracket.lo));
    let mut best = f64::INFINITY;
    for factor in FIT_SPANS {
        let span = factor * gamma;
        let mut energies = Vec::with_capacity(FIT_SAMPLES);
        let mut phases = Vec::with_capacity(FIT_SAMPLES);
        for k in 0..FIT_SAMPLES {
            let e = centre - span + 2.0 * span * k as f64 / (FIT_SAMPLES - 1) as f64;
            energies.push(e);
            phases.push(phase_shift_with(config, e, options.z_max, options.step)?.delta);
        }
        let fit = fit_arctan(&energies, &phases, centre, bracket.gamma_estimate);
        if fit.max_residual < FIT_TOLERANCE && fit.gamma > 0.0 {
            return Ok(Resonance {
                epsilon_n: fit.centre,
                gamma: fit.gamma,
                delta_offset: fit.offset,
                slope: fit.slope,
                tau: 0.5 / fit.gamma,
                max_residual: fit.max_residual,
            });
        }
        if fit.max_residual < best {
            best = fit.max_residual;
        }
    }
    Err(Error::FitResidual { residual: best })
}

/// Top quasi-bound level seen two ways: semiclassically and as a phase-shift
/// resonance.
#[derive(Debug, Clone, PartialEq)]
pub struct TopLevelLifetime {
    pub m: f64,
    pub n: usize,
    pub epsilon_wkb: f64,
    pub wkb_half_life: f64,
    pub resonance: Resonance,
}

/// Fitted resonance closest to `epsilon` within `±half_width`.
pub fn resonance_near(
    config: &MonopoleConfig,
    epsilon: f64,
    half_width: f64,
    options: ScanOptions,
) -> Result<Resonance> {
    let lo = (epsilon - half_width).max(f64::MIN_POSITIVE);
    let brackets = scan_resonances(config, lo, epsilon + half_width, options)?;
    let mut best: Option<Resonance> = None;
    let mut last_err = Error::NotQuasiBound { epsilon };
    for b in &brackets {
        match fit_resonance(config, b, options) {
            Ok(r) => {
                let closer = best.map_or(true, |q| {
                    (r.epsilon_n - epsilon).abs() < (q.epsilon_n - epsilon).abs()
                });
                if closer {
                    best = Some(r);
                }
            }
            Err(e) => last_err = e,
        }
    }
    best.ok_or(last_err)
}

/// Half the distance to the neighbouring level below, or to the well
/// bottom for the ground state.
pub fn level_half_gap(
    config: &MonopoleConfig,
    states: &[semiclassical::Eigenstate],
    index: usize,
) -> Result<f64> {
    let below = match index {
        0 => Well::new(config, PotentialKind::Quantum)?.v_min.max(0.0),
        k => states[k - 1].epsilon,
    };
    Ok(0.5 * (states[index].epsilon - below))
}

/// Finds the resonance belonging to the highest semiclassical level of
/// `config`, scanning half a level spacing either side of it.
pub fn top_level_lifetime(
    config: &MonopoleConfig,
    options: ScanOptions,
) -> Result<TopLevelLifetime> {
    let states = semiclassical::decay_levels(config)?;
    let top = states.last().ok_or(Error::NoWell)?;
    let half_gap = level_half_gap(config, &states, states.len() - 1)?;
    Ok(TopLevelLifetime {
        m: config.m,
        n: top.n,
        epsilon_wkb: top.epsilon,
        wkb_half_life: semiclassical::wkb_half_life(config, top)?,
        resonance: resonance_near(config, top.epsilon, half_gap, options)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn initial_slopes() {
        assert_eq!(mu_initial_slope(0.0), 1.0);
        assert_relative_eq!(mu_initial_slope(1.0), -1.0 / 3.0);
        assert_relative_eq!(mu_initial_slope(-1.0), -1.0 / 3.0);
    }

    #[test]
    fn free_phase_matches_reference_values() {
        let mu = phase_at(
            &MonopoleConfig::free(0),
            1.0,
            &[100.0, 1000.0, 2000.0],
            DEFAULT_STEP,
        )
        .unwrap();
        assert!((mu[2] - 0.785_335_68).abs() < 1e-6, "{}", mu[2]);
        let mu4 = phase_at(&MonopoleConfig::free(4), 1.0, &[2000.0], DEFAULT_STEP).unwrap();
        assert!((mu4[0] + 5.493_850_36).abs() < 1e-6, "{}", mu4[0]);
    }

    #[test]
    fn free_phase_shift_vanishes() {
        for m in [-2, 0, 3] {
            let p = phase_shift(&MonopoleConfig::free(m), 1.0).unwrap();
            assert!(p.delta.abs() < 1e-4, "{m}: {}", p.delta);
        }
    }

    #[test]
    fn trace_starts_at_zero() {
        let t = integrate_phase(&MonopoleConfig::free(1), 1.0, 10.0, DEFAULT_STEP).unwrap();
        assert_eq!(t.z[0], 0.0);
        assert_eq!(t.mu[0], 0.0);
        assert_eq!(*t.z.last().unwrap(), 10.0);
        assert_eq!(t.z.len(), 11);
    }

    #[test]
    fn synthetic_arctan_fit() {
        let (en, g, d0) = (844.916, 1.4e-6, -1.3);
        let es: Vec<f64> = (0..41)
            .map(|k| en - 1.2e-5 + 2.4e-5 * k as f64 / 40.0)
            .collect();
        let ds: Vec<f64> = es.iter().map(|e| d0 + ((e - en) / g).atan()).collect();
        let f = fit_arctan(&es, &ds, en + 3e-7, 2.0e-6);
        assert_relative_eq!(f.centre, en, max_relative = 1e-6);
        assert_relative_eq!(f.gamma, g, max_relative = 1e-6);
        assert_relative_eq!(f.offset, d0, epsilon = 1e-6);
        assert!(f.max_residual < 1e-9);
    }

    #[test]
    fn free_problem_has_no_resonances() {
        let o = ScanOptions {
            coarse_points: 24,
            ..Default::default()
        };
        assert!(scan_resonances(&MonopoleConfig::free(1), 1.0, 50.0, o)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn invalid_inputs() {
        assert!(phase_at(&MonopoleConfig::free(0), 0.0, &[10.0], DEFAULT_STEP).is_err());
        assert!(
            scan_resonances(&MonopoleConfig::free(0), 2.0, 1.0, ScanOptions::default()).is_err()
        );
    }
}
