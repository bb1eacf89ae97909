//! Bohr–Sommerfeld and WKB quantisation of the radial well: energy levels,
//! piecewise WKB wavefunctions, tunnelling exponents and half-lives.
//!
//! All actions are in units where the local momentum is
//! `p(ρ) = sqrt(ε - V(ρ))`; a level satisfies `∫ p dρ = (n + 1/2) π` between
//! the turning points that bound the well.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::math;
use crate::model::{turning_points, InnerWall, MonopoleConfig, PotentialKind, Well};
use crate::numeric::{Endpoint, GaussLegendre, TurningPointQuadrature};

/// How a level was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    BohrSommerfeldClassical,
    BohrSommerfeldQuantum,
    Wkb,
    FiniteDifference,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::BohrSommerfeldClassical => "bohr-sommerfeld-classical",
            Method::BohrSommerfeldQuantum => "bohr-sommerfeld-quantum",
            Method::Wkb => "wkb",
            Method::FiniteDifference => "finite-difference",
        }
    }
}

/// One quasi-bound level.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub n: usize,
    pub m: f64,
    pub epsilon: f64,
    pub method: Method,
    /// Sampled `(ρ, ψ)` pairs when the method provides them.
    pub wavefunction: Option<Vec<(f64, f64)>>,
}

/// A one-dimensional well that the level finder can quantise.
pub trait RadialWell {
    fn potential(&self, rho: f64) -> f64;
    /// Energies strictly between these bounds can hold levels.
    fn energy_range(&self) -> (f64, f64);
    /// Classically allowed interval `(a, b)` at `epsilon` and how the
    /// integrand behaves at `a`; `b` is always a turning point.
    fn allowed(&self, epsilon: f64) -> Result<(f64, f64, Endpoint)>;
}

impl RadialWell for Well {
    fn potential(&self, rho: f64) -> f64 {
        Well::potential(self, rho)
    }

    fn energy_range(&self) -> (f64, f64) {
        (self.v_min, self.v_peak)
    }

    fn allowed(&self, epsilon: f64) -> Result<(f64, f64, Endpoint)> {
        let wp = self.points(epsilon)?;
        let end = match self.inner {
            InnerWall::Origin => Endpoint::Regular,
            _ => Endpoint::TurningPoint,
        };
        Ok((wp.inner, wp.outer, end))
    }
}

fn quadrature() -> TurningPointQuadrature {
    TurningPointQuadrature::default()
}

/// `(1/π) ∫ sqrt(ε - V) dρ` over the allowed interval of `well`.
pub fn well_action<W: RadialWell + ?Sized>(well: &W, epsilon: f64) -> Result<f64> {
    let (a, b, inner) = well.allowed(epsilon)?;
    let integrand = |x: f64| math::sqrt((epsilon - well.potential(x)).max(0.0));
    Ok(quadrature().integrate(integrand, a, b, (inner, Endpoint::TurningPoint)) / PI)
}

/// `(1/π) ∫_{ρ_a}^{ρ_b} sqrt(ε - V) dρ` for the model potential.
///
/// Ends where `V = ε` are treated as turning points; `ρ_a = 0` is allowed for
/// potentials that stay finite at the origin.
pub fn action_integral(
    config: &MonopoleConfig,
    kind: PotentialKind,
    epsilon: f64,
    rho_a: f64,
    rho_b: f64,
) -> Result<f64> {
    if rho_a == rho_b {
        return Ok(0.0);
    }
    if !(rho_a >= 0.0 && rho_b > rho_a) {
        return Err(Error::Bracketing { a: rho_a, b: rho_b });
    }
    let v = |x: f64| kind.eval(config, x);
    let scale = epsilon.abs().max(1.0);
    for k in 1..64 {
        let x = rho_a + (rho_b - rho_a) * k as f64 / 64.0;
        if epsilon - v(x) < -1e-9 * scale {
            return Err(Error::Bracketing { a: rho_a, b: rho_b });
        }
    }
    let end_kind = |x: f64| {
        if x > 0.0 && (v(x) - epsilon).abs() <= 1e-6 * scale {
            Endpoint::TurningPoint
        } else {
            Endpoint::Regular
        }
    };
    let ends = (end_kind(rho_a), end_kind(rho_b));
    let integrand = |x: f64| math::sqrt((epsilon - v(x)).max(0.0));
    Ok(quadrature().integrate(integrand, rho_a, rho_b, ends) / PI)
}

/// Energies solving `action/π = n + 1/2` inside the well, lowest first.
///
/// Each level is bisected on ε (the action is monotone in ε) to
/// `|Δε| < 1e-12 max(1, |ε|)`; the spectrum ends at the first `n` whose
/// target exceeds the action at the top of the well.
pub fn levels<W: RadialWell + ?Sized>(well: &W) -> Result<Vec<f64>> {
    let (bottom, top) = well.energy_range();
    let eps_top = top - 1e-10 * top.abs().max(1.0);
    let action = |e: f64| -> Result<f64> {
        if e <= bottom {
            Ok(0.0)
        } else {
            well_action(well, e)
        }
    };
    let top_action = action(eps_top)?;
    let mut out = Vec::new();
    let mut lo = if bottom.is_finite() {
        bottom
    } else {
        return Err(Error::NoWell);
    };
    for n in 0.. {
        let target = n as f64 + 0.5;
        if target > top_action {
            break;
        }
        let mut hi = eps_top;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-12 * mid.abs().max(1.0) {
                break;
            }
            if action(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e = 0.5 * (lo + hi);
        out.push(e);
        lo = e;
    }
    Ok(out)
}

/// Levels of the model well: Bohr–Sommerfeld with the classical potential,
/// or WKB with the quantum potential.
pub fn quantise(config: &MonopoleConfig, kind: PotentialKind) -> Result<Vec<Eigenstate>> {
    let method = match kind {
        PotentialKind::Classical => Method::BohrSommerfeldClassical,
        PotentialKind::Quantum => Method::Wkb,
        PotentialKind::ScatteringEffective { epsilon } => {
            return Err(Error::InvalidParameter {
                name: "kind",
                value: epsilon,
                reason: "levels need the classical or quantum potential",
            })
        }
    };
    quantise_with(config, method)
}

/// Levels by the requested semiclassical method.
///
/// [`Method::Wkb`] and [`Method::BohrSommerfeldClassical`] bisect on the
/// well's monotone branches. [`Method::BohrSommerfeldQuantum`] solves the
/// same condition independently: a 2048-point energy scan of the action,
/// with turning points taken from the general root scan, brackets each level
/// before bisection.
pub fn quantise_with(config: &MonopoleConfig, method: Method) -> Result<Vec<Eigenstate>> {
    let energies = match method {
        Method::BohrSommerfeldClassical => levels(&Well::new(config, PotentialKind::Classical)?)?,
        Method::Wkb => levels(&Well::new(config, PotentialKind::Quantum)?)?,
        Method::BohrSommerfeldQuantum => scanned_levels(config)?,
        Method::FiniteDifference => {
            return Err(Error::InvalidParameter {
                name: "method",
                value: f64::NAN,
                reason: "finite-difference levels come from the fdm module",
            })
        }
    };
    Ok(energies
        .into_iter()
        .enumerate()
        .map(|(n, epsilon)| Eigenstate {
            n,
            m: config.m,
            epsilon,
            method,
            wavefunction: None,
        })
        .collect())
}

/// Levels used for lifetime estimates: WKB levels of the quantum potential,
/// or the Langer-corrected levels (the classical potential) when the quantum
/// well has no inner turning point.
pub fn decay_levels(config: &MonopoleConfig) -> Result<Vec<Eigenstate>> {
    let well = Well::new(config, PotentialKind::Quantum)?;
    if well.inner == InnerWall::Singular {
        quantise_with(config, Method::BohrSommerfeldClassical)
    } else {
        quantise_with(config, Method::Wkb)
    }
}

fn scanned_levels(config: &MonopoleConfig) -> Result<Vec<f64>> {
    let kind = PotentialKind::Quantum;
    let well = Well::new(config, kind)?;
    if well.inner == InnerWall::Singular {
        return Err(Error::NoInnerTurningPoint {
            epsilon: well.v_peak,
        });
    }
    let action = |e: f64| -> Result<f64> {
        let tp = turning_points(config, kind, e)?;
        if tp.roots.len() < 2 {
            return Err(Error::NotQuasiBound { epsilon: e });
        }
        action_integral(config, kind, e, tp.roots[0], tp.roots[1])
    };
    const SCAN: usize = 2048;
    let (lo, hi) = (well.v_min, well.v_peak);
    let span = hi - lo;
    let grid: Vec<f64> = (1..SCAN)
        .map(|k| lo + span * k as f64 / SCAN as f64)
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for &e in &grid {
        values.push(action(e)?);
    }
    let mut out = Vec::new();
    let mut n = 0usize;
    let mut prev = (lo, 0.0);
    for (&e, &a) in grid.iter().zip(&values) {
        while a >= n as f64 + 0.5 {
            let target = n as f64 + 0.5;
            let (mut a_lo, mut a_hi) = (prev.0, e);
            for _ in 0..200 {
                let mid = 0.5 * (a_lo + a_hi);
                if mid <= a_lo || mid >= a_hi || a_hi - a_lo <= 1e-12 * mid.abs().max(1.0) {
                    break;
                }
                if action(mid)? < target {
                    a_lo = mid;
                } else {
                    a_hi = mid;
                }
            }
            out.push(0.5 * (a_lo + a_hi));
            n += 1;
        }
        prev = (e, a);
    }
    Ok(out)
}

/// Which piece of the WKB wavefunction a sample comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `ρ < ρ₁`, decaying towards the origin.
    Inner,
    /// `ρ₁ < ρ < ρ₂`, oscillatory.
    Well,
    /// `ρ₂ < ρ < ρ₃`, decaying through the barrier.
    Barrier,
    /// `ρ > ρ₃`, outgoing oscillation.
    Outer,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Inner => "inner",
            Branch::Well => "well",
            Branch::Barrier => "barrier",
            Branch::Outer => "outer",
        }
    }
}

/// Piecewise WKB solution of one level.
#[derive(Debug, Clone)]
pub struct WkbPieces {
    pub config: MonopoleConfig,
    pub n: usize,
    pub epsilon: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    /// Normalisation coefficient over the well, `C_n > 0`.
    pub c_n: f64,
    /// Tunnelling exponent `J_n = -∫_{ρ₂}^{ρ₃} |p| dρ < 0`.
    pub j_n: f64,
}

/// One wavefunction sample; `psi` is `None` inside a guard band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbSample {
    pub rho: f64,
    pub psi: Option<f64>,
    pub branch: Branch,
}

/// Half-width of the masked band around each turning point.
pub const GUARD_BAND: f64 = 1e-3;

impl WkbPieces {
    pub fn new(config: &MonopoleConfig, n: usize, epsilon: f64) -> Result<Self> {
        let well = Well::new(config, PotentialKind::Quantum)?;
        let wp = well.points(epsilon)?;
        let rho3 = wp.exit.ok_or(Error::NotQuasiBound { epsilon })?;
        let (rho1, rho2) = (wp.inner, wp.outer);
        let j_n = -barrier_integral(config, epsilon, rho2, rho3);
        let c_n = normalisation(config, epsilon, rho1, rho2);
        Ok(Self {
            config: *config,
            n,
            epsilon,
            rho1,
            rho2,
            rho3,
            c_n,
            j_n,
        })
    }

    fn momentum(&self, rho: f64) -> f64 {
        math::sqrt((self.epsilon - self.config.quantum(rho)).abs())
    }

    fn integral(&self, a: f64, b: f64, ends: (Endpoint, Endpoint)) -> f64 {
        quadrature().integrate(|x| self.momentum(x), a, b, ends)
    }

    pub fn branch(&self, rho: f64) -> Branch {
        if rho < self.rho1 {
            Branch::Inner
        } else if rho < self.rho2 {
            Branch::Well
        } else if rho < self.rho3 {
            Branch::Barrier
        } else {
            Branch::Outer
        }
    }

    /// Wavefunction at `rho`, or `None` within [`GUARD_BAND`] of a turning
    /// point where the form diverges.
    pub fn evaluate(&self, rho: f64) -> Option<f64> {
        if [self.rho1, self.rho2, self.rho3]
            .iter()
            .any(|t| (rho - t).abs() < GUARD_BAND)
            || rho <= 0.0
        {
            return None;
        }
        let tp = Endpoint::TurningPoint;
        let reg = Endpoint::Regular;
        let amp = self.c_n / math::sqrt(self.momentum(rho));
        let sign = if self.n % 2 == 0 { 1.0 } else { -1.0 };
        let value = match self.branch(rho) {
            Branch::Inner => amp * math::exp(-self.integral(rho, self.rho1, (reg, tp))),
            Branch::Well => amp * math::cos(self.integral(self.rho1, rho, (tp, reg)) - PI / 4.0),
            Branch::Barrier => sign * amp * math::exp(-self.integral(self.rho2, rho, (tp, reg))),
            Branch::Outer => {
                let phase = -self.integral(self.rho3, rho, (tp, reg)) - PI / 4.0;
                2.0 * sign * amp * math::exp(self.j_n) * math::cos(phase)
            }
        };
        Some(value)
    }

    pub fn sample(&self, grid: &[f64]) -> Vec<WkbSample> {
        grid.iter()
            .map(|&rho| WkbSample {
                rho,
                psi: self.evaluate(rho),
                branch: self.branch(rho),
            })
            .collect()
    }
}

/// `∫_{ρ₂}^{ρ₃} |p| dρ` through the barrier.
fn barrier_integral(config: &MonopoleConfig, epsilon: f64, rho2: f64, rho3: f64) -> f64 {
    let f = |x: f64| math::sqrt((config.quantum(x) - epsilon).max(0.0));
    quadrature().integrate(
        f,
        rho2,
        rho3,
        (Endpoint::TurningPoint, Endpoint::TurningPoint),
    )
}

/// `C_n` from `∫_{ρ₁}^{ρ₂} cos²(Φ(ρ) - π/4)/p dρ = C_n⁻²`, with
/// `Φ(ρ) = ∫_{ρ₁}^{ρ} p`. The substitution `ρ = ρ₁ + (ρ₂-ρ₁)(1 - cos θ)/2`
/// removes the inverse-square-root end singularities.
fn normalisation(config: &MonopoleConfig, epsilon: f64, rho1: f64, rho2: f64) -> f64 {
    const SEGMENTS: usize = 2048;
    let gl = GaussLegendre::new(8);
    let half = 0.5 * (rho2 - rho1);
    let rho_of = |t: f64| rho1 + half * (1.0 - math::cos(t));
    let p = |r: f64| math::sqrt((epsilon - config.quantum(r)).max(0.0));
    let dt = PI / SEGMENTS as f64;
    let mut phase = 0.0;
    let mut total = 0.0;
    for k in 0..SEGMENTS {
        let (t0, t1) = (k as f64 * dt, (k + 1) as f64 * dt);
        // Accumulate the phase and the normalisation integrand together on
        // the segment: nodes need Φ at interior points, so integrate the
        // phase from t0 to each node.
        let mut seg = |t: f64| {
            let local = gl.integrate(&mut |u: f64| p(rho_of(u)) * half * math::sin(u), t0, t);
            let r = rho_of(t);
            let c = math::cos(phase + local - PI / 4.0);
            let pr = p(r);
            if pr == 0.0 {
                0.0
            } else {
                c * c / pr * half * math::sin(t)
            }
        };
        total += gl.integrate(&mut seg, t0, t1);
        phase += gl.integrate(&mut |u: f64| p(rho_of(u)) * half * math::sin(u), t0, t1);
    }
    1.0 / math::sqrt(total)
}

/// Piecewise WKB wavefunction of a quantum-potential level, sampled on `grid`.
pub fn wkb_wavefunction(
    config: &MonopoleConfig,
    state: &Eigenstate,
    grid: &[f64],
) -> Result<(WkbPieces, Vec<WkbSample>)> {
    let pieces = WkbPieces::new(config, state.n, state.epsilon)?;
    let samples = pieces.sample(grid);
    Ok((pieces, samples))
}

/// Tunnelling exponent `J = -∫ |p|` through the barrier at energy `epsilon`.
pub fn tunnelling_exponent(config: &MonopoleConfig, epsilon: f64) -> Result<f64> {
    let well = Well::new(config, PotentialKind::Quantum)?;
    let rho2 = well.outer_edge(epsilon)?;
    let rho3 = well
        .exit_point(epsilon)?
        .ok_or(Error::NotQuasiBound { epsilon })?;
    Ok(-barrier_integral(config, epsilon, rho2, rho3))
}

/// WKB half-life of a level,
/// `τ = (ρ₂ - ρ₁) ln 2 · exp(2 ∫_{ρ₂}^{ρ₃} |p| dρ) / sqrt(ε)`.
pub fn wkb_half_life(config: &MonopoleConfig, state: &Eigenstate) -> Result<f64> {
    wkb_half_life_at(config, state.epsilon)
}

/// Half-life at an arbitrary energy inside the well. When the quantum
/// potential has no inner turning point (`M = 0`) the well is taken to extend
/// to the origin.
pub fn wkb_half_life_at(config: &MonopoleConfig, epsilon: f64) -> Result<f64> {
    let well = Well::new(config, PotentialKind::Quantum)?;
    if !(epsilon < well.v_peak) {
        return Err(Error::NotQuasiBound { epsilon });
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            reason: "half-life needs a positive energy",
        });
    }
    let (rho1, rho2) = match well.inner {
        InnerWall::Singular => (0.0, well.outer_edge(epsilon)?),
        _ => {
            let wp = well.points(epsilon)?;
            (wp.inner, wp.outer)
        }
    };
    let rho3 = well
        .exit_point(epsilon)?
        .ok_or(Error::NotQuasiBound { epsilon })?;
    let barrier = barrier_integral(config, epsilon, rho2, rho3);
    Ok((rho2 - rho1) * LN_2 * math::exp(2.0 * barrier) / math::sqrt(epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// `V = ρ²` on the whole line.
    struct Harmonic;

    impl RadialWell for Harmonic {
        fn potential(&self, rho: f64) -> f64 {
            rho * rho
        }
        fn energy_range(&self) -> (f64, f64) {
            (0.0, 40.0)
        }
        fn allowed(&self, epsilon: f64) -> Result<(f64, f64, Endpoint)> {
            let r = math::sqrt(epsilon);
            Ok((-r, r, Endpoint::TurningPoint))
        }
    }

    fn c(lambda: f64, m: i32) -> MonopoleConfig {
        MonopoleConfig::new(lambda, m).unwrap()
    }

    #[test]
    fn harmonic_action_and_levels() {
        assert_relative_eq!(well_action(&Harmonic, 7.0).unwrap(), 3.5, epsilon = 1e-10);
        let lv = levels(&Harmonic).unwrap();
        assert_eq!(lv.len(), 20);
        for (n, e) in lv.iter().enumerate() {
            assert!((e - (2 * n + 1) as f64).abs() < 1e-6, "{n}: {e}");
        }
    }

    #[test]
    fn empty_interval_has_zero_action() {
        assert_eq!(
            action_integral(&c(100.0, 1), PotentialKind::Quantum, 500.0, 0.3, 0.3).unwrap(),
            0.0
        );
    }

    #[test]
    fn forbidden_interval_is_rejected() {
        let err = action_integral(&c(100.0, 1), PotentialKind::Quantum, 500.0, 1.0, 1.5);
        assert!(matches!(err, Err(Error::Bracketing { .. })));
    }

    #[test]
    fn wkb_levels_reproduce_half_integer_action() {
        let cfg = c(100.0, 1);
        let states = quantise(&cfg, PotentialKind::Quantum).unwrap();
        assert_eq!(states.len(), 6);
        assert_relative_eq!(states[0].epsilon, 276.362, epsilon = 5e-3);
        for s in &states {
            let tp = turning_points(&cfg, PotentialKind::Quantum, s.epsilon).unwrap();
            let a = action_integral(
                &cfg,
                PotentialKind::Quantum,
                s.epsilon,
                tp.roots[0],
                tp.roots[1],
            )
            .unwrap();
            assert!((a - (s.n as f64 + 0.5)).abs() < 1e-6);
        }
        assert!(states.windows(2).all(|w| w[0].epsilon < w[1].epsilon));
    }

    #[test]
    fn classical_levels_sit_above_quantum_ones() {
        let cfg = c(100.0, 1);
        let bs = quantise(&cfg, PotentialKind::Classical).unwrap();
        let wkb = quantise(&cfg, PotentialKind::Quantum).unwrap();
        assert_relative_eq!(bs[0].epsilon, 288.553, epsilon = 5e-3);
        for (a, b) in bs.iter().zip(&wkb) {
            assert!(a.epsilon > b.epsilon);
        }
    }

    #[test]
    fn origin_well_quantises() {
        let lv = quantise(&c(50.0, 0), PotentialKind::Classical).unwrap();
        assert!(!lv.is_empty());
        assert!(matches!(
            quantise(&c(50.0, 0), PotentialKind::Quantum),
            Err(Error::NoInnerTurningPoint { .. })
        ));
    }

    #[test]
    fn wavefunction_nodes_and_amplitudes() {
        let cfg = c(100.0, 1);
        let states = quantise(&cfg, PotentialKind::Quantum).unwrap();
        for s in &states {
            let p = WkbPieces::new(&cfg, s.n, s.epsilon).unwrap();
            assert!(p.c_n > 0.0);
            assert!(p.j_n < 0.0);
            let grid: Vec<f64> = (1..4000)
                .map(|k| p.rho1 + (p.rho2 - p.rho1) * k as f64 / 4000.0)
                .collect();
            let vals: Vec<f64> = p.sample(&grid).iter().filter_map(|s| s.psi).collect();
            let nodes = vals
                .windows(2)
                .filter(|w| w[0].signum() != w[1].signum())
                .count();
            assert_eq!(nodes, s.n);
        }
        let top = states.last().unwrap();
        let p = WkbPieces::new(&cfg, top.n, top.epsilon).unwrap();
        assert!(p.evaluate(p.rho2).is_none());
        assert!(p.evaluate(p.rho1 + 0.5e-3).is_none());
    }

    #[test]
    fn half_lives_fall_with_n() {
        let cfg = c(100.0, 1);
        let states = quantise(&cfg, PotentialKind::Quantum).unwrap();
        let taus: Vec<f64> = states
            .iter()
            .map(|s| wkb_half_life(&cfg, s).unwrap())
            .collect();
        assert!(taus.iter().all(|&t| t > 0.0));
        assert!(taus.windows(2).all(|w| w[1] < w[0]));
        let well = Well::new(&cfg, PotentialKind::Quantum).unwrap();
        let e = well.v_peak * (1.0 - 1e-9);
        let wp = well.points(e).unwrap();
        let bare = (wp.outer - wp.inner) * LN_2 / math::sqrt(e);
        assert_relative_eq!(
            wkb_half_life_at(&cfg, e).unwrap(),
            bare,
            max_relative = 1e-3
        );
        assert!(matches!(
            wkb_half_life_at(&cfg, well.v_peak + 1.0),
            Err(Error::NotQuasiBound { .. })
        ));
    }
}
