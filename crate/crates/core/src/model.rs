//! Problem definition: parameters, the vector potential, the classical,
//! quantum and scattering radial potentials, their extrema and turning
//! points, and conversions to SI units.
//!
//! With `shift(ρ) = 1 - 1/sqrt(1 + ρ²)` the classical effective potential is
//! `V_cl(ρ) = (M + λ shift(ρ))² / ρ²`; the quantum potential of the reduced
//! radial equation subtracts `1/(4ρ²)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;
use crate::numeric::{bisect, geomspace};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permeability, N/A².
pub const MU_0: f64 = 1.256_637_062e-6;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Free-electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_702e-31;

/// Lower end of every radial scan grid.
pub const RHO_SCAN_MIN: f64 = 1e-4;
/// Number of points in the geometric scan grid.
pub const SCAN_POINTS: usize = 4096;

/// Dimensionless parameters of one radial problem.
///
/// `lambda` is the monopole charge in units of twice the Dirac charge,
/// `Q_m = 2 λ Q_D`; `m` is the canonical angular momentum in units of ħ. The
/// quantum problem needs an integer `m`; the classical problem accepts any
/// real value, which is why it is stored as `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonopoleConfig {
    pub lambda: f64,
    pub m: f64,
}

impl MonopoleConfig {
    /// Quantum configuration with integer angular momentum.
    pub fn new(lambda: f64, m: i32) -> Result<Self> {
        Self::with_real_m(lambda, m as f64)
    }

    /// Classical configuration; `m` may be any real number.
    pub fn with_real_m(lambda: f64, m: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be positive and finite",
            });
        }
        if !m.is_finite() {
            return Err(Error::InvalidParameter {
                name: "m",
                value: m,
                reason: "must be finite",
            });
        }
        Ok(Self { lambda, m })
    }

    /// Field-free reference problem (`λ = 0`) used by the scattering
    /// calculations; only the centrifugal term remains.
    pub fn free(m: i32) -> Self {
        Self {
            lambda: 0.0,
            m: m as f64,
        }
    }

    /// Configuration from the shape parameter `M/λ` alone (λ = 1), which is
    /// all that fixes `V_cl/λ²`.
    pub fn from_ratio(m_over_lambda: f64) -> Result<Self> {
        Self::with_real_m(1.0, m_over_lambda)
    }

    pub fn m_over_lambda(&self) -> f64 {
        self.m / self.lambda
    }

    /// Integer angular momentum, or an error when `m` is not integral.
    pub fn quantum_number(&self) -> Result<i32> {
        if math::round(self.m) == self.m && self.m.abs() < i32::MAX as f64 {
            Ok(self.m as i32)
        } else {
            Err(Error::InvalidParameter {
                name: "m",
                value: self.m,
                reason: "quantum calculations need an integer angular momentum",
            })
        }
    }

    /// `M + λ shift(ρ)`, the bracket squared in the effective potential.
    #[inline]
    pub(crate) fn bracket(&self, rho: f64) -> f64 {
        self.m + self.lambda * shift(rho)
    }

    #[inline]
    pub fn classical(&self, rho: f64) -> f64 {
        let a = self.bracket(rho) / rho;
        a * a
    }

    #[inline]
    pub fn quantum(&self, rho: f64) -> f64 {
        self.classical(rho) - 0.25 / (rho * rho)
    }

    #[inline]
    pub(crate) fn classical_derivative(&self, rho: f64) -> f64 {
        let s = math::sqrt(1.0 + rho * rho);
        let a = self.bracket(rho);
        2.0 * a / (rho * rho * rho) * (self.lambda * rho * rho / (s * s * s) - a)
    }

    #[inline]
    pub(crate) fn classical_second_derivative(&self, rho: f64) -> f64 {
        // d/dρ of 2A(λρ²/s³ - A)/ρ³, with A' = λρ/s³.
        let s2 = 1.0 + rho * rho;
        let s = math::sqrt(s2);
        let s3 = s2 * s;
        let a = self.bracket(rho);
        let ap = self.lambda * rho / s3;
        let inner = self.lambda * rho * rho / s3 - a;
        let inner_p = self.lambda * (2.0 * rho / s3 - 3.0 * rho * rho * rho / (s3 * s2)) - ap;
        let r3 = rho * rho * rho;
        2.0 * (ap * inner + a * inner_p) / r3 - 6.0 * a * inner / (r3 * rho)
    }
}

/// `1 - 1/sqrt(1 + ρ²)` in a cancellation-free form.
#[inline]
pub fn shift(rho: f64) -> f64 {
    let r2 = rho * rho;
    let s = math::sqrt(1.0 + r2);
    r2 / (s * (1.0 + s))
}

/// Which radial potential an operation works with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialKind {
    /// Effective potential of the classical radial motion.
    Classical,
    /// Potential of the reduced radial Schrödinger equation, `V_cl - 1/(4ρ²)`.
    Quantum,
    /// Scattering form in the variable `z = sqrt(ε) ρ` at fixed energy; the
    /// radius argument is interpreted as `z`.
    ScatteringEffective { epsilon: f64 },
}

impl PotentialKind {
    #[inline]
    pub fn eval(&self, config: &MonopoleConfig, x: f64) -> f64 {
        match *self {
            PotentialKind::Classical => config.classical(x),
            PotentialKind::Quantum => config.quantum(x),
            PotentialKind::ScatteringEffective { epsilon } => {
                let a = config.bracket(x / math::sqrt(epsilon));
                (a * a - 0.25) / (x * x)
            }
        }
    }

    #[inline]
    pub fn derivative(&self, config: &MonopoleConfig, x: f64) -> f64 {
        match *self {
            PotentialKind::Classical => config.classical_derivative(x),
            PotentialKind::Quantum => config.classical_derivative(x) + 0.5 / (x * x * x),
            PotentialKind::ScatteringEffective { epsilon } => {
                let se = math::sqrt(epsilon);
                let rho = x / se;
                (config.classical_derivative(rho) + 0.5 / (rho * rho * rho)) / (epsilon * se)
            }
        }
    }

    /// Limit of the potential as the radius goes to zero.
    fn origin_limit(&self, config: &MonopoleConfig) -> OriginLimit {
        let centrifugal = match self {
            PotentialKind::Classical => config.m * config.m,
            _ => config.m * config.m - 0.25,
        };
        if centrifugal > 0.0 {
            OriginLimit::PlusInfinity
        } else if centrifugal < 0.0 {
            OriginLimit::MinusInfinity
        } else {
            OriginLimit::Zero
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OriginLimit {
    PlusInfinity,
    Zero,
    MinusInfinity,
}

/// Dimensionless azimuthal vector potential `a(ρ) = λ shift(ρ)/ρ`.
///
/// Near the origin it behaves like the uniform-field form `λρ/2`; at large
/// radius `ρ a(ρ) → λ`.
pub fn vector_potential(rho: f64, lambda: f64) -> Result<f64> {
    check_radius(rho)?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "must be positive",
        });
    }
    Ok(lambda * shift(rho) / rho)
}

pub fn potential(rho: f64, config: &MonopoleConfig, kind: PotentialKind) -> Result<f64> {
    check_radius(rho)?;
    Ok(kind.eval(config, rho))
}

/// `V_eff(z, ε) = (1/z²)(-1/4 + [M + λ shift(z/√ε)]²)`.
pub fn scattering_potential(z: f64, epsilon: f64, config: &MonopoleConfig) -> Result<f64> {
    check_radius(z)?;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            reason: "scattering energy must be positive",
        });
    }
    Ok(PotentialKind::ScatteringEffective { epsilon }.eval(config, z))
}

fn check_radius(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { rho })
    }
}

/// Largest `M/λ` for which the classical potential keeps a finite-energy
/// well, `2 (2/3)^{3/2} - 1`.
pub fn m_over_lambda_max() -> f64 {
    2.0 * math::pow(2.0 / 3.0, 1.5) - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub rho: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Extrema of the potential on `(0, ρ_scan_max]`, ordered by radius.
///
/// Sign changes of the analytic derivative are located on a geometric grid
/// and refined by bisection. For `M = 0` with the classical potential the
/// origin itself is the well bottom (`V → 0`) and is reported as a minimum at
/// `ρ = 0`.
pub fn potential_extrema(config: &MonopoleConfig, kind: PotentialKind) -> Vec<Extremum> {
    let mut rho_max = 50.0;
    let mut found = Vec::new();
    for _ in 0..8 {
        found = scan_extrema(config, kind, rho_max);
        match found.last() {
            Some(last) if 10.0 * last.rho > rho_max => rho_max = 10.0 * last.rho,
            _ => break,
        }
    }
    if kind == PotentialKind::Classical && kind.origin_limit(config) == OriginLimit::Zero {
        found.insert(
            0,
            Extremum {
                rho: 0.0,
                value: 0.0,
                kind: ExtremumKind::Minimum,
            },
        );
    }
    found
}

fn scan_extrema(config: &MonopoleConfig, kind: PotentialKind, rho_max: f64) -> Vec<Extremum> {
    let grid = geomspace(RHO_SCAN_MIN, rho_max, SCAN_POINTS);
    let mut out = Vec::new();
    let mut prev = kind.derivative(config, grid[0]);
    for w in grid.windows(2) {
        let d = kind.derivative(config, w[1]);
        if prev != 0.0 && d != 0.0 && prev.signum() != d.signum() {
            let rho = bisect(|x| kind.derivative(config, x), w[0], w[1], 0.0).unwrap_or(w[0]);
            out.push(Extremum {
                rho,
                value: kind.eval(config, rho),
                kind: if prev < 0.0 {
                    ExtremumKind::Minimum
                } else {
                    ExtremumKind::Maximum
                },
            });
        }
        prev = d;
    }
    out
}

/// Outer radius of the scan used for turning points and extrema.
fn scan_limit(extrema: &[Extremum]) -> f64 {
    extrema
        .last()
        .map(|e| (10.0 * e.rho).max(50.0))
        .unwrap_or(50.0)
}

/// Roots of `V(ρ) = ε`, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct TurningPoints {
    pub roots: Vec<f64>,
    /// `true` when ε lies below the top of the outer barrier, so that a
    /// classically forbidden region separates the well from infinity.
    pub below_barrier: bool,
}

impl TurningPoints {
    /// Three turning points with a barrier: the quasi-bound configuration.
    pub fn is_quasi_bound(&self) -> bool {
        self.below_barrier && self.roots.len() == 3
    }
}

/// All turning points at energy `epsilon`.
///
/// Sign changes of `V - ε` are bracketed on a geometric grid starting at
/// [`RHO_SCAN_MIN`] and refined by bisection to full double precision.
pub fn turning_points(
    config: &MonopoleConfig,
    kind: PotentialKind,
    epsilon: f64,
) -> Result<TurningPoints> {
    let extrema = potential_extrema(config, kind);
    let mut rho_max = scan_limit(&extrema);
    // Make sure the outermost crossing (if any) is inside the scan.
    for _ in 0..60 {
        if epsilon <= 0.0 || kind.eval(config, rho_max) < epsilon {
            break;
        }
        rho_max *= 2.0;
    }
    let grid = geomspace(RHO_SCAN_MIN, rho_max, SCAN_POINTS);
    let f = |x: f64| kind.eval(config, x) - epsilon;
    let mut roots = Vec::new();
    let mut prev = f(grid[0]);
    let mut lowest = prev + epsilon;
    for w in grid.windows(2) {
        let v = f(w[1]);
        lowest = lowest.min(v + epsilon);
        if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
            roots.push(bisect(f, w[0], w[1], 0.0)?);
        } else if v == 0.0 {
            roots.push(w[1]);
        }
        prev = v;
    }
    let minimum = extrema
        .iter()
        .filter(|e| e.kind == ExtremumKind::Minimum)
        .map(|e| e.value)
        .fold(lowest, f64::min);
    if roots.is_empty() && epsilon < minimum {
        return Err(Error::BelowPotentialMinimum { epsilon, minimum });
    }
    let below_barrier = extrema
        .iter()
        .rev()
        .find(|e| e.kind == ExtremumKind::Maximum)
        .is_some_and(|top| epsilon < top.value);
    Ok(TurningPoints {
        roots,
        below_barrier,
    })
}

/// How the well is closed on the inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerWall {
    /// `V → +∞` at the origin: an ordinary inner turning point.
    Divergent,
    /// `V` stays finite at the origin (classical `M = 0`): the well extends
    /// to `ρ = 0`.
    Origin,
    /// `V → -∞` at the origin (quantum `M = 0`): no inner turning point.
    Singular,
}

/// Geometry of the quasi-bound well: the barrier top and the well bottom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Well {
    pub config: MonopoleConfig,
    pub kind: PotentialKind,
    pub rho_min: f64,
    pub v_min: f64,
    pub rho_peak: f64,
    pub v_peak: f64,
    pub inner: InnerWall,
}

/// Turning points bounding a state inside the well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellPoints {
    /// Inner turning point; `0` when the well reaches the origin.
    pub inner: f64,
    /// Outer edge of the well, at the inside of the barrier.
    pub outer: f64,
    /// Barrier exit; `None` when `V` stays above ε all the way out.
    pub exit: Option<f64>,
}

impl Well {
    /// Locates the outermost barrier maximum and the well bottom inside it.
    pub fn new(config: &MonopoleConfig, kind: PotentialKind) -> Result<Self> {
        let extrema = potential_extrema(config, kind);
        let peak = *extrema
            .iter()
            .rev()
            .find(|e| e.kind == ExtremumKind::Maximum)
            .ok_or(Error::NoBarrier)?;
        let inner = match kind.origin_limit(config) {
            OriginLimit::PlusInfinity => InnerWall::Divergent,
            OriginLimit::Zero if kind == PotentialKind::Classical => InnerWall::Origin,
            OriginLimit::Zero => InnerWall::Divergent,
            OriginLimit::MinusInfinity => InnerWall::Singular,
        };
        let bottom = extrema
            .iter()
            .filter(|e| e.kind == ExtremumKind::Minimum && e.rho < peak.rho)
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .copied();
        let (rho_min, v_min) = match (bottom, inner) {
            (Some(b), _) => (b.rho, b.value),
            (None, InnerWall::Singular) => (0.0, f64::NEG_INFINITY),
            (None, _) => return Err(Error::NoWell),
        };
        Ok(Self {
            config: *config,
            kind,
            rho_min,
            v_min,
            rho_peak: peak.rho,
            v_peak: peak.value,
            inner,
        })
    }

    #[inline]
    pub fn potential(&self, rho: f64) -> f64 {
        self.kind.eval(&self.config, rho)
    }

    /// Turning points at energy `epsilon` strictly inside the well
    /// (`v_min < ε < v_peak`), by bisection on the monotone branches.
    pub fn points(&self, epsilon: f64) -> Result<WellPoints> {
        if epsilon >= self.v_peak {
            return Err(Error::NotQuasiBound { epsilon });
        }
        if epsilon <= self.v_min {
            return Err(Error::BelowPotentialMinimum {
                epsilon,
                minimum: self.v_min,
            });
        }
        let f = |x: f64| self.potential(x) - epsilon;
        let inner = match self.inner {
            InnerWall::Divergent => {
                let mut lo = 0.5 * self.rho_min;
                while f(lo) <= 0.0 && lo > 1e-300 {
                    lo *= 0.5;
                }
                bisect(f, lo, self.rho_min, 0.0)?
            }
            InnerWall::Origin => 0.0,
            InnerWall::Singular => return Err(Error::NoInnerTurningPoint { epsilon }),
        };
        let outer = bisect(
            f,
            self.rho_min.max(inner).max(f64::MIN_POSITIVE),
            self.rho_peak,
            0.0,
        )?;
        let exit = self.exit_point(epsilon)?;
        Ok(WellPoints { inner, outer, exit })
    }

    /// Outer edge of the well for any wall type; for a singular inner wall
    /// this is the only turning point below the barrier.
    pub fn outer_edge(&self, epsilon: f64) -> Result<f64> {
        let f = |x: f64| self.potential(x) - epsilon;
        let lo = match self.inner {
            InnerWall::Singular => {
                let mut lo = 0.5 * self.rho_peak;
                while f(lo) >= 0.0 && lo > 1e-300 {
                    lo *= 0.5;
                }
                lo
            }
            _ => self.rho_min.max(f64::MIN_POSITIVE),
        };
        bisect(f, lo, self.rho_peak, 0.0)
    }

    /// Barrier exit `ρ₃ > ρ_peak` where the potential falls back to ε.
    pub fn exit_point(&self, epsilon: f64) -> Result<Option<f64>> {
        if epsilon >= self.v_peak {
            return Err(Error::NotQuasiBound { epsilon });
        }
        let f = |x: f64| self.potential(x) - epsilon;
        let mut hi = 2.0 * self.rho_peak;
        let mut guard = 0;
        while f(hi) > 0.0 {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                return Ok(None);
            }
        }
        Ok(Some(bisect(f, self.rho_peak, hi, 0.0)?))
    }
}

/// Dimensionful scales of a physical realisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    /// Monopole–plane distance, m.
    pub d: f64,
    /// Effective mass, kg.
    pub m_star: f64,
    /// Energy unit `ħ²/(2 m* D²)`, J.
    pub e0: f64,
    /// Time unit `ħ/E0`, s.
    pub t0: f64,
    /// Dirac charge `2πħ/(μ0 |e|)`, A·m.
    pub q_dirac: f64,
}

impl PhysicalScales {
    pub fn new(d: f64, m_star: f64) -> Result<Self> {
        if !(d > 0.0) {
            return Err(Error::InvalidParameter {
                name: "d",
                value: d,
                reason: "distance must be positive",
            });
        }
        if !(m_star > 0.0) {
            return Err(Error::InvalidParameter {
                name: "m_star",
                value: m_star,
                reason: "mass must be positive",
            });
        }
        let e0 = HBAR * HBAR / (2.0 * m_star * d * d);
        Ok(Self {
            d,
            m_star,
            e0,
            t0: HBAR / e0,
            q_dirac: dirac_charge(),
        })
    }

    pub fn free_electron(d: f64) -> Result<Self> {
        Self::new(d, ELECTRON_MASS)
    }
}

/// Dirac monopole charge `2πħ/(μ0 |e|)` in A·m.
pub fn dirac_charge() -> f64 {
    2.0 * PI * HBAR / (MU_0 * ELEMENTARY_CHARGE)
}

/// Dimensionless half-life to seconds, `t = 2 τ m* D²/ħ`.
pub fn to_si_halflife(tau: f64, scales: &PhysicalScales) -> f64 {
    2.0 * tau * scales.m_star * scales.d * scales.d / HBAR
}

/// Magnetic charge of a needle tip of radius `radius` (m) with surface field
/// `b_field` (T), `4πBr²/μ0`, in units of the Dirac charge.
pub fn needle_charge(b_field: f64, radius: f64) -> f64 {
    4.0 * PI * b_field * radius * radius / MU_0 / dirac_charge()
}
