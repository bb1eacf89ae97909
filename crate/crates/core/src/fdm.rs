//! Finite-difference radial Hamiltonian: spectra, quasi-bound state
//! selection and counting, the threshold monopole strength, and lifetimes
//! from the time evolution of states prepared in a flattened potential.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::math;
use crate::model::{MonopoleConfig, PotentialKind, Well};
use crate::numeric::linear_fit;
use crate::semiclassical::{Eigenstate, Method};
use crate::tridiag::SymTridiagonal;

/// Uniform grid on `[a, b]` with `n_points` nodes, both ends Dirichlet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub a: f64,
    pub b: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(a: f64, b: f64, n_points: usize) -> Result<Self> {
        if !(a >= 0.0 && b > a && b.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "b",
                value: b,
                reason: "grid needs 0 <= a < b",
            });
        }
        if n_points < 3 {
            return Err(Error::InvalidParameter {
                name: "n_points",
                value: n_points as f64,
                reason: "grid needs at least 3 points",
            });
        }
        Ok(Self { a, b, n_points })
    }

    /// `(0, 20)` with 4000 points.
    pub fn spectrum_default() -> Self {
        Self {
            a: 0.0,
            b: 20.0,
            n_points: 4000,
        }
    }

    /// `(0, 160)` with 10⁴ points, for time evolution.
    pub fn survival_default() -> Self {
        Self {
            a: 0.0,
            b: 160.0,
            n_points: 10_000,
        }
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.n_points - 1) as f64
    }

    /// Number of interior nodes, the matrix dimension.
    pub fn dim(&self) -> usize {
        self.n_points - 2
    }

    /// Radius of interior node `i` (zero-based), `a + (i + 1) h`.
    pub fn node(&self, i: usize) -> f64 {
        self.a + (i + 1) as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.node(i)).collect()
    }

    /// Number of interior nodes with `ρ < rho`.
    pub fn nodes_below(&self, rho: f64) -> usize {
        if rho <= self.a {
            return 0;
        }
        let k = math::ceil_usize((rho - self.a) / self.h());
        k.saturating_sub(1).min(self.dim())
    }
}

/// `T/h² + U` with `T = tridiag(-1, 2, -1)` and `U` the potential at the
/// interior nodes.
pub fn build_hamiltonian_with<F: Fn(f64) -> f64>(
    grid: &RadialGrid,
    potential: F,
) -> SymTridiagonal {
    let h = grid.h();
    let k = 1.0 / (h * h);
    let diag = grid
        .nodes()
        .into_iter()
        .map(|r| 2.0 * k + potential(r))
        .collect();
    SymTridiagonal::new(diag, vec![-k; grid.dim() - 1])
}

/// Hamiltonian of the quantum potential.
pub fn build_hamiltonian(grid: &RadialGrid, config: &MonopoleConfig) -> SymTridiagonal {
    build_hamiltonian_with(grid, |r| config.quantum(r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    All,
    Lowest(usize),
    Below(f64),
}

/// Eigenpairs of a grid Hamiltonian; vectors have unit discrete 2-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub grid: RadialGrid,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    /// Indices whose inverse iteration hit the sweep limit.
    pub unconverged: Vec<usize>,
}

fn selection_range(h: &SymTridiagonal, which: Selection) -> Range<usize> {
    match which {
        Selection::All => 0..h.len(),
        Selection::Lowest(k) => 0..k.min(h.len()),
        Selection::Below(x) => 0..h.sturm_count(x),
    }
}

pub fn eigensolve(grid: &RadialGrid, h: &SymTridiagonal, which: Selection) -> Spectrum {
    let mut s = Spectrum {
        grid: *grid,
        eigenvalues: Vec::new(),
        eigenvectors: Vec::new(),
        residuals: Vec::new(),
        unconverged: Vec::new(),
    };
    h.for_each_eigenpair(selection_range(h, which), |k, p| {
        s.eigenvalues.push(p.value);
        s.eigenvectors.push(p.vector.clone());
        s.residuals.push(p.residual);
        if !p.converged {
            s.unconverged.push(k);
        }
    });
    s
}

/// Region in which a state's probability is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightRegion {
    /// Inside the barrier maximum `ρ_peak`.
    BarrierPeak,
    /// Inside the outer turning point `ρ₃(ε)` where the state leaves the
    /// barrier.
    BarrierExit,
}

/// When a finite-difference state counts as quasi-bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionRule {
    pub threshold: f64,
    pub region: WeightRegion,
}

impl Default for SelectionRule {
    fn default() -> Self {
        Self {
            threshold: 0.5,
            region: WeightRegion::BarrierExit,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiBoundSet {
    pub states: Vec<Eigenstate>,
    /// Index of each state in the spectrum it came from.
    pub spectrum_index: Vec<usize>,
    pub well_weights: Vec<f64>,
    pub rho_peak: f64,
    pub v_peak: f64,
}

struct Classifier {
    well: Well,
    rule: SelectionRule,
    grid: RadialGrid,
}

impl Classifier {
    fn new(config: &MonopoleConfig, grid: &RadialGrid, rule: SelectionRule) -> Option<Self> {
        let well = Well::new(config, PotentialKind::Quantum).ok()?;
        (well.rho_peak < grid.b).then_some(Self {
            well,
            rule,
            grid: *grid,
        })
    }

    /// Weight inside the selection region, or `None` when the state is above
    /// the barrier or its region does not fit on the grid.
    fn weight(&self, value: f64, vector: &[f64]) -> Option<f64> {
        if !(value < self.well.v_peak) {
            return None;
        }
        let edge = match self.rule.region {
            WeightRegion::BarrierPeak => self.well.rho_peak,
            WeightRegion::BarrierExit => self.well.exit_point(value).ok()??,
        };
        if edge >= self.grid.b {
            return None;
        }
        let k = self.grid.nodes_below(edge);
        Some(vector[..k].iter().map(|v| v * v).sum())
    }

    fn accepts(&self, weight: f64) -> bool {
        weight >= self.rule.threshold
    }
}

pub fn select_quasibound(spectrum: &Spectrum, config: &MonopoleConfig) -> QuasiBoundSet {
    select_quasibound_with(spectrum, config, SelectionRule::default())
}

/// States below the barrier top with at least `rule.threshold` of their
/// probability inside the rule's region. Empty without a barrier inside the
/// grid.
pub fn select_quasibound_with(
    spectrum: &Spectrum,
    config: &MonopoleConfig,
    rule: SelectionRule,
) -> QuasiBoundSet {
    let mut set = QuasiBoundSet {
        states: Vec::new(),
        spectrum_index: Vec::new(),
        well_weights: Vec::new(),
        rho_peak: f64::NAN,
        v_peak: f64::NAN,
    };
    let Some(cls) = Classifier::new(config, &spectrum.grid, rule) else {
        return set;
    };
    set.rho_peak = cls.well.rho_peak;
    set.v_peak = cls.well.v_peak;
    for (k, (&value, vector)) in spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.eigenvectors)
        .enumerate()
    {
        if let Some(w) = cls.weight(value, vector) {
            if cls.accepts(w) {
                set.states.push(Eigenstate {
                    n: set.states.len(),
                    m: config.m,
                    epsilon: value,
                    method: Method::FiniteDifference,
                    wavefunction: None,
                });
                set.spectrum_index.push(k);
                set.well_weights.push(w);
            }
        }
    }
    set
}

/// Quasi-bound states of one `(λ, M)` without storing the spectrum.
pub fn quasibound_count(config: &MonopoleConfig, grid: &RadialGrid, rule: SelectionRule) -> usize {
    let Some(cls) = Classifier::new(config, grid, rule) else {
        return 0;
    };
    let h = build_hamiltonian(grid, config);
    let mut count = 0;
    h.for_each_eigenpair(
        selection_range(&h, Selection::Below(cls.well.v_peak)),
        |_, p| {
            if cls
                .weight(p.value, &p.vector)
                .is_some_and(|w| cls.accepts(w))
            {
                count += 1;
            }
        },
    );
    count
}

/// Largest in-region weight among states below the barrier; zero without a
/// barrier.
pub fn max_well_weight(config: &MonopoleConfig, grid: &RadialGrid, rule: SelectionRule) -> f64 {
    let Some(cls) = Classifier::new(config, grid, rule) else {
        return 0.0;
    };
    let h = build_hamiltonian(grid, config);
    let mut best = 0.0f64;
    h.for_each_eigenpair(
        selection_range(&h, Selection::Below(cls.well.v_peak)),
        |_, p| {
            if let Some(w) = cls.weight(p.value, &p.vector) {
                best = best.max(w);
            }
        },
    );
    best
}

/// Range of `M` that can hold a well at strength λ: `-λ < M < 0.0887 λ`.
pub fn m_range_with_well(lambda: f64) -> Range<i32> {
    let lo = -math::floor(lambda) as i32;
    let hi = math::floor(crate::model::m_over_lambda_max() * lambda) as i32 + 1;
    lo..hi + 1
}

/// Quasi-bound counts `N_M` for every `M` in `m_range`.
pub fn count_map(
    lambda: f64,
    m_range: Range<i32>,
    grid: &RadialGrid,
    rule: SelectionRule,
) -> Result<Vec<(i32, usize)>> {
    m_range
        .map(|m| {
            Ok((
                m,
                quasibound_count(&MonopoleConfig::new(lambda, m)?, grid, rule),
            ))
        })
        .collect()
}

/// `N_bq = Σ_M N_M` with its `λ²` coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiBoundTotal {
    pub lambda: f64,
    pub total: usize,
    pub coefficient: f64,
    pub counts: Vec<(i32, usize)>,
}

pub fn total_quasibound(
    lambda: f64,
    grid: &RadialGrid,
    rule: SelectionRule,
) -> Result<QuasiBoundTotal> {
    let counts = count_map(lambda, m_range_with_well(lambda), grid, rule)?;
    Ok(total_from_counts(lambda, counts))
}

pub fn total_from_counts(lambda: f64, counts: Vec<(i32, usize)>) -> QuasiBoundTotal {
    let total = counts.iter().map(|c| c.1).sum::<usize>();
    QuasiBoundTotal {
        lambda,
        total,
        coefficient: total as f64 / (lambda * lambda),
        counts,
    }
}

/// Search settings for [`min_lambda`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSearch {
    pub start: f64,
    pub step: f64,
    pub max: f64,
}

impl Default for ThresholdSearch {
    fn default() -> Self {
        Self {
            start: 1.0,
            step: 0.05,
            max: 200.0,
        }
    }
}

/// Weakest strength on the search lattice with at least one quasi-bound
/// state at angular momentum `m`.
///
/// The predicate is not monotone in λ close to threshold (the in-region
/// weight of the best state oscillates about the cut as levels cross the
/// barrier top), so the lattice is scanned upwards instead of bisected.
pub fn min_lambda(
    m: i32,
    grid: &RadialGrid,
    rule: SelectionRule,
    search: ThresholdSearch,
) -> Result<f64> {
    if !(search.step > 0.0 && search.start > 0.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: search.step,
            reason: "search needs a positive start and step",
        });
    }
    let mut k = 0usize;
    loop {
        let lambda = search.start + k as f64 * search.step;
        if lambda > search.max {
            return Err(Error::Bracketing {
                a: search.start,
                b: search.max,
            });
        }
        if quasibound_count(&MonopoleConfig::new(lambda, m)?, grid, rule) >= 1 {
            return Ok(lambda);
        }
        k += 1;
    }
}

/// Quantum potential held at its barrier-top value beyond the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedPotential {
    pub config: MonopoleConfig,
    pub rho_peak: f64,
    pub v_peak: f64,
}

impl ModifiedPotential {
    pub fn eval(&self, rho: f64) -> f64 {
        if rho <= self.rho_peak {
            self.config.quantum(rho)
        } else {
            self.v_peak
        }
    }
}

pub fn modified_potential(config: &MonopoleConfig) -> Result<ModifiedPotential> {
    let well = Well::new(config, PotentialKind::Quantum)?;
    Ok(ModifiedPotential {
        config: *config,
        rho_peak: well.rho_peak,
        v_peak: config.quantum(well.rho_peak),
    })
}

/// Survival probability of a state prepared in the flattened potential.
#[derive(Debug, Clone, PartialEq)]
pub struct Survival {
    pub times: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// `Σ |C_m|²` over the eigenstates used.
    pub completeness: f64,
    /// Set when the completeness is below 0.999 (grid too small).
    pub incomplete: bool,
    /// Energy of the prepared state.
    pub epsilon: f64,
    pub rho_peak: f64,
    /// Round trip from the barrier to the grid end, `(b - ρ_peak)/sqrt(ε)`.
    pub echo_time: f64,
    /// Eigenstates of the original Hamiltonian in the expansion.
    pub modes: usize,
}

const COMPLETENESS_TARGET: f64 = 1.0 - 1e-10;
pub const COMPLETENESS_WARNING: f64 = 0.999;
const CHUNK: usize = 256;

struct Prepared {
    epsilon: f64,
    zeta: Vec<f64>,
    rho_peak: f64,
    inside: usize,
}

fn prepare(config: &MonopoleConfig, n: usize, grid: &RadialGrid) -> Result<Prepared> {
    let modified = modified_potential(config)?;
    let hm = build_hamiltonian_with(grid, |r| modified.eval(r));
    let bound = hm.sturm_count(modified.v_peak);
    if n >= bound {
        return Err(Error::StateIndex {
            index: n,
            available: bound,
        });
    }
    let pair = hm.eigenpairs(n..n + 1).pop().ok_or(Error::StateIndex {
        index: n,
        available: bound,
    })?;
    Ok(Prepared {
        epsilon: pair.value,
        zeta: pair.vector,
        rho_peak: modified.rho_peak,
        inside: grid.nodes_below(modified.rho_peak),
    })
}

/// Echo time of state `n`, `(b - ρ_peak)/sqrt(ε_n)`.
pub fn echo_time(config: &MonopoleConfig, n: usize, grid: &RadialGrid) -> Result<f64> {
    let p = prepare(config, n, grid)?;
    Ok((grid.b - p.rho_peak) / math::sqrt(p.epsilon))
}

/// `n`-th bound state `ζ_n` of the flattened potential, expanded in the
/// eigenstates of the original Hamiltonian on the same grid, evolved with
/// phases `exp(-i ε_m t)`; `P(t)` is the probability inside `ρ_peak`.
///
/// Eigenpairs are streamed upwards in energy until the expansion captures
/// all but 1e-10 of the norm. `times = None` samples 200 points uniformly on
/// `[0, echo_time]`.
pub fn survival_probability(
    config: &MonopoleConfig,
    n: usize,
    grid: &RadialGrid,
    times: Option<&[f64]>,
) -> Result<Survival> {
    let prep = prepare(config, n, grid)?;
    let echo = (grid.b - prep.rho_peak) / math::sqrt(prep.epsilon);
    let times: Vec<f64> = match times {
        Some(t) => t.to_vec(),
        None => (0..200).map(|k| echo * k as f64 / 199.0).collect(),
    };
    let h = build_hamiltonian(grid, config);
    let inside = prep.inside;
    let mut energies = Vec::new();
    let mut parts: Vec<Vec<f64>> = Vec::new();
    let mut completeness = 0.0;
    let mut next = 0;
    while next < h.len() && completeness < COMPLETENESS_TARGET {
        let end = (next + CHUNK).min(h.len());
        h.for_each_eigenpair(next..end, |_, p| {
            let c: f64 = p.vector.iter().zip(&prep.zeta).map(|(a, b)| a * b).sum();
            completeness += c * c;
            energies.push(p.value);
            parts.push(p.vector[..inside].iter().map(|v| c * v).collect());
        });
        next = end;
    }
    let probabilities = times
        .iter()
        .map(|&t| {
            let mut re = vec![0.0; inside];
            let mut im = vec![0.0; inside];
            for (e, part) in energies.iter().zip(&parts) {
                let (s, c) = math::sin_cos(e * t);
                for i in 0..inside {
                    re[i] += part[i] * c;
                    im[i] -= part[i] * s;
                }
            }
            re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum()
        })
        .collect();
    Ok(Survival {
        times,
        probabilities,
        completeness,
        incomplete: completeness < COMPLETENESS_WARNING,
        epsilon: prep.epsilon,
        rho_peak: prep.rho_peak,
        echo_time: echo,
        modes: energies.len(),
    })
}

/// Decay fitted to a survival curve.
#[derive(Debug, Clone, PartialEq)]
pub struct FdLifetime {
    /// Decay rate from the least-squares line through `ln P(t)`.
    pub rate: f64,
    pub intercept: f64,
    /// `ln 2 / rate`.
    pub half_life: f64,
    /// First time `P` drops to one half, linearly interpolated.
    pub crossing: Option<f64>,
    pub survival: Survival,
}

/// Least-squares exponential fit of the survival curve over the echo window.
///
/// Fails with [`Error::LifetimeTooLong`] when `P` stays above one half and
/// the decay over the window cannot be told from rounding: rate below
/// 1e-12, or total decay below 1e-8 of `P(0)`.
pub fn fd_half_life(config: &MonopoleConfig, n: usize, grid: &RadialGrid) -> Result<FdLifetime> {
    let survival = survival_probability(config, n, grid, None)?;
    fit_survival(survival)
}

pub fn fit_survival(survival: Survival) -> Result<FdLifetime> {
    let logs: Vec<f64> = survival
        .probabilities
        .iter()
        .map(|&p| math::ln(p.max(f64::MIN_POSITIVE)))
        .collect();
    let (intercept, slope) = linear_fit(&survival.times, &logs);
    let rate = -slope;
    let crossing = survival
        .probabilities
        .windows(2)
        .zip(survival.times.windows(2))
        .find(|(p, _)| p[0] > 0.5 && p[1] <= 0.5)
        .map(|(p, t)| t[0] + (t[1] - t[0]) * (p[0] - 0.5) / (p[0] - p[1]));
    if crossing.is_none() {
        let p0 = survival.probabilities.first().copied().unwrap_or(0.0);
        let p1 = survival.probabilities.last().copied().unwrap_or(0.0);
        if rate < 1e-12 || (p0 - p1) < 1e-8 * p0 {
            return Err(Error::LifetimeTooLong { rate });
        }
    }
    Ok(FdLifetime {
        rate,
        intercept,
        half_life: LN_2 / rate,
        crossing,
        survival,
    })
}
