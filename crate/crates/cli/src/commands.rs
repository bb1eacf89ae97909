//! One function per subcommand, each producing a [`DataSet`].

use std::f64::consts::LN_2;

use monopole_core::classical::{
    classify_orbit, default_time_step, integrate_orbit, radial_period, total_bound_estimate,
    ClassicalState, Orbit,
};
use monopole_core::fdm::{
    build_hamiltonian, eigensolve, fd_half_life, m_range_with_well, min_lambda, quasibound_count,
    select_quasibound_with, RadialGrid, Selection, SelectionRule, ThresholdSearch, WeightRegion,
};
use monopole_core::model::{potential, to_si_halflife, turning_points, Well};
use monopole_core::scattering::{
    coarse_grid, fit_resonance, phase_shift_with, refine_jumps, ResonanceBracket, ScanOptions,
};
use monopole_core::semiclassical::{
    decay_levels, quantise_with, tunnelling_exponent, wkb_half_life, Method,
};
use monopole_core::{Error, MonopoleConfig, PhysicalScales, PotentialKind};

use crate::dataset::DataSet;
use crate::params::{Command, RunConfig};
use crate::{figures, CliError, Pool};

pub fn execute(run: &RunConfig, pool: &Pool) -> Result<DataSet, CliError> {
    match run.command {
        Command::Potential => potential_table(run),
        Command::Orbit => orbit(run),
        Command::Spectrum => spectrum(run),
        Command::Count => count(run, pool),
        Command::Threshold => threshold(run, pool),
        Command::LifetimeWkb => lifetime_wkb(run),
        Command::LifetimeFd => lifetime_fd(run),
        Command::PhaseScan => phase_scan(run, pool),
        Command::Resonances => resonances(run, pool),
        Command::FigureData => figures::generate(run.text("figure"), run.switch("desk"), pool),
    }
}

pub(crate) fn config_of(run: &RunConfig) -> Result<MonopoleConfig, CliError> {
    let m = run.int("m").unwrap_or(0);
    Ok(MonopoleConfig::new(run.f64("lambda"), m)?)
}

pub(crate) fn grid_of(run: &RunConfig) -> Result<RadialGrid, CliError> {
    Ok(RadialGrid::new(
        run.f64("a"),
        run.f64("b"),
        run.count("n_points"),
    )?)
}

pub(crate) fn rule_of(run: &RunConfig) -> SelectionRule {
    SelectionRule {
        threshold: run.f64("threshold"),
        region: match run.text("region") {
            "peak" => WeightRegion::BarrierPeak,
            _ => WeightRegion::BarrierExit,
        },
    }
}

pub(crate) fn scan_options_of(run: &RunConfig) -> ScanOptions {
    ScanOptions {
        coarse_points: run.count("points"),
        z_max: run.f64("z_max"),
        step: run.f64("step"),
    }
}

fn potential_table(run: &RunConfig) -> Result<DataSet, CliError> {
    let config = config_of(run)?;
    let (lo, hi, n) = (run.f64("rho_min"), run.f64("rho_max"), run.count("points"));
    let mut data = DataSet::new(["rho", "v_classical", "v_quantum"]);
    for k in 0..n {
        let rho = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        data.push(vec![
            rho,
            potential(rho, &config, PotentialKind::Classical)?,
            potential(rho, &config, PotentialKind::Quantum)?,
        ]);
    }
    for (label, kind) in [
        ("classical", PotentialKind::Classical),
        ("quantum", PotentialKind::Quantum),
    ] {
        if let Ok(well) = Well::new(&config, kind) {
            data.note(format!("{label}.rho_min"), well.rho_min);
            data.note(format!("{label}.v_min"), well.v_min);
            data.note(format!("{label}.rho_peak"), well.rho_peak);
            data.note(format!("{label}.v_peak"), well.v_peak);
        }
    }
    Ok(data)
}

/// Starting point of an orbit and a default duration.
pub(crate) fn orbit_start(
    config: &MonopoleConfig,
    epsilon: f64,
    inside: bool,
    rho0: Option<f64>,
    outward: bool,
) -> Result<(ClassicalState, f64), CliError> {
    let v = |r: f64| potential(r, config, PotentialKind::Classical);
    let rho = match (rho0, inside) {
        (Some(r), _) => r,
        (None, true) => {
            let well = Well::new(config, PotentialKind::Classical)?;
            if well.rho_min > 0.0 {
                well.rho_min
            } else {
                0.5 * well.points(epsilon)?.outer
            }
        }
        (None, false) => {
            let tp = turning_points(config, PotentialKind::Classical, epsilon)?;
            let last = tp
                .roots
                .last()
                .copied()
                .ok_or(Error::NotQuasiBound { epsilon })?;
            last * (1.0 + 1e-9)
        }
    };
    let kinetic = epsilon - v(rho)?;
    if kinetic < -1e-9 * epsilon.max(1.0) {
        return Err(CliError::Usage(format!(
            "epsilon = {epsilon} lies below the potential at rho0 = {rho}"
        )));
    }
    let p = kinetic.max(0.0).sqrt();
    let start = ClassicalState {
        rho,
        p_rho: if outward { p } else { -p },
        phi: 0.0,
    };
    let duration = match radial_period(config, epsilon) {
        Ok(t) if inside => 4.0 * t,
        _ => 20.0 * rho.max(1.0) / epsilon.sqrt(),
    };
    Ok((start, duration))
}

pub(crate) fn run_orbit(
    config: &MonopoleConfig,
    epsilon: f64,
    start: ClassicalState,
    t_end: f64,
    dt: Option<f64>,
) -> Result<Orbit, CliError> {
    let dt = match dt {
        Some(dt) => dt,
        None => default_time_step(config, epsilon)
            .unwrap_or(t_end / 20_000.0)
            .min(t_end / 2000.0),
    };
    Ok(integrate_orbit(config, start, t_end, dt)?)
}

/// Evenly spaced sample indices, first and last included.
pub(crate) fn decimate<T: Copy>(items: &[T], max: usize) -> Vec<T> {
    if items.len() <= max {
        return items.to_vec();
    }
    (0..max)
        .map(|k| items[k * (items.len() - 1) / (max - 1)])
        .collect()
}

fn orbit(run: &RunConfig) -> Result<DataSet, CliError> {
    let config = config_of(run)?;
    let epsilon = run.f64("epsilon");
    let (start, default_end) = orbit_start(
        &config,
        epsilon,
        run.text("start") == "inside",
        run.get_f64("rho0"),
        run.text("direction") == "out",
    )?;
    let t_end = run.get_f64("t_end").unwrap_or(default_end);
    let orbit = run_orbit(&config, epsilon, start, t_end, run.get_f64("dt"))?;
    let mut data = DataSet::new(["t", "rho", "p_rho", "phi", "x", "y"]);
    for (t, s) in decimate(&orbit.samples, run.count("samples")) {
        data.push(vec![
            t,
            s.rho,
            s.p_rho,
            s.phi,
            s.rho * s.phi.cos(),
            s.rho * s.phi.sin(),
        ]);
    }
    data.note_text("classification", classify_orbit(&orbit).name());
    data.note("energy", orbit.energy);
    data.note("max_drift", orbit.max_drift);
    data.note("rho_min", orbit.rho_min);
    data.note("rho_max", orbit.rho_max);
    data.note("radial_periods", orbit.radial_periods as f64);
    data.note("mean_phi_dot", orbit.mean_phi_dot);
    Ok(data)
}

/// FD quasi-bound levels with their in-well weights.
pub(crate) fn fd_levels(
    config: &MonopoleConfig,
    grid: &RadialGrid,
    rule: SelectionRule,
) -> Result<Vec<(f64, f64)>, CliError> {
    let well = Well::new(config, PotentialKind::Quantum)?;
    let h = build_hamiltonian(grid, config);
    let spectrum = eigensolve(grid, &h, Selection::Below(well.v_peak));
    let set = select_quasibound_with(&spectrum, config, rule);
    Ok(set
        .states
        .iter()
        .zip(&set.well_weights)
        .map(|(s, &w)| (s.epsilon, w))
        .collect())
}

fn method_levels(config: &MonopoleConfig, method: Method) -> Result<Vec<f64>, CliError> {
    Ok(quantise_with(config, method)?
        .into_iter()
        .map(|s| s.epsilon)
        .collect())
}

fn spectrum(run: &RunConfig) -> Result<DataSet, CliError> {
    let config = config_of(run)?;
    let grid = grid_of(run)?;
    let rule = rule_of(run);
    let semiclassical = [
        ("wkb", Method::Wkb),
        ("bs_quantum", Method::BohrSommerfeldQuantum),
        ("bs_classical", Method::BohrSommerfeldClassical),
    ];
    let method = run.text("method");
    if method != "all" {
        let mut data;
        if method == "fd" {
            data = DataSet::new(["n", "epsilon", "well_weight"]);
            for (n, (e, w)) in fd_levels(&config, &grid, rule)?.into_iter().enumerate() {
                data.push(vec![n as f64, e, w]);
            }
        } else {
            let m = match method {
                "wkb" => Method::Wkb,
                "bs-quantum" => Method::BohrSommerfeldQuantum,
                _ => Method::BohrSommerfeldClassical,
            };
            data = DataSet::new(["n", "epsilon"]);
            for (n, e) in method_levels(&config, m)?.into_iter().enumerate() {
                data.push(vec![n as f64, e]);
            }
        }
        data.note("levels", data.rows.len() as f64);
        return Ok(data);
    }
    let fd = fd_levels(&config, &grid, rule)?;
    let mut data = DataSet::new([
        "n",
        "fd",
        "well_weight",
        "wkb",
        "bs_quantum",
        "bs_classical",
    ]);
    let mut columns = Vec::new();
    for (name, m) in semiclassical {
        match method_levels(&config, m) {
            Ok(levels) => columns.push(levels),
            Err(e) => {
                data.note_text(format!("{name}.error"), e.to_string());
                columns.push(Vec::new());
            }
        }
    }
    let rows = columns
        .iter()
        .map(Vec::len)
        .chain([fd.len()])
        .max()
        .unwrap_or(0);
    let at = |v: &[f64], n: usize| v.get(n).copied().unwrap_or(f64::NAN);
    for n in 0..rows {
        let (e, w) = fd.get(n).copied().unwrap_or((f64::NAN, f64::NAN));
        data.push(vec![
            n as f64,
            e,
            w,
            at(&columns[0], n),
            at(&columns[1], n),
            at(&columns[2], n),
        ]);
    }
    data.note("fd.levels", fd.len() as f64);
    for ((name, _), col) in semiclassical.iter().zip(&columns) {
        data.note(format!("{name}.levels"), col.len() as f64);
    }
    Ok(data)
}

fn count(run: &RunConfig, pool: &Pool) -> Result<DataSet, CliError> {
    let lambda = run.f64("lambda");
    let grid = grid_of(run)?;
    let rule = rule_of(run);
    let full = m_range_with_well(lambda);
    let lo = run.int("m_min").unwrap_or(full.start);
    let hi = run.int("m_max").unwrap_or(full.end - 1);
    let ms: Vec<i32> = (lo..=hi).collect();
    let counts = pool.map(&ms, |&m| {
        Ok(quasibound_count(
            &MonopoleConfig::new(lambda, m)?,
            &grid,
            rule,
        ))
    })?;
    let mut data = DataSet::new(["m", "count"]);
    for (&m, &c) in ms.iter().zip(&counts) {
        data.push(vec![m as f64, c as f64]);
    }
    let total: usize = counts.iter().sum();
    data.note("total", total as f64);
    data.note("coefficient", total as f64 / (lambda * lambda));
    let harmonic = total_bound_estimate(lambda)?;
    data.note("harmonic_total", harmonic.total);
    data.note("harmonic_coefficient", harmonic.coefficient);
    Ok(data)
}

fn threshold(run: &RunConfig, pool: &Pool) -> Result<DataSet, CliError> {
    let grid = grid_of(run)?;
    let rule = rule_of(run);
    let search = ThresholdSearch {
        start: run.f64("start"),
        step: run.f64("lambda_step"),
        max: run.f64("lambda_max"),
    };
    let ms: Vec<i32> = (run.int("m_min").unwrap_or(-3)..=run.int("m_max").unwrap_or(3)).collect();
    let lambdas = pool.map(&ms, |&m| Ok(min_lambda(m, &grid, rule, search)?))?;
    Ok(threshold_table(&ms, &lambdas))
}

pub(crate) fn threshold_table(ms: &[i32], lambdas: &[f64]) -> DataSet {
    let mut data = DataSet::new(["m", "lambda_min", "charge_qd"]);
    for (&m, &l) in ms.iter().zip(lambdas) {
        data.push(vec![m as f64, l, 2.0 * l]);
    }
    if let Some((m, l)) = ms.iter().zip(lambdas).min_by(|a, b| a.1.total_cmp(b.1)) {
        data.note("minimum_m", *m as f64);
        data.note("minimum_charge_qd", 2.0 * l);
    }
    data
}

fn lifetime_wkb(run: &RunConfig) -> Result<DataSet, CliError> {
    let config = config_of(run)?;
    let scales = run
        .get_f64("d")
        .map(PhysicalScales::free_electron)
        .transpose()?;
    let mut columns = vec!["n", "epsilon", "half_life", "exponent"];
    if scales.is_some() {
        columns.push("half_life_seconds");
    }
    let mut data = DataSet::new(columns);
    let states = decay_levels(&config)?;
    if let Some(s) = states.first() {
        data.note_text("method", s.method.name());
    }
    for s in &states {
        let tau = wkb_half_life(&config, s)?;
        let mut row = vec![
            s.n as f64,
            s.epsilon,
            tau,
            tunnelling_exponent(&config, s.epsilon)?,
        ];
        if let Some(sc) = &scales {
            row.push(to_si_halflife(tau, sc));
        }
        data.push(row);
    }
    Ok(data)
}

fn lifetime_fd(run: &RunConfig) -> Result<DataSet, CliError> {
    let config = config_of(run)?;
    let grid = grid_of(run)?;
    let fit = fd_half_life(&config, run.count("n"), &grid)?;
    let mut data = DataSet::new(["t", "probability", "fit"]);
    for (&t, &p) in fit.survival.times.iter().zip(&fit.survival.probabilities) {
        data.push(vec![t, p, (fit.intercept - fit.rate * t).exp()]);
    }
    data.note("epsilon", fit.survival.epsilon);
    data.note("rate", fit.rate);
    data.note("half_life", fit.half_life);
    data.note("crossing", fit.crossing.unwrap_or(f64::NAN));
    data.note("completeness", fit.survival.completeness);
    data.note("modes", fit.survival.modes as f64);
    data.note("echo_time", fit.survival.echo_time);
    if fit.survival.incomplete {
        data.note_text("warning", "expansion incomplete; enlarge the grid");
    }
    Ok(data)
}

pub(crate) fn phase_samples(
    config: &MonopoleConfig,
    energies: &[f64],
    options: ScanOptions,
    pool: &Pool,
) -> Result<Vec<(f64, f64)>, CliError> {
    pool.map(energies, |&e| {
        Ok((
            e,
            phase_shift_with(config, e, options.z_max, options.step)?.delta,
        ))
    })
}

fn phase_scan(run: &RunConfig, pool: &Pool) -> Result<DataSet, CliError> {
    let config = if run.f64("lambda") == 0.0 {
        MonopoleConfig::free(run.int("m").unwrap_or(0))
    } else {
        config_of(run)?
    };
    let options = scan_options_of(run);
    let energies = coarse_grid(
        run.f64("eps_min"),
        run.f64("eps_max"),
        options.coarse_points,
    );
    let shifts = pool.map(&energies, |&e| {
        Ok(phase_shift_with(&config, e, options.z_max, options.step)?)
    })?;
    let mut data = DataSet::new(["epsilon", "delta", "mu_inf", "mu_zmax"]);
    for p in shifts {
        data.push(vec![p.epsilon, p.delta, p.mu_inf, p.mu_max]);
    }
    Ok(data)
}

/// Fit outcome of one bracket: 0 fitted, 1 unresolvably narrow, 2 poor fit.
pub(crate) fn resonance_rows(
    config: &MonopoleConfig,
    brackets: &[ResonanceBracket],
    options: ScanOptions,
    pool: &Pool,
) -> Result<Vec<Vec<f64>>, CliError> {
    pool.map(brackets, |b| {
        let row = match fit_resonance(config, b, options) {
            Ok(r) => vec![
                r.epsilon_n,
                r.gamma,
                r.tau,
                r.tau * LN_2,
                r.delta_offset,
                r.slope,
                r.max_residual,
                b.lo,
                b.hi,
                0.0,
            ],
            Err(Error::UnresolvableWidth { .. }) => unfitted(b, 1.0),
            Err(Error::FitResidual { residual }) => {
                let mut row = unfitted(b, 2.0);
                row[6] = residual;
                row
            }
            Err(e) => return Err(e.into()),
        };
        Ok(row)
    })
}

fn unfitted(b: &ResonanceBracket, status: f64) -> Vec<f64> {
    let nan = f64::NAN;
    vec![b.centre(), nan, nan, nan, nan, nan, nan, b.lo, b.hi, status]
}

pub(crate) const RESONANCE_COLUMNS: [&str; 10] = [
    "epsilon_n",
    "gamma",
    "tau",
    "half_life",
    "delta_offset",
    "slope",
    "max_residual",
    "bracket_lo",
    "bracket_hi",
    "status",
];

fn resonances(run: &RunConfig, pool: &Pool) -> Result<DataSet, CliError> {
    let config = config_of(run)?;
    let options = scan_options_of(run);
    let energies = coarse_grid(
        run.f64("eps_min"),
        run.f64("eps_max"),
        options.coarse_points,
    );
    let samples = phase_samples(&config, &energies, options, pool)?;
    let brackets = refine_jumps(&config, &samples, options)?;
    let mut data = DataSet::new(RESONANCE_COLUMNS);
    for row in resonance_rows(&config, &brackets, options, pool)? {
        data.push(row);
    }
    data.note("brackets", brackets.len() as f64);
    data.note(
        "fitted",
        data.rows.iter().filter(|r| r[9] == 0.0).count() as f64,
    );
    Ok(data)
}
