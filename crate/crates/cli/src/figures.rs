//! Numerical content of the standard figures.
//!
//! Each dataset is self-describing through its column names and `#:` result
//! lines. Figures 9, 10, 11b and 15 are expensive; their desk preset trims
//! the λ or M sets (and skips the finite-difference lifetimes of 15).

use monopole_core::classical::{
    circular_orbits, classify_orbit, harmonic_state_count, scaled_count_curve, Stability,
};
use monopole_core::fdm::{
    build_hamiltonian, eigensolve, fd_half_life, min_lambda, quasibound_count,
    select_quasibound_with, RadialGrid, Selection, SelectionRule, ThresholdSearch,
};
use monopole_core::model::{m_over_lambda_max, turning_points, Well};
use monopole_core::scattering::{
    coarse_grid, integrate_phase, level_half_gap, refine_jumps, resonance_near, top_level_lifetime,
    ScanOptions, DEFAULT_STEP,
};
use monopole_core::semiclassical::{
    decay_levels, quantise_with, wkb_half_life, wkb_wavefunction, Method,
};
use monopole_core::{Error, MonopoleConfig, PotentialKind};

use crate::commands::{
    decimate, fd_levels, orbit_start, phase_samples, resonance_rows, run_orbit, threshold_table,
    RESONANCE_COLUMNS,
};
use crate::dataset::DataSet;
use crate::{CliError, Pool};

pub const IDS: &[&str] = &[
    "2a", "2b", "3a", "3b", "3c", "4a", "4b", "4c", "5a", "5b", "6a", "6b", "7", "8a", "8b", "9a",
    "9b", "10", "11a", "11b", "13", "14", "15", "16",
];

const LAMBDA: f64 = 100.0;
/// Radial energy of the orbit figures.
const ORBIT_ENERGY: f64 = 400.0;

pub fn generate(id: &str, desk: bool, pool: &Pool) -> Result<DataSet, CliError> {
    match id {
        "2a" => Ok(scaled_potentials(
            &(0..=10).map(|k| -0.1 * k as f64).collect::<Vec<_>>(),
        )),
        "2b" => Ok(scaled_potentials(
            &(0..=10).map(|k| 0.02 * k as f64).collect::<Vec<_>>(),
        )),
        "3a" => orbit_potential(-1),
        "3b" => orbit_potential(0),
        "3c" => orbit_potential(1),
        "4a" => orbits(-1),
        "4b" => orbits(0),
        "4c" => orbits(1),
        "5a" => circular(),
        "5b" => Ok(harmonic_curve()),
        "6a" => compare_potentials(-7..=0),
        "6b" => compare_potentials(0..=3),
        "7" => wavefunctions(),
        "8a" => levels(None),
        "8b" => levels(Some(&[0, 5])),
        "9a" | "9b" => counts(id == "9b", desk, pool),
        "10" => thresholds(desk, pool),
        "11a" => wkb_lifetimes(desk),
        "11b" => phase_lifetimes(desk, pool),
        "13" => survival(),
        "14" => phase_shift_curve(desk, pool),
        "15" => top_lifetimes(desk, pool),
        "16" => free_phase(),
        _ => Err(CliError::Usage(format!("unknown figure '{id}'"))),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn config(m: i32) -> Result<MonopoleConfig, CliError> {
    Ok(MonopoleConfig::new(LAMBDA, m)?)
}

fn scaled_potentials(ratios: &[f64]) -> DataSet {
    let mut columns = vec!["rho".to_string()];
    columns.extend(ratios.iter().map(|x| {
        format!(
            "v_over_lambda2(m_over_lambda={})",
            crate::dataset::format_number(*x)
        )
    }));
    let mut data = DataSet::new(columns);
    let configs: Vec<MonopoleConfig> = ratios
        .iter()
        .map(|&x| MonopoleConfig::with_real_m(1.0, x).expect("finite ratio"))
        .collect();
    for rho in linspace(0.005, 5.0, 1000) {
        let mut row = vec![rho];
        row.extend(configs.iter().map(|c| c.classical(rho)));
        data.push(row);
    }
    data
}

fn orbit_potential(m: i32) -> Result<DataSet, CliError> {
    let c = config(m)?;
    let mut data = DataSet::new(["rho", "v_classical"]);
    for rho in linspace(0.01, 10.0, 1000) {
        data.push(vec![rho, c.classical(rho)]);
    }
    data.note("epsilon", ORBIT_ENERGY);
    let tp = turning_points(&c, PotentialKind::Classical, ORBIT_ENERGY)?;
    for (k, r) in tp.roots.iter().enumerate() {
        data.note(format!("turning_point.{k}"), *r);
    }
    Ok(data)
}

fn orbits(m: i32) -> Result<DataSet, CliError> {
    let c = config(m)?;
    let mut data = DataSet::new(["orbit", "t", "rho", "phi", "x", "y"]);
    for (label, inside) in [(0.0, true), (1.0, false)] {
        let (start, t_end) = orbit_start(&c, ORBIT_ENERGY, inside, None, true)?;
        let orbit = run_orbit(&c, ORBIT_ENERGY, start, t_end, None)?;
        for (t, s) in decimate(&orbit.samples, 2000) {
            data.push(vec![
                label,
                t,
                s.rho,
                s.phi,
                s.rho * s.phi.cos(),
                s.rho * s.phi.sin(),
            ]);
        }
        let name = if inside { "inside" } else { "outside" };
        data.note_text(
            format!("{name}.classification"),
            classify_orbit(&orbit).name(),
        );
        data.note(format!("{name}.max_drift"), orbit.max_drift);
    }
    Ok(data)
}

fn circular() -> Result<DataSet, CliError> {
    let mut data = DataSet::new(["m_over_lambda", "rho_circular", "stability"]);
    for x in linspace(-1.0, m_over_lambda_max(), 401) {
        for o in circular_orbits(x)? {
            data.push(vec![
                x,
                o.rho,
                if o.stability == Stability::Stable {
                    1.0
                } else {
                    0.0
                },
            ]);
        }
    }
    Ok(data)
}

fn harmonic_curve() -> DataSet {
    let (xs, ns) = scaled_count_curve(401);
    let mut data = DataSet::new(["m_over_lambda", "n_over_lambda"]);
    for (x, n) in xs.into_iter().zip(ns) {
        data.push(vec![x, n]);
    }
    data
}

fn compare_potentials(ms: std::ops::RangeInclusive<i32>) -> Result<DataSet, CliError> {
    let configs = ms.clone().map(config).collect::<Result<Vec<_>, _>>()?;
    let mut columns = vec!["rho".to_string()];
    for m in ms {
        columns.push(format!("v_classical(m={m})"));
        columns.push(format!("v_quantum(m={m})"));
    }
    let mut data = DataSet::new(columns);
    for rho in linspace(0.01, 10.0, 1000) {
        let mut row = vec![rho];
        for c in &configs {
            row.push(c.classical(rho));
            row.push(c.quantum(rho));
        }
        data.push(row);
    }
    Ok(data)
}

fn wavefunctions() -> Result<DataSet, CliError> {
    let c = config(1)?;
    let grid = RadialGrid::spectrum_default();
    let well = Well::new(&c, PotentialKind::Quantum)?;
    let h = build_hamiltonian(&grid, &c);
    let spectrum = eigensolve(&grid, &h, Selection::Below(well.v_peak));
    let set = select_quasibound_with(&spectrum, &c, SelectionRule::default());
    let wkb = quantise_with(&c, Method::Wkb)?;
    let nodes = grid.nodes();
    let scale = 1.0 / grid.h().sqrt();
    let count = set.states.len().min(wkb.len());
    let mut columns = vec!["rho".to_string()];
    let mut series: Vec<Vec<f64>> = Vec::new();
    for (n, state) in wkb.iter().enumerate().take(count) {
        let fd: Vec<f64> = spectrum.eigenvectors[set.spectrum_index[n]]
            .iter()
            .map(|v| v * scale)
            .collect();
        let (_, samples) = wkb_wavefunction(&c, state, &nodes)?;
        let mut w: Vec<f64> = samples.iter().map(|s| s.psi.unwrap_or(f64::NAN)).collect();
        let overlap: f64 = fd
            .iter()
            .zip(&w)
            .filter(|(_, b)| b.is_finite())
            .map(|(a, b)| a * b)
            .sum();
        if overlap < 0.0 {
            w.iter_mut().for_each(|v| *v = -*v);
        }
        columns.push(format!("fd(n={n})"));
        columns.push(format!("wkb(n={n})"));
        series.push(fd);
        series.push(w);
    }
    let mut data = DataSet::new(columns);
    for (i, &rho) in nodes.iter().enumerate() {
        let mut row = vec![rho];
        row.extend(series.iter().map(|s| s[i]));
        data.push(row);
    }
    for (n, (fd, w)) in set.states.iter().zip(&wkb).enumerate() {
        data.note(format!("fd.epsilon.{n}"), fd.epsilon);
        data.note(format!("wkb.epsilon.{n}"), w.epsilon);
    }
    Ok(data)
}

fn levels(only: Option<&[usize]>) -> Result<DataSet, CliError> {
    let c = config(1)?;
    let bsc = quantise_with(&c, Method::BohrSommerfeldClassical)?;
    let wkb = quantise_with(&c, Method::Wkb)?;
    let bsq = quantise_with(&c, Method::BohrSommerfeldQuantum)?;
    let fd = fd_levels(
        &c,
        &RadialGrid::spectrum_default(),
        SelectionRule::default(),
    )?;
    let rows = bsc.len().max(wkb.len()).max(bsq.len()).max(fd.len());
    let at = |v: &[monopole_core::semiclassical::Eigenstate], n: usize| {
        v.get(n).map_or(f64::NAN, |s| s.epsilon)
    };
    let mut data = DataSet::new(["n", "bs_classical", "wkb", "bs_quantum", "fd"]);
    for n in 0..rows {
        if only.is_some_and(|keep| !keep.contains(&n)) {
            continue;
        }
        data.push(vec![
            n as f64,
            at(&bsc, n),
            at(&wkb, n),
            at(&bsq, n),
            fd.get(n).map_or(f64::NAN, |l| l.0),
        ]);
    }
    Ok(data)
}

fn counts(scaled: bool, desk: bool, pool: &Pool) -> Result<DataSet, CliError> {
    let lambdas: &[f64] = if desk {
        &[20.0, 30.0, 40.0]
    } else {
        &[40.0, 70.0, 100.0]
    };
    let grid = RadialGrid::spectrum_default();
    let rule = SelectionRule::default();
    let jobs: Vec<(f64, i32)> = lambdas
        .iter()
        .flat_map(|&l| monopole_core::fdm::m_range_with_well(l).map(move |m| (l, m)))
        .collect();
    let counts = pool.map(&jobs, |&(l, m)| {
        Ok(quasibound_count(&MonopoleConfig::new(l, m)?, &grid, rule))
    })?;
    let mut data = if scaled {
        DataSet::new([
            "lambda",
            "m",
            "m_over_lambda",
            "count_over_lambda",
            "harmonic_over_4.3",
        ])
    } else {
        DataSet::new(["lambda", "m", "count"])
    };
    for (&(l, m), &n) in jobs.iter().zip(&counts) {
        if scaled {
            let c = MonopoleConfig::new(l, m)?;
            data.push(vec![
                l,
                m as f64,
                m as f64 / l,
                n as f64 / l,
                harmonic_state_count(&c) / l / 4.3,
            ]);
        } else {
            data.push(vec![l, m as f64, n as f64]);
        }
    }
    for &l in lambdas {
        let total: usize = jobs
            .iter()
            .zip(&counts)
            .filter(|(j, _)| j.0 == l)
            .map(|(_, n)| n)
            .sum();
        data.note(format!("total.lambda={l}"), total as f64);
    }
    Ok(data)
}

fn thresholds(desk: bool, pool: &Pool) -> Result<DataSet, CliError> {
    let ms: Vec<i32> = if desk {
        (-3..=3).collect()
    } else {
        (-6..=6).collect()
    };
    let grid = RadialGrid::spectrum_default();
    let lambdas = pool.map(&ms, |&m| {
        Ok(min_lambda(
            m,
            &grid,
            SelectionRule::default(),
            ThresholdSearch::default(),
        )?)
    })?;
    Ok(threshold_table(&ms, &lambdas))
}

fn lifetime_ms(desk: bool) -> Vec<i32> {
    if desk {
        vec![-3, 0, 1]
    } else {
        vec![-9, -6, -3, 0, 1, 3, 5]
    }
}

fn wkb_lifetimes(desk: bool) -> Result<DataSet, CliError> {
    let mut data = DataSet::new(["m", "n", "epsilon", "half_life"]);
    for m in lifetime_ms(desk) {
        let c = config(m)?;
        for s in decay_levels(&c)? {
            data.push(vec![
                m as f64,
                s.n as f64,
                s.epsilon,
                wkb_half_life(&c, &s)?,
            ]);
        }
    }
    Ok(data)
}

fn narrow_scan() -> ScanOptions {
    ScanOptions {
        coarse_points: 64,
        ..ScanOptions::default()
    }
}

fn phase_lifetimes(desk: bool, pool: &Pool) -> Result<DataSet, CliError> {
    let mut jobs = Vec::new();
    for m in lifetime_ms(desk) {
        let c = config(m)?;
        let states = decay_levels(&c)?;
        for (k, s) in states.iter().enumerate() {
            jobs.push((c, s.n, s.epsilon, level_half_gap(&c, &states, k)?));
        }
    }
    let fits = pool.map(&jobs, |(c, _, e, hw)| {
        match resonance_near(c, *e, *hw, narrow_scan()) {
            Ok(r) => Ok(Some(r)),
            Err(
                Error::UnresolvableWidth { .. }
                | Error::FitResidual { .. }
                | Error::NotQuasiBound { .. },
            ) => Ok(None),
            Err(e) => Err(e.into()),
        }
    })?;
    let mut data = DataSet::new(["m", "n", "epsilon_n", "gamma", "tau", "half_life"]);
    for ((c, n, e, _), fit) in jobs.iter().zip(fits) {
        let row = match fit {
            Some(r) => vec![
                c.m,
                *n as f64,
                r.epsilon_n,
                r.gamma,
                r.tau,
                r.tau * std::f64::consts::LN_2,
            ],
            None => vec![c.m, *n as f64, *e, f64::NAN, f64::NAN, f64::NAN],
        };
        data.push(row);
    }
    Ok(data)
}

fn survival() -> Result<DataSet, CliError> {
    let fit = fd_half_life(&config(1)?, 5, &RadialGrid::survival_default())?;
    let mut data = DataSet::new(["t", "probability", "fit"]);
    for (&t, &p) in fit.survival.times.iter().zip(&fit.survival.probabilities) {
        data.push(vec![t, p, (fit.intercept - fit.rate * t).exp()]);
    }
    data.note("rate", fit.rate);
    data.note("half_life", fit.half_life);
    Ok(data)
}

fn phase_shift_curve(desk: bool, pool: &Pool) -> Result<DataSet, CliError> {
    let c = config(1)?;
    let options = ScanOptions {
        coarse_points: if desk { 256 } else { 1024 },
        ..ScanOptions::default()
    };
    let energies = coarse_grid(10.0, 1000.0, options.coarse_points);
    let samples = phase_samples(&c, &energies, options, pool)?;
    let brackets = refine_jumps(&c, &samples, options)?;
    let rows = resonance_rows(&c, &brackets, options, pool)?;
    let mut data = DataSet::new(["epsilon", "delta"]);
    for (e, d) in samples {
        data.push(vec![e, d]);
    }
    for (k, row) in rows.iter().filter(|r| r[9] == 0.0).enumerate() {
        data.note(format!("resonance.{k}.{}", RESONANCE_COLUMNS[0]), row[0]);
        data.note(format!("resonance.{k}.{}", RESONANCE_COLUMNS[1]), row[1]);
        data.note(format!("resonance.{k}.{}", RESONANCE_COLUMNS[4]), row[4]);
    }
    Ok(data)
}

fn top_lifetimes(desk: bool, pool: &Pool) -> Result<DataSet, CliError> {
    let ms: Vec<i32> = if desk {
        (-3..=3).collect()
    } else {
        (-9..=5).collect()
    };
    let rows = pool.map(&ms, |&m| {
        let c = config(m)?;
        let top = top_level_lifetime(&c, narrow_scan())?;
        let fd = if desk {
            f64::NAN
        } else {
            let grid = RadialGrid::survival_default();
            let available = quasibound_count(&c, &grid, SelectionRule::default());
            match fd_half_life(&c, top.n.min(available.saturating_sub(1)), &grid) {
                Ok(f) => f.half_life,
                Err(Error::LifetimeTooLong { .. }) => f64::INFINITY,
                Err(e) => return Err(e.into()),
            }
        };
        let r = top.resonance;
        Ok(vec![
            m as f64,
            top.n as f64,
            top.epsilon_wkb,
            top.wkb_half_life,
            r.epsilon_n,
            r.tau,
            r.tau * std::f64::consts::LN_2,
            fd,
        ])
    })?;
    let mut data = DataSet::new([
        "m",
        "n",
        "epsilon",
        "wkb_half_life",
        "epsilon_n",
        "phase_tau",
        "phase_half_life",
        "fd_half_life",
    ]);
    for row in rows {
        data.push(row);
    }
    Ok(data)
}

fn free_phase() -> Result<DataSet, CliError> {
    let mut columns = vec!["z".to_string()];
    let mut traces = Vec::new();
    for m in 0..=4 {
        columns.push(format!("mu(m={m})"));
        traces.push(integrate_phase(
            &MonopoleConfig::free(m),
            1.0,
            2000.0,
            DEFAULT_STEP,
        )?);
    }
    let mut data = DataSet::new(columns);
    for i in 0..traces[0].z.len() {
        let mut row = vec![traces[0].z[i]];
        row.extend(traces.iter().map(|t| t.mu[i]));
        data.push(row);
    }
    Ok(data)
}
