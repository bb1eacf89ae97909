//! Run configuration: subcommands, their keys, config files and validation.

use std::fmt;
use std::fs;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Potential,
    Orbit,
    Spectrum,
    Count,
    Threshold,
    LifetimeWkb,
    LifetimeFd,
    PhaseScan,
    Resonances,
    FigureData,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Potential,
        Command::Orbit,
        Command::Spectrum,
        Command::Count,
        Command::Threshold,
        Command::LifetimeWkb,
        Command::LifetimeFd,
        Command::PhaseScan,
        Command::Resonances,
        Command::FigureData,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Potential => "potential",
            Command::Orbit => "orbit",
            Command::Spectrum => "spectrum",
            Command::Count => "count",
            Command::Threshold => "threshold",
            Command::LifetimeWkb => "lifetime-wkb",
            Command::LifetimeFd => "lifetime-fd",
            Command::PhaseScan => "phase-scan",
            Command::Resonances => "resonances",
            Command::FigureData => "figure-data",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::Potential => "Classical and quantum radial potentials",
            Command::Orbit => "Integrate a classical orbit",
            Command::Spectrum => {
                "Quasi-bound levels by finite differences and semiclassical quantisation"
            }
            Command::Count => "Quasi-bound state counts per angular momentum",
            Command::Threshold => "Weakest monopole holding a quasi-bound state, per M",
            Command::LifetimeWkb => "WKB half-lives of the quasi-bound levels",
            Command::LifetimeFd => {
                "Survival probability of a quasi-bound state by finite differences"
            }
            Command::PhaseScan => "Scattering phase shift over an energy range",
            Command::Resonances => "Locate and fit phase-shift resonances",
            Command::FigureData => "Data behind one of the standard figures",
        }
    }

    pub fn keys(self) -> Vec<Key> {
        use Kind::*;
        let lambda = Key::new(
            "lambda",
            Real(Range::positive()),
            Some("100"),
            "monopole strength λ",
        );
        let m = Key::new(
            "m",
            Int(-10_000, 10_000),
            Some("1"),
            "angular momentum quantum number M",
        );
        let grid = |b: &'static str, n: &'static str| {
            [
                Key::new("a", Real(Range::at_least(0.0)), Some("0"), "grid start"),
                Key::new("b", Real(Range::positive()), Some(b), "grid end"),
                Key::new(
                    "n_points",
                    Count(3, 5_000_000),
                    Some(n),
                    "grid points including both ends",
                ),
            ]
        };
        let rule = [
            Key::new(
                "threshold",
                Real(Range::closed(0.0, 1.0)),
                Some("0.5"),
                "minimum probability inside the well",
            ),
            Key::choice(
                "region",
                &["exit", "peak"],
                "exit",
                "well region: up to the barrier exit or the barrier peak",
            ),
        ];
        let phase = [
            Key::new(
                "z_max",
                Real(Range::greater(2.0)),
                Some("2000"),
                "outer end of the phase integration",
            ),
            Key::new(
                "step",
                Real(Range::positive()),
                Some("0.00628318530718"),
                "phase integration step",
            ),
        ];
        let mut keys = Vec::new();
        match self {
            Command::Potential => {
                keys.extend([lambda, m]);
                keys.push(Key::new(
                    "rho_min",
                    Real(Range::positive()),
                    Some("0.01"),
                    "first radius",
                ));
                keys.push(Key::new(
                    "rho_max",
                    Real(Range::positive()),
                    Some("20"),
                    "last radius",
                ));
                keys.push(Key::new(
                    "points",
                    Count(2, 10_000_000),
                    Some("1000"),
                    "number of radii",
                ));
            }
            Command::Orbit => {
                keys.extend([lambda, m]);
                keys.push(Key::new(
                    "epsilon",
                    Real(Range::positive()),
                    Some("400"),
                    "radial energy ε",
                ));
                keys.push(Key::choice(
                    "start",
                    &["inside", "outside"],
                    "inside",
                    "start in the well or beyond the barrier",
                ));
                keys.push(Key::new(
                    "rho0",
                    Real(Range::positive()),
                    None,
                    "starting radius (overrides start)",
                ));
                keys.push(Key::choice(
                    "direction",
                    &["out", "in"],
                    "out",
                    "initial radial direction",
                ));
                keys.push(Key::new(
                    "t_end",
                    Real(Range::positive()),
                    None,
                    "integration time (default: four radial periods)",
                ));
                keys.push(Key::new(
                    "dt",
                    Real(Range::positive()),
                    None,
                    "time step (default: automatic)",
                ));
                keys.push(Key::new(
                    "samples",
                    Count(2, 100_000),
                    Some("2000"),
                    "maximum rows written",
                ));
            }
            Command::Spectrum => {
                keys.extend([lambda, m]);
                keys.extend(grid("20", "4000"));
                keys.push(Key::choice(
                    "method",
                    &["all", "fd", "wkb", "bs-quantum", "bs-classical"],
                    "all",
                    "quantisation method",
                ));
                keys.extend(rule);
            }
            Command::Count => {
                keys.push(lambda);
                keys.push(Key::new(
                    "m_min",
                    Int(-10_000, 10_000),
                    None,
                    "lowest M (default: lowest with a well)",
                ));
                keys.push(Key::new(
                    "m_max",
                    Int(-10_000, 10_000),
                    None,
                    "highest M (default: highest with a well)",
                ));
                keys.extend(grid("20", "4000"));
                keys.extend(rule);
            }
            Command::Threshold => {
                keys.push(Key::new(
                    "m_min",
                    Int(-10_000, 10_000),
                    Some("-3"),
                    "lowest M",
                ));
                keys.push(Key::new(
                    "m_max",
                    Int(-10_000, 10_000),
                    Some("3"),
                    "highest M",
                ));
                keys.extend(grid("20", "4000"));
                keys.extend(rule);
                keys.push(Key::new(
                    "start",
                    Real(Range::positive()),
                    Some("1"),
                    "first λ tried",
                ));
                keys.push(Key::new(
                    "lambda_step",
                    Real(Range::positive()),
                    Some("0.05"),
                    "λ increment",
                ));
                keys.push(Key::new(
                    "lambda_max",
                    Real(Range::positive()),
                    Some("200"),
                    "give up above this λ",
                ));
            }
            Command::LifetimeWkb => {
                keys.extend([lambda, m]);
                keys.push(Key::new(
                    "d",
                    Real(Range::positive()),
                    None,
                    "monopole depth in metres, adds SI half-lives",
                ));
            }
            Command::LifetimeFd => {
                keys.extend([lambda, m]);
                keys.push(Key::new(
                    "n",
                    Count(0, 100_000),
                    Some("5"),
                    "quasi-bound state index",
                ));
                keys.extend(grid("160", "10000"));
            }
            Command::PhaseScan | Command::Resonances => {
                keys.push(Key::new(
                    "lambda",
                    Real(Range::at_least(0.0)),
                    Some("100"),
                    "monopole strength λ",
                ));
                keys.push(m);
                keys.push(Key::new(
                    "eps_min",
                    Real(Range::positive()),
                    Some("1"),
                    "lowest energy",
                ));
                keys.push(Key::new(
                    "eps_max",
                    Real(Range::positive()),
                    Some("1000"),
                    "highest energy",
                ));
                let points = if self == Command::PhaseScan {
                    "200"
                } else {
                    "1024"
                };
                keys.push(Key::new(
                    "points",
                    Count(2, 10_000_000),
                    Some(points),
                    "energies in the scan",
                ));
                keys.extend(phase);
            }
            Command::FigureData => {
                keys.push(Key::choice(
                    "figure",
                    crate::figures::IDS,
                    "14",
                    "figure identifier",
                ));
                keys.push(Key::new(
                    "desk",
                    Switch,
                    Some("false"),
                    "reduced-cost preset for the expensive figures",
                ));
            }
        }
        keys
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub min_inclusive: bool,
    pub max: f64,
}

impl Range {
    fn positive() -> Self {
        Self::greater(0.0)
    }

    fn greater(min: f64) -> Self {
        Self {
            min,
            min_inclusive: false,
            max: f64::INFINITY,
        }
    }

    fn at_least(min: f64) -> Self {
        Self {
            min,
            min_inclusive: true,
            max: f64::INFINITY,
        }
    }

    fn closed(min: f64, max: f64) -> Self {
        Self {
            min,
            min_inclusive: true,
            max,
        }
    }

    fn contains(&self, x: f64) -> bool {
        let lower = if self.min_inclusive {
            x >= self.min
        } else {
            x > self.min
        };
        lower && x <= self.max
    }

    fn describe(&self) -> String {
        let op = if self.min_inclusive { ">=" } else { ">" };
        if self.max.is_finite() {
            format!("{op} {} and <= {}", self.min, self.max)
        } else {
            format!("{op} {}", self.min)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Real(Range),
    Int(i64, i64),
    Count(usize, usize),
    Choice(&'static [&'static str]),
    Switch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

impl Key {
    fn new(
        name: &'static str,
        kind: Kind,
        default: Option<&'static str>,
        help: &'static str,
    ) -> Self {
        Self {
            name,
            kind,
            default,
            help,
        }
    }

    fn choice(
        name: &'static str,
        options: &'static [&'static str],
        default: &'static str,
        help: &'static str,
    ) -> Self {
        Self::new(name, Kind::Choice(options), Some(default), help)
    }

    /// Command-line spelling of the key.
    pub fn flag(&self) -> String {
        self.name.replace('_', "-")
    }

    fn parse(&self, raw: &str) -> Result<Value, CliError> {
        let raw = raw.trim();
        let bad = |why: String| {
            CliError::Usage(format!("invalid value '{raw}' for '{}': {why}", self.name))
        };
        match self.kind {
            Kind::Real(range) => {
                let x: f64 = raw.parse().map_err(|_| bad("expected a number".into()))?;
                if !x.is_finite() || !range.contains(x) {
                    return Err(bad(format!("must be {}", range.describe())));
                }
                Ok(Value::Real(x))
            }
            Kind::Int(lo, hi) => {
                let v: i64 = raw.parse().map_err(|_| bad("expected an integer".into()))?;
                if v < lo || v > hi {
                    return Err(bad(format!("must lie in {lo}..={hi}")));
                }
                Ok(Value::Int(v))
            }
            Kind::Count(lo, hi) => {
                let v: usize = raw
                    .parse()
                    .map_err(|_| bad("expected a non-negative integer".into()))?;
                if v < lo || v > hi {
                    return Err(bad(format!("must lie in {lo}..={hi}")));
                }
                Ok(Value::Count(v))
            }
            Kind::Choice(options) => options
                .iter()
                .find(|o| **o == raw)
                .map(|o| Value::Text(o))
                .ok_or_else(|| bad(format!("expected one of {}", options.join(", ")))),
            Kind::Switch => match raw {
                "true" | "yes" | "1" => Ok(Value::Switch(true)),
                "false" | "no" | "0" => Ok(Value::Switch(false)),
                _ => Err(bad("expected true or false".into())),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    Count(usize),
    Text(&'static str),
    Switch(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => f.write_str(&crate::dataset::format_number(*x)),
            Value::Int(v) => write!(f, "{v}"),
            Value::Count(v) => write!(f, "{v}"),
            Value::Text(s) => f.write_str(s),
            Value::Switch(b) => write!(f, "{b}"),
        }
    }
}

/// A validated command with every parameter resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Parameters in declaration order; optional keys left unset are absent.
    pub values: Vec<(&'static str, Value)>,
}

impl RunConfig {
    /// Resolves parameters from command-line flags (highest precedence),
    /// config-file entries and the command defaults, then validates them.
    pub fn resolve(
        command: Command,
        flags: &[(String, String)],
        file: &[(String, String)],
    ) -> Result<Self, CliError> {
        let keys = command.keys();
        for (k, _) in file.iter().chain(flags) {
            if !keys.iter().any(|key| key.name == k) {
                return Err(CliError::Usage(format!(
                    "unknown key '{k}' for '{command}'"
                )));
            }
        }
        let mut values = Vec::new();
        for key in &keys {
            let raw = flags
                .iter()
                .find(|(k, _)| k == key.name)
                .or_else(|| file.iter().find(|(k, _)| k == key.name))
                .map(|(_, v)| v.as_str())
                .or(key.default);
            if let Some(raw) = raw {
                values.push((key.name, key.parse(raw)?));
            }
        }
        let config = Self { command, values };
        config.check_relations()?;
        Ok(config)
    }

    /// Rebuilds the configuration from the `# key = value` header of an
    /// output file.
    pub fn from_provenance(text: &str) -> Result<Self, CliError> {
        let mut command = None;
        let mut entries = Vec::new();
        for line in text.lines() {
            let Some(body) = line.strip_prefix("# ") else {
                if line.starts_with('#') {
                    continue;
                }
                break;
            };
            let Some((k, v)) = body.split_once(" = ") else {
                continue;
            };
            if k == "command" {
                command = Command::from_name(v.trim());
            } else {
                entries.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        let command = command.ok_or_else(|| CliError::Usage("header names no command".into()))?;
        Self::resolve(command, &entries, &[])
    }

    fn check_relations(&self) -> Result<(), CliError> {
        let ordered = |lo: &str, hi: &str| -> Result<(), CliError> {
            if let (Some(a), Some(b)) = (self.get_f64(lo), self.get_f64(hi)) {
                if a >= b {
                    return Err(CliError::Usage(format!("'{lo}' must be below '{hi}'")));
                }
            }
            Ok(())
        };
        ordered("a", "b")?;
        ordered("rho_min", "rho_max")?;
        ordered("eps_min", "eps_max")?;
        if let (Some(a), Some(b)) = (
            self.get_int(self.key_value("m_min")),
            self.get_int(self.key_value("m_max")),
        ) {
            if a > b {
                return Err(CliError::Usage("'m_min' must not exceed 'm_max'".into()));
            }
        }
        ordered("start", "lambda_max")?;
        Ok(())
    }

    fn key_value(&self, name: &str) -> Option<&Value> {
        self.values.iter().find(|(k, _)| *k == name).map(|(_, v)| v)
    }

    fn get_int(&self, v: Option<&Value>) -> Option<i64> {
        match v? {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn get_f64(&self, name: &str) -> Option<f64> {
        match self.key_value(name)? {
            Value::Real(x) => Some(*x),
            Value::Int(i) => Some(*i as f64),
            Value::Count(c) => Some(*c as f64),
            _ => None,
        }
    }

    pub fn f64(&self, name: &str) -> f64 {
        self.get_f64(name)
            .unwrap_or_else(|| panic!("parameter '{name}' is not declared for '{}'", self.command))
    }

    pub fn int(&self, name: &str) -> Option<i32> {
        self.get_int(self.key_value(name)).map(|v| v as i32)
    }

    pub fn count(&self, name: &str) -> usize {
        match self.key_value(name) {
            Some(Value::Count(c)) => *c,
            _ => panic!("parameter '{name}' is not a count for '{}'", self.command),
        }
    }

    pub fn text(&self, name: &str) -> &'static str {
        match self.key_value(name) {
            Some(Value::Text(s)) => s,
            _ => panic!("parameter '{name}' is not a choice for '{}'", self.command),
        }
    }

    pub fn switch(&self, name: &str) -> bool {
        matches!(self.key_value(name), Some(Value::Switch(true)))
    }
}

/// Reads a `key = value` file; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected 'key = value'", i + 1))
        })?;
        let (k, v) = (k.trim().replace('-', "_"), v.trim().to_string());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::Usage(format!(
                "config line {}: expected 'key = value'",
                i + 1
            )));
        }
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(CliError::Usage(format!(
                "config line {}: '{k}' set twice",
                i + 1
            )));
        }
        out.push((k, v));
    }
    Ok(out)
}
