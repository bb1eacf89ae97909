//! Command-line front end for the monopole calculations.
//!
//! Every subcommand resolves a [`params::RunConfig`], computes a
//! [`dataset::DataSet`] and writes it as CSV (or JSON) with a header that
//! records the full configuration.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Arg, ArgAction, ArgMatches};
use rayon::prelude::*;

pub mod commands;
pub mod dataset;
pub mod figures;
pub mod params;

use params::{read_config_file, Command, Kind, RunConfig};

/// Environment variable limiting the worker threads.
pub const THREADS_ENV: &str = "MONOPOLE_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(monopole_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<monopole_core::Error> for CliError {
    fn from(e: monopole_core::Error) -> Self {
        CliError::Numerical(e)
    }
}

/// Worker pool whose results are always assembled in input order.
pub struct Pool(rayon::ThreadPool);

impl Pool {
    pub fn from_env() -> Result<Self, CliError> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(s) => s
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "{THREADS_ENV} must be a positive integer, got '{s}'"
                    ))
                })?,
            Err(_) => 0,
        };
        Self::with_threads(threads)
    }

    /// `0` lets the pool pick one thread per core.
    pub fn with_threads(threads: usize) -> Result<Self, CliError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map(Pool)
            .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))
    }

    /// Maps `f` over `items` in parallel. The first error in input order
    /// wins, so failures are reported the same way on any thread count.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>, CliError>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R, CliError> + Sync + Send,
    {
        let results: Vec<Result<R, CliError>> =
            self.0.install(|| items.par_iter().map(&f).collect());
        results.into_iter().collect()
    }
}

pub fn cli() -> clap::Command {
    let mut app = clap::Command::new("monopole")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Quasi-bound electron states around a magnetic monopole")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("config")
                .help_heading("Input and output")
                .long("config")
                .short('c')
                .global(true)
                .value_name("FILE")
                .help("read 'key = value' parameters from FILE; flags take precedence"),
        )
        .arg(
            Arg::new("output")
                .help_heading("Input and output")
                .long("output")
                .short('o')
                .global(true)
                .value_name("PATH")
                .help("write CSV to PATH instead of standard output"),
        )
        .arg(
            Arg::new("json")
                .help_heading("Input and output")
                .long("json")
                .global(true)
                .action(ArgAction::SetTrue)
                .help("emit JSON; with --output, also write PATH.json"),
        );
    for command in Command::ALL {
        let mut sub = clap::Command::new(command.name()).about(command.about());
        for key in command.keys() {
            let mut arg = Arg::new(key.name).long(key.flag()).help(key_help(&key));
            arg = match key.kind {
                Kind::Switch => arg.action(ArgAction::SetTrue),
                Kind::Real(_) | Kind::Int(..) => {
                    arg.value_name("VALUE").allow_negative_numbers(true)
                }
                _ => arg.value_name("VALUE"),
            };
            sub = sub.arg(arg);
        }
        app = app.subcommand(sub);
    }
    app
}

fn key_help(key: &params::Key) -> String {
    match (key.kind, key.default) {
        (Kind::Choice(options), Some(d)) => {
            format!("{} [{}; default {d}]", key.help, options.join("|"))
        }
        (Kind::Switch, _) => key.help.to_string(),
        (_, Some(d)) => format!("{} [default {d}]", key.help),
        (_, None) => key.help.to_string(),
    }
}

/// Parsed invocation.
pub struct Invocation {
    pub run: RunConfig,
    pub output: Option<PathBuf>,
    pub json: bool,
}

pub fn parse_matches(matches: &ArgMatches) -> Result<Invocation, CliError> {
    let (name, sub) = matches
        .subcommand()
        .ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let command = Command::from_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown subcommand '{name}'")))?;
    let mut flags = Vec::new();
    for key in command.keys() {
        match key.kind {
            Kind::Switch => {
                if sub.get_flag(key.name) {
                    flags.push((key.name.to_string(), "true".to_string()));
                }
            }
            _ => {
                if let Some(v) = sub.get_one::<String>(key.name) {
                    flags.push((key.name.to_string(), v.clone()));
                }
            }
        }
    }
    let mut file = match sub.get_one::<String>("config") {
        Some(path) => read_config_file(path.as_ref())?,
        None => Vec::new(),
    };
    if let Some(pos) = file.iter().position(|(k, _)| k == "command") {
        let (_, named) = file.remove(pos);
        if named != command.name() {
            return Err(CliError::Usage(format!(
                "config file is for '{named}', not '{command}'"
            )));
        }
    }
    let run = RunConfig::resolve(command, &flags, &file)?;
    Ok(Invocation {
        run,
        output: sub.get_one::<String>("output").map(PathBuf::from),
        json: sub.get_flag("json"),
    })
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Runs the command line and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&matches) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("monopole: {e}");
            e.exit_code()
        }
    }
}

fn run(matches: &ArgMatches) -> Result<(), CliError> {
    let inv = parse_matches(matches)?;
    let pool = Pool::from_env()?;
    let data = commands::execute(&inv.run, &pool)?;
    match &inv.output {
        Some(path) => {
            write_file(path, &data.to_csv(&inv.run))?;
            if inv.json {
                let mut mirror = path.clone().into_os_string();
                mirror.push(".json");
                write_file(&PathBuf::from(mirror), &data.to_json(&inv.run))?;
            }
        }
        None => {
            let text = if inv.json {
                data.to_json(&inv.run)
            } else {
                data.to_csv(&inv.run)
            };
            print!("{text}");
        }
    }
    Ok(())
}
