//! Library side of the `kleinian` binary: argument parsing, dispatch and
//! rendering, kept in-process so it can be tested without spawning.
//!
//! Exit codes: 0 success, 1 domain error (JSON envelope on stderr),
//! 2 usage error. `KLEINIAN_THREADS` sets the worker count.

pub mod commands;
pub mod out;
pub mod parse;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] kleinian::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "kleinian", version, about = "Parameter-space computations for two-generator Kleinian groups")]
struct Cli {
    /// Emit versioned JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trace parameters, classification and realization.
    #[command(subcommand)]
    Params(commands::params::Params),
    /// Good words and their trace polynomials.
    #[command(subcommand)]
    Word(commands::word::Word),
    /// Exclusion rasters of γ-plane slices.
    #[command(subcommand)]
    Slice(commands::slice::Slice),
    /// Margulis constants of (p,q,r)-triangle groups.
    #[command(subcommand)]
    Margulis(commands::margulis::Margulis),
    /// Arithmeticity screening and enumeration.
    #[command(subcommand)]
    Arith(commands::arith::Arith),
    /// Collar, ball and torsion volume bounds.
    #[command(subcommand)]
    Volume(commands::volume::Volume),
    /// Bundled data tables.
    #[command(subcommand)]
    Tables(commands::tables::Tables),
}

/// Parses a `KLEINIAN_THREADS` value; `None` means rayon's default.
pub fn parse_threads(var: Option<&str>) -> Result<Option<usize>, String> {
    match var {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(format!("KLEINIAN_THREADS must be a positive integer, got {s:?}")),
        },
    }
}

fn run(cli: Cli) -> CliResult<out::Report> {
    match cli.command {
        Command::Params(c) => commands::params::run(c),
        Command::Word(c) => commands::word::run(c),
        Command::Slice(c) => commands::slice::run(c),
        Command::Margulis(c) => commands::margulis::run(c),
        Command::Arith(c) => commands::arith::run(c),
        Command::Volume(c) => commands::volume::run(c),
        Command::Tables(c) => commands::tables::run(c),
    }
}

/// What a run of the binary produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: u8, stdout: String, stderr: String) -> Self {
        Outcome { code, stdout, stderr }
    }
}

/// Runs the CLI on `args` (including the program name) with the given
/// `KLEINIAN_THREADS` value.
pub fn execute<I, T>(args: I, threads_var: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let msg = e.render().to_string();
            return if e.use_stderr() { Outcome::new(2, String::new(), msg) } else { Outcome::new(0, msg, String::new()) };
        }
    };
    let threads = match parse_threads(threads_var) {
        Ok(t) => t,
        Err(msg) => return Outcome::new(2, String::new(), format!("error: {msg}\n")),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return Outcome::new(1, String::new(), out::error_json("thread_pool", &e.to_string()) + "\n"),
    };

    let as_json = cli.json;
    match pool.install(|| run(cli)) {
        Ok(report) => {
            let text = report.render(as_json);
            let stdout = if text.is_empty() { text } else { text + "\n" };
            Outcome::new(0, stdout, String::new())
        }
        Err(CliError::Usage(msg)) => Outcome::new(2, String::new(), format!("error: {msg}\n")),
        Err(e) => {
            let kind = match &e {
                CliError::Domain(d) => out::error_kind(d),
                CliError::Io(_) => "io".into(),
                CliError::Csv(_) => "csv".into(),
                CliError::Usage(_) => unreachable!(),
            };
            Outcome::new(1, String::new(), out::error_json(&kind, &e.to_string()) + "\n")
        }
    }
}

#[cfg(test)]
mod tests;
