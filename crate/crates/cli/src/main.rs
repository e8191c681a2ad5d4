mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::Config;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

/// Fourth-order compact scheme experiments: convergence tables, solution
/// fields, dispersion and stability data, and the decaying-vortex flow.
#[derive(Debug, Parser)]
#[command(name = "hoc2d", version, about)]
struct Cli {
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,

    /// Leave the generation timestamp out of CSV headers.
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Directory for CSV output.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spatial or temporal refinement table for problem1 or problem2.
    Convergence(Overrides),
    /// Solution snapshot with exact-solution errors.
    Field(Overrides),
    /// Mixed-derivative dispersion characteristics.
    Dispersion(Overrides),
    /// Von Neumann amplification scan for constant coefficients.
    Stability(Overrides),
    /// Decaying-vortex Navier–Stokes run.
    NsVortex(Overrides),
}

#[derive(Debug, clap::Args)]
struct Overrides {
    /// `key=value` settings applied on top of the config file.
    #[arg(value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Solver(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<hoc2d::Error> for CliError {
    fn from(e: hoc2d::Error) -> Self {
        use hoc2d::Error as E;
        match e {
            E::NonConvergence { .. } | E::CouplingNonConvergence { .. } | E::OracleFailure(_) => {
                CliError::Solver(e.to_string())
            }
            E::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Settings shared by every subcommand.
pub struct Output {
    pub dir: PathBuf,
    pub quiet: bool,
    pub timestamp: bool,
}

impl Output {
    pub fn say(&self, line: impl fmt::Display) {
        if !self.quiet {
            println!("{line}");
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let out = Output {
        dir: cli.out,
        quiet: cli.quiet,
        timestamp: !cli.no_timestamp,
    };
    let (Command::Convergence(o)
    | Command::Field(o)
    | Command::Dispersion(o)
    | Command::Stability(o)
    | Command::NsVortex(o)) = &cli.command;
    for pair in &o.set {
        cfg.set_pair(pair)?;
    }
    match cli.command {
        Command::Convergence(_) => commands::convergence(&cfg, &out),
        Command::Field(_) => commands::field(&cfg, &out),
        Command::Dispersion(_) => commands::dispersion(&cfg, &out),
        Command::Stability(_) => commands::stability(&cfg, &out),
        Command::NsVortex(_) => commands::ns_vortex(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hoc2d: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
