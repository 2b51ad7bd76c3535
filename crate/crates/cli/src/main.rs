//! `bolab`: command-line front end for the Benjamin–Ono verification toolkit.
//!
//! Exit status: 0 on success or a passing check, 1 when a verification fails,
//! 2 on invalid input.

mod commands;
mod field;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(bolab_core::Error),
    Io(std::io::Error),
}

impl From<bolab_core::Error> for CliError {
    fn from(e: bolab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use bolab_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Core(
                E::Ordering(_) | E::Incommensurable { .. } | E::Domain(_) | E::Invalid(_) | E::Interlacing { .. },
            ) => 2,
            CliError::Core(_) => 1,
        }
    }
}

/// Result of a command: rendered output and whether the check passed.
pub struct Outcome {
    pub body: String,
    pub pass: bool,
}

impl Outcome {
    pub fn ok(body: String) -> Self {
        Outcome { body, pass: true }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

impl Output {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "bolab", version, about = "Periodic Benjamin–Ono verification toolkit")]
struct Cli {
    #[command(flatten)]
    out: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Anisotropic partition profiles.
    #[command(subcommand)]
    Profile(commands::ProfileCmd),
    /// Multi-phase solutions.
    #[command(subcommand)]
    Multiphase(commands::MultiphaseCmd),
    /// Truncated Lax operators of periodic fields.
    #[command(subcommand)]
    Lax(commands::LaxCmd),
    /// Quantum hierarchy on Fock space.
    #[command(subcommand)]
    Quantum(commands::QuantumCmd),
    /// End-to-end checks.
    #[command(subcommand)]
    Verify(commands::VerifyCmd),
}

fn configure_threads() {
    if let Some(n) = std::env::var("BO_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn emit(out: &Output, body: &str) -> std::io::Result<()> {
    match &out.output {
        Some(path) => {
            let tmp = path.with_extension("tmp~");
            std::fs::write(&tmp, body)?;
            std::fs::rename(&tmp, path)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let fmt = cli.out.format();
    let result = match cli.command {
        Command::Profile(c) => commands::profile(c, fmt),
        Command::Multiphase(c) => commands::multiphase(c, fmt),
        Command::Lax(c) => commands::lax(c, fmt),
        Command::Quantum(c) => commands::quantum(c, fmt),
        Command::Verify(c) => commands::verify(c, fmt),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.out, &outcome.body) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
