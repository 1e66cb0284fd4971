mod cli;
mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use cli::Cli;

const THREADS_ENV: &str = "CURVED_LANDAU_THREADS";

#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Usage(String),
    /// A check ran and did not pass; the report has been written.
    Failed,
    Library(curved_landau::Error),
    Io(std::io::Error),
}

impl From<curved_landau::Error> for CliError {
    fn from(e: curved_landau::Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn is_usage(e: &curved_landau::Error) -> bool {
    use curved_landau::Error::*;
    matches!(
        e,
        Domain(_)
            | EvenTwiceM(_)
            | SingularFrame { .. }
            | Singular(_)
            | Evanescent { .. }
            | Inadmissible { .. }
            | NonPositiveLambdaSquared { .. }
            | Degenerate(_)
            | OutOfTower { .. }
            | RejectedVariant(_)
            | Usage(_)
    )
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(argv: Vec<OsString>) -> Result<(), CliError> {
    let argv = match config::config_path(&argv) {
        Some(path) => config::merge(argv, path.as_ref())?,
        None => argv,
    };
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    configure_threads()?;
    commands::dispatch(&cli)
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            ExitCode::from(if e.use_stderr() { 2 } else { 0 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
