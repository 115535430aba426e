//! `eprsteer`: command-line front end for the epr-steering library.

mod args;
mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, Format};
use commands::Report;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or values, including domain errors raised by the library.
    Validation(String),
    /// A computation that should not fail did.
    Internal(String),
}

impl From<epr_steering::Error> for CliError {
    fn from(e: epr_steering::Error) -> Self {
        match e {
            epr_steering::Error::Domain(m) | epr_steering::Error::Estimation(m) => {
                CliError::Validation(m)
            }
            epr_steering::Error::Internal(m) => CliError::Internal(m),
        }
    }
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    detail: &'a str,
}

fn report_error(kind: &str, detail: &str) {
    let line = output::to_json(&ErrorLine {
        error: kind,
        detail,
    })
    .unwrap_or_else(|_| format!("{{\"error\":\"{kind}\",\"detail\":\"unprintable\"}}"));
    eprintln!("{line}");
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("{{\"generated_seed\":{s}}}");
        s
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.global.threads {
        if threads == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    }
    let default_format = match cli.command {
        Command::Scan(_) => Format::Csv,
        _ => Format::Json,
    };
    let format = cli.global.format.unwrap_or(default_format);

    let result: Box<dyn Report> = match &cli.command {
        Command::Scheme(a) => Box::new(commands::scheme(a)?),
        Command::Bounds(a) => Box::new(commands::bounds(a)?),
        Command::State(a) => Box::new(commands::state(a)?),
        Command::Steer(a) => Box::new(commands::steer(a)?),
        Command::Cheat(a) => Box::new(commands::cheat(a)?),
        Command::Bell(a) => Box::new(commands::bell(a)?),
        Command::Scan(a) => Box::new(commands::scan(a)?),
        Command::Mc(a) => {
            let seed = resolve_seed(a.seed);
            Box::new(commands::mc(a, seed)?)
        }
        Command::Tomo(a) => {
            let seed = resolve_seed(a.seed);
            Box::new(commands::tomo(a, seed)?)
        }
    };

    let text = match format {
        Format::Json => {
            let mut s = result
                .json()
                .map_err(|e| CliError::Internal(format!("JSON encoding: {e}")))?;
            s.push('\n');
            s
        }
        Format::Csv => result
            .table()
            .to_csv()
            .map_err(|e| CliError::Internal(format!("CSV encoding: {e}")))?,
    };
    match &cli.global.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Internal(format!("writing standard output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|info| {
        report_error("internal", &info.to_string().replace('\n', " "));
    }));

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                _ => {
                    let rendered = e.to_string();
                    let detail = rendered
                        .lines()
                        .next()
                        .unwrap_or("invalid arguments")
                        .trim_start_matches("error: ");
                    report_error("validation", detail);
                    ExitCode::from(1)
                }
            };
        }
    };

    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CliError::Validation(detail))) => {
            report_error("validation", &detail);
            ExitCode::from(1)
        }
        Ok(Err(CliError::Internal(detail))) => {
            report_error("internal", &detail);
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
