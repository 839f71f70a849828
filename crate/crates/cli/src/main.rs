//! `diophlab` command-line driver.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage error, 3 check failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

fn run(cli: Cli) -> Result<Option<String>, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Compute(e.to_string()))?;
    }
    let out = match &cli.command {
        Command::Set { params, delta, eta, xi } => commands::set(params, *delta, *eta, *xi)?,
        Command::Cover { params, window } => commands::cover(params, window)?,
        Command::Count {
            params,
            window,
            integer_bound,
        } => commands::count(params, window, *integer_bound)?,
        Command::Discrepancy { params, window, k } => commands::discrepancy(params, window, *k)?,
        Command::Measure { params, delta, s } => commands::measure(params, *delta, s)?,
        Command::Tau {
            family,
            a,
            b,
            model,
            psi,
            psi_kind,
            psi_param,
            numeric,
            s,
        } => commands::tau(commands::TauArgs {
            family: *family,
            a: *a,
            b: *b,
            model: model.as_deref(),
            psi: psi.as_deref(),
            psi_kind: psi_kind.as_deref(),
            psi_param: *psi_param,
            numeric: *numeric,
            s: *s,
        })?,
        Command::Scan {
            a,
            b,
            t,
            psi_kind,
            boxdim,
            n_range,
            scales,
        } => commands::scan(commands::ScanArgs {
            a,
            b,
            t,
            psi_kind,
            boxdim: *boxdim,
            n_range,
            scales,
        })?,
        Command::Planar { op } => commands::planar(op, cli.seed)?,
        Command::Verify {
            count,
            checks,
            failures,
        } => {
            let start = Instant::now();
            let (out, written) = commands::verify(*count, checks, cli.seed, failures)?;
            eprintln!(
                "verify: {count} instances per check, seed {}, {:.2}s, {written} failure records",
                cli.seed,
                start.elapsed().as_secs_f64()
            );
            out
        }
        Command::Replay { file, verbose } => commands::replay(file, *verbose)?,
    };
    out.emit(cli.format, cli.out.as_deref())?;
    Ok(out.failure)
}

fn main() -> ExitCode {
    let cli = match args::parse_with_config(std::env::args().collect()) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("check failed: {failure}");
            ExitCode::from(3)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
