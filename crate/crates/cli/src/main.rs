//! `vibstring`: command-line front end for the spectral toolkit.
//!
//! Exit codes: 0 success, 2 invalid input, 3 condition not satisfied,
//! 4 solver failure, 5 I/O failure, 6 boundary pair on the zero curve.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use vibstring::Error;

use commands::{Context, Report};
use config::{Cli, Command};

const EXIT_DOMAIN: u8 = 2;
const EXIT_UNSATISFIED: u8 = 3;
const EXIT_SOLVER: u8 = 4;
const EXIT_IO: u8 = 5;
const EXIT_CURVE: u8 = 6;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::Domain(_) | Error::Precondition(_) | Error::Usage(_) => EXIT_DOMAIN,
        Error::Integration { .. } | Error::Localization { .. } => EXIT_SOLVER,
        Error::CurveExcluded { .. } => EXIT_CURVE,
    }
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), Error> {
    let (common, command) = config::resolve(cli)?;
    if let Some(jobs) = common.jobs {
        if jobs == 0 {
            return Err(Error::Usage("`--jobs` must be positive".into()));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let ctx = Context { common };
    let report = match &command {
        Command::Spectrum(a) => commands::spectrum(&ctx, a),
        Command::Signmap(a) => commands::signmap(&ctx, a),
        Command::Curve(a) => commands::curve(&ctx, a),
        Command::Bounds(a) => commands::bounds(&ctx, a),
        Command::Check(a) => commands::check(&ctx, a),
        Command::Liouville(a) => commands::liouville(&ctx, a),
        Command::Trace(a) => commands::trace(&ctx, a),
    }?;
    Ok((report, ctx.common.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, out) = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match out {
        Some(path) => std::fs::write(&path, &report.body).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(report.body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: cannot write output: {msg}");
        return ExitCode::from(EXIT_IO);
    }
    if report.unsatisfied {
        eprintln!("condition not satisfied");
        return ExitCode::from(EXIT_UNSATISFIED);
    }
    ExitCode::SUCCESS
}
