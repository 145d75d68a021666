mod args;
mod detect;
mod lacsp;
mod mask;
mod output;
mod sumcheck;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, RunArgs};
use output::{emit, write_csv, CliError, Outcome};

fn dispatch(cli: Cli) -> Result<(Outcome, Option<RunArgs>), CliError> {
    Ok(match cli.command {
        Command::DetectSrm(a) => (detect::srm(&a)?, None),
        Command::DetectBsrs(a) => (detect::bsrs(&a)?, None),
        Command::Sumcheck(a) => (sumcheck::sumcheck(&a)?, Some(a.run)),
        Command::Sharp3sat(a) => (sumcheck::sharp3sat(&a)?, Some(a.run)),
        Command::Mask(a) => (mask::mask(&a)?, Some(a.run)),
        Command::Lacsp(a) => (lacsp::lacsp(&a)?, Some(a.run)),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = match &cli.command {
        Command::DetectSrm(a) => a.out.clone(),
        Command::DetectBsrs(a) => a.out.clone(),
        _ => None,
    };
    let (outcome, run) = dispatch(cli)?;
    let (out, csv) = match &run {
        Some(r) => (r.out.clone(), r.csv.clone()),
        None => (out, None),
    };
    emit(out.as_ref(), &outcome.report)?;
    if let (Some(path), Some(row)) = (csv, &outcome.row) {
        write_csv(&path, row)?;
    }
    if outcome.ok {
        Ok(())
    } else {
        let verdict = outcome.report.get("result").and_then(|v| v.as_str()).unwrap_or("failed");
        Err(CliError::Violation(verdict.to_string()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pzk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
