mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format, RunConfig};
use error::CliError;
use output::{write_svg, write_text, Table};

fn emit(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    match cfg.format {
        Format::Csv => write_text(cfg.out.as_deref(), &table.to_csv()),
        Format::Svg => {
            let plot = table.plot.as_ref().ok_or_else(|| {
                CliError::BadArgs(format!("{} has no plot; use --format csv", cfg.command))
            })?;
            let path = cfg.out.as_deref().expect("checked when parsing");
            write_svg(plot, path)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    match cfg.command {
        Command::Visibility => emit(&cfg, &commands::visibility(&cfg)?),
        Command::Lossy => emit(&cfg, &commands::lossy(&cfg)?),
        Command::Dip => emit(&cfg, &commands::dip(&cfg)?),
        Command::Classical => {
            let (table, pass) = commands::classical(&cfg)?;
            emit(&cfg, &table)?;
            if pass {
                Ok(())
            } else {
                Err(CliError::Validation(
                    "classical visibility above bound".into(),
                ))
            }
        }
        Command::Validate => {
            if cfg.format == Format::Svg {
                return Err(CliError::BadArgs(
                    "validate has no plot; use --format csv".into(),
                ));
            }
            let outcomes = commands::validate(&cfg);
            write_text(None, &commands::render_report(&outcomes))?;
            if let Some(path) = cfg.out.as_deref() {
                write_text(
                    Some(path),
                    &commands::validation_table(&cfg, &outcomes).to_csv(),
                )?;
            }
            let failed = outcomes.iter().filter(|c| !c.passed).count();
            if failed == 0 {
                Ok(())
            } else {
                Err(CliError::Validation(format!("{failed} check(s) failed")))
            }
        }
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
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
