mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, OutputFormat};
use commands::{CliError, CliResult, Output};

fn run(cli: &Cli) -> CliResult<Output> {
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(CliError::input(
            "invalid_tolerance",
            format!("tolerance must be finite and non-negative, got {}", cli.tolerance),
        ));
    }
    match &cli.command {
        Command::Validate { file } => commands::validate_file(file),
        Command::CheckCp(a) => commands::check_cp(a, cli.tolerance),
        Command::ChoiSpectrum { file, invert } => commands::choi_spectrum(file, *invert),
        Command::Kraus { file } => commands::kraus(file),
        Command::Apply { channel, state } => commands::apply_channel(channel, state),
        Command::DepolarizingRange { d } => commands::depolarizing_range(*d),
        Command::UnotFidelity { d } => commands::unot(*d),
        Command::SufficientC { file } => commands::sufficient_c(file),
        Command::RayScan { channel, direction, bracket } => {
            commands::ray_scan(channel, direction, bracket)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.output {
                OutputFormat::Json => format!("{}\n", out.json),
                OutputFormat::Text => out.text,
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code, e.message.replace('\n', " "));
            ExitCode::from(e.status)
        }
    }
}
