mod args;
mod commands;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, RunConfig};
use error::CliError;

type Handler = fn(&RunConfig) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (flags, cmd): (_, Handler) = match &cli.command {
        Command::DeriveKraus(f) => (f, commands::derive_kraus_cmd),
        Command::Weights(f) => (f, commands::weights_cmd),
        Command::Surface(f) => (f, commands::surface_cmd),
        Command::Nash(f) => (f, commands::nash_cmd),
        Command::ReproduceFigures(f) => (f, commands::reproduce_figures_cmd),
    };
    let cfg = RunConfig::resolve(flags)?;
    cmd(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.to_exit()
        }
    }
}
