use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = bsok_cli::Cli::parse();
    ExitCode::from(bsok_cli::run(&cli))
}
