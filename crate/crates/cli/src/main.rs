use std::fs;
use std::process::ExitCode;

use clap::Parser;
use fell_cli::{run, CliError, RunConfig};

fn execute(config: &RunConfig) -> Result<bool, CliError> {
    let outcome = run(config)?;
    let text = outcome.render(config.format)?;
    match &config.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => print!("{text}"),
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match execute(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("fell: some checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("fell: {e}");
            ExitCode::from(2)
        }
    }
}
