//! `udesign` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command, SimulateCommand};

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("UDESIGN_THREADS") {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .with_context(|| format!("UDESIGN_THREADS must be a positive integer, got '{value}'"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let output = match &cli.command {
        Command::Construct(a) => commands::construct(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Simulate(SimulateCommand::Gate(a)) => commands::simulate_gate(a)?,
        Command::Simulate(SimulateCommand::Memory(a)) => commands::simulate_memory(a)?,
        Command::Simulate(SimulateCommand::Ff(a)) => commands::simulate_ff(a)?,
        Command::Project(a) => commands::project(a)?,
        Command::Rerun(a) => commands::rerun(&a.manifest, a.out.as_deref())?,
    };
    for path in output.commit()? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}
