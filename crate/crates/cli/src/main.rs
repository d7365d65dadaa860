//! `tomosym`: tomograms, reconstruction, star products, channels, simplex
//! images and entropies from the command line.

mod commands;
mod error;
mod output;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    ChannelArgs, EntropyArgs, EvolveArgs, PeresArgs, ReconstructArgs, Run, SimplexArgs, StarArgs, TomogramArgs,
};
use error::{usage, CliResult};

#[derive(Parser, Debug)]
#[command(name = "tomosym", version, about = "Tomographic operator symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure a state: w(m, u) on spin-grid, Haar or listed frames.
    Tomogram(TomogramArgs),
    /// Recover the operator from a tomogram, or round-trip a state.
    Reconstruct(ReconstructArgs),
    /// Star product of two spin symbols.
    Star(StarArgs),
    /// Qubit channel sweeps, or a channel applied to a state.
    Channel(ChannelArgs),
    /// Sample the image of a state in the probability simplex.
    SimplexImage(SimplexArgs),
    /// Symbol entropies minimized over frames.
    Entropy(EntropyArgs),
    /// Tomographic partial-transpose scan.
    Peres(PeresArgs),
    /// Evolve a tomogram under a Hamiltonian.
    Evolve(EvolveArgs),
}

impl Command {
    fn runner(&self) -> &dyn Run {
        match self {
            Command::Tomogram(a) => a,
            Command::Reconstruct(a) => a,
            Command::Star(a) => a,
            Command::Channel(a) => a,
            Command::SimplexImage(a) => a,
            Command::Entropy(a) => a,
            Command::Peres(a) => a,
            Command::Evolve(a) => a,
        }
    }
}

fn execute(cmd: &dyn Run) -> CliResult<()> {
    let out = cmd.common().out.as_deref();
    if let Some(path) = out {
        check_output_dir(path)?;
    }
    let report = cmd.run()?;
    output::emit(&report, out)
}

fn check_output_dir(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(d) if !d.as_os_str().is_empty() && !d.is_dir() => {
            usage(format!("output directory {} does not exist", d.display()))
        }
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command.runner()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
