//! `smallball`: reproducible runner for the small-deviation library.

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::CommonArgs;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "smallball", version, about = "Small-deviation constants, simulators and Monte Carlo checks")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form constants
    Constants(commands::ConstantsArgs),
    /// Ground-state energy of −½ d²/dx² + |x|^p
    Lambda1(commands::Lambda1Args),
    /// Singular-value pairs of an antisymmetric matrix or weight sequence
    Spectral(commands::SpectralArgs),
    /// Dump one simulated path as CSV
    Simulate(commands::SimulateArgs),
    /// Small-ball probability estimates on an ε grid
    Smallball(commands::SmallballArgs),
    /// Laplace transform estimates of a clock
    Laplace(commands::LaplaceArgs),
    /// Run the acceptance suite
    Verify(commands::VerifyArgs),
    /// Illustrate the Chung-type law of the iterated logarithm for the chaos
    LilDemo(commands::LilDemoArgs),
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let settings = cli.common.resolve()?;
    if let Some(w) = settings.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot set worker count: {e}")))?;
    }
    let (report, code) = match cli.command {
        Command::Constants(a) => (commands::constants(&a)?, 0),
        Command::Lambda1(a) => (commands::lambda1(&a)?, 0),
        Command::Spectral(a) => (commands::spectral(&a, &settings)?, 0),
        Command::Simulate(a) => (commands::simulate(&a, &settings)?, 0),
        Command::Smallball(a) => (commands::smallball(&a, &settings)?, 0),
        Command::Laplace(a) => (commands::laplace(&a, &settings)?, 0),
        Command::Verify(a) => commands::verify(&a, &settings)?,
        Command::LilDemo(a) => (commands::lil_demo(&a, &settings)?, 0),
    };
    report.emit(&settings)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { error::USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
