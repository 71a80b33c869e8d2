//! `umbilic` — build, verify and tabulate the flat umbilical surface
//! families in H³×ℝ² and H³×H³.
//!
//! Exit status: 0 on success (and every check passing for `verify`),
//! 1 when a verification check fails, 2 on configuration or I/O errors.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "umbilic",
    about = "Flat umbilical surfaces in products of space forms: grid sampling, identity verification, curvature tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a family on a parameter grid (CSV; with --projection ball also
    /// an OBJ mesh of each hyperbolic factor).
    Build(config::CommonArgs),
    /// Run the residual verification suite and write a JSON report.
    Verify(config::CommonArgs),
    /// Tabulate closed-form vs numeric Frenet curvatures of the factor curves.
    Curvatures(config::CommonArgs),
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Build(args) => {
            let cfg = config::resolve(&args)?;
            commands::cmd_build(&cfg)?;
            Ok(true)
        }
        Command::Verify(args) => {
            let cfg = config::resolve(&args)?;
            commands::cmd_verify(&cfg)
        }
        Command::Curvatures(args) => {
            let cfg = config::resolve(&args)?;
            commands::cmd_curvatures(&cfg)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
