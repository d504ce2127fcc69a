use std::path::PathBuf;
use std::process::ExitCode;

use bo_cli::{describe, run, CliError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bo", version, about = "Benjamin-Ono experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Print the config schema and output columns of an experiment kind.
    Describe { kind: String },
}

fn report(e: &CliError) -> ExitCode {
    eprintln!("bo: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config } => match run(&config) {
            Ok(out) => {
                println!("wrote {} files to {}", out.outputs.len() + 1, out.output_dir.display());
                ExitCode::SUCCESS
            }
            Err(e) => report(&e),
        },
        Command::Describe { kind } => match describe(&kind) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => report(&e),
        },
    }
}
