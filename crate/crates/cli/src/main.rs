use std::process::ExitCode;

use clap::Parser;
use swapchain_cli::{run, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match RunConfig::from_cli(cli).and_then(|config| run(&config)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("swapchain: verification failed");
            ExitCode::from(1)
        }
        Err(e @ CliError::Config(_)) | Err(e @ CliError::Core(_)) => {
            eprintln!("swapchain: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("swapchain: {e}");
            ExitCode::from(1)
        }
    }
}
