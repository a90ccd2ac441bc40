use std::process::ExitCode;

use clap::Parser;
use gqflag::cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(report) => {
            print!("{}", report.render(config.format));
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                for c in report.failures() {
                    eprintln!("verification failed: {}: {}", c.name, c.detail);
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
