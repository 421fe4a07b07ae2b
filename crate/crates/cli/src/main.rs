use std::process::ExitCode;

use clap::Parser;

use polyuct_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((report, out)) => {
            if let Err(e) = emit(&report.text, out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            if report.has_errors {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
