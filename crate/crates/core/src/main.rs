use std::process::ExitCode;

use clap::Parser;
use nsobolev::cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    match run(&config, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
