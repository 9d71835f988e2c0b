use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use sgforest_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let status = match execute(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr.lock(), "error: {}", failure.message);
            failure.code
        }
    };
    ExitCode::from(status as u8)
}
