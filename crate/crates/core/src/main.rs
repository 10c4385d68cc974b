use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qclone::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    if let Some(msg) = &outcome.message {
        eprintln!("qclone: {msg}");
    }
    if !outcome.output.is_empty() {
        let written = match &cli.out {
            Some(path) => std::fs::write(path, &outcome.output),
            None => std::io::stdout().lock().write_all(outcome.output.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("qclone: cannot write output: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
