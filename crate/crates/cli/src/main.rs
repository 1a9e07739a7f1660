use std::io::Write;
use std::process::ExitCode;

use bnvar_cli::args::{Cli, Format};
use bnvar_cli::{execute, EXIT_OK, EXIT_USAGE};
use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                emit(&e.to_string());
                return ExitCode::from(EXIT_OK as u8);
            }
            // clap renders a multi-line message; keep its first line.
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let echo = argv.into_iter().skip(1).collect();
    match execute(&cli.command, echo) {
        Ok(report) => {
            match cli.format {
                Format::Json => emit(&(report.to_json() + "\n")),
                Format::Text => emit(&report.to_text()),
            }
            if report.exit_status != EXIT_OK {
                eprintln!("error[invalid-network]: network failed validation");
            }
            ExitCode::from(report.exit_status as u8)
        }
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe (`bnvar ... | head`).
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}
