use std::io::Write;
use std::process::ExitCode;

use aps_eta_cli::{run, write_atomically, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let (kind, flags) = Cli::parse().command.split();
    let outcome = run(kind, &flags);
    let written = match &flags.output {
        Some(path) => write_atomically(path, &outcome.document),
        None => std::io::stdout().lock().write_all(outcome.document.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("aps-eta: cannot write report: {e}");
        return ExitCode::from(1);
    }
    for message in &outcome.messages {
        eprintln!("aps-eta: {message}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
