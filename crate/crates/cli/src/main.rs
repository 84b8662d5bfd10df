mod args;
mod boundary;
mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::Output;
use input::Failure;

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn write_out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit_error(f: &Failure) -> ExitCode {
    let text = serde_json::to_string_pretty(&f.body).expect("error objects serialize");
    write_out(&format!("{text}\n"));
    ExitCode::from(f.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            return emit_error(&Failure::input("UsageError", first, None));
        }
    };
    match commands::run(&cli) {
        Ok(Output::Json(v)) => {
            let text = serde_json::to_string_pretty(&v).expect("values serialize");
            write_out(&format!("{text}\n"));
            ExitCode::SUCCESS
        }
        Ok(Output::Csv(text)) => {
            write_out(&text);
            ExitCode::SUCCESS
        }
        Err(f) => emit_error(&f),
    }
}
