mod args;
mod output;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::output::{format_report, RunDocument};
use crate::run::{run, EXIT_ERROR};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    let mut doc = RunDocument::new(argv.iter().skip(1).cloned().collect());
    let text = match run(&cli) {
        Ok(outcome) => {
            doc.input = outcome.input;
            doc.results = outcome.results;
            doc.violations = outcome.violations;
            doc.exit_status = outcome.exit;
            outcome.text.into_string()
        }
        Err(e) => {
            eprintln!("error: {e}");
            doc.error = Some(e.to_string());
            doc.exit_status = EXIT_ERROR;
            String::new()
        }
    };
    let rendered = format_report(&doc, &text, cli.format);
    let _ = std::io::stdout().write_all(rendered.as_bytes());
    ExitCode::from(doc.exit_status as u8)
}
