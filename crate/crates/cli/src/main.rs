use anyhow::Context;
use clap::Parser;
use hspec_cli::output::{to_csv, to_json, RunOutput};
use hspec_cli::{error_code, exit_code, Cli, Format, EXIT_USAGE};
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

fn write_out(path: &str, text: &str) -> anyhow::Result<()> {
    if path == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes()).context("writing report to standard output")?;
        stdout.flush().context("flushing standard output")?;
    } else {
        std::fs::write(path, text).with_context(|| format!("writing report to {path}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut reports = match cli.command.run() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hspec {}: {e}", cli.command.name());
            return ExitCode::from(error_code(&e));
        }
    };
    let mut runtime_ms = start.elapsed().as_millis() as u64;
    if !cli.timing {
        runtime_ms = 0;
        for r in &mut reports {
            r.runtime_ms = 0;
        }
    }
    let params = cli.command.params();
    let run = RunOutput {
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        params: &params,
        results: &reports,
        runtime_ms,
    };
    let text = match cli.format {
        Format::Json => to_json(&run),
        Format::Csv => match to_csv(&run) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("hspec: formatting csv: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
    };
    if let Err(e) = write_out(&cli.out, &text) {
        eprintln!("hspec: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(exit_code(&reports))
}
