mod args;
mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format, Output};
use commands::{CliError, Report};

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Check { input, scopes, goals, output } => commands::check(input, scopes, goals, output),
        Command::FindModel { input, scopes, output } => commands::find_model(input, scopes, output),
        Command::Enumerate { input, scope, limit, output } => commands::enumerate(input, *scope, *limit, output),
        Command::ChurchSuite { scopes, output } => commands::church_suite(scopes, output),
        Command::GoedelSuite {
            quantifiers,
            essence,
            ultrafilter,
            scopes,
            limit,
            output,
        } => commands::goedel_suite(*quantifiers, *essence, *ultrafilter, scopes, *limit, output),
        Command::CountPositive {
            input,
            entities,
            worlds,
            count,
            world,
            existing,
            limit,
            output,
        } => commands::count_positive(input, *worlds, *entities, *count, *world, *existing, *limit, output),
        Command::ExportCnf { input, scope, goal, output } => {
            commands::export_cnf(input, *scope, goal.as_deref(), output)
        }
    }
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::Check { output, .. }
        | Command::FindModel { output, .. }
        | Command::Enumerate { output, .. }
        | Command::ChurchSuite { output, .. }
        | Command::GoedelSuite { output, .. }
        | Command::CountPositive { output, .. }
        | Command::ExportCnf { output, .. } => output,
    }
}

fn emit(output: &Output, text: &str) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let output = output_of(&cli.command);
    match run(&cli) {
        Ok(report) => {
            let text = match (output.format, &report.raw) {
                (Format::Json, _) => {
                    serde_json::to_string_pretty(&report.body).expect("reports serialize") + "\n"
                }
                (Format::Text, Some(raw)) => raw.clone(),
                (Format::Text, None) => render::text(&report.body),
            };
            if let Err(e) = emit(output, &text) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(report.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
