mod args;
mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::Parser;
use serde_json::json;

use args::Cli;

/// A malformed invocation: exit status 2.
#[derive(Debug)]
pub struct UsageError {
    pub flag: Option<String>,
    pub message: String,
}

impl UsageError {
    pub fn new(flag: &str, message: &str) -> Self {
        Self { flag: Some(flag.to_string()), message: message.to_string() }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(UsageError),
    Domain(uli_core::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<uli_core::Error> for Failure {
    fn from(e: uli_core::Error) -> Self {
        Failure::Domain(e)
    }
}

fn emit(value: &serde_json::Value) {
    let mut out = std::io::stdout().lock();
    // A closed pipe leaves nothing useful to do.
    let _ = writeln!(out, "{value}");
}

fn usage(e: UsageError) -> ExitCode {
    emit(&json!({"error": "usage", "flag": e.flag, "message": e.message}));
    ExitCode::from(2)
}

/// The flag clap complains about, as it appears on the command line.
fn offending_flag(e: &clap::Error) -> Option<String> {
    let arg = match e.get(ContextKind::InvalidArg).or_else(|| e.get(ContextKind::InvalidSubcommand)) {
        Some(ContextValue::String(s)) => s.clone(),
        Some(ContextValue::Strings(v)) => v.first()?.clone(),
        _ => return None,
    };
    let token = arg.trim_start_matches(['<', '[']).split_whitespace().next()?.to_string();
    Some(token)
}

fn clap_failure(e: clap::Error) -> ExitCode {
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = e.print();
            ExitCode::SUCCESS
        }
        ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand | ErrorKind::MissingSubcommand => {
            usage(UsageError { flag: None, message: "a subcommand is required".into() })
        }
        ErrorKind::MissingRequiredArgument => {
            let missing = match e.get(ContextKind::InvalidArg) {
                Some(ContextValue::Strings(v)) => v.join(", "),
                Some(ContextValue::String(s)) => s.clone(),
                _ => String::new(),
            };
            usage(UsageError { flag: offending_flag(&e), message: format!("missing required arguments: {missing}") })
        }
        _ => {
            let rendered = e.to_string();
            let message = rendered.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            usage(UsageError { flag: offending_flag(&e), message })
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args_os().map(|a| a.to_string_lossy().into_owned()).collect();
    let argv = match config::inject(argv) {
        Ok(argv) => argv,
        Err(e) => return usage(e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => return clap_failure(e),
    };
    match commands::run(cli.command) {
        Ok(value) => {
            emit(&value);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(e)) => usage(e),
        Err(Failure::Domain(e)) => {
            emit(&json!({"error": "domain", "kind": e.kind(), "message": e.to_string()}));
            ExitCode::from(1)
        }
    }
}
