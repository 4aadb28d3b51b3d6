mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

use args::{Cli, Command};

const EXIT_IO: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Internal(String),
}

impl From<entopo::Error> for CliError {
    fn from(e: entopo::Error) -> Self {
        use entopo::Error::*;
        match e {
            Domain(_) | Validation(_) | Config(_) | Json(_) => CliError::Usage(e.to_string()),
            Io(_) => CliError::Io(e.to_string()),
            Unphysical(_) | Consistency(_) => CliError::Internal(e.to_string()),
        }
    }
}

/// Turn a JSON config object into flag tokens.
fn config_tokens(path: &std::path::Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::Usage(format!(
            "config {} must be a JSON object",
            path.display()
        )));
    };
    let mut out = Vec::new();
    for (key, v) in map {
        let flag = OsString::from(format!("--{key}"));
        match v {
            Value::Bool(true) => out.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => out.extend([flag, n.to_string().into()]),
            Value::String(s) => out.extend([flag, s.into()]),
            Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                out.extend([flag, parts.join(",").into()]);
            }
            Value::Object(_) => {
                return Err(CliError::Usage(format!(
                    "config key {key:?} must not be an object"
                )))
            }
        }
    }
    Ok(out)
}

/// Splice config-file flags in right after the subcommand so that flags
/// given on the command line, which come later, override them.
fn merged_args(raw: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut config = None;
    let mut i = 1;
    while i < raw.len() {
        let s = raw[i].to_string_lossy();
        if s == "--config" {
            config = raw.get(i + 1).cloned();
            break;
        }
        if let Some(p) = s.strip_prefix("--config=") {
            config = Some(p.into());
            break;
        }
        i += 1;
    }
    let Some(config) = config else { return Ok(raw) };
    let tokens = config_tokens(std::path::Path::new(&config))?;
    let sub = raw
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 2)
        .unwrap_or(raw.len());
    // Positional arguments of the subcommand must precede the spliced flags.
    let positionals = raw[sub..]
        .iter()
        .take_while(|a| !a.to_string_lossy().starts_with("--"))
        .count();
    let at = sub + positionals;
    let mut out = raw[..at].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&raw[at..]);
    Ok(out)
}

fn run(cli: &Cli, command_line: &str) -> Result<(), CliError> {
    match &cli.command {
        Command::Volumes(a) => commands::volumes_cmd(a, command_line),
        Command::Histogram(a) => commands::histogram_cmd(a, command_line),
        Command::Section(a) => commands::section_cmd(a, command_line),
        Command::Table1(a) => commands::table1_cmd(a, command_line),
        Command::Trajectory(a) => commands::trajectory_cmd(a, command_line),
        Command::Classify(a) => commands::classify_cmd(a, command_line),
        Command::Critical(a) => commands::critical_cmd(a, command_line),
        Command::Concurrence(a) => commands::concurrence_cmd(a, command_line),
    }
}

fn main() -> ExitCode {
    let raw: Vec<OsString> = std::env::args_os().collect();
    let command_line = std::iter::once("entopo".to_string())
        .chain(raw.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    let result = merged_args(raw).and_then(|args| {
        Cli::try_parse_from(args).map_err(|e| match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                let _ = e.print();
                std::process::exit(
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE as i32
                    } else {
                        0
                    },
                );
            }
            _ => CliError::Usage(e.render().to_string()),
        })
    });
    let result = result.and_then(|cli| run(&cli, &command_line));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("{}", m.trim_end());
            if !m.contains("Usage:") {
                eprintln!("Try 'entopo --help' for usage.");
            }
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Io(m)) => {
            eprintln!("I/O error: {m}");
            ExitCode::from(EXIT_IO)
        }
        Err(CliError::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
