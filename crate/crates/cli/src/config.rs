//! Flag defaults from a TOML file, merged by rewriting the argument list:
//! config values are inserted right after the subcommand, so flags typed by
//! the user come later and override them.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;
use toml::{Table, Value};

use crate::cli::Cli;
use crate::CliError;

/// Path given to `--config`, found without a full parse.
pub fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

/// Subcommand path, e.g. `["verify", "oracle"]`, read from the bare words of
/// the argument list. Required flags may still be missing at this point.
fn subcommand_path(argv: &[OsString]) -> Vec<String> {
    let mut cmd = Cli::command();
    cmd.build();
    let mut path = Vec::new();
    let mut level = &cmd;
    for arg in argv.iter().skip(1) {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s.starts_with('-') {
            continue;
        }
        if let Some(sub) = level.find_subcommand(s.as_ref()) {
            path.push(sub.get_name().to_string());
            level = sub;
        }
    }
    path
}

fn render(key: &str, value: &Value) -> Result<Option<String>, CliError> {
    let scalar = |v: &Value| -> Result<String, CliError> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Integer(i) => Ok(i.to_string()),
            Value::Float(f) => Ok(f.to_string()),
            other => Err(CliError::Usage(format!("config key {key}: unsupported value {other}"))),
        }
    };
    Ok(match value {
        Value::Boolean(true) => Some(format!("--{key}")),
        Value::Boolean(false) => None,
        Value::Array(items) => {
            let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
            Some(format!("--{key}={}", parts.join(",")))
        }
        other => Some(format!("--{key}={}", scalar(other)?)),
    })
}

/// The argument list with config-file values spliced in.
pub fn merge(argv: Vec<OsString>, path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let table: Table = text
        .parse()
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;

    let sub_path = subcommand_path(&argv);
    let mut cmd = Cli::command();
    cmd.build();
    let mut target = &cmd;
    for name in &sub_path {
        target = target.find_subcommand(name).expect("parsed subcommand exists");
    }
    let known = |key: &str| {
        target.get_arguments().any(|a| a.get_long() == Some(key))
            || cmd.get_arguments().any(|a| a.get_long() == Some(key) && a.is_global_set())
    };

    let mut injected = Vec::new();
    let mut section: Option<&Table> = None;
    for (key, value) in &table {
        match value {
            Value::Table(_) => {}
            _ if key == "config" => return Err(CliError::Usage("config files cannot nest".into())),
            _ if known(key) => injected.extend(render(key, value)?),
            _ => {}
        }
    }
    // [spectrum], [verify.oracle], ...: keys must belong to that command
    let mut node = Some(&table);
    for name in &sub_path {
        node = node.and_then(|t| t.get(name)).and_then(Value::as_table);
    }
    if !sub_path.is_empty() {
        section = node;
    }
    if let Some(section) = section {
        for (key, value) in section {
            if value.is_table() {
                continue;
            }
            if !known(key) {
                return Err(CliError::Usage(format!(
                    "config key {key} is not a flag of {}",
                    sub_path.join(" ")
                )));
            }
            injected.extend(render(key, value)?);
        }
    }

    // splice right after the last subcommand token
    let mut at = 1;
    let mut remaining = sub_path.iter();
    let mut want = remaining.next();
    for (i, arg) in argv.iter().enumerate().skip(1) {
        match want {
            Some(name) if arg.to_string_lossy() == name.as_str() => {
                at = i + 1;
                want = remaining.next();
            }
            None => break,
            _ => {}
        }
    }
    let mut out = argv;
    out.splice(at..at, injected.into_iter().map(OsString::from));
    Ok(out)
}
