//! `--config FILE`: TOML whose keys are flag names. Top-level keys apply to
//! every subcommand, keys under `[<subcommand>]` only to that one. Values
//! are appended to the command line unless the flag is already given.

use std::fs;

use crate::UsageError;

pub const SUBCOMMANDS: [&str; 7] = ["eval", "check", "extend", "bernstein", "nabla", "decompose", "marginalize"];

fn config_path(argv: &[String]) -> Result<Option<String>, UsageError> {
    for (i, arg) in argv.iter().enumerate().skip(1) {
        if let Some(path) = arg.strip_prefix("--config=") {
            return Ok(Some(path.to_string()));
        }
        if arg == "--config" {
            return match argv.get(i + 1) {
                Some(path) => Ok(Some(path.clone())),
                None => Err(UsageError::new("--config", "a value is required for '--config <FILE>'")),
            };
        }
    }
    Ok(None)
}

fn given(argv: &[String], flag: &str) -> bool {
    argv.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

fn render(key: &str, value: &toml::Value) -> Result<Option<String>, UsageError> {
    let bad = || UsageError::new("--config", &format!("unsupported value for key '{key}'; use strings, integers, booleans or arrays of them"));
    Ok(match value {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Integer(i) => Some(i.to_string()),
        toml::Value::Boolean(_) => None,
        toml::Value::Array(items) => Some(
            items
                .iter()
                .map(|item| match item {
                    toml::Value::String(s) => Ok(s.clone()),
                    toml::Value::Integer(i) => Ok(i.to_string()),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>, _>>()?
                .join(","),
        ),
        _ => return Err(bad()),
    })
}

fn append(argv: &mut Vec<String>, table: &toml::Table) -> Result<(), UsageError> {
    for (key, value) in table {
        if value.is_table() {
            continue;
        }
        let key = key.replace('_', "-");
        if key == "config" {
            return Err(UsageError::new("--config", "a config file cannot name another config file"));
        }
        let flag = format!("--{key}");
        if given(argv, &flag) || value.as_bool() == Some(false) {
            continue;
        }
        let rendered = render(&key, value)?;
        argv.push(flag);
        argv.extend(rendered);
    }
    Ok(())
}

/// Returns `argv` with the config values appended.
pub fn inject(mut argv: Vec<String>) -> Result<Vec<String>, UsageError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| UsageError::new("--config", &format!("cannot read {path}: {e}")))?;
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| UsageError::new("--config", &format!("invalid TOML in {path}: {}", e.message())))?;
    let subcommand = argv.iter().skip(1).find(|a| SUBCOMMANDS.contains(&a.as_str())).cloned();
    if let Some(name) = &subcommand {
        if let Some(section) = table.get(name) {
            let section = section
                .as_table()
                .ok_or_else(|| UsageError::new("--config", &format!("'{name}' must be a table")))?;
            append(&mut argv, section)?;
        }
    }
    append(&mut argv, &table)?;
    Ok(argv)
}
