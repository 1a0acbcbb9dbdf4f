//! Flat `key = value` config files.
//!
//! Keys are long flag names without the leading dashes (`samples = 100000`).
//! Blank lines and lines starting with `#` are skipped. Values are split on
//! whitespace so multi-valued flags work (`gisin-for = 0.8 0.6`). `true`
//! turns a switch on and `false` leaves it off.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub values: Vec<String>,
}

pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", lineno + 1)));
        }
        let values = value.split_whitespace().map(str::to_string).collect();
        entries.push(Entry { key, values });
    }
    Ok(entries)
}

pub fn load(path: &Path) -> Result<Vec<Entry>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text)
}

/// Location of `--config` in `args`, as `(index, value)`.
fn find_config(args: &[OsString]) -> Option<(usize, OsString)> {
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return args.get(i + 1).map(|v| (i, v.clone()));
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some((i, OsString::from(v)));
        }
    }
    None
}

fn flag_present(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let long_eq = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == long || s.starts_with(&long_eq)
    })
}

/// Appends the config entries to the command line, skipping keys given as
/// flags. Appended arguments land after the subcommand.
pub fn inject(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some((_, path)) = find_config(&args) else {
        return Ok(args);
    };
    let entries = load(Path::new(&path))?;
    let mut out = args.clone();
    for e in entries {
        if flag_present(&args, &e.key) {
            continue;
        }
        match e.values.as_slice() {
            [v] if v == "true" => out.push(format!("--{}", e.key).into()),
            [v] if v == "false" => {}
            [] => return Err(CliError::Usage(format!("config key '{}' has no value", e.key))),
            values => {
                out.push(format!("--{}", e.key).into());
                out.extend(values.iter().map(OsString::from));
            }
        }
    }
    Ok(out)
}
