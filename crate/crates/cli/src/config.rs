//! `--config` files: one `key=value` per line, `#` comments. Each key names a
//! long flag of the selected subcommand; `true`/`false` toggle switches.

use std::fs;

use crate::error::CliError;

/// Appends `--key=value` for every file entry whose flag is absent from `argv`.
pub fn splice(mut argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let given: Vec<String> = argv.iter().filter_map(|a| flag_name(a)).collect();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| CliError::Usage(format!("{path}:{}: expected `key=value`", k + 1)))?;
        if key.is_empty() {
            return Err(CliError::Usage(format!("{path}:{}: empty key", k + 1)));
        }
        if key == "config" || given.iter().any(|g| g == key) {
            continue;
        }
        match value {
            "true" => argv.push(format!("--{key}")),
            "false" => {}
            v => argv.push(format!("--{key}={v}")),
        }
    }
    Ok(argv)
}

fn flag_name(arg: &str) -> Option<String> {
    // `-o` is the only short flag.
    if arg == "-o" || (arg.starts_with("-o") && !arg.starts_with("--")) {
        return Some("output".into());
    }
    let rest = arg.strip_prefix("--")?;
    let name = rest.split_once('=').map_or(rest, |(k, _)| k);
    (!name.is_empty()).then(|| name.to_string())
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}
