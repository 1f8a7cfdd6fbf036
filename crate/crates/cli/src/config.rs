//! `key = value` config files whose keys mirror long flags.
//!
//! File entries become flags inserted ahead of the command-line flags. A key
//! also given on the command line is dropped, so the command line wins.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs;
use std::path::Path;

/// One `--key value` pair, or a bare `--key` for `key = true`.
fn entry_to_args(key: &str, value: &str) -> Vec<OsString> {
    match value {
        "true" => vec![format!("--{key}").into()],
        "false" => vec![],
        v => vec![format!("--{key}").into(), v.into()],
    }
}

/// Parses a config file. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", no + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.starts_with('-') || k == "config" {
            return Err(format!("line {}: bad key {k:?}", no + 1));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn long_flag_name(arg: &OsString) -> Option<String> {
    let s = arg.to_str()?;
    let name = s.strip_prefix("--")?;
    Some(name.split('=').next().unwrap_or(name).to_string())
}

/// Finds `--config <file>` among the raw arguments and splices the file's
/// entries in after the subcommand name.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        match a.to_str() {
            Some("--config") => {
                path = Some(iter.next().ok_or("--config needs a file")?);
            }
            Some(s) if s.starts_with("--config=") => path = Some(s["--config=".len()..].into()),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let path = Path::new(&path);
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let entries = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let given: HashSet<String> = rest.iter().filter_map(long_flag_name).collect();

    // rest[0] is the program, rest[1] the subcommand.
    if rest.len() < 2 {
        return Err("--config needs a subcommand".into());
    }
    let mut out: Vec<OsString> = rest[..2].to_vec();
    for (k, v) in &entries {
        if !given.contains(k) {
            out.extend(entry_to_args(k, v));
        }
    }
    out.extend(rest.into_iter().skip(2));
    Ok(out)
}
