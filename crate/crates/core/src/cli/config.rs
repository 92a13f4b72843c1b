//! `key = value` preset files merged into the argument list.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Command;

use crate::error::{Error, Result};

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn given(argv: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    argv.iter().any(|a| {
        let a = a.to_string_lossy();
        a == flag || a.starts_with(&prefix)
    })
}

fn as_flag(key: &str, value: &str, takes_value: bool) -> Result<Option<OsString>> {
    if takes_value {
        return Ok(Some(format!("--{key}={value}").into()));
    }
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(Some(format!("--{key}").into())),
        "false" | "no" | "0" | "off" => Ok(None),
        _ => Err(Error::Config(format!("`{key}` expects a boolean, got `{value}`"))),
    }
}

/// Inserts preset values for flags the user did not pass. Keys meant for
/// other subcommands are ignored; keys no subcommand knows are rejected.
pub fn merge_config(
    cmd: &Command,
    argv: &[OsString],
    subcommand: &str,
    entries: &[(String, String)],
) -> Result<Vec<OsString>> {
    let sub = cmd
        .find_subcommand(subcommand)
        .ok_or_else(|| Error::Config(format!("unknown subcommand {subcommand}")))?;
    let pos = argv
        .iter()
        .skip(1)
        .position(|a| a.to_str() == Some(subcommand))
        .map(|p| p + 1)
        .ok_or_else(|| Error::Config("subcommand not found in arguments".into()))?;

    let mut global = Vec::new();
    let mut local = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            return Err(Error::Config("config files cannot include other config files".into()));
        }
        if given(argv, key) {
            continue;
        }
        let find = |c: &Command| c.get_arguments().find(|a| a.get_long() == Some(key.as_str())).cloned();
        if let Some(arg) = find(cmd) {
            global.extend(as_flag(key, value, arg.get_action().takes_values())?);
        } else if let Some(arg) = find(sub) {
            local.extend(as_flag(key, value, arg.get_action().takes_values())?);
        } else if !cmd.get_subcommands().any(|c| find(c).is_some()) {
            return Err(Error::Config(format!("unknown config key `{key}`")));
        }
    }

    let mut out = vec![argv[0].clone()];
    out.extend(global);
    out.extend_from_slice(&argv[1..=pos]);
    out.extend(local);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}

/// Finds `--config` and the subcommand name without a full parse, so that
/// presets can supply required flags.
pub fn prescan(cmd: &Command, argv: &[OsString]) -> (Option<PathBuf>, Option<String>) {
    let mut config = None;
    let mut subcommand = None;
    let mut args = argv.iter().skip(1);
    while let Some(a) = args.next() {
        let a = a.to_string_lossy();
        if let Some(path) = a.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
        } else if a == "--config" {
            config = args.next().map(PathBuf::from);
        } else if a == "--" {
            break;
        } else if a.starts_with('-') {
            let long = a.trim_start_matches('-');
            let takes_value = !long.contains('=')
                && cmd
                    .get_arguments()
                    .any(|g| g.get_long() == Some(long) && g.get_action().takes_values());
            if takes_value && subcommand.is_none() {
                args.next();
            }
        } else if subcommand.is_none() && cmd.find_subcommand(a.as_ref()).is_some() {
            subcommand = Some(a.into_owned());
        }
    }
    (config, subcommand)
}
