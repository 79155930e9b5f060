//! Merges a JSON config file into the command line. Flags given on the command line win;
//! every other key becomes `--key value`.

use std::fs;

use serde_json::Value;

pub const SUBCOMMANDS: &[&str] = &[
    "primes",
    "symbol",
    "lfun",
    "rh-check",
    "moments",
    "charsums",
    "circle-moment",
    "verify",
];

/// Returns the argument list with config keys appended, or an error message.
pub fn merge(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("invalid config {path}: {e}"))?;
    let Value::Object(map) = value else {
        return Err(format!("config {path} must be a JSON object"));
    };
    let mut out = args;
    let has_sub = out.iter().skip(1).any(|a| SUBCOMMANDS.contains(&a.as_str()));
    if !has_sub {
        match map.get("command") {
            Some(Value::String(c)) => out.insert(1.min(out.len()), c.clone()),
            _ => return Err("no subcommand given on the command line or in the config".into()),
        }
    }
    for (key, v) in &map {
        if key == "command" || key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let present = out
            .iter()
            .any(|a| a == &flag || a.starts_with(&format!("{flag}=")));
        if present {
            continue;
        }
        match v {
            Value::Bool(true) => out.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                out.push(flag);
                out.push(items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?.join(","));
            }
            other => {
                out.push(flag);
                out.push(scalar(other)?);
            }
        }
    }
    Ok(out)
}

fn scalar(v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        other => Err(format!("unsupported config value {other}")),
    }
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
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

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn cli_flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"command": "lfun", "q": 5, "g": 2, "all": true, "a": [1, 1]}"#).unwrap();
        let p = path.to_str().unwrap();
        let merged = merge(args(&["quadlab", "--config", p, "--q", "3"])).unwrap();
        assert!(merged.contains(&"lfun".to_string()));
        let qs: Vec<_> = merged.iter().filter(|a| *a == "--q").collect();
        assert_eq!(qs.len(), 1);
        assert!(merged.windows(2).any(|w| w[0] == "--g" && w[1] == "2"));
        assert!(merged.windows(2).any(|w| w[0] == "--a" && w[1] == "1,1"));
        assert!(merged.contains(&"--all".to_string()));
    }
}
