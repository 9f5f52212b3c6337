//! Config resolution: defaults < flat key=value config file < flags.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::Failure;

/// Key=value pairs loaded from a config file. Every key must be consumed;
/// leftovers are usage errors.
pub struct FileCfg {
    values: HashMap<String, String>,
}

impl FileCfg {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let mut values = HashMap::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", p.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    Failure::Usage(format!("config line {}: expected key=value", lineno + 1))
                })?;
                values.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(FileCfg { values })
    }

    /// Removes and parses a key, if present.
    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.remove(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| Failure::Usage(format!("config key {key}: {e}"))),
        }
    }

    pub fn take_string(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    /// Rejects unknown keys.
    pub fn finish(self) -> Result<(), Failure> {
        if self.values.is_empty() {
            Ok(())
        } else {
            let mut keys: Vec<&String> = self.values.keys().collect();
            keys.sort();
            Err(Failure::Usage(format!(
                "unknown config keys: {}",
                keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(", ")
            )))
        }
    }
}

/// flag > file > default
pub fn resolve<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// flag > file, no default
pub fn resolve_opt<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Output directory: flag, else the environment override, else `./out`.
pub fn out_dir(flag: Option<PathBuf>, file: Option<String>) -> PathBuf {
    flag.or(file.map(PathBuf::from))
        .or_else(|| std::env::var_os("INERTIAL_RESTART_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

/// Parses a comma-separated lambda list. Accepts plain floats, numeric
/// fractions `p/q`, and the symbolic forms `1/4a`, `1/2a` (any `p/qa`),
/// which resolve against `alpha`.
pub fn parse_lambda_list(text: &str, alpha: f64) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|tok| parse_lambda(tok.trim(), alpha))
        .collect()
}

fn parse_lambda(tok: &str, alpha: f64) -> Result<f64, Failure> {
    if tok.is_empty() {
        return Err(Failure::Usage("empty lambda entry".into()));
    }
    if let Some(stripped) = tok.strip_suffix('a') {
        if let Some((num, den)) = stripped.split_once('/') {
            let num: f64 = num
                .parse()
                .map_err(|_| Failure::Usage(format!("bad lambda token '{tok}'")))?;
            let den: f64 = den
                .parse()
                .map_err(|_| Failure::Usage(format!("bad lambda token '{tok}'")))?;
            return Ok(num / (den * alpha));
        }
        return Err(Failure::Usage(format!("bad lambda token '{tok}'")));
    }
    if let Some((num, den)) = tok.split_once('/') {
        let num: f64 = num
            .parse()
            .map_err(|_| Failure::Usage(format!("bad lambda token '{tok}'")))?;
        let den: f64 = den
            .parse()
            .map_err(|_| Failure::Usage(format!("bad lambda token '{tok}'")))?;
        return Ok(num / den);
    }
    tok.parse()
        .map_err(|_| Failure::Usage(format!("bad lambda token '{tok}'")))
}

/// Short label for file names: lambda with dots stripped.
pub fn lambda_label(lambda: f64) -> String {
    format!("{lambda:.6}").replace('.', "p")
}
