//! Run configuration: flags, the `GOLDLAB_WORKERS` environment variable and
//! an optional flat `key=value` file. Flags and environment win over the file.

use std::fs;
use std::path::{Path, PathBuf};

use goldlab_core::report::OutputFormat;
use goldlab_core::Limits;

use crate::CliError;

pub const WORKERS_ENV: &str = "GOLDLAB_WORKERS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub workers: usize,
    pub limits: Limits,
    pub timing: bool,
    pub inject_fault: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            format: OutputFormat::Text,
            output: None,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            limits: Limits::default(),
            timing: false,
            inject_fault: false,
        }
    }
}

/// Values present in a config file; absent keys stay `None`.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct FileConfig {
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub max_l: Option<u64>,
    pub max_sieve: Option<u64>,
    pub timing: Option<bool>,
}

pub fn parse_format(s: &str) -> Result<OutputFormat, CliError> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        "text" => Ok(OutputFormat::Text),
        other => Err(CliError::Usage(format!("unknown format '{other}'"))),
    }
}

fn positive<T: std::str::FromStr + PartialEq + From<u8>>(
    key: &str,
    v: &str,
) -> Result<T, CliError> {
    match v.parse::<T>() {
        Ok(n) if n != T::from(0) => Ok(n),
        _ => Err(CliError::Usage(format!(
            "config key '{key}' needs a positive integer, got '{v}'"
        ))),
    }
}

pub fn parse_config_file(text: &str) -> Result<FileConfig, CliError> {
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected key=value",
                lineno + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "format" => cfg.format = Some(parse_format(value)?),
            "output" => cfg.output = Some(PathBuf::from(value)),
            "workers" => cfg.workers = Some(positive(key, value)?),
            "max_l" => cfg.max_l = Some(positive(key, value)?),
            "max_sieve" => cfg.max_sieve = Some(positive(key, value)?),
            "timing" => {
                cfg.timing = Some(value.parse().map_err(|_| {
                    CliError::Usage(format!(
                        "config key 'timing' needs true or false, got '{value}'"
                    ))
                })?)
            }
            other => {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}

pub fn load_config_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Resource(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text)
}
