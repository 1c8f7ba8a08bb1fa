//! Reading matrices, function specs and config files. JSON errors keep the
//! line and column reported by the parser.

use std::fs;
use std::io::Read;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use nilcalc::{ExactMatrix, FunctionSpec, GaussianRational, Matrix};
use serde::Deserialize;

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A matrix file holds either `{"n": .., "entries": [[..], ..]}` or just the
/// array of rows.
pub fn read_matrix(path: &Path) -> Result<ExactMatrix> {
    let text = read_text(path)?;
    parse_matrix(&text).with_context(|| format!("matrix file {}", path.display()))
}

pub fn parse_matrix(text: &str) -> Result<ExactMatrix> {
    if text.trim_start().starts_with('[') {
        let rows: Vec<Vec<GaussianRational>> = serde_json::from_str(text)?;
        Ok(Matrix::from_rows(rows)?)
    } else {
        Ok(serde_json::from_str(text)?)
    }
}

/// Inline JSON, or `@path` to read it from a file.
pub fn parse_function(arg: &str) -> Result<FunctionSpec> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let text = read_text(Path::new(path))?;
            serde_json::from_str(&text).with_context(|| format!("function spec {path}"))
        }
        None => serde_json::from_str(arg).context("function spec"),
    }
}

pub fn parse_scalar(text: &str) -> Result<GaussianRational> {
    text.parse()
        .map_err(|e: nilcalc::Error| anyhow::anyhow!("scalar {text:?}: {e}"))
}

/// `a..b` and `a..=b` are both inclusive; a single number is a one-point range.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("range {text:?}: {s:?} is not a nonnegative integer"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("range {text:?} is empty");
    }
    Ok(lo..=hi)
}

/// Flag equivalents loaded with `--config`; command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub json: Option<bool>,
    pub seed: Option<u64>,
    pub n: Option<String>,
    pub r: Option<String>,
    pub trials: Option<usize>,
    pub t: Option<serde_json::Value>,
    pub function: Option<serde_json::Value>,
}

impl Config {
    pub fn load(path: Option<&PathBuf>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = read_text(path)?;
        serde_json::from_str(&text).with_context(|| format!("config file {}", path.display()))
    }

    /// The function spec as given in the config: an object, or a string
    /// handled like the `--function` flag.
    pub fn function(&self) -> Result<Option<FunctionSpec>> {
        match &self.function {
            None => Ok(None),
            Some(serde_json::Value::String(s)) => parse_function(s).map(Some),
            Some(v) => Ok(Some(serde_json::from_value(v.clone()).context("config function")?)),
        }
    }

    pub fn t(&self) -> Result<Option<GaussianRational>> {
        match &self.t {
            None => Ok(None),
            Some(v) => Ok(Some(serde_json::from_value(v.clone()).context("config t")?)),
        }
    }
}
