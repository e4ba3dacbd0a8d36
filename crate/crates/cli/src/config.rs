//! Run configuration for `entroflow cycle`.
//!
//! Two encodings are accepted. A file whose first non-blank character is `{`
//! is read as JSON; anything else as flat `key = value` lines, with `#`
//! starting a comment. Keys:
//!
//! | key                 | value                                   | default     |
//! |---------------------|-----------------------------------------|-------------|
//! | `dims`              | comma-separated part dimensions         | required    |
//! | `cycles`            | measurement events, at least 2          | 20          |
//! | `dt`                | evolution time between events           | 1.0         |
//! | `local_strength`    | scale of the per-part terms             | 1.0         |
//! | `coupling_strength` | scale of the global term                | 1.0         |
//! | `k_b`               | Boltzmann constant                      | 1.0         |
//! | `seed`              | base seed                               | env / 0     |
//! | `initial_state`     | `pure`, `mixed` or `explicit`           | `pure`      |
//! | `rank`              | rank for `mixed`                        | 2           |
//! | `state_re`          | explicit real part, rows split by `;`   |             |
//! | `state_im`          | explicit imaginary part, same layout    | zeros       |
//! | `fixed_hamiltonian` | `true` reuses one Hamiltonian           | false       |
//! | `output`            | output path                             | stdout      |
//! | `format`            | `csv` or `json`                         | `csv`       |
//! | `trials`            | independent runs, seeded by trial index | 1           |
//!
//! JSON uses the same keys; `dims` is an array and `state_re`/`state_im`
//! are arrays of rows.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use entroflow_core::composite::Partition;
use entroflow_core::dynamics::{CycleConfig, InitialState};
use entroflow_core::linalg::ComplexMatrix;
use entroflow_core::rng::RngSeed;
use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected `csv` or `json`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config")?;
        if let Some(line) = self.line {
            write!(f, " line {line}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " field `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        Self {
            line: None,
            field: Some(field.to_string()),
            message: message.into(),
        }
    }

    fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cycle: CycleConfig,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub trials: usize,
}

impl RunConfig {
    /// Seeds for each trial; trial 0 uses the base seed unchanged.
    pub fn trial_seeds(&self) -> Vec<RngSeed> {
        (0..self.trials as u64)
            .map(|k| RngSeed::with_stream(self.cycle.seed.seed, self.cycle.seed.stream + k))
            .collect()
    }
}

/// Raw values as read from either encoding, before validation.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dims: Option<Vec<usize>>,
    cycles: Option<usize>,
    dt: Option<f64>,
    local_strength: Option<f64>,
    coupling_strength: Option<f64>,
    k_b: Option<f64>,
    seed: Option<u64>,
    initial_state: Option<String>,
    rank: Option<usize>,
    state_re: Option<Vec<Vec<f64>>>,
    state_im: Option<Vec<Vec<f64>>>,
    fixed_hamiltonian: Option<bool>,
    output: Option<PathBuf>,
    format: Option<String>,
    trials: Option<usize>,
}

/// Parses a configuration. `default_seed` applies when the file sets none.
pub fn parse_config(text: &str, default_seed: u64) -> Result<RunConfig, ConfigError> {
    let raw = if text.trim_start().starts_with('{') {
        parse_json(text)?
    } else {
        parse_key_values(text)?
    };
    build(raw, default_seed)
}

fn parse_json(text: &str) -> Result<RawConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError {
        line: Some(e.line()),
        field: None,
        message: e.to_string(),
    })
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| ConfigError::field(key, format!("cannot parse `{value}`: {e}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    value.split(',').map(|v| parse_value(key, v.trim())).collect()
}

fn parse_rows(key: &str, value: &str) -> Result<Vec<Vec<f64>>, ConfigError> {
    value.split(';').map(|row| parse_list(key, row.trim())).collect()
}

fn parse_key_values(text: &str) -> Result<RawConfig, ConfigError> {
    let mut raw = RawConfig::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError {
                line: Some(lineno),
                field: None,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if let Some(first) = seen.insert(key.to_string(), lineno) {
            return Err(ConfigError::field(key, format!("duplicate key, first set on line {first}")).at_line(lineno));
        }
        let r: Result<(), ConfigError> = (|| {
            match key {
                "dims" => raw.dims = Some(parse_list(key, value)?),
                "cycles" => raw.cycles = Some(parse_value(key, value)?),
                "dt" => raw.dt = Some(parse_value(key, value)?),
                "local_strength" => raw.local_strength = Some(parse_value(key, value)?),
                "coupling_strength" => raw.coupling_strength = Some(parse_value(key, value)?),
                "k_b" => raw.k_b = Some(parse_value(key, value)?),
                "seed" => raw.seed = Some(parse_value(key, value)?),
                "initial_state" => raw.initial_state = Some(value.to_string()),
                "rank" => raw.rank = Some(parse_value(key, value)?),
                "state_re" => raw.state_re = Some(parse_rows(key, value)?),
                "state_im" => raw.state_im = Some(parse_rows(key, value)?),
                "fixed_hamiltonian" => raw.fixed_hamiltonian = Some(parse_value(key, value)?),
                "output" => raw.output = Some(PathBuf::from(value)),
                "format" => raw.format = Some(value.to_string()),
                "trials" => raw.trials = Some(parse_value(key, value)?),
                _ => return Err(ConfigError::field(key, "unknown key")),
            }
            Ok(())
        })();
        r.map_err(|e| e.at_line(lineno))?;
    }
    Ok(raw)
}

fn explicit_matrix(re: Vec<Vec<f64>>, im: Option<Vec<Vec<f64>>>) -> Result<ComplexMatrix, ConfigError> {
    let n = re.len();
    if re.iter().any(|row| row.len() != n) {
        return Err(ConfigError::field("state_re", format!("expected {n} rows of {n} entries")));
    }
    let im = im.unwrap_or_else(|| vec![vec![0.0; n]; n]);
    if im.len() != n || im.iter().any(|row| row.len() != n) {
        return Err(ConfigError::field("state_im", format!("expected {n} rows of {n} entries")));
    }
    let data: Vec<Complex64> = re
        .iter()
        .flatten()
        .zip(im.iter().flatten())
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    ComplexMatrix::new(n, n, data).map_err(|e| ConfigError::field("state_re", e.to_string()))
}

fn build(raw: RawConfig, default_seed: u64) -> Result<RunConfig, ConfigError> {
    let dims = raw.dims.ok_or_else(|| ConfigError::field("dims", "missing required key"))?;
    let partition = Partition::new(dims).map_err(|e| ConfigError::field("dims", e.to_string()))?;

    let initial_state = match raw.initial_state.as_deref().unwrap_or("pure") {
        "pure" => InitialState::PureRandom,
        "mixed" => InitialState::MixedRandom { rank: raw.rank.unwrap_or(2) },
        "explicit" => {
            let re = raw
                .state_re
                .ok_or_else(|| ConfigError::field("state_re", "required when initial_state = explicit"))?;
            InitialState::Explicit(explicit_matrix(re, raw.state_im)?)
        }
        other => {
            return Err(ConfigError::field(
                "initial_state",
                format!("expected `pure`, `mixed` or `explicit`, got `{other}`"),
            ))
        }
    };

    let mut cycle = CycleConfig::new(partition, RngSeed::new(raw.seed.unwrap_or(default_seed)));
    cycle.initial_state = initial_state;
    if let Some(c) = raw.cycles {
        cycle.cycles = c;
    }
    if let Some(v) = raw.dt {
        cycle.dt = v;
    }
    if let Some(v) = raw.local_strength {
        cycle.local_strength = v;
    }
    if let Some(v) = raw.coupling_strength {
        cycle.coupling_strength = v;
    }
    if let Some(v) = raw.k_b {
        cycle.k_b = v;
    }
    if let Some(v) = raw.fixed_hamiltonian {
        cycle.fixed_hamiltonian = v;
    }
    if cycle.cycles < 2 {
        return Err(ConfigError::field("cycles", "at least 2 measurement events are needed"));
    }
    cycle.validate().map_err(|e| ConfigError {
        line: None,
        field: None,
        message: e.to_string(),
    })?;

    let format = match raw.format {
        Some(f) => f.parse().map_err(|e: String| ConfigError::field("format", e))?,
        None => Format::Csv,
    };
    let trials = raw.trials.unwrap_or(1);
    if trials == 0 {
        return Err(ConfigError::field("trials", "must be at least 1"));
    }
    Ok(RunConfig {
        cycle,
        output: raw.output,
        format,
        trials,
    })
}
