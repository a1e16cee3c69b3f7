//! Sweep configuration: JSON file, command-line flags, validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("unknown figure {0:?}; expected one of 2, 3a, 3b, 4a, 4b, 5, 6, 7a, 7b, all")]
    UnknownFigure(String),
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// A uniform grid `lo, …, hi` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Grid {
    pub fn validate(&self, field: &str) -> Result<(), ConfigError> {
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(field_error(field, "bounds must be finite"));
        }
        if self.count < 2 {
            return Err(field_error(
                format!("{field}.count"),
                format!("need at least 2 points, got {}", self.count),
            ));
        }
        if !(self.lo < self.hi) {
            return Err(field_error(
                field,
                format!("lo = {} must be below hi = {}", self.lo, self.hi),
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * (i as f64) / last
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    /// `lo:hi:count`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:count, got {s:?}"));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Grid {
            lo: num(parts[0])?,
            hi: num(parts[1])?,
            count: parts[2]
                .trim()
                .parse()
                .map_err(|e| format!("{:?}: {e}", parts[2]))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    #[value(name = "t_tot")]
    TTot,
    #[value(name = "t_e")]
    TE,
    #[value(name = "t_o")]
    TO,
    R,
    #[value(name = "f_e")]
    FE,
    #[value(name = "f_o")]
    FO,
    G1d,
    Cir,
}

pub fn default_outputs() -> Vec<Output> {
    vec![Output::TTot, Output::TE, Output::TO, Output::R]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// A single value or a list of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalars {
    One(f64),
    Many(Vec<f64>),
}

impl Scalars {
    fn into_vec(self) -> Vec<f64> {
        match self {
            Scalars::One(x) => vec![x],
            Scalars::Many(v) => v,
        }
    }
}

/// Config as read from a file or flags; every field optional until merged.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub ka_perp: Option<Scalars>,
    pub a_half_sep: Option<Scalars>,
    pub ratio_range: Option<Grid>,
    pub outputs: Option<Vec<Output>>,
    pub format: Option<Format>,
    pub tolerance: Option<f64>,
}

/// A validated sweep over `ka⊥ × a × a⊥/a₃D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub ka_perp: Vec<f64>,
    pub a_half_sep: Vec<f64>,
    pub ratio_range: Grid,
    pub outputs: Vec<Output>,
    pub format: Format,
    pub tolerance: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.ka_perp.is_empty() {
            return Err(field_error("ka_perp", "empty list"));
        }
        for (i, &k) in self.ka_perp.iter().enumerate() {
            if !(k > 0.0 && k < 2.0) {
                return Err(field_error(
                    format!("ka_perp[{i}]"),
                    format!("{k} is outside the single-open-channel window (0, 2)"),
                ));
            }
        }
        if self.a_half_sep.is_empty() {
            return Err(field_error("a_half_sep", "empty list"));
        }
        for (i, &a) in self.a_half_sep.iter().enumerate() {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(field_error(
                    format!("a_half_sep[{i}]"),
                    format!("{a} must be finite and non-negative"),
                ));
            }
        }
        self.ratio_range.validate("ratio_range")?;
        if self.outputs.is_empty() {
            return Err(field_error("outputs", "no outputs requested"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(field_error(
                "tolerance",
                format!("{} must be positive", self.tolerance),
            ));
        }
        Ok(())
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| ConfigError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Merge flags over a file config and validate. Flags win; every field set in
/// both places with different values is reported through `log::warn!`.
pub fn load_config(file: Option<&Path>, flags: RawConfig) -> Result<SweepConfig, ConfigError> {
    let base: RawConfig = match file {
        Some(path) => read_json(path)?,
        None => RawConfig::default(),
    };

    fn pick<T: PartialEq>(name: &str, file: Option<T>, flag: Option<T>) -> Option<T> {
        match (file, flag) {
            (Some(f), Some(g)) => {
                if f != g {
                    log::warn!(
                        "--{} overrides the value from the config file",
                        name.replace('_', "-")
                    );
                }
                Some(g)
            }
            (f, g) => g.or(f),
        }
    }

    let ka_perp = pick("ka_perp", base.ka_perp, flags.ka_perp)
        .ok_or_else(|| field_error("ka_perp", "missing (use --ka-perp or the config file)"))?;
    let a_half_sep = pick("a", base.a_half_sep, flags.a_half_sep)
        .ok_or_else(|| field_error("a_half_sep", "missing (use --a or the config file)"))?;
    let ratio_range = pick("ratio", base.ratio_range, flags.ratio_range).ok_or_else(|| {
        field_error(
            "ratio_range",
            "missing (use --ratio lo:hi:count or the config file)",
        )
    })?;
    let cfg = SweepConfig {
        ka_perp: ka_perp.into_vec(),
        a_half_sep: a_half_sep.into_vec(),
        ratio_range,
        outputs: pick("outputs", base.outputs, flags.outputs).unwrap_or_else(default_outputs),
        format: pick("format", base.format, flags.format).unwrap_or_default(),
        tolerance: pick("tolerance", base.tolerance, flags.tolerance).unwrap_or(DEFAULT_TOLERANCE),
    };
    cfg.validate()?;
    Ok(cfg)
}
