//! Resolved run settings: defaults, then config file, then flags.
//!
//! The config file is a flat `key = value` text format with `#` comments.
//! Unknown keys are rejected by name so typos never silently change a run.

use crate::CliError;
use rch::solver::{Scaling, TimeStep};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct Settings {
    pub omega: f64,
    pub eps: f64,
    pub mu: f64,
    pub scaling: Scaling,
    pub length: f64,
    pub n: usize,
    pub t_end: f64,
    pub dt: TimeStep,
    pub blowup_threshold: f64,
    pub snapshot_stride: usize,
    pub seeds: Vec<f64>,
    pub initial_data: String,
    pub output_dir: PathBuf,
    /// True once `length` or `n` was set explicitly (file or flag); file-based
    /// initial data must then agree with the configured grid.
    pub grid_explicit: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            omega: 0.0,
            eps: 0.1,
            mu: 0.01,
            scaling: Scaling::Normalized,
            length: 20.0,
            n: 512,
            t_end: 5.0,
            dt: TimeStep::Auto,
            blowup_threshold: 1e3,
            snapshot_stride: 10,
            seeds: Vec::new(),
            initial_data: "gaussian_bump(0.1,10,1)".to_string(),
            output_dir: PathBuf::from("rch_out"),
            grid_explicit: false,
        }
    }
}

pub fn parse_scaling(s: &str) -> Result<Scaling, CliError> {
    match s {
        "physical" => Ok(Scaling::Physical),
        "normalized" => Ok(Scaling::Normalized),
        other => Err(CliError::config(format!(
            "scaling must be 'physical' or 'normalized', got '{other}'"
        ))),
    }
}

pub fn parse_dt(s: &str) -> Result<TimeStep, CliError> {
    if s == "auto" {
        return Ok(TimeStep::Auto);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| CliError::config(format!("dt must be 'auto' or a number, got '{s}'")))?;
    Ok(TimeStep::Fixed(v))
}

pub fn parse_seeds(s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("seed '{p}' is not a number")))
        })
        .collect()
}

impl Settings {
    /// Apply one `key = value` pair; the error names the offending key.
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let num = |v: &str| -> Result<f64, CliError> {
            v.parse()
                .map_err(|_| CliError::config(format!("key '{key}': '{v}' is not a number")))
        };
        match key {
            "omega" => self.omega = num(value)?,
            "eps" => self.eps = num(value)?,
            "mu" => self.mu = num(value)?,
            "scaling" => self.scaling = parse_scaling(value)?,
            "length" => {
                self.length = num(value)?;
                self.grid_explicit = true;
            }
            "n" => {
                self.n = value.parse().map_err(|_| {
                    CliError::config(format!("key 'n': '{value}' is not a positive integer"))
                })?;
                self.grid_explicit = true;
            }
            "t_end" => self.t_end = num(value)?,
            "dt" => self.dt = parse_dt(value)?,
            "blowup_threshold" => self.blowup_threshold = num(value)?,
            "snapshot_stride" => {
                self.snapshot_stride = value.parse().map_err(|_| {
                    CliError::config(format!(
                        "key 'snapshot_stride': '{value}' is not a positive integer"
                    ))
                })?
            }
            "seeds" => self.seeds = parse_seeds(value)?,
            "initial_data" => self.initial_data = value.to_string(),
            "output_dir" => self.output_dir = PathBuf::from(value),
            other => return Err(CliError::config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Merge a config file into these settings.
    pub fn load_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                )));
            };
            self.apply(key.trim(), value.trim())?;
        }
        Ok(())
    }
}
