//! Initial-data families and the two-column sample file loader.
//!
//! Shipped families:
//!
//! * `gaussian_bump(a, xc, w)` - `a exp(-(x-xc)^2 / (2 w^2))`, a smooth bump;
//! * `neg_slope(a, xc, w)` - the bump's negative derivative,
//!   `a (x-xc)/w^2 exp(-(x-xc)^2/(2w^2))`; with `a < 0` the steepest descent
//!   sits at `xc`, the natural breaking candidate;
//! * `sine(a, k)` - `a sin(2 pi k x / L)` for an integer mode `k`.
//!
//! A datum may instead come from a file of `x u` rows (`file:PATH`); the grid
//! is inferred from the rows and must be uniform with a power-of-two count.

use crate::CliError;
use rch::nonlocal::{Field, PeriodicGrid};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    GaussianBump { a: f64, xc: f64, w: f64 },
    NegSlope { a: f64, xc: f64, w: f64 },
    Sine { a: f64, k: u32 },
    File(String),
}

impl InitialData {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("file:") {
            return Ok(InitialData::File(path.to_string()));
        }
        let (name, rest) = spec.split_once('(').ok_or_else(|| {
            CliError::config(format!(
                "initial_data '{spec}' is not 'family(args)' or 'file:PATH'"
            ))
        })?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| CliError::config(format!("initial_data '{spec}' is missing ')'")))?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|p| {
                p.trim().parse::<f64>().map_err(|_| {
                    CliError::config(format!("initial_data argument '{p}' is not a number"))
                })
            })
            .collect::<Result<_, _>>()?;
        let want = |k: usize| -> Result<(), CliError> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(CliError::config(format!(
                    "initial_data '{name}' takes {k} arguments, got {}",
                    nums.len()
                )))
            }
        };
        match name.trim() {
            "gaussian_bump" => {
                want(3)?;
                Ok(InitialData::GaussianBump {
                    a: nums[0],
                    xc: nums[1],
                    w: nums[2],
                })
            }
            "neg_slope" => {
                want(3)?;
                Ok(InitialData::NegSlope {
                    a: nums[0],
                    xc: nums[1],
                    w: nums[2],
                })
            }
            "sine" => {
                want(2)?;
                if nums[1] <= 0.0 || nums[1].fract() != 0.0 {
                    return Err(CliError::config(format!(
                        "sine mode k must be a positive integer, got {}",
                        nums[1]
                    )));
                }
                Ok(InitialData::Sine {
                    a: nums[0],
                    k: nums[1] as u32,
                })
            }
            other => Err(CliError::config(format!(
                "unknown initial_data family '{other}'"
            ))),
        }
    }

    /// Rebuild the same family with a different amplitude (used by sweeps).
    pub fn with_amplitude(&self, a: f64) -> Result<Self, CliError> {
        match *self {
            InitialData::GaussianBump { xc, w, .. } => Ok(InitialData::GaussianBump { a, xc, w }),
            InitialData::NegSlope { xc, w, .. } => Ok(InitialData::NegSlope { a, xc, w }),
            InitialData::Sine { k, .. } => Ok(InitialData::Sine { a, k }),
            InitialData::File(_) => Err(CliError::config(
                "amplitude sweeps need a parametric initial_data family, not a file".into(),
            )),
        }
    }

    /// Sample the datum on `grid`; file data brings its own grid, which must
    /// agree with `grid` when the latter was configured explicitly.
    pub fn build(
        &self,
        grid: &PeriodicGrid,
        grid_explicit: bool,
    ) -> Result<(PeriodicGrid, Field), CliError> {
        let field = match self {
            InitialData::GaussianBump { a, xc, w } => {
                Field::from_fn(grid, |x| a * (-(x - xc).powi(2) / (2.0 * w * w)).exp())
            }
            InitialData::NegSlope { a, xc, w } => Field::from_fn(grid, |x| {
                a * (x - xc) / (w * w) * (-(x - xc).powi(2) / (2.0 * w * w)).exp()
            }),
            InitialData::Sine { a, k } => {
                let km = 2.0 * std::f64::consts::PI * *k as f64 / grid.length();
                Field::from_fn(grid, |x| a * (km * x).sin())
            }
            InitialData::File(path) => {
                return load_samples(Path::new(path), grid_explicit.then_some(grid))
            }
        }
        .map_err(|e| CliError::config(format!("initial datum invalid: {e}")))?;
        Ok((*grid, field))
    }
}

/// Load `x u` rows; extra columns are ignored. When `expect` is given the
/// inferred grid must match it.
pub fn load_samples(
    path: &Path,
    expect: Option<&PeriodicGrid>,
) -> Result<(PeriodicGrid, Field), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::config(format!(
            "cannot read initial-data file {}: {e}",
            path.display()
        ))
    })?;
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(xs_s), Some(us_s)) = (parts.next(), parts.next()) else {
            return Err(CliError::config(format!(
                "{}:{}: expected 'x u' columns",
                path.display(),
                lineno + 1
            )));
        };
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| {
                CliError::config(format!(
                    "{}:{}: '{s}' is not a number",
                    path.display(),
                    lineno + 1
                ))
            })
        };
        xs.push(parse(xs_s)?);
        us.push(parse(us_s)?);
    }
    let n = xs.len();
    if n < 8 || !n.is_power_of_two() {
        return Err(CliError::config(format!(
            "initial-data file must hold a power-of-two number of rows (>= 8), got {n}"
        )));
    }
    let dx = xs[1] - xs[0];
    let length = dx * n as f64;
    for (j, &x) in xs.iter().enumerate() {
        if (x - j as f64 * dx).abs() > 1e-9 * length.max(1.0) {
            return Err(CliError::config(format!(
                "initial-data file nodes are not uniform from 0: row {j} has x = {x}"
            )));
        }
    }
    let grid = PeriodicGrid::new(length, n)
        .map_err(|e| CliError::config(format!("initial-data file grid invalid: {e}")))?;
    if let Some(e) = expect {
        if e.n() != n || (e.length() - length).abs() > 1e-9 * length {
            return Err(CliError::config(format!(
                "initial-data file grid (L = {length}, n = {n}) does not match configured grid \
                 (L = {}, n = {})",
                e.length(),
                e.n()
            )));
        }
    }
    let field = Field::new(us)
        .map_err(|e| CliError::config(format!("initial-data file values invalid: {e}")))?;
    Ok((grid, field))
}
