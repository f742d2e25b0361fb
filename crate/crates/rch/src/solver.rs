//! Method-of-lines evolution of the R-CH equation in both scalings.
//!
//! The equation is advanced in its nonlocal form. In the normalized scaling,
//!
//! ```text
//! u_t = -u u_x - (beta0/beta) u_x
//!       - d_x (1 - d_xx)^{-1} [ (c - beta0/beta) u + u^2 + u_x^2/2
//!                               + (w1/3a^2) u^3 + (w2/4a^3) u^4 ]
//! ```
//!
//! and in the physical scaling the same structure with `(1 - beta mu d_xx)`
//! and the `eps`, `mu` weighted nonlinearities. The advective term is written
//! as `-(1/2) d_x(u^2)` so every term of the right-hand side is a perfect
//! `x`-derivative and the spatial mean is conserved to roundoff.
//!
//! Time stepping is classic fourth-order Runge-Kutta with a fixed step. Each
//! step's four stage fields are retained so Lagrangian characteristics can be
//! replayed through exactly the fields the solver saw.

use crate::nonlocal::{
    dealiased_product, helmholtz_inverse, spectral_derivative, Field, NonlocalError, PeriodicGrid,
};
use crate::params::ModelParameters;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("state is in {found:?} scaling, expected {expected:?}")]
    ScalingMismatch { expected: Scaling, found: Scaling },
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Nonlocal(#[from] NonlocalError),
}

/// Which variables the velocity field lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    Physical,
    Normalized,
}

impl std::fmt::Display for Scaling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scaling::Physical => write!(f, "physical"),
            Scaling::Normalized => write!(f, "normalized"),
        }
    }
}

/// Velocity field on a grid at one time instant.
#[derive(Debug, Clone)]
pub struct WaveState {
    pub grid: PeriodicGrid,
    pub u: Field,
    pub t: f64,
    pub scaling: Scaling,
}

/// Time step selection for [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// Advective CFL rule `dt = 0.3 dx / (max|u0| + beta0/beta + c)`.
    Auto,
    Fixed(f64),
}

/// Full description of one evolution run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParameters,
    pub grid: PeriodicGrid,
    pub scaling: Scaling,
    pub t_end: f64,
    pub dt: TimeStep,
    /// Run terminates with [`Termination::SlopeBlowup`] once `-min u_x`
    /// exceeds this. The reported crossing time is resolution limited.
    pub blowup_threshold: f64,
    /// Record every `snapshot_stride`-th step (first and last always kept).
    pub snapshot_stride: usize,
    /// Starting positions for characteristic tracking, consumed downstream.
    pub characteristic_seeds: Vec<f64>,
}

impl RunConfig {
    pub fn new(params: ModelParameters, grid: PeriodicGrid, scaling: Scaling, t_end: f64) -> Self {
        Self {
            params,
            grid,
            scaling,
            t_end,
            dt: TimeStep::Auto,
            blowup_threshold: 1e3,
            snapshot_stride: 1,
            characteristic_seeds: Vec::new(),
        }
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Reached `t_end`.
    Completed,
    /// Slope threshold crossed at `t_num`, steepest node at `x`.
    SlopeBlowup { t_num: f64, x: f64 },
    /// A non-finite value appeared during the step ending at `t`.
    NonFinite { t: f64 },
}

/// Stage fields of one Runge-Kutta step, kept for characteristic replay.
#[derive(Debug, Clone)]
pub struct StageRecord {
    /// Time at the start of the step.
    pub t: f64,
    pub dt: f64,
    /// Field at the step start and at the three internal stage points.
    pub stages: [Field; 4],
}

/// Result of [`evolve`]: strided snapshots, the per-step stage cache, and the
/// termination verdict.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<WaveState>,
    pub stage_cache: Vec<StageRecord>,
    pub termination: Termination,
    pub scaling: Scaling,
    /// Nominal step used for all but a possibly shortened final step.
    pub dt_nominal: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &WaveState {
        self.states
            .last()
            .expect("trajectory holds at least one state")
    }
}

/// Right-hand side in the physical scaling.
///
/// Constants are steady states: every term is an exact `x`-derivative of a
/// quantity that is constant whenever `u` is.
pub fn rhs_physical(params: &ModelParameters, state: &WaveState) -> Result<Field, SolverError> {
    if state.scaling != Scaling::Physical {
        return Err(SolverError::ScalingMismatch {
            expected: Scaling::Physical,
            found: state.scaling,
        });
    }
    let (g, u) = (&state.grid, &state.u);
    let eps = params.eps;
    let mu = params.mu;
    let k0 = params.drift_speed();
    let ux = spectral_derivative(g, u, 1)?;
    let u2 = dealiased_product(g, &[u, u])?;
    let ux2 = dealiased_product(g, &[&ux, &ux])?;
    let u3 = dealiased_product(g, &[u, u, u])?;
    let u4 = dealiased_product(g, &[u, u, u, u])?;

    let mut arg = u.scaled(params.c - k0);
    arg = arg.axpy(params.alpha * eps, &u2);
    arg = arg.axpy(0.5 * params.alpha * params.beta * eps * mu, &ux2);
    arg = arg.axpy(params.w1 / 3.0 * eps * eps, &u3);
    arg = arg.axpy(params.w2 / 4.0 * eps * eps * eps, &u4);

    let conv_x = spectral_derivative(g, &helmholtz_inverse(g, params.beta * mu, &arg)?, 1)?;
    let adv = spectral_derivative(g, &u2, 1)?;

    let mut rhs = adv.scaled(-0.5 * params.alpha * eps);
    rhs = rhs.axpy(-k0, &ux);
    rhs = rhs.axpy(-1.0, &conv_x);
    Ok(rhs)
}

/// Right-hand side in the normalized scaling.
pub fn rhs_normalized(params: &ModelParameters, state: &WaveState) -> Result<Field, SolverError> {
    if state.scaling != Scaling::Normalized {
        return Err(SolverError::ScalingMismatch {
            expected: Scaling::Normalized,
            found: state.scaling,
        });
    }
    let (g, u) = (&state.grid, &state.u);
    let k0 = params.drift_speed();
    let ux = spectral_derivative(g, u, 1)?;
    let u2 = dealiased_product(g, &[u, u])?;
    let ux2 = dealiased_product(g, &[&ux, &ux])?;
    let u3 = dealiased_product(g, &[u, u, u])?;
    let u4 = dealiased_product(g, &[u, u, u, u])?;

    let mut arg = u.scaled(params.c - k0);
    arg = arg.axpy(1.0, &u2);
    arg = arg.axpy(0.5, &ux2);
    arg = arg.axpy(params.w1n / 3.0, &u3);
    arg = arg.axpy(params.w2n / 4.0, &u4);

    let conv_x = spectral_derivative(g, &helmholtz_inverse(g, 1.0, &arg)?, 1)?;
    let adv = spectral_derivative(g, &u2, 1)?;

    let mut rhs = adv.scaled(-0.5);
    rhs = rhs.axpy(-k0, &ux);
    rhs = rhs.axpy(-1.0, &conv_x);
    Ok(rhs)
}

fn rhs_for(scaling: Scaling) -> fn(&ModelParameters, &WaveState) -> Result<Field, SolverError> {
    match scaling {
        Scaling::Physical => rhs_physical,
        Scaling::Normalized => rhs_normalized,
    }
}

/// One classic RK4 step; returns the new raw values and the four stage fields.
/// The new values are unvalidated so a blow-up can be detected by the caller.
pub(crate) fn rk4_step(
    params: &ModelParameters,
    grid: &PeriodicGrid,
    scaling: Scaling,
    u: &Field,
    t: f64,
    dt: f64,
) -> Result<(Vec<f64>, [Field; 4]), SolverError> {
    let f = rhs_for(scaling);
    let mk = |u: Field| WaveState {
        grid: *grid,
        u,
        t,
        scaling,
    };
    let s1 = u.clone();
    let k1 = f(params, &mk(s1.clone()))?;
    let s2 = u.axpy(0.5 * dt, &k1);
    let k2 = f(params, &mk(s2.clone()))?;
    let s3 = u.axpy(0.5 * dt, &k2);
    let k3 = f(params, &mk(s3.clone()))?;
    let s4 = u.axpy(dt, &k3);
    let k4 = f(params, &mk(s4.clone()))?;
    let values = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            v + dt / 6.0
                * (k1.values()[j] + 2.0 * k2.values()[j] + 2.0 * k3.values()[j] + k4.values()[j])
        })
        .collect();
    Ok((values, [s1, s2, s3, s4]))
}

/// CFL step from the configured rule.
pub fn auto_dt(params: &ModelParameters, grid: &PeriodicGrid, u0: &Field) -> f64 {
    let umax = u0.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    0.3 * grid.spacing() / (umax + params.drift_speed() + params.c)
}

/// Integrate from `u0` until `t_end`, slope blow-up, or loss of finiteness.
pub fn evolve(config: &RunConfig, u0: &Field) -> Result<Trajectory, SolverError> {
    if config.t_end.is_nan() || config.t_end <= 0.0 {
        return Err(SolverError::InvalidConfig(format!(
            "t_end = {} must be positive",
            config.t_end
        )));
    }
    if config.blowup_threshold.is_nan() || config.blowup_threshold <= 0.0 {
        return Err(SolverError::InvalidConfig(format!(
            "blowup_threshold = {} must be positive",
            config.blowup_threshold
        )));
    }
    if config.snapshot_stride == 0 {
        return Err(SolverError::InvalidConfig(
            "snapshot_stride must be at least 1".into(),
        ));
    }
    if u0.len() != config.grid.n() {
        return Err(NonlocalError::LengthMismatch {
            field: u0.len(),
            grid: config.grid.n(),
        }
        .into());
    }
    let dt = match config.dt {
        TimeStep::Auto => auto_dt(&config.params, &config.grid, u0),
        TimeStep::Fixed(v) => {
            if !v.is_finite() || v <= 0.0 {
                return Err(SolverError::InvalidConfig(format!(
                    "dt = {v} must be positive"
                )));
            }
            v
        }
    };

    let mut u = u0.clone();
    let mut t = 0.0f64;
    let mut step = 0usize;
    let mut states = vec![WaveState {
        grid: config.grid,
        u: u.clone(),
        t,
        scaling: config.scaling,
    }];
    let mut stage_cache = Vec::new();
    let mut termination = Termination::Completed;

    let eps_t = 1e-12 * config.t_end.max(1.0);
    while t < config.t_end - eps_t {
        let h = dt.min(config.t_end - t);
        let (values, stages) = rk4_step(&config.params, &config.grid, config.scaling, &u, t, h)?;
        step += 1;

        if values.iter().any(|v| !v.is_finite()) {
            termination = Termination::NonFinite { t: t + h };
            break;
        }
        stage_cache.push(StageRecord { t, dt: h, stages });
        u = Field::new(values).expect("finiteness checked above");
        t += h;

        let ux = spectral_derivative(&config.grid, &u, 1)?;
        let (mut min_ux, mut argmin) = (f64::INFINITY, 0usize);
        for (j, &v) in ux.values().iter().enumerate() {
            if v < min_ux {
                min_ux = v;
                argmin = j;
            }
        }
        let record_state = step.is_multiple_of(config.snapshot_stride);
        if -min_ux > config.blowup_threshold {
            termination = Termination::SlopeBlowup {
                t_num: t,
                x: config.grid.node(argmin),
            };
            states.push(WaveState {
                grid: config.grid,
                u: u.clone(),
                t,
                scaling: config.scaling,
            });
            break;
        }
        if record_state {
            states.push(WaveState {
                grid: config.grid,
                u: u.clone(),
                t,
                scaling: config.scaling,
            });
        }
    }

    // make sure the last computed finite state is recorded exactly once
    let needs_final = match termination {
        Termination::SlopeBlowup { .. } => false,
        _ => states
            .last()
            .map(|s| (s.t - t).abs() > eps_t)
            .unwrap_or(true),
    };
    if needs_final {
        states.push(WaveState {
            grid: config.grid,
            u,
            t,
            scaling: config.scaling,
        });
    }

    Ok(Trajectory {
        states,
        stage_cache,
        termination,
        scaling: config.scaling,
        dt_nominal: dt,
    })
}

/// Map a normalized-scaling state to the physical scaling.
///
/// A normalized solution `v` and a physical solution `u` are conjugate via
/// `v(t, x) = alpha eps u(sqrt(beta mu) t, sqrt(beta mu) x)`, so the physical
/// state lives on the grid of length `L sqrt(beta mu)`, carries the values
/// `v / (alpha eps)` and the time `t sqrt(beta mu)`.
pub fn scale_map(params: &ModelParameters, state: &WaveState) -> Result<WaveState, SolverError> {
    if state.scaling != Scaling::Normalized {
        return Err(SolverError::ScalingMismatch {
            expected: Scaling::Normalized,
            found: state.scaling,
        });
    }
    let root = (params.beta * params.mu).sqrt();
    let ae = params.alpha * params.eps;
    let grid = PeriodicGrid::new(state.grid.length() * root, state.grid.n())?;
    Ok(WaveState {
        grid,
        u: state.u.scaled(1.0 / ae),
        t: state.t * root,
        scaling: Scaling::Physical,
    })
}

/// Role-reversed [`scale_map`]: physical to normalized.
pub fn scale_map_inverse(
    params: &ModelParameters,
    state: &WaveState,
) -> Result<WaveState, SolverError> {
    if state.scaling != Scaling::Physical {
        return Err(SolverError::ScalingMismatch {
            expected: Scaling::Physical,
            found: state.scaling,
        });
    }
    let root = (params.beta * params.mu).sqrt();
    let ae = params.alpha * params.eps;
    let grid = PeriodicGrid::new(state.grid.length() / root, state.grid.n())?;
    Ok(WaveState {
        grid,
        u: state.u.scaled(ae),
        t: state.t / root,
        scaling: Scaling::Normalized,
    })
}
