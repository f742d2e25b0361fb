//! Command-line front end for the R-CH shallow-water laboratory.
//!
//! Subcommands:
//!
//! * `verify`   - derive the coefficient ledger and print the identity table;
//! * `simulate` - evolve an initial datum, writing diagnostics, snapshots,
//!   characteristic traces, and a self-describing manifest;
//! * `certify`  - evaluate the wave-breaking certificate for a datum, with an
//!   optional follow-up simulation comparing the observed breaking time
//!   against the certified bound;
//! * `sweep`    - tabulate certificates over a grid of rotation frequencies
//!   and datum amplitudes.
//!
//! Exit status: 0 on success, 1 on failed verification or runtime error,
//! 2 on invalid configuration, 3 when a simulation lost finiteness.

mod config;
mod families;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{parse_dt, parse_scaling, parse_seeds, Settings};
use families::InitialData;
use rch::breaking::{boundary_decay_ok, certify, track_characteristic};
use rch::nonlocal::PeriodicGrid;
use rch::params::{derive_params, identity_report, ModelParameters};
use rch::solver::{evolve, RunConfig, Scaling, SolverError, Termination, Trajectory};
use std::path::PathBuf;
use std::process::ExitCode;

const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file, or initial data. Exit code 2.
    Config(String),
    /// The simulation lost finiteness. Exit code 3.
    NonFinite(f64),
    /// Everything else. Exit code 1.
    Other(String),
}

impl CliError {
    fn config(msg: String) -> Self {
        CliError::Config(msg)
    }

    fn other(msg: String) -> Self {
        CliError::Other(msg)
    }

    fn from_solver(e: SolverError) -> Self {
        match e {
            SolverError::InvalidConfig(m) => CliError::Config(m),
            SolverError::Nonlocal(e) => CliError::Config(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "rch",
    version,
    about = "Rotation-modified Camassa-Holm shallow-water laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand; unset flags fall back to the config
/// file, then to built-in defaults.
#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Flat key = value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coriolis frequency (nondimensional)
    #[arg(long)]
    omega: Option<f64>,
    /// Amplitude parameter
    #[arg(long)]
    eps: Option<f64>,
    /// Shallowness parameter
    #[arg(long)]
    mu: Option<f64>,
    /// Variable scaling: physical | normalized
    #[arg(long)]
    scaling: Option<String>,
    /// Domain length
    #[arg(long)]
    length: Option<f64>,
    /// Number of grid nodes (power of two)
    #[arg(long)]
    n: Option<usize>,
    /// Final integration time
    #[arg(long)]
    t_end: Option<f64>,
    /// Time step: auto or a number
    #[arg(long)]
    dt: Option<String>,
    /// Slope magnitude that terminates a run as breaking
    #[arg(long)]
    blowup_threshold: Option<f64>,
    /// Record every k-th step
    #[arg(long)]
    snapshot_stride: Option<usize>,
    /// Comma-separated characteristic seed positions
    #[arg(long, allow_hyphen_values = true)]
    seeds: Option<String>,
    /// Initial datum: family(args) or file:PATH
    #[arg(long)]
    initial: Option<String>,
    /// Directory for output files
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// After certifying, run the simulation and compare the observed
    /// breaking time with the certified bound
    #[arg(long)]
    simulate: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated rotation frequencies (default: the configured omega)
    #[arg(long, allow_hyphen_values = true)]
    omega_list: Option<String>,
    /// Comma-separated datum amplitudes replacing the family's first argument
    #[arg(long, allow_hyphen_values = true)]
    amp_list: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the coefficient ledger and verify its algebraic identities
    Verify(CommonArgs),
    /// Evolve an initial datum and write diagnostics
    Simulate(CommonArgs),
    /// Evaluate the wave-breaking certificate for an initial datum
    Certify(CertifyArgs),
    /// Tabulate breaking certificates over a parameter grid
    Sweep(SweepArgs),
}

fn resolve(common: &CommonArgs) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    if let Some(path) = &common.config {
        s.load_file(path)?;
    }
    if let Some(v) = common.omega {
        s.omega = v;
    }
    if let Some(v) = common.eps {
        s.eps = v;
    }
    if let Some(v) = common.mu {
        s.mu = v;
    }
    if let Some(v) = &common.scaling {
        s.scaling = parse_scaling(v)?;
    }
    if let Some(v) = common.length {
        s.length = v;
        s.grid_explicit = true;
    }
    if let Some(v) = common.n {
        s.n = v;
        s.grid_explicit = true;
    }
    if let Some(v) = common.t_end {
        s.t_end = v;
    }
    if let Some(v) = &common.dt {
        s.dt = parse_dt(v)?;
    }
    if let Some(v) = common.blowup_threshold {
        s.blowup_threshold = v;
    }
    if let Some(v) = common.snapshot_stride {
        s.snapshot_stride = v;
    }
    if let Some(v) = &common.seeds {
        s.seeds = parse_seeds(v)?;
    }
    if let Some(v) = &common.initial {
        s.initial_data = v.clone();
    }
    if let Some(v) = &common.output_dir {
        s.output_dir = v.clone();
    }
    Ok(s)
}

fn model(settings: &Settings) -> Result<ModelParameters, CliError> {
    derive_params(settings.omega, settings.eps, settings.mu)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn grid(settings: &Settings) -> Result<PeriodicGrid, CliError> {
    PeriodicGrid::new(settings.length, settings.n).map_err(|e| CliError::Config(e.to_string()))
}

fn datum(
    settings: &Settings,
) -> Result<(PeriodicGrid, rch::nonlocal::Field, InitialData), CliError> {
    let family = InitialData::parse(&settings.initial_data)?;
    let g = grid(settings)?;
    let (g, u0) = family.build(&g, settings.grid_explicit)?;
    Ok((g, u0, family))
}

fn run_config(settings: &Settings, params: ModelParameters, g: PeriodicGrid) -> RunConfig {
    RunConfig {
        params,
        grid: g,
        scaling: settings.scaling,
        t_end: settings.t_end,
        dt: settings.dt,
        blowup_threshold: settings.blowup_threshold,
        snapshot_stride: settings.snapshot_stride,
        characteristic_seeds: settings.seeds.clone(),
    }
}

fn run_to_trajectory(
    settings: &Settings,
    params: ModelParameters,
    g: PeriodicGrid,
    u0: &rch::nonlocal::Field,
) -> Result<Trajectory, CliError> {
    let traj = evolve(&run_config(settings, params, g), u0).map_err(CliError::from_solver)?;
    Ok(traj)
}

fn write_run_outputs(
    command: &str,
    settings: &Settings,
    params: &ModelParameters,
    traj: &Trajectory,
) -> Result<(), CliError> {
    let dir = &settings.output_dir;
    output::write_manifest(dir, command, settings, params, Some(traj))?;
    output::write_diagnostics_csv(dir, params, traj)?;
    output::write_snapshots(dir, params, traj)?;
    for (i, &x0) in settings.seeds.iter().enumerate() {
        if settings.scaling != Scaling::Normalized {
            eprintln!("warning: characteristic seeds are tracked in the normalized scaling only");
            break;
        }
        let trace =
            track_characteristic(traj, params, x0).map_err(|e| CliError::Other(e.to_string()))?;
        output::write_characteristic(dir, i, &trace)?;
    }
    Ok(())
}

fn cmd_verify(settings: &Settings) -> Result<(), CliError> {
    let params = model(settings)?;
    let rows = identity_report(&params);
    print!("{}", output::identity_table(&rows, IDENTITY_TOL));
    let worst = rows
        .iter()
        .filter(|r| !r.informational)
        .map(|r| r.residual)
        .fold(0.0f64, f64::max);
    if worst >= IDENTITY_TOL {
        return Err(CliError::Other(format!(
            "identity verification failed: worst residual {worst:.3e}"
        )));
    }
    println!("all identities within {IDENTITY_TOL:.0e} (worst {worst:.3e})");
    Ok(())
}

fn cmd_simulate(settings: &Settings) -> Result<(), CliError> {
    let params = model(settings)?;
    let (g, u0, _) = datum(settings)?;
    let traj = run_to_trajectory(settings, params, g, &u0)?;
    write_run_outputs("simulate", settings, &params, &traj)?;
    match traj.termination {
        Termination::Completed => {
            println!("completed at t = {}", output::fmt(traj.final_state().t));
            Ok(())
        }
        Termination::SlopeBlowup { t_num, x } => {
            println!(
                "slope blow-up at t_num = {} (x = {})",
                output::fmt(t_num),
                output::fmt(x)
            );
            Ok(())
        }
        Termination::NonFinite { t } => Err(CliError::NonFinite(t)),
    }
}

fn cmd_certify(settings: &Settings, follow_up: bool) -> Result<(), CliError> {
    let params = model(settings)?;
    let (g, u0, _) = datum(settings)?;
    if !boundary_decay_ok(&g, &u0) {
        eprintln!(
            "warning: datum does not vanish near the domain boundary; \
             the certificate is quantitative for decaying data only"
        );
    }
    let cert = certify(&params, &g, &u0).map_err(|e| CliError::Other(e.to_string()))?;
    print!("{}", output::certificate_record(&cert));
    output::write_certificate(&settings.output_dir, &cert)?;
    output::write_manifest(&settings.output_dir, "certify", settings, &params, None)?;

    if follow_up {
        let mut run_settings = settings.clone();
        run_settings.scaling = Scaling::Normalized;
        if let Some(tb) = cert.t_bound {
            run_settings.t_end = 1.2 * tb;
        }
        let traj = run_to_trajectory(&run_settings, params, g, &u0)?;
        write_run_outputs("certify", &run_settings, &params, &traj)?;
        match traj.termination {
            Termination::SlopeBlowup { t_num, .. } => {
                println!("t_num = {}", output::fmt(t_num));
                if let Some(tb) = cert.t_bound {
                    println!("t_num / t_bound = {}", output::fmt(t_num / tb));
                }
            }
            Termination::Completed => {
                println!(
                    "no slope blow-up before t = {} at threshold {}",
                    output::fmt(traj.final_state().t),
                    output::fmt(run_settings.blowup_threshold)
                );
            }
            Termination::NonFinite { t } => return Err(CliError::NonFinite(t)),
        }
    }
    Ok(())
}

fn parse_list(name: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("{name} entry '{p}' is not a number")))
        })
        .collect()
}

fn cmd_sweep(settings: &Settings, args: &SweepArgs) -> Result<(), CliError> {
    let omegas = match &args.omega_list {
        Some(text) => parse_list("omega_list", text)?,
        None => vec![settings.omega],
    };
    let family = InitialData::parse(&settings.initial_data)?;
    let amps: Vec<Option<f64>> = match &args.amp_list {
        Some(text) => parse_list("amp_list", text)?
            .into_iter()
            .map(Some)
            .collect(),
        None => vec![None],
    };
    let g = grid(settings)?;
    let mut rows = Vec::new();
    for &omega in &omegas {
        let params = derive_params(omega, settings.eps, settings.mu)
            .map_err(|e| CliError::Config(e.to_string()))?;
        for amp in &amps {
            let fam = match amp {
                Some(a) => family.with_amplitude(*a)?,
                None => family.clone(),
            };
            let (g2, u0) = fam.build(&g, settings.grid_explicit)?;
            let cert = certify(&params, &g2, &u0).map_err(|e| CliError::Other(e.to_string()))?;
            let amp_value = match (amp, &fam) {
                (Some(a), _) => *a,
                (None, InitialData::GaussianBump { a, .. })
                | (None, InitialData::NegSlope { a, .. })
                | (None, InitialData::Sine { a, .. }) => *a,
                (None, InitialData::File(_)) => f64::NAN,
            };
            rows.push((omega, amp_value, cert));
        }
    }
    output::write_sweep(&settings.output_dir, &rows)?;
    println!(
        "swept {} certificates into {}",
        rows.len(),
        settings.output_dir.join("sweep.csv").display()
    );
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Verify(common) => cmd_verify(&resolve(common)?),
        Command::Simulate(common) => cmd_simulate(&resolve(common)?),
        Command::Certify(args) => cmd_certify(&resolve(&args.common)?, args.simulate),
        Command::Sweep(args) => cmd_sweep(&resolve(&args.common)?, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::NonFinite(t)) => {
            eprintln!("error: simulation lost finiteness at t = {t}");
            ExitCode::from(3)
        }
        Err(CliError::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
