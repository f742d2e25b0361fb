//! Plain-text artifact writers.
//!
//! All numbers are written with 17 significant digits via `{:.16e}`, which is
//! locale independent and makes reruns of identical configs byte-identical.

use crate::config::Settings;
use crate::CliError;
use rch::breaking::BreakingCertificate;
use rch::diagnostics::{conserved, slope_report, surface_elevation};
use rch::params::ModelParameters;
use rch::solver::{Scaling, Termination, TimeStep, Trajectory};
use std::fmt::Write as _;
use std::path::Path;

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::other(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::other(format!("cannot write {}: {e}", path.display())))
}

fn push_params(out: &mut String, p: &ModelParameters) {
    let rows = [
        ("c", p.c),
        ("alpha", p.alpha),
        ("beta", p.beta),
        ("beta0", p.beta0),
        ("w1", p.w1),
        ("w2", p.w2),
        ("c1", p.c1),
        ("z0", p.z0),
        ("gamma1", p.gamma1),
        ("gamma2", p.gamma2),
        ("gamma3", p.gamma3),
        ("gamma4", p.gamma4),
        ("a0", p.a0),
        ("a1", p.a1),
        ("a2", p.a2),
        ("a3", p.a3),
        ("a4", p.a4),
        ("w1n", p.w1n),
        ("w2n", p.w2n),
        ("k", p.k),
        ("drift_speed", p.drift_speed()),
    ];
    for (name, value) in rows {
        let _ = writeln!(out, "{name} = {}", fmt(value));
    }
}

/// Manifest echoing every effective parameter, so each output directory is
/// self-describing.
pub fn write_manifest(
    dir: &Path,
    command: &str,
    settings: &Settings,
    params: &ModelParameters,
    traj: Option<&Trajectory>,
) -> Result<(), CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "# rch run manifest");
    let _ = writeln!(out, "command = {command}");
    let _ = writeln!(out, "omega = {}", fmt(settings.omega));
    let _ = writeln!(out, "eps = {}", fmt(settings.eps));
    let _ = writeln!(out, "mu = {}", fmt(settings.mu));
    let _ = writeln!(out, "scaling = {}", settings.scaling);
    let _ = writeln!(out, "length = {}", fmt(settings.length));
    let _ = writeln!(out, "n = {}", settings.n);
    let _ = writeln!(out, "t_end = {}", fmt(settings.t_end));
    match settings.dt {
        TimeStep::Auto => {
            let _ = writeln!(out, "dt = auto");
        }
        TimeStep::Fixed(v) => {
            let _ = writeln!(out, "dt = {}", fmt(v));
        }
    }
    let _ = writeln!(out, "blowup_threshold = {}", fmt(settings.blowup_threshold));
    let _ = writeln!(out, "snapshot_stride = {}", settings.snapshot_stride);
    let seeds = settings
        .seeds
        .iter()
        .map(|s| fmt(*s))
        .collect::<Vec<_>>()
        .join(",");
    let _ = writeln!(out, "seeds = {seeds}");
    let _ = writeln!(out, "initial_data = {}", settings.initial_data);
    if let Some(traj) = traj {
        let _ = writeln!(out, "dt_effective = {}", fmt(traj.dt_nominal));
        let _ = writeln!(out, "t_final = {}", fmt(traj.final_state().t));
        match traj.termination {
            Termination::Completed => {
                let _ = writeln!(out, "termination = completed");
            }
            Termination::SlopeBlowup { t_num, x } => {
                let _ = writeln!(out, "termination = slope_blowup");
                let _ = writeln!(out, "t_num = {}", fmt(t_num));
                let _ = writeln!(out, "x_break = {}", fmt(x));
            }
            Termination::NonFinite { t } => {
                let _ = writeln!(out, "termination = non_finite");
                let _ = writeln!(out, "t_non_finite = {}", fmt(t));
            }
        }
    }
    let _ = writeln!(out, "# derived constants");
    push_params(&mut out, params);
    write_file(dir, "run_manifest.txt", &out)
}

/// Diagnostics stream: one row per recorded state.
pub fn write_diagnostics_csv(
    dir: &Path,
    params: &ModelParameters,
    traj: &Trajectory,
) -> Result<(), CliError> {
    let mut out = String::from("t,I,E,F,min_ux,argmin_x,max_abs_u\n");
    for state in &traj.states {
        let c = conserved(params, state).map_err(CliError::from_solver)?;
        let s = slope_report(state).map_err(CliError::from_solver)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt(state.t),
            fmt(c.i_val),
            fmt(c.e_val),
            fmt(c.f_val),
            fmt(s.min_ux),
            fmt(s.argmin_x),
            fmt(s.max_abs_u)
        );
    }
    write_file(dir, "diagnostics.csv", &out)
}

/// Snapshot files, two columns `x u` plus `eta` in the physical scaling.
pub fn write_snapshots(
    dir: &Path,
    params: &ModelParameters,
    traj: &Trajectory,
) -> Result<(), CliError> {
    for (idx, state) in traj.states.iter().enumerate() {
        let mut out = String::new();
        let _ = writeln!(out, "# t = {}", fmt(state.t));
        let eta = match state.scaling {
            Scaling::Physical => Some(
                surface_elevation(params, state)
                    .map_err(|e| CliError::other(format!("surface reconstruction: {e}")))?,
            ),
            Scaling::Normalized => None,
        };
        for (j, &u) in state.u.values().iter().enumerate() {
            match &eta {
                Some(eta) => {
                    let _ = writeln!(
                        out,
                        "{} {} {}",
                        fmt(state.grid.node(j)),
                        fmt(u),
                        fmt(eta.values()[j])
                    );
                }
                None => {
                    let _ = writeln!(out, "{} {}", fmt(state.grid.node(j)), fmt(u));
                }
            }
        }
        write_file(dir, &format!("snapshot_{idx:06}.dat"), &out)?;
    }
    Ok(())
}

/// Characteristic trace CSV for one seed.
pub fn write_characteristic(
    dir: &Path,
    index: usize,
    trace: &rch::breaking::CharacteristicTrace,
) -> Result<(), CliError> {
    let mut out = String::from("t,q,u,ux,M,N\n");
    for i in 0..trace.times.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt(trace.times[i]),
            fmt(trace.q[i]),
            fmt(trace.u_along[i]),
            fmt(trace.ux_along[i]),
            fmt(trace.m_along[i]),
            fmt(trace.n_along[i])
        );
    }
    write_file(dir, &format!("characteristic_{index:02}.csv"), &out)
}

/// Structured text record of one certificate.
pub fn certificate_record(cert: &BreakingCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# breaking certificate");
    let _ = writeln!(out, "x0 = {}", fmt(cert.x0));
    let _ = writeln!(out, "u0_at = {}", fmt(cert.u0_at));
    let _ = writeln!(out, "u0x_at = {}", fmt(cert.u0x_at));
    let _ = writeln!(out, "e0 = {}", fmt(cert.e0));
    let _ = writeln!(out, "c0 = {}", fmt(cert.c0));
    let _ = writeln!(out, "k = {}", fmt(cert.k));
    let _ = writeln!(out, "margin = {}", fmt(cert.margin));
    match cert.t_bound {
        Some(tb) => {
            let _ = writeln!(out, "t_bound = {}", fmt(tb));
        }
        None => {
            let _ = writeln!(out, "t_bound = none");
        }
    }
    let _ = writeln!(out, "certified = {}", cert.certified);
    out
}

pub fn write_certificate(dir: &Path, cert: &BreakingCertificate) -> Result<(), CliError> {
    write_file(dir, "certificate.txt", &certificate_record(cert))
}

/// Identity-report table as printed by `verify`.
pub fn identity_table(rows: &[rch::params::IdentityCheck], tol: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<28} {:>24}  status", "identity", "residual");
    for row in rows {
        let status = if row.informational {
            "info"
        } else if row.residual < tol {
            "pass"
        } else {
            "FAIL"
        };
        let _ = writeln!(out, "{:<28} {:>24}  {status}", row.name, fmt(row.residual));
    }
    out
}

/// Sweep CSV over certificates.
pub fn sweep_csv(rows: &[(f64, f64, BreakingCertificate)]) -> String {
    let mut out = String::from("omega,amplitude,e0,c0,k,x0,margin,certified,t_bound\n");
    for (omega, amp, cert) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt(*omega),
            fmt(*amp),
            fmt(cert.e0),
            fmt(cert.c0),
            fmt(cert.k),
            fmt(cert.x0),
            fmt(cert.margin),
            cert.certified,
            cert.t_bound.map(fmt).unwrap_or_else(|| "none".into())
        );
    }
    out
}

pub fn write_sweep(dir: &Path, rows: &[(f64, f64, BreakingCertificate)]) -> Result<(), CliError> {
    write_file(dir, "sweep.csv", &sweep_csv(rows))
}
