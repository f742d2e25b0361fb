//! Conserved quantities, slope extrema, and free-surface reconstruction.
//!
//! The three invariants of the flow are monitored in whichever scaling the
//! state lives in. Physical scaling:
//!
//! ```text
//! I = integral u
//! E = (1/2) integral u^2 + beta mu u_x^2
//! F = (1/2) integral c u^2 + alpha eps u^3 + beta0 mu u_x^2
//!       + (w1 eps^2/6) u^4 + (w2 eps^3/10) u^5 + alpha beta eps mu u u_x^2
//! ```
//!
//! Normalized scaling replaces the weights by `(c, 1, beta0/beta, w1/6a^2,
//! w2/10a^3, 1)` and drops `beta mu` from `E`. Quadrature is the periodic
//! trapezoid sum, which is spectrally accurate on the grid.

use crate::nonlocal::{spectral_derivative, Field};
use crate::params::ModelParameters;
use crate::solver::{Scaling, SolverError, WaveState};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("surface elevation is defined for physical-scaling states only")]
    NotPhysical,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// The three monitored invariants at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedTriple {
    pub i_val: f64,
    pub e_val: f64,
    pub f_val: f64,
}

/// Slope extremum report for blow-up monitoring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeReport {
    pub min_ux: f64,
    /// Grid node attaining the minimum (ties resolved to the smallest x).
    pub argmin_x: f64,
    pub max_abs_u: f64,
}

/// Evaluate `(I, E, F)` for the state's scaling.
pub fn conserved(
    params: &ModelParameters,
    state: &WaveState,
) -> Result<ConservedTriple, SolverError> {
    let ux = spectral_derivative(&state.grid, &state.u, 1)?;
    let dx = state.grid.spacing();
    let (w_e, c2, c3, c_ux2, c4, c5, c_uux2) = match state.scaling {
        Scaling::Physical => (
            params.beta * params.mu,
            params.c,
            params.alpha * params.eps,
            params.beta0 * params.mu,
            params.w1 * params.eps * params.eps / 6.0,
            params.w2 * params.eps.powi(3) / 10.0,
            params.alpha * params.beta * params.eps * params.mu,
        ),
        Scaling::Normalized => (
            1.0,
            params.c,
            1.0,
            params.drift_speed(),
            params.w1n / 6.0,
            params.w2n / 10.0,
            1.0,
        ),
    };
    let (mut i_val, mut e_val, mut f_val) = (0.0, 0.0, 0.0);
    for (&u, &uxv) in state.u.values().iter().zip(ux.values()) {
        let u2 = u * u;
        let ux2 = uxv * uxv;
        i_val += u;
        e_val += u2 + w_e * ux2;
        f_val += c2 * u2
            + c3 * u2 * u
            + c_ux2 * ux2
            + c4 * u2 * u2
            + c5 * u2 * u2 * u
            + c_uux2 * u * ux2;
    }
    Ok(ConservedTriple {
        i_val: dx * i_val,
        e_val: 0.5 * dx * e_val,
        f_val: 0.5 * dx * f_val,
    })
}

/// Locate the steepest descending slope and the amplitude extremum.
pub fn slope_report(state: &WaveState) -> Result<SlopeReport, SolverError> {
    let ux = spectral_derivative(&state.grid, &state.u, 1)?;
    let (mut min_ux, mut argmin) = (f64::INFINITY, 0usize);
    for (j, &v) in ux.values().iter().enumerate() {
        if v < min_ux {
            min_ux = v;
            argmin = j;
        }
    }
    let max_abs_u = state.u.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(SlopeReport {
        min_ux,
        argmin_x: state.grid.node(argmin),
        max_abs_u,
    })
}

/// Reconstruct the free-surface deviation from a physical-scaling velocity:
///
/// ```text
/// eta = u/c + gamma1 eps u^2 + gamma2 eps^2 u^3 + gamma3 eps^3 u^4
///         + gamma4 eps mu u_xx
/// ```
///
/// Requesting this on a normalized state is an error; the gamma coefficients
/// belong to the physical regime.
pub fn surface_elevation(
    params: &ModelParameters,
    state: &WaveState,
) -> Result<Field, DiagnosticsError> {
    if state.scaling != Scaling::Physical {
        return Err(DiagnosticsError::NotPhysical);
    }
    let uxx = spectral_derivative(&state.grid, &state.u, 2).map_err(SolverError::from)?;
    let eps = params.eps;
    let values = state
        .u
        .values()
        .iter()
        .zip(uxx.values())
        .map(|(&u, &uxxv)| {
            u / params.c
                + params.gamma1 * eps * u * u
                + params.gamma2 * eps * eps * u.powi(3)
                + params.gamma3 * eps.powi(3) * u.powi(4)
                + params.gamma4 * eps * params.mu * uxxv
        })
        .collect();
    Ok(Field::new(values).expect("finite inputs stay finite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlocal::PeriodicGrid;
    use crate::params::derive_params;
    use std::f64::consts::PI;

    fn norm_state(grid: PeriodicGrid, u: Field) -> WaveState {
        WaveState {
            grid,
            u,
            t: 0.0,
            scaling: Scaling::Normalized,
        }
    }

    #[test]
    fn zero_field_has_zero_invariants() {
        let p = derive_params(0.5, 0.1, 0.01).unwrap();
        let g = PeriodicGrid::new(20.0, 64).unwrap();
        let c = conserved(&p, &norm_state(g, Field::constant(&g, 0.0).unwrap())).unwrap();
        assert_eq!(c.i_val, 0.0);
        assert_eq!(c.e_val, 0.0);
        assert_eq!(c.f_val, 0.0);
    }

    #[test]
    fn sine_energy_matches_closed_form() {
        let p = derive_params(0.5, 0.1, 0.01).unwrap();
        let l = 20.0;
        let g = PeriodicGrid::new(l, 256).unwrap();
        let a = 0.3;
        let k = 2.0 * PI / l;
        let u = Field::from_fn(&g, |x| a * (k * x).sin()).unwrap();
        let c = conserved(&p, &norm_state(g, u)).unwrap();
        assert!(c.i_val.abs() < 1e-12);
        let e_exact = 0.25 * a * a * l * (1.0 + k * k);
        assert!((c.e_val - e_exact).abs() / e_exact < 1e-13);
    }

    #[test]
    fn invariants_scale_linearly_and_quadratically() {
        let p = derive_params(0.5, 0.1, 0.01).unwrap();
        let g = PeriodicGrid::new(20.0, 128).unwrap();
        let u = Field::from_fn(&g, |x| 0.1 * (-(x - 10.0).powi(2)).exp()).unwrap();
        let lam = 1.7;
        let c1 = conserved(&p, &norm_state(g, u.clone())).unwrap();
        let c2 = conserved(&p, &norm_state(g, u.scaled(lam))).unwrap();
        assert!((c2.i_val - lam * c1.i_val).abs() < 1e-12);
        assert!((c2.e_val - lam * lam * c1.e_val).abs() < 1e-12);
    }

    #[test]
    fn rotationless_f_reduces_to_ch_hamiltonian() {
        let p = derive_params(0.0, 0.1, 0.01).unwrap();
        let g = PeriodicGrid::new(20.0, 256).unwrap();
        let u = Field::from_fn(&g, |x| 0.2 * (-(x - 10.0).powi(2) / 2.0).exp()).unwrap();
        let c = conserved(&p, &norm_state(g, u.clone())).unwrap();
        // independent term-by-term evaluation with weights (1, 1, 3/5, 0, 0, 1)
        let ux = spectral_derivative(&g, &u, 1).unwrap();
        let dx = g.spacing();
        let mut f = 0.0;
        for (&uv, &uxv) in u.values().iter().zip(ux.values()) {
            f += uv * uv + uv.powi(3) + 0.6 * uxv * uxv + uv * uxv * uxv;
        }
        f *= 0.5 * dx;
        assert!((p.drift_speed() - 0.6).abs() < 1e-15);
        assert!(p.w1n == 0.0 && p.w2n == 0.0);
        assert!((c.f_val - f).abs() < 1e-13);
    }

    #[test]
    fn slope_report_on_sine_and_constant() {
        let g = PeriodicGrid::new(2.0 * PI, 128).unwrap();
        let u = Field::from_fn(&g, |x| x.sin()).unwrap();
        let r = slope_report(&norm_state(g, u)).unwrap();
        assert!((r.min_ux + 1.0).abs() < 1e-10);
        assert!((r.argmin_x - PI).abs() < 1e-10);
        assert!((r.max_abs_u - 1.0).abs() < 1e-3);

        let c = Field::constant(&g, 5.0).unwrap();
        let r = slope_report(&norm_state(g, c)).unwrap();
        assert!(r.min_ux.abs() < 1e-12);
        assert_eq!(r.max_abs_u, 5.0);
        assert_eq!(r.argmin_x, 0.0);
    }

    #[test]
    fn surface_elevation_constant_and_zero() {
        let p = derive_params(0.0, 0.01, 0.01).unwrap();
        let g = PeriodicGrid::new(20.0, 64).unwrap();
        let zero = WaveState {
            grid: g,
            u: Field::constant(&g, 0.0).unwrap(),
            t: 0.0,
            scaling: Scaling::Physical,
        };
        let eta = surface_elevation(&p, &zero).unwrap();
        assert!(eta.values().iter().all(|v| v.abs() < 1e-15));

        let uc = 0.4;
        let cs = WaveState {
            grid: g,
            u: Field::constant(&g, uc).unwrap(),
            t: 0.0,
            scaling: Scaling::Physical,
        };
        let eta = surface_elevation(&p, &cs).unwrap();
        let eps = p.eps;
        let expect = uc / p.c
            + p.gamma1 * eps * uc * uc
            + p.gamma2 * eps * eps * uc.powi(3)
            + p.gamma3 * eps.powi(3) * uc.powi(4);
        assert!(eta.values().iter().all(|v| (v - expect).abs() < 1e-15));
    }

    #[test]
    fn surface_elevation_matches_independent_evaluation() {
        let p = derive_params(0.0, 0.01, 0.01).unwrap();
        let g = PeriodicGrid::new(20.0, 256).unwrap();
        let u = Field::from_fn(&g, |x| 0.1 / ((x - 10.0).cosh().powi(2))).unwrap();
        let st = WaveState {
            grid: g,
            u: u.clone(),
            t: 0.0,
            scaling: Scaling::Physical,
        };
        let eta = surface_elevation(&p, &st).unwrap();
        // straight-line evaluation, polynomial part plus second derivative
        let uxx = spectral_derivative(&g, &u, 2).unwrap();
        for ((&ev, &uv), &uxxv) in eta.values().iter().zip(u.values()).zip(uxx.values()) {
            let direct = uv / p.c
                + p.gamma1 * p.eps * uv * uv
                + p.gamma2 * p.eps * p.eps * uv * uv * uv
                + p.gamma3 * p.eps.powi(3) * uv * uv * uv * uv
                + p.gamma4 * p.eps * p.mu * uxxv;
            assert!((ev - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn surface_elevation_rejects_normalized_states() {
        let p = derive_params(0.0, 0.01, 0.01).unwrap();
        let g = PeriodicGrid::new(20.0, 64).unwrap();
        let st = norm_state(g, Field::constant(&g, 0.1).unwrap());
        assert!(matches!(
            surface_elevation(&p, &st),
            Err(DiagnosticsError::NotPhysical)
        ));
    }

    #[test]
    fn surface_elevation_commutes_with_translation() {
        let p = derive_params(0.3, 0.02, 0.01).unwrap();
        let g = PeriodicGrid::new(20.0, 256).unwrap();
        let shift = 64usize;
        let u = Field::from_fn(&g, |x| 0.1 * (-(x - 8.0).powi(2) / 2.0).exp()).unwrap();
        let us = Field::new(
            (0..g.n())
                .map(|j| u.values()[(j + g.n() - shift) % g.n()])
                .collect(),
        )
        .unwrap();
        let mk = |u: Field| WaveState {
            grid: g,
            u,
            t: 0.0,
            scaling: Scaling::Physical,
        };
        let e1 = surface_elevation(&p, &mk(u)).unwrap();
        let e2 = surface_elevation(&p, &mk(us)).unwrap();
        let diff = (0..g.n())
            .map(|j| (e2.values()[(j + shift) % g.n()] - e1.values()[j]).abs())
            .fold(0.0f64, f64::max);
        assert!(diff < 1e-12);
    }
}
