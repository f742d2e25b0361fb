//! Numerical laboratory for the rotation-modified Camassa-Holm (R-CH)
//! shallow-water equation.
//!
//! The crate derives every model coefficient from the Coriolis frequency,
//! evolves the nonlocal equation pseudospectrally on a periodic grid in both
//! the physical and the normalized scaling, monitors the conserved
//! quantities, and certifies finite-time wave breaking from initial data via
//! a characteristics-based criterion.
//!
//! Module map:
//!
//! * [`params`] - the coefficient ledger and its algebraic cross-checks,
//! * [`nonlocal`] - periodic grid, fields, and the spectral operator kit,
//! * [`solver`] - Runge-Kutta evolution in both scalings and the scaling map,
//! * [`diagnostics`] - conserved quantities, slope extrema, surface shape,
//! * [`breaking`] - breaking certificates and characteristic tracking.

pub mod breaking;
pub mod diagnostics;
pub mod nonlocal;
pub mod params;
pub mod solver;

pub use breaking::{
    breaking_constant, certify, convolution_bound_margin, track_characteristic,
    BreakingCertificate, CharacteristicTrace,
};
pub use diagnostics::{conserved, slope_report, surface_elevation, ConservedTriple, SlopeReport};
pub use nonlocal::{
    conv_half_kernels, dealiased_product, helmholtz_inverse, spectral_derivative, Field,
    PeriodicGrid,
};
pub use params::{derive_params, identity_report, IdentityCheck, ModelParameters, ParamError};
pub use solver::{
    evolve, rhs_normalized, rhs_physical, scale_map, scale_map_inverse, RunConfig, Scaling,
    Termination, TimeStep, Trajectory, WaveState,
};
