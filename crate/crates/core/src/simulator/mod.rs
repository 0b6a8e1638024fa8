//! Explicit finite-difference solver for the half-line Klein-Gordon problem
//! with a bilinear restoring force.
//!
//! Leapfrog in time and centered differences in space; the restoring force is
//! evaluated at the current level with the branch picked by the sign of the
//! displacement. A constant load is handled by solving for the deviation
//! from the static equilibrium `w_p`.

mod config;
pub mod diagnostics;
mod run;
mod scheme;

pub use config::{
    BoundaryDriver, InitialCondition, SimConfig, DEFAULT_POINTS_PER_LENGTH, DOMAIN_MARGIN,
    MAX_COURANT, SAFETY,
};
pub use run::{run, run_loaded, BalanceSummary, ProbeSeries, RecordPlan, RunRecord, Snapshot};
pub use scheme::{
    continuum_boundary_flux, energy_report, first_step, step, EnergyReport, SimState, Simulator,
    BLOWUP_FACTOR,
};
