//! Periodic traveling waves of a taut cable on a bilinear elastic substrate.
//!
//! The crate covers the closed-form waves (with and without a constant
//! transverse load), an explicit finite-difference solver for the nonlinear
//! Klein-Gordon equation on the half line, and the perturbation experiments
//! used to probe the stability of the waves.
//!
//! Every solver is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the double-precision instantiation used by the CLI.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod loaded;
pub mod scalar;
pub mod simulator;
pub mod stability;
pub mod substrate;
pub mod verification;
pub mod wave;

pub use analytic::{limit_case, solve_single_wave, LimitKind, LimitReport, TravelingWave};
pub use error::{Error, Result};
pub use loaded::{
    alpha_critical, dispersion_residual, scan_roots, solve_loaded_wave, solve_loaded_wave_with,
    zero_wave_exists, DispersionRoot, DispersionScan, LoadSign, LoadedExtrema, LoadedWave,
    ScanOptions,
};
pub use scalar::Scalar;
pub use simulator::{
    run, run_loaded, BoundaryDriver, InitialCondition, RecordPlan, RunRecord, SimConfig, Simulator,
};
pub use stability::{
    floquet_map, orbit_metrics, perturbed_run, return_map, BaseWave, FloquetResult, OrbitMetrics,
    Perturbation, PerturbationKind, ReturnMapSeries,
};
pub use substrate::Substrate;
pub use wave::PeriodicWave;

pub type Substrate64 = Substrate<f64>;
pub type TravelingWave64 = TravelingWave<f64>;
pub type LoadedWave64 = LoadedWave<f64>;
pub type DispersionScan64 = DispersionScan<f64>;
pub type SimConfig64 = SimConfig<f64>;
pub type RunRecord64 = RunRecord<f64>;
