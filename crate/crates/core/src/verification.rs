//! The ten acceptance checks with their pinned tolerances.
//!
//! Each check runs a fixed experiment and reports pass/fail with the
//! measured values; they back both the `acceptance` test target and the
//! command-line `verify` command.

use std::f64::consts::SQRT_2;

use crate::analytic::solve_single_wave;
use crate::error::Result;
use crate::experiments::{self, StroboscopicProtocol, REFERENCE_AMPLITUDE, REFERENCE_T_END};
use crate::loaded::alpha_critical;
use crate::stability::BaseWave;
use crate::substrate::Substrate;

/// Verdict of one check with a one-line summary of the measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        summary: summary.into(),
    }
}

/// A named acceptance check.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub number: usize,
    /// Scenario name used on the command line.
    pub slug: &'static str,
    pub title: &'static str,
    check: fn() -> Result<Outcome>,
}

impl Criterion {
    /// Runs the check; an error from the experiment counts as a failure.
    pub fn evaluate(&self) -> Outcome {
        (self.check)().unwrap_or_else(|e| outcome(false, format!("error: {e}")))
    }
}

pub fn criteria() -> [Criterion; 10] {
    let c = |number, slug, title, check| Criterion {
        number,
        slug,
        title,
        check,
    };
    [
        c(1, "alpha-critical", "critical alpha", critical_alpha),
        c(2, "closed-form", "closed-form consistency", closed_form),
        c(
            3,
            "dispersion-endpoints",
            "dispersion endpoints",
            dispersion_endpoints,
        ),
        c(4, "energy-balance", "energy balance", energy_balance),
        c(5, "wave-speed", "wave speed", wave_speed),
        c(6, "settled-profile", "settled profile", settled_profile),
        c(
            7,
            "loaded-agreement",
            "loaded-wave agreement",
            loaded_agreement,
        ),
        c(8, "floquet", "floquet multipliers", floquet),
        c(9, "return-map", "return-map stability", return_map),
        c(10, "envelope-beat", "envelope beat", envelope_beat),
    ]
}

pub fn find(slug: &str) -> Option<Criterion> {
    criteria().into_iter().find(|c| c.slug == slug)
}

fn s(k1: f64, k2: f64) -> Substrate<f64> {
    Substrate::new(k1, k2).expect("valid stiffnesses")
}

fn critical_alpha() -> Result<Outcome> {
    let acr = alpha_critical(s(1.0, 2.0))?;
    let err = (acr - 0.585786).abs();
    Ok(outcome(
        err <= 1e-5,
        format!("alpha_cr(1, 2) = {acr:.8}, |diff| = {err:.2e} (tol 1e-5)"),
    ))
}

fn closed_form() -> Result<Outcome> {
    let subs = experiments::random_substrates(1000, 0x5eed_0001);
    let r = experiments::closed_form_survey(&subs)?;
    Ok(outcome(
        r.junction < 1e-12 && r.swap < 1e-12,
        format!(
            "{} substrates: max junction residual {:.2e}, max swap residual {:.2e} (tol 1e-12)",
            r.count, r.junction, r.swap
        ),
    ))
}

fn dispersion_endpoints() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (k1, k2) in [(30.0, 1.0), (1.0, 2.0), (1.0, 10.0)] {
        let e = experiments::dispersion_endpoints(s(k1, k2), 1e-3)?;
        let (lo, hi) = e.relative_errors();
        worst = worst.max(lo).max(hi);
        parts.push(format!("({k1},{k2}) {lo:.1e}/{hi:.1e}"));
    }
    Ok(outcome(
        worst <= 1e-3,
        format!("relative endpoint errors {} (tol 1e-3)", parts.join(", ")),
    ))
}

fn energy_balance() -> Result<Outcome> {
    let b = experiments::energy_balance(s(1.0, 5.0), REFERENCE_AMPLITUDE, REFERENCE_T_END)?;
    let rel = b.relative_residual();
    Ok(outcome(
        rel <= 1e-4 && b.max_integrated_residual <= 1e-4,
        format!(
            "integrated residual {:.2e} absolute, {rel:.2e} relative to max E = {:.3e} (tol 1e-4)",
            b.max_integrated_residual, b.max_energy
        ),
    ))
}

fn wave_speed() -> Result<Outcome> {
    let checks = experiments::run_concurrently(&experiments::reference_substrates(), |sub| {
        experiments::wave_speed(sub, REFERENCE_AMPLITUDE, REFERENCE_T_END)
    })?;
    let worst = checks
        .iter()
        .map(|c| c.relative_error())
        .fold(0.0, f64::max);
    let parts: Vec<_> = checks
        .iter()
        .map(|c| {
            format!(
                "({},{}) {:.6}/{:.6}",
                c.substrate.k1(),
                c.substrate.k2(),
                c.measured,
                c.expected
            )
        })
        .collect();
    Ok(outcome(
        worst <= 0.01,
        format!(
            "measured/closed-form speed {}; worst {worst:.1e} (tol 1e-2)",
            parts.join(", ")
        ),
    ))
}

fn settled_profile() -> Result<Outcome> {
    let checks = experiments::run_concurrently(&experiments::reference_substrates(), |sub| {
        experiments::settled_profile(sub, REFERENCE_AMPLITUDE, REFERENCE_T_END)
    })?;
    let mut pass = true;
    let parts: Vec<_> = checks
        .iter()
        .map(|c| {
            let order = c.order();
            pass &= c.analytic_error[0] <= 0.02 && (order - 2.0).abs() <= 0.3;
            format!(
                "({},{}) err {:.2e} order {order:.2}",
                c.substrate.k1(),
                c.substrate.k2(),
                c.analytic_error[0]
            )
        })
        .collect();
    Ok(outcome(
        pass,
        format!("{} (tol err 2e-2, |order - 2| 0.3)", parts.join(", ")),
    ))
}

fn loaded_agreement() -> Result<Outcome> {
    let sub = s(1.0, 2.0);
    let acr = alpha_critical(sub)?;
    let main = experiments::loaded_agreement(sub, -0.01, 1.2 * acr, REFERENCE_T_END)?;
    let (emin, emax) = main.relative_errors();
    let mut pass = emin <= 0.03 && emax <= 0.03;

    // simulated points away from the critical fraction
    let far = experiments::loaded_sweep(sub, 0.01, &[0.3, 0.45, 0.75, 0.85], REFERENCE_T_END)?;
    let far_worst = far
        .iter()
        .map(|c| {
            let (a, b) = c.relative_errors();
            a.max(b)
        })
        .fold(0.0, f64::max);
    pass &= far_worst <= 0.03;

    // closed-form sweep: magnitudes grow towards alpha_cr from both sides
    let alphas: Vec<f64> = (1..20).map(|i| 0.05 * i as f64).collect();
    let sweep = experiments::extrema_sweep(sub, 0.01, &alphas)?;
    let mag = |p: &experiments::SweepPoint| {
        let e = p.extrema.expect("off-critical sweep point");
        e.normalized_min.abs().max(e.normalized_max.abs())
    };
    let below: Vec<f64> = sweep.iter().filter(|p| p.alpha < acr).map(mag).collect();
    let above: Vec<f64> = sweep.iter().filter(|p| p.alpha > acr).map(mag).collect();
    let rising = below.windows(2).all(|w| w[1] > w[0]) && above.windows(2).all(|w| w[1] < w[0]);
    let near = experiments::extrema_sweep(sub, 0.01, &[acr - 1e-4, acr + 1e-4])?;
    let near_min = near.iter().map(mag).fold(f64::INFINITY, f64::min);
    let grid_max = below.iter().chain(&above).copied().fold(0.0, f64::max);
    pass &= rising && near_min > 10.0 * grid_max;
    Ok(outcome(
        pass,
        format!(
            "alpha = 1.2 alpha_cr: min {:.4e}/{:.4e}, max {:.4e}/{:.4e} ({emin:.1e}, {emax:.1e}); \
             far-from-critical worst {far_worst:.1e} (tol 3e-2); sweep monotone towards alpha_cr: {rising}, \
             |extrema| at alpha_cr +- 1e-4 >= {near_min:.0} vs grid max {grid_max:.1}",
            main.simulated_min,
            main.analytic.min_compression,
            main.simulated_max,
            main.analytic.max_tension
        ),
    ))
}

fn floquet() -> Result<Outcome> {
    let subs = experiments::random_substrates(100, 0x5eed_0008);
    let r = experiments::floquet_survey(&subs)?;
    Ok(outcome(
        r.multiplier <= 1e-10 && r.determinant <= 1e-12,
        format!(
            "{} substrates: max |lambda - 1| {:.2e} (tol 1e-10), max |det - 1| {:.2e} (tol 1e-12)",
            r.count, r.multiplier, r.determinant
        ),
    ))
}

fn return_map() -> Result<Outcome> {
    let w = solve_single_wave(s(1.0, 5.0), 1)?.with_amplitude(REFERENCE_AMPLITUDE);
    let c = experiments::return_map_campaign(
        BaseWave::Free(w),
        &[0.001, 0.003, 0.005],
        SQRT_2,
        &StroboscopicProtocol::default(),
    )?;
    let amp = c.amplitude;
    let still = c.unperturbed().metrics.mean_radius / amp;
    let radii: Vec<f64> = c
        .perturbed()
        .iter()
        .map(|o| o.metrics.mean_radius)
        .collect();
    let monotone = radii.windows(2).all(|w| w[1] > w[0]);
    let ratio = radii[2] / radii[0];
    let closure = c
        .perturbed()
        .iter()
        .map(|o| o.metrics.closure)
        .fold(0.0, f64::max);
    // nested: each loop lies outside the next smaller one in every direction
    let nested = c.perturbed().windows(2).all(|w| w[1].encloses(&w[0]));
    Ok(outcome(
        still <= 1e-3 && monotone && (3.5..=6.5).contains(&ratio) && nested,
        format!(
            "unperturbed radius {still:.2e} x amplitude (tol 1e-3); radii/amplitude {:.3e} {:.3e} {:.3e}, \
             monotone {monotone}, nested {nested}, ratio {ratio:.3} (range 3.5..6.5), max closure {closure:.3}",
            radii[0] / amp,
            radii[1] / amp,
            radii[2] / amp
        ),
    ))
}

fn envelope_beat() -> Result<Outcome> {
    let w = solve_single_wave(s(1.0, 1.0), 1)?.with_amplitude(REFERENCE_AMPLITUDE);
    let b = experiments::envelope_beat(w, 0.003, 1.1, &StroboscopicProtocol::default())?;
    let err = b.relative_error();
    Ok(outcome(
        err <= 0.1,
        format!(
            "envelope frequency {:.5} vs omega1 - omega = {:.5}, relative error {err:.2e} (tol 1e-1)",
            b.measured, b.expected
        ),
    ))
}
