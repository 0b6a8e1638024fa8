//! Reference experiment protocols in double precision.
//!
//! Each function runs one self-contained numerical experiment and returns
//! the measured quantities; pass/fail thresholds are left to the caller.
//! Independent simulations inside one protocol run on separate threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{solve_single_wave, TravelingWave};
use crate::error::Result;
use crate::loaded::{
    alpha_critical, scan_roots, solve_loaded_wave, LoadedExtrema, LoadedWave, ScanOptions,
    CRITICAL_ALPHA_TOL,
};
use crate::simulator::diagnostics::{crossing_speed, settled_error, window_extrema};
use crate::simulator::{
    run, run_loaded, BalanceSummary, BoundaryDriver, RecordPlan, SimConfig, Snapshot,
};
use crate::stability::{
    distance_range, envelope_modulation, floquet_map, orbit_metrics, perturbed_run, return_map,
    sector_radii, BaseWave, OrbitMetrics, Perturbation,
};
use crate::substrate::Substrate;

/// Wave amplitude used by the reference runs.
pub const REFERENCE_AMPLITUDE: f64 = 0.01;
/// Final time of the reference driven runs.
pub const REFERENCE_T_END: f64 = 80.0;
/// Random stiffnesses are drawn log-uniformly from this range.
pub const STIFFNESS_RANGE: (f64, f64) = (1e-2, 1e2);

/// Region behind the boundary-launched front where the wave has settled:
/// from two wavelengths off the boundary to a quarter of the distance the
/// front has covered.
pub fn settled_window(length: f64, base_speed: f64, t: f64) -> (f64, f64) {
    (2.0 * length, 0.25 * base_speed * t)
}

/// `count` substrates with both stiffnesses log-uniform in [`STIFFNESS_RANGE`].
pub fn random_substrates(count: usize, seed: u64) -> Vec<Substrate<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (STIFFNESS_RANGE.0.ln(), STIFFNESS_RANGE.1.ln());
    (0..count)
        .map(|_| {
            let k1 = rng.gen_range(lo..hi).exp();
            let k2 = rng.gen_range(lo..hi).exp();
            Substrate::new(k1, k2).expect("positive stiffnesses")
        })
        .collect()
}

/// Worst closed-form residuals over a set of substrates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClosedFormSurvey {
    /// `max |a alpha - pi|, |b (1 - alpha) - pi|`.
    pub junction: f64,
    /// `max |alpha(k1, k2) + alpha(k2, k1) - 1|`.
    pub swap: f64,
    pub count: usize,
}

pub fn closed_form_survey(substrates: &[Substrate<f64>]) -> Result<ClosedFormSurvey> {
    let mut out = ClosedFormSurvey {
        count: substrates.len(),
        ..Default::default()
    };
    for &s in substrates {
        let w = solve_single_wave(s, 1)?;
        let sw = solve_single_wave(s.swapped(), 1)?;
        let (r1, r2) = w.junction_residuals();
        out.junction = out.junction.max(r1.abs()).max(r2.abs());
        out.swap = out.swap.max((w.alpha() + sw.alpha() - 1.0).abs());
    }
    Ok(out)
}

/// Lowest dispersion root near both ends of the alpha range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointCheck {
    pub substrate: Substrate<f64>,
    pub alpha_low: f64,
    pub a_low: f64,
    /// `2 pi sqrt(k1/k2)`.
    pub expected_low: f64,
    pub alpha_high: f64,
    pub a_high: f64,
    /// `2 pi`.
    pub expected_high: f64,
}

impl EndpointCheck {
    pub fn relative_errors(&self) -> (f64, f64) {
        (
            (self.a_low / self.expected_low - 1.0).abs(),
            (self.a_high / self.expected_high - 1.0).abs(),
        )
    }
}

pub fn dispersion_endpoints(substrate: Substrate<f64>, offset: f64) -> Result<EndpointCheck> {
    let opts = ScanOptions::default();
    let lowest = |alpha: f64| -> Result<f64> {
        let scan = scan_roots(substrate, alpha, &opts)?;
        Ok(scan.roots.first().map_or(f64::NAN, |r| r.a))
    };
    let (alpha_low, alpha_high) = (offset, 1.0 - offset);
    Ok(EndpointCheck {
        substrate,
        alpha_low,
        a_low: lowest(alpha_low)?,
        expected_low: std::f64::consts::TAU * (substrate.k1() / substrate.k2()).sqrt(),
        alpha_high,
        a_high: lowest(alpha_high)?,
        expected_high: std::f64::consts::TAU,
    })
}

/// Worst Floquet deviations over a set of substrates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FloquetSurvey {
    /// `max |lambda - 1|` over both multipliers.
    pub multiplier: f64,
    /// `max |det M - 1|`.
    pub determinant: f64,
    pub count: usize,
}

pub fn floquet_survey(substrates: &[Substrate<f64>]) -> Result<FloquetSurvey> {
    let mut out = FloquetSurvey {
        count: substrates.len(),
        ..Default::default()
    };
    for &s in substrates {
        let f = floquet_map(&solve_single_wave(s, 1)?);
        out.multiplier = out.multiplier.max(f.distance_from_unity());
        out.determinant = out.determinant.max((f.determinant() - 1.0).abs());
    }
    Ok(out)
}

fn reference_wave(substrate: Substrate<f64>, amplitude: f64) -> Result<TravelingWave<f64>> {
    Ok(solve_single_wave(substrate, 1)?.with_amplitude(amplitude))
}

/// Integrated energy balance of the boundary-driven reference run.
pub fn energy_balance(
    substrate: Substrate<f64>,
    amplitude: f64,
    t_end: f64,
) -> Result<BalanceSummary<f64>> {
    let w = reference_wave(substrate, amplitude)?;
    let cfg = SimConfig::new(substrate, BoundaryDriver::Wave(w), t_end);
    let rec = run(&cfg, &RecordPlan::default().energy_every(usize::MAX))?;
    Ok(rec.balance.expect("energy was requested"))
}

/// Pattern speed measured against the closed-form `c v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedCheck {
    pub substrate: Substrate<f64>,
    pub measured: f64,
    pub expected: f64,
    /// Number of crossings averaged.
    pub matched: usize,
}

impl SpeedCheck {
    pub fn relative_error(&self) -> f64 {
        (self.measured / self.expected - 1.0).abs()
    }
}

/// Speed of the upward zero crossings in the settled region, from two
/// snapshots a quarter period apart at the end of a driven run.
pub fn wave_speed(substrate: Substrate<f64>, amplitude: f64, t_end: f64) -> Result<SpeedCheck> {
    let w = reference_wave(substrate, amplitude)?;
    let (tau, _) = w.period_frequency();
    let cfg = SimConfig::new(substrate, BoundaryDriver::Wave(w), t_end);
    let t1 = (t_end / cfg.dt).floor() * cfg.dt;
    let t0 = t1 - (0.25 * tau / cfg.dt).round() * cfg.dt;
    let rec = run(&cfg, &RecordPlan::default().snapshots([t0, t1]))?;
    let window = settled_window(w.length(), cfg.base_speed, t_end);
    let s = crossing_speed(&rec.snapshots[0], &rec.snapshots[1], rec.dx, window)?;
    Ok(SpeedCheck {
        substrate,
        measured: s.speed,
        expected: w.phase_speed(),
        matched: s.matched,
    })
}

/// Settled-region accuracy at three resolutions `h, h/2, h/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettledCheck {
    pub substrate: Substrate<f64>,
    /// Phase-aligned relative L-infinity error against the closed form.
    pub analytic_error: [f64; 3],
    /// Relative max difference between levels `(h, h/2)` and `(h/2, h/4)`
    /// on the coarse nodes.
    pub self_difference: [f64; 2],
}

impl SettledCheck {
    /// Observed order `log2` of the ratio of successive differences.
    pub fn order(&self) -> f64 {
        (self.self_difference[0] / self.self_difference[1]).log2()
    }
}

pub fn settled_profile(
    substrate: Substrate<f64>,
    amplitude: f64,
    t_end: f64,
) -> Result<SettledCheck> {
    let w = reference_wave(substrate, amplitude)?;
    let base = SimConfig::new(substrate, BoundaryDriver::Wave(w), t_end);
    let t_snap = (t_end / base.dt).floor() * base.dt;
    let window = settled_window(w.length(), base.base_speed, t_end);
    const LEVELS: [usize; 3] = [1, 2, 4];
    let runs: Vec<Result<(Snapshot<f64>, f64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = LEVELS
            .iter()
            .map(|&r| {
                let base = &base;
                scope.spawn(move || {
                    let f = r as f64;
                    let cfg = base
                        .clone()
                        .with_resolution(base.dx / f)
                        .with_dt(base.dt / f);
                    let cfg = cfg.clone().with_domain_length(cfg.required_domain_length());
                    let rec = run(&cfg, &RecordPlan::default().snapshots([t_snap]))?;
                    let snap = rec
                        .snapshots
                        .into_iter()
                        .next()
                        .expect("snapshot requested");
                    Ok((snap, rec.dx))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut analytic_error = [0.0; 3];
    for (e, (snap, dx)) in analytic_error.iter_mut().zip(&runs) {
        *e = settled_error(snap, *dx, window, &w)?.relative_linf;
    }
    let dx0 = base.dx;
    let i0 = (window.0 / dx0).ceil() as usize;
    let i1 = (window.1 / dx0).floor() as usize;
    let diff = |a: usize, b: usize| {
        let (sa, ra) = (&runs[a].0, LEVELS[a]);
        let (sb, rb) = (&runs[b].0, LEVELS[b]);
        (i0..=i1)
            .map(|i| (sa.w[i * ra] - sb.w[i * rb]).abs())
            .fold(0.0, f64::max)
            / w.max_abs()
    };
    Ok(SettledCheck {
        substrate,
        analytic_error,
        self_difference: [diff(0, 1), diff(1, 2)],
    })
}

/// Simulated against closed-form extrema of a loaded wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadedCheck {
    pub alpha: f64,
    pub p: f64,
    pub analytic: LoadedExtrema<f64>,
    pub simulated_min: f64,
    pub simulated_max: f64,
}

impl LoadedCheck {
    pub fn relative_errors(&self) -> (f64, f64) {
        (
            (self.simulated_min / self.analytic.min_compression - 1.0).abs(),
            (self.simulated_max / self.analytic.max_tension - 1.0).abs(),
        )
    }
}

/// Extrema over the settled window across one period of snapshots at the
/// end of a run driven by the loaded wave.
pub fn loaded_agreement(
    substrate: Substrate<f64>,
    p: f64,
    alpha: f64,
    t_end: f64,
) -> Result<LoadedCheck> {
    let wave = solve_loaded_wave(substrate, p, alpha, 0)?;
    loaded_run(&wave, t_end)
}

fn loaded_run(wave: &LoadedWave<f64>, t_end: f64) -> Result<LoadedCheck> {
    const SNAPSHOTS: usize = 16;
    let cfg = SimConfig::new(wave.substrate(), BoundaryDriver::Loaded(*wave), t_end);
    let (tau, _) = wave.period_frequency();
    let times = (0..SNAPSHOTS).map(|k| t_end - k as f64 * tau / SNAPSHOTS as f64);
    let rec = run_loaded(&cfg, wave, &RecordPlan::default().snapshots(times))?;
    let window = settled_window(wave.length(), cfg.base_speed, t_end);
    let (lo, hi) = window_extrema(&rec.snapshots, rec.dx, window)?;
    Ok(LoadedCheck {
        alpha: wave.alpha(),
        p: wave.p(),
        analytic: wave.extrema(),
        simulated_min: lo,
        simulated_max: hi,
    })
}

/// Loaded-wave checks at several compression fractions, run concurrently.
/// The load takes magnitude `p_abs` and the admissible sign at each alpha.
pub fn loaded_sweep(
    substrate: Substrate<f64>,
    p_abs: f64,
    alphas: &[f64],
    t_end: f64,
) -> Result<Vec<LoadedCheck>> {
    let acr = alpha_critical(substrate)?;
    let waves = alphas
        .iter()
        .map(|&a| {
            let p = if a < acr { p_abs } else { -p_abs };
            solve_loaded_wave(substrate, p, a, 0)
        })
        .collect::<Result<Vec<_>>>()?;
    std::thread::scope(|scope| {
        let handles: Vec<_> = waves
            .iter()
            .map(|w| scope.spawn(move || loaded_run(w, t_end)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    })
}

/// Closed-form normalized extrema at one alpha of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    /// Load sign chosen for admissibility, `+1` or `-1`.
    pub sign: f64,
    /// `None` within the critical tolerance, where the amplitude diverges.
    pub extrema: Option<LoadedExtrema<f64>>,
}

/// Normalized extrema `min W1 k1/p` and `max W2 k2/p` over `alphas`.
pub fn extrema_sweep(
    substrate: Substrate<f64>,
    p_abs: f64,
    alphas: &[f64],
) -> Result<Vec<SweepPoint>> {
    let acr = alpha_critical(substrate)?;
    alphas
        .iter()
        .map(|&alpha| {
            let sign = if alpha < acr { 1.0 } else { -1.0 };
            if (alpha - acr).abs() <= CRITICAL_ALPHA_TOL {
                return Ok(SweepPoint {
                    alpha,
                    sign,
                    extrema: None,
                });
            }
            let w = solve_loaded_wave(substrate, sign * p_abs, alpha, 0)?;
            Ok(SweepPoint {
                alpha,
                sign,
                extrema: Some(w.extrema()),
            })
        })
        .collect()
}

/// Probe placement and sampling for the stroboscopic experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StroboscopicProtocol {
    /// Probe position in wavelengths.
    pub probe: f64,
    /// Periods skipped after the front passes the probe.
    pub skip_periods: f64,
    /// Periods sampled after the skip.
    pub sample_periods: f64,
}

impl Default for StroboscopicProtocol {
    fn default() -> Self {
        Self {
            probe: 5.0,
            skip_periods: 40.0,
            sample_periods: 40.0,
        }
    }
}

impl StroboscopicProtocol {
    /// `(x0, skip, t_end)` for a wave of length `L`, speed `v` and period `tau`.
    pub fn times(&self, length: f64, base_speed: f64, tau: f64) -> (f64, f64, f64) {
        let x0 = self.probe * length;
        let skip = x0 / base_speed + self.skip_periods * tau;
        // one extra period so the last stroboscopic time has stencil support
        (x0, skip, skip + (self.sample_periods + 1.0) * tau)
    }
}

/// Return-map statistics for one perturbation magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub epsilon: f64,
    pub metrics: OrbitMetrics<f64>,
    /// Scaled distance range from the unperturbed closed-form point.
    pub distance: (f64, f64),
    /// Mean radius about the closed-form point in each of
    /// [`ORBIT_SECTORS`] angular sectors.
    pub sectors: Vec<Option<f64>>,
    pub samples: usize,
}

/// Angular sectors used to compare loops of a campaign.
pub const ORBIT_SECTORS: usize = 8;

impl OrbitRecord {
    /// True when this loop lies outside `inner` in every sector both occupy.
    pub fn encloses(&self, inner: &OrbitRecord) -> bool {
        self.sectors
            .iter()
            .zip(&inner.sectors)
            .all(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => a > b,
                _ => true,
            })
    }
}

/// Boundary-perturbation campaign at `omega1 = ratio * omega`; the first
/// entry of the result is always the unperturbed run.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMapCampaign {
    pub amplitude: f64,
    pub x0: f64,
    pub orbits: Vec<OrbitRecord>,
}

impl ReturnMapCampaign {
    pub fn unperturbed(&self) -> &OrbitRecord {
        &self.orbits[0]
    }

    pub fn perturbed(&self) -> &[OrbitRecord] {
        &self.orbits[1..]
    }
}

pub fn return_map_campaign(
    base: BaseWave<f64>,
    epsilons: &[f64],
    omega_ratio: f64,
    protocol: &StroboscopicProtocol,
) -> Result<ReturnMapCampaign> {
    let (length, v, substrate) = match &base {
        BaseWave::Free(w) => (w.length(), w.base_speed(), w.substrate()),
        BaseWave::Loaded(w) => (w.length(), w.base_speed(), w.substrate()),
    };
    let (tau, omega) = base.period_frequency();
    let (x0, skip, t_end) = protocol.times(length, v, tau);
    let mut cfg = SimConfig::new(substrate, BoundaryDriver::Zero, t_end)
        .with_scales(length, v)
        .with_boundary(match base {
            BaseWave::Free(w) => BoundaryDriver::Wave(w),
            BaseWave::Loaded(w) => BoundaryDriver::Loaded(w),
        });
    cfg.domain_length = cfg.required_domain_length();
    let x0 = (x0 / cfg.dx).round() * cfg.dx;
    let plan = RecordPlan::default().probes([x0]);
    let fixed = base.fixed_point(x0);
    let mut all = vec![0.0];
    all.extend_from_slice(epsilons);
    let orbits: Vec<Result<OrbitRecord>> = std::thread::scope(|scope| {
        let handles: Vec<_> = all
            .iter()
            .map(|&eps| {
                let (cfg, plan, base) = (&cfg, &plan, &base);
                scope.spawn(move || {
                    let pert = Perturbation::boundary(eps, omega_ratio * omega);
                    let rec = perturbed_run(base, &pert, cfg, plan)?;
                    let series = return_map(&rec.probes[0], tau, skip)?;
                    Ok(OrbitRecord {
                        epsilon: eps,
                        metrics: orbit_metrics(&series)?,
                        distance: distance_range(&series, fixed),
                        sectors: sector_radii(&series, fixed, ORBIT_SECTORS),
                        samples: series.samples.len(),
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });
    Ok(ReturnMapCampaign {
        amplitude: base.max_abs(),
        x0,
        orbits: orbits.into_iter().collect::<Result<_>>()?,
    })
}

/// Envelope modulation under a boundary perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatCheck {
    pub measured: f64,
    /// `omega1 - omega`.
    pub expected: f64,
    pub depth: f64,
}

impl BeatCheck {
    pub fn relative_error(&self) -> f64 {
        (self.measured / self.expected - 1.0).abs()
    }
}

pub fn envelope_beat(
    wave: TravelingWave<f64>,
    epsilon: f64,
    omega_ratio: f64,
    protocol: &StroboscopicProtocol,
) -> Result<BeatCheck> {
    let (tau, omega) = wave.period_frequency();
    let (x0, skip, t_end) = protocol.times(wave.length(), wave.base_speed(), tau);
    let base = BaseWave::Free(wave);
    let cfg = SimConfig::new(wave.substrate(), BoundaryDriver::Wave(wave), t_end)
        .with_scales(wave.length(), wave.base_speed());
    let x0 = (x0 / cfg.dx).round() * cfg.dx;
    let pert = Perturbation::boundary(epsilon, omega_ratio * omega);
    let rec = perturbed_run(&base, &pert, &cfg, &RecordPlan::default().probes([x0]))?;
    let env = envelope_modulation(&rec.probes[0], tau, skip)?;
    Ok(BeatCheck {
        measured: env.frequency,
        expected: (omega_ratio - 1.0) * omega,
        depth: env.depth,
    })
}

/// The three substrates used for the speed and accuracy checks.
pub fn reference_substrates() -> [Substrate<f64>; 3] {
    [
        Substrate::new(1.0, 1.0).expect("valid"),
        Substrate::new(1.0, 5.0).expect("valid"),
        Substrate::new(0.2, 1.0).expect("valid"),
    ]
}

/// Applies `f` to every substrate, each on its own thread.
pub fn run_concurrently<R: Send>(
    substrates: &[Substrate<f64>],
    f: impl Fn(Substrate<f64>) -> Result<R> + Sync,
) -> Result<Vec<R>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = substrates
            .iter()
            .map(|&s| {
                let f = &f;
                scope.spawn(move || f(s))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    })
}
