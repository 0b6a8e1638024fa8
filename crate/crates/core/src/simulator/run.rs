use crate::error::{Error, Result};
use crate::loaded::LoadedWave;
use crate::scalar::Scalar;

use super::config::{BoundaryDriver, SimConfig};
use super::scheme::{boundary_flux, half_level_energy, EnergyReport, SimState, Simulator};

/// What to record during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordPlan<T> {
    /// Probe positions; displacement and velocity are sampled every
    /// `probe_stride` steps.
    pub probes: Vec<T>,
    pub probe_stride: usize,
    /// Full-field snapshots, taken at the first level at or after each time.
    pub snapshot_times: Vec<T>,
    /// Energy report every `stride` steps; `None` skips the energy bookkeeping.
    pub energy_stride: Option<usize>,
}

impl<T> Default for RecordPlan<T> {
    fn default() -> Self {
        Self {
            probes: Vec::new(),
            probe_stride: 1,
            snapshot_times: Vec::new(),
            energy_stride: None,
        }
    }
}

impl<T: Scalar> RecordPlan<T> {
    pub fn probes(mut self, probes: impl IntoIterator<Item = T>) -> Self {
        self.probes = probes.into_iter().collect();
        self
    }

    pub fn snapshots(mut self, times: impl IntoIterator<Item = T>) -> Self {
        self.snapshot_times = times.into_iter().collect();
        self
    }

    pub fn energy_every(mut self, stride: usize) -> Self {
        self.energy_stride = Some(stride.max(1));
        self
    }

    pub fn probe_every(mut self, stride: usize) -> Self {
        self.probe_stride = stride.max(1);
        self
    }
}

/// Displacement field at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub t: T,
    pub w: Vec<T>,
}

/// Time series of `w(x0, t)` and `dw/dt(x0, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSeries<T> {
    pub x: T,
    pub t: Vec<T>,
    pub w: Vec<T>,
    pub wdot: Vec<T>,
}

/// Cumulative energy balance over a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BalanceSummary<T> {
    /// `max_t |E(t) - E(t0) - int_{t0}^{t} flux|`.
    pub max_integrated_residual: T,
    /// Largest total energy seen.
    pub max_energy: T,
    /// `E(t_end) - E(t0)`.
    pub energy_change: T,
    /// Time integral of the boundary flux.
    pub integrated_flux: T,
}

impl<T: Scalar> BalanceSummary<T> {
    /// Integrated residual relative to the largest total energy.
    pub fn relative_residual(&self) -> T {
        if self.max_energy > T::zero() {
            self.max_integrated_residual / self.max_energy
        } else {
            self.max_integrated_residual
        }
    }
}

/// Everything recorded by [`run`], in the original displacement `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<T> {
    pub dx: T,
    pub dt: T,
    pub t_end: T,
    /// Static equilibrium `w_p` (zero without load).
    pub offset: T,
    pub snapshots: Vec<Snapshot<T>>,
    pub probes: Vec<ProbeSeries<T>>,
    pub energy: Vec<EnergyReport<T>>,
    pub balance: Option<BalanceSummary<T>>,
}

impl<T: Scalar> RunRecord<T> {
    pub fn x(&self, i: usize) -> T {
        T::count(i) * self.dx
    }

    pub fn probe_at(&self, x: T) -> Option<&ProbeSeries<T>> {
        self.probes.iter().min_by(|a, b| {
            (a.x - x)
                .abs()
                .partial_cmp(&(b.x - x).abs())
                .expect("finite probe positions")
        })
    }

    pub fn snapshot_near(&self, t: T) -> Option<&Snapshot<T>> {
        self.snapshots.iter().min_by(|a, b| {
            (a.t - t)
                .abs()
                .partial_cmp(&(b.t - t).abs())
                .expect("finite snapshot times")
        })
    }
}

fn interpolate<T: Scalar>(u: &[T], dx: T, x: T) -> T {
    let s = x / dx;
    let i = s.floor().to_usize().unwrap_or(0).min(u.len() - 2);
    let f = s - T::count(i);
    u[i] * (T::one() - f) + u[i + 1] * f
}

/// Runs the configured experiment to `t_end`.
pub fn run<T: Scalar>(config: &SimConfig<T>, plan: &RecordPlan<T>) -> Result<RunRecord<T>> {
    let mut sim = Simulator::new(config.clone())?;
    let cfg = sim.config().clone();
    let offset = sim.offset();
    let (dx, dt) = (cfg.dx, cfg.dt);
    let domain = cfg.domain_length;
    for &x in &plan.probes {
        if !(x >= T::zero() && x <= domain) {
            return Err(Error::InvalidParameter(format!(
                "probe {x} outside the domain [0, {domain}]"
            )));
        }
    }
    let mut probes: Vec<ProbeSeries<T>> = plan
        .probes
        .iter()
        .map(|&x| ProbeSeries {
            x,
            t: Vec::new(),
            w: Vec::new(),
            wdot: Vec::new(),
        })
        .collect();
    let mut pending: Vec<T> = plan.snapshot_times.clone();
    pending.sort_by(|a, b| a.partial_cmp(b).expect("finite snapshot time"));
    let mut pending = pending.into_iter().peekable();
    let mut snapshots = Vec::new();

    let take_snapshot = |state: &[T], t: T| Snapshot {
        t,
        w: state.iter().map(|&u| u + offset).collect(),
    };
    // level 0 is only available through the first state
    while let Some(&ts) = pending.peek() {
        if ts > dt / T::lit(2.0) {
            break;
        }
        snapshots.push(take_snapshot(&sim.state().prev, T::zero()));
        pending.next();
    }

    let energy_on = plan.energy_stride.is_some();
    let stride = plan.energy_stride.unwrap_or(1);
    let mut energy = Vec::new();
    let mut last_half = if energy_on {
        let (k, p) = half_level_energy(&cfg, sim.reaction(), sim.state());
        k + p
    } else {
        T::zero()
    };
    let first_half = last_half;
    let mut flux_integral = T::zero();
    let mut summary = BalanceSummary {
        max_energy: last_half,
        ..BalanceSummary::default()
    };
    let mut window_start = (last_half, T::zero());

    let steps = cfg.steps();
    let mut earlier: Option<SimState<T>> = None;
    for _ in 1..steps {
        // level n is sim.state().curr before stepping
        let (n, t_n) = (sim.state().step_index, sim.time());
        while let Some(&ts) = pending.peek() {
            if ts > t_n + dt / T::lit(2.0) {
                break;
            }
            snapshots.push(take_snapshot(&sim.state().curr, t_n));
            pending.next();
        }
        let flux = if energy_on {
            boundary_flux(&cfg, &sim.state().curr, t_n)
        } else {
            T::zero()
        };
        let record_probe = !probes.is_empty() && n % plan.probe_stride == 0;
        if record_probe {
            earlier = Some(sim.state().clone());
        }
        sim.step()?;
        if let Some(before) = earlier.take() {
            for p in probes.iter_mut() {
                let w = interpolate(&before.curr, dx, p.x) + offset;
                let ahead = interpolate(&sim.state().curr, dx, p.x);
                let behind = interpolate(&before.prev, dx, p.x);
                p.t.push(t_n);
                p.w.push(w);
                p.wdot.push((ahead - behind) / (T::lit(2.0) * dt));
            }
        }
        if energy_on {
            let (k, p) = half_level_energy(&cfg, sim.reaction(), sim.state());
            let e = k + p;
            flux_integral = flux_integral + dt * flux;
            let residual = (e - first_half - flux_integral).abs();
            summary.max_integrated_residual = summary.max_integrated_residual.max(residual);
            summary.max_energy = summary.max_energy.max(e);
            if n % stride == 0 {
                let span = T::count(stride) * dt;
                let rate = (e - window_start.0) / span;
                let mean_flux = (flux_integral - window_start.1) / span;
                let half = T::lit(0.5);
                energy.push(EnergyReport {
                    t: t_n,
                    kinetic: k,
                    potential: p,
                    total: half * (e + last_half),
                    boundary_flux: flux,
                    balance_residual: (rate - mean_flux).abs(),
                });
                window_start = (e, flux_integral);
            }
            last_half = e;
        }
    }
    // snapshots requested at or beyond the final level
    let t_last = sim.time();
    for ts in pending {
        if ts <= t_last + dt / T::lit(2.0) {
            snapshots.push(take_snapshot(&sim.state().curr, t_last));
        }
    }
    if energy_on {
        summary.energy_change = last_half - first_half;
        summary.integrated_flux = flux_integral;
    }
    Ok(RunRecord {
        dx,
        dt,
        t_end: t_last,
        offset,
        snapshots,
        probes,
        energy,
        balance: energy_on.then_some(summary),
    })
}

/// Runs with a constant load, driving the boundary with the loaded wave.
///
/// The load of `config` is replaced by the wave's load. A static boundary
/// driver is replaced by the wave trace; any other driver (for example a
/// perturbed trace) is kept. The unknown is shifted by the particular
/// solution internally and records are returned in `w`.
pub fn run_loaded<T: Scalar>(
    config: &SimConfig<T>,
    wave: &LoadedWave<T>,
    plan: &RecordPlan<T>,
) -> Result<RunRecord<T>> {
    let mut cfg = config.clone().with_load(wave.p());
    if cfg.substrate != wave.substrate() {
        return Err(Error::InvalidParameter(
            "loaded wave and simulation use different substrates".into(),
        ));
    }
    if cfg.boundary.is_static() {
        cfg.boundary = BoundaryDriver::Loaded(*wave);
    }
    run(&cfg, plan)
}
