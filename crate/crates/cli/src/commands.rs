//! One function per experiment command; each returns tables and derived
//! values for emission.

use cablewave::experiments::{extrema_sweep, settled_window};
use cablewave::simulator::diagnostics::window_extrema;
use cablewave::simulator::EnergyReport;
use cablewave::stability::{distance_range, envelope_modulation};
use cablewave::{
    alpha_critical, floquet_map, orbit_metrics, perturbed_run, return_map, run, run_loaded,
    scan_roots, solve_loaded_wave, solve_single_wave, BaseWave, BoundaryDriver, LoadSign,
    LoadedWave64, Perturbation, RecordPlan, RunRecord64, ScanOptions, SimConfig, Substrate,
    TravelingWave64,
};
use serde_json::json;

use crate::emit::{num, Outputs, Table};
use crate::error::Result;
use crate::spec::{Command, ExperimentSpec};

/// Samples of the analytic profile over `[0, 1]`.
pub const PROFILE_ROWS: usize = 1001;

/// Half-width of the band around `alpha_cr` flagged in extrema sweeps.
pub const NEAR_CRITICAL_BAND: f64 = 0.05;

/// Upper bound on the number of energy rows written for a run.
const ENERGY_ROWS: usize = 2000;

pub fn execute(spec: &ExperimentSpec) -> Result<Outputs> {
    match spec.command {
        Command::Analytic => analytic(spec),
        Command::Dispersion => dispersion(spec),
        Command::Simulate => simulate(spec),
        Command::SimulateLoaded => simulate_loaded(spec),
        Command::Stability => stability(spec),
        Command::Floquet => floquet(spec),
        Command::ExtremaSweep => sweep(spec),
    }
}

fn substrate(spec: &ExperimentSpec) -> Result<Substrate<f64>> {
    Ok(Substrate::new(spec.require("k1"), spec.require("k2"))?)
}

fn repetitions(spec: &ExperimentSpec) -> u32 {
    spec.integer("n").unwrap_or(1) as u32
}

fn scales(spec: &ExperimentSpec) -> (f64, f64) {
    (
        spec.number("L").unwrap_or(1.0),
        spec.number("v").unwrap_or(1.0),
    )
}

fn free_wave(spec: &ExperimentSpec) -> Result<TravelingWave64> {
    let (length, v) = scales(spec);
    Ok(solve_single_wave(substrate(spec)?, repetitions(spec))?
        .with_amplitude(spec.number("amplitude").unwrap_or(1.0))
        .with_length(length)
        .with_base_speed(v))
}

fn loaded_wave(spec: &ExperimentSpec) -> Result<LoadedWave64> {
    let (length, v) = scales(spec);
    let branch = spec.integer("branch").unwrap_or(0) as usize;
    Ok(solve_loaded_wave(
        substrate(spec)?,
        spec.require("p"),
        spec.require("alpha"),
        branch,
    )?
    .with_length(length)
    .with_base_speed(v))
}

fn profile_table(profile: impl Fn(f64) -> f64) -> Table {
    let mut t = Table::new("profile", &["xi", "w"]);
    for i in 0..PROFILE_ROWS {
        let xi = i as f64 / (PROFILE_ROWS - 1) as f64;
        t.push(&[xi, profile(xi)]);
    }
    t
}

fn analytic(spec: &ExperimentSpec) -> Result<Outputs> {
    let w = free_wave(spec)?;
    let (tau, omega) = w.period_frequency();
    let (r1, r2) = w.junction_residuals();
    Ok(Outputs {
        tables: vec![profile_table(|xi| w.profile(xi))],
        result: json!({
            "c": w.c(),
            "c_squared": w.c_squared(),
            "alpha": w.alpha(),
            "a": w.a(),
            "b": w.b(),
            "phase_speed": w.phase_speed(),
            "period": tau,
            "omega": omega,
            "compression_peak": w.compression_peak(),
            "junction_residuals": [r1, r2],
        }),
        notes: vec![format!("c = {}, alpha = {}", num(w.c()), num(w.alpha()))],
    })
}

fn loaded_result(w: &LoadedWave64) -> serde_json::Value {
    let e = w.extrema();
    json!({
        "p": w.p(),
        "alpha": w.alpha(),
        "branch": w.branch(),
        "a": w.a(),
        "b": w.b(),
        "c": w.c(),
        "coefficients": w.coefficients(),
        "particular_solution": w.particular_solution(),
        "min_compression": e.min_compression,
        "max_tension": e.max_tension,
        "normalized_min": e.normalized_min,
        "normalized_max": e.normalized_max,
    })
}

fn dispersion(spec: &ExperimentSpec) -> Result<Outputs> {
    let s = substrate(spec)?;
    let alpha = spec.require("alpha");
    let scan = scan_roots(s, alpha, &ScanOptions::default())?;
    let mut roots = Table::new("roots", &["index", "a", "c", "load_sign"]);
    for (i, r) in scan.roots.iter().enumerate() {
        let sign = match r.load_sign {
            LoadSign::Positive => "positive",
            LoadSign::Negative => "negative",
            LoadSign::Either => "either",
        };
        let c = (1.0 + s.k1() / (r.a * r.a)).sqrt();
        roots.push_cells(vec![i.to_string(), num(r.a), num(c), sign.to_string()]);
    }
    let mut poles = Table::new("singularities", &["index", "a"]);
    for (i, &a) in scan.singularities.iter().enumerate() {
        poles.push_cells(vec![i.to_string(), num(a)]);
    }
    let mut result = json!({
        "alpha": alpha,
        "alpha_cr": alpha_critical(s)?,
        "roots": scan.roots.len(),
        "critical_limit": scan.critical_limit,
    });
    let mut tables = vec![roots, poles];
    let mut notes = vec![format!("{} roots below a = 12 pi", scan.roots.len())];
    if spec.has("p") {
        let w = loaded_wave(spec)?;
        tables.push(profile_table(|xi| w.profile(xi)));
        result["loaded"] = loaded_result(&w);
        notes.push(format!("loaded wave c = {}", num(w.c())));
    }
    Ok(Outputs {
        tables,
        result,
        notes,
    })
}

fn configure(
    spec: &ExperimentSpec,
    s: Substrate<f64>,
    boundary: BoundaryDriver<f64>,
) -> SimConfig<f64> {
    let (length, v) = scales(spec);
    let t_end = spec.number("t-end").unwrap_or(80.0);
    let mut cfg = SimConfig::new(s, boundary, t_end).with_scales(length, v);
    if let Some(dx) = spec.number("dx") {
        cfg = cfg.with_resolution(dx);
    }
    if let Some(dt) = spec.number("dt") {
        cfg = cfg.with_dt(dt);
    }
    cfg.domain_length = cfg.required_domain_length();
    cfg
}

fn plan(spec: &ExperimentSpec, cfg: &SimConfig<f64>) -> RecordPlan<f64> {
    let snaps = spec
        .list("snapshot-times")
        .map(|t| t.to_vec())
        .unwrap_or_else(|| vec![cfg.t_end]);
    let stride = (cfg.steps() / ENERGY_ROWS).max(1);
    RecordPlan::default()
        .probes(spec.list("probes").unwrap_or(&[]).iter().copied())
        .snapshots(snaps)
        .energy_every(stride)
}

fn run_tables(rec: &RunRecord64) -> Vec<Table> {
    let mut snaps = Table::new("snapshots", &["time", "x", "w"]);
    for s in &rec.snapshots {
        for (i, &w) in s.w.iter().enumerate() {
            snaps.push(&[s.t, rec.x(i), w]);
        }
    }
    let mut probes = Table::new("probes", &["x", "time", "w", "wdot"]);
    for p in &rec.probes {
        for k in 0..p.t.len() {
            probes.push(&[p.x, p.t[k], p.w[k], p.wdot[k]]);
        }
    }
    let mut energy = Table::new(
        "energy",
        &[
            "time",
            "kinetic",
            "potential",
            "total",
            "boundary_flux",
            "balance_residual",
        ],
    );
    for e in &rec.energy {
        let EnergyReport {
            t,
            kinetic,
            potential,
            total,
            boundary_flux,
            balance_residual,
        } = *e;
        energy.push(&[
            t,
            kinetic,
            potential,
            total,
            boundary_flux,
            balance_residual,
        ]);
    }
    vec![snaps, probes, energy]
}

fn run_result(cfg: &SimConfig<f64>, rec: &RunRecord64) -> serde_json::Value {
    let balance = rec.balance.map(|b| {
        json!({
            "max_integrated_residual": b.max_integrated_residual,
            "relative_residual": b.relative_residual(),
            "max_energy": b.max_energy,
            "energy_change": b.energy_change,
            "integrated_flux": b.integrated_flux,
        })
    });
    json!({
        "dx": rec.dx,
        "dt": rec.dt,
        "t_end": rec.t_end,
        "steps": cfg.steps(),
        "domain_length": cfg.domain_length,
        "grid_points": cfg.grid_points(),
        "courant": cfg.courant(),
        "offset": rec.offset,
        "energy_balance": balance,
    })
}

fn balance_note(rec: &RunRecord64) -> Vec<String> {
    rec.balance
        .map(|b| {
            vec![format!(
                "energy balance residual {} (relative {})",
                num(b.max_integrated_residual),
                num(b.relative_residual())
            )]
        })
        .unwrap_or_default()
}

fn simulate(spec: &ExperimentSpec) -> Result<Outputs> {
    let w = free_wave(spec)?;
    let cfg = configure(spec, w.substrate(), BoundaryDriver::Wave(w));
    let rec = run(&cfg, &plan(spec, &cfg))?;
    let mut result = run_result(&cfg, &rec);
    result["phase_speed"] = json!(w.phase_speed());
    Ok(Outputs {
        tables: run_tables(&rec),
        result,
        notes: balance_note(&rec),
    })
}

fn simulate_loaded(spec: &ExperimentSpec) -> Result<Outputs> {
    let w = loaded_wave(spec)?;
    let cfg = configure(spec, w.substrate(), BoundaryDriver::Loaded(w));
    let rec = run_loaded(&cfg, &w, &plan(spec, &cfg))?;
    let mut result = run_result(&cfg, &rec);
    result["loaded"] = loaded_result(&w);
    let window = settled_window(w.length(), cfg.base_speed, cfg.t_end);
    let last = rec
        .snapshots
        .last()
        .map(std::slice::from_ref)
        .unwrap_or(&[]);
    result["settled_extrema"] = match window_extrema(last, rec.dx, window) {
        Ok((lo, hi)) => json!({ "window": [window.0, window.1], "min": lo, "max": hi }),
        Err(_) => serde_json::Value::Null,
    };
    let mut tables = run_tables(&rec);
    tables.insert(0, profile_table(|xi| w.profile(xi)));
    Ok(Outputs {
        tables,
        result,
        notes: balance_note(&rec),
    })
}

fn stability(spec: &ExperimentSpec) -> Result<Outputs> {
    let base = if spec.has("p") {
        BaseWave::Loaded(loaded_wave(spec)?)
    } else {
        BaseWave::Free(free_wave(spec)?)
    };
    let (s, driver) = match base {
        BaseWave::Free(w) => (w.substrate(), BoundaryDriver::Wave(w)),
        BaseWave::Loaded(w) => (w.substrate(), BoundaryDriver::Loaded(w)),
    };
    let cfg = configure(spec, s, driver);
    let (tau, omega) = base.period_frequency();
    let x0 = spec
        .list("probes")
        .and_then(|p| p.first().copied())
        .unwrap_or(cfg.domain_length / 4.0);
    let x0 = (x0 / cfg.dx).round() * cfg.dx;
    let skip = spec
        .number("skip")
        .unwrap_or(x0 / cfg.base_speed + cablewave::stability::DEFAULT_SKIP_PERIODS as f64 * tau);
    let epsilon = spec.number("epsilon").unwrap_or(0.0);
    let omega1 = spec.number("omega1-ratio").unwrap_or(1.0) * omega;
    let pert = match spec.word("perturbation") {
        Some("initial") => Perturbation::initial(epsilon),
        _ => Perturbation::boundary(epsilon, omega1),
    };
    let rec = perturbed_run(&base, &pert, &cfg, &RecordPlan::default().probes([x0]))?;
    let probe = &rec.probes[0];
    let series = return_map(probe, tau, skip)?;
    let m = orbit_metrics(&series)?;
    let fixed = base.fixed_point(x0);
    let (dmin, dmax) = distance_range(&series, fixed);
    let envelope = envelope_modulation(probe, tau, skip)
        .map(|e| json!({ "frequency": e.frequency, "depth": e.depth }))
        .unwrap_or(serde_json::Value::Null);

    let mut probe_table = Table::new("probe", &["time", "w", "wdot"]);
    for k in 0..probe.t.len() {
        probe_table.push(&[probe.t[k], probe.w[k], probe.wdot[k]]);
    }
    let mut map = Table::new("return_map", &["index", "time", "f", "fdot"]);
    for (k, (&t, &(f, v))) in series.times.iter().zip(&series.samples).enumerate() {
        map.push_cells(vec![k.to_string(), num(t), num(f), num(v)]);
    }
    let amplitude = base.max_abs();
    Ok(Outputs {
        tables: vec![probe_table, map],
        result: json!({
            "x0": x0,
            "tau": tau,
            "omega": omega,
            "omega1": omega1,
            "skip": skip,
            "samples": series.samples.len(),
            "fixed_point": [fixed.0, fixed.1],
            "centroid": [m.centroid.0, m.centroid.1],
            "mean_radius": m.mean_radius,
            "spread": m.spread,
            "closure": m.closure,
            "amplitude": amplitude,
            "radius_over_amplitude": m.mean_radius / amplitude,
            "distance_from_fixed_point": [dmin, dmax],
            "envelope": envelope,
        }),
        notes: vec![format!(
            "{} return-map samples, mean radius {} x amplitude",
            series.samples.len(),
            num(m.mean_radius / amplitude)
        )],
    })
}

fn floquet(spec: &ExperimentSpec) -> Result<Outputs> {
    let w = solve_single_wave(substrate(spec)?, repetitions(spec))?;
    let f = floquet_map(&w);
    let mut mono = Table::new("monodromy", &["row", "col0", "col1"]);
    for (i, row) in f.monodromy.iter().enumerate() {
        mono.push_cells(vec![i.to_string(), num(row[0]), num(row[1])]);
    }
    let mut mult = Table::new("multipliers", &["index", "re", "im", "modulus"]);
    for (i, l) in f.multipliers.iter().enumerate() {
        mult.push_cells(vec![i.to_string(), num(l.re), num(l.im), num(l.norm())]);
    }
    Ok(Outputs {
        tables: vec![mono, mult],
        result: json!({
            "trace": f.trace(),
            "determinant": f.determinant(),
            "distance_from_unity": f.distance_from_unity(),
            "c": w.c(),
            "alpha": w.alpha(),
        }),
        notes: vec![format!(
            "max |lambda - 1| = {}",
            num(f.distance_from_unity())
        )],
    })
}

fn sweep(spec: &ExperimentSpec) -> Result<Outputs> {
    let s = substrate(spec)?;
    let p_abs = spec.require("p").abs();
    let alphas = spec.list("alphas").unwrap_or(&[]);
    let acr = alpha_critical(s)?;
    let points = extrema_sweep(s, p_abs, alphas)?;
    let mut t = Table::new(
        "extrema",
        &[
            "alpha",
            "p",
            "min_compression",
            "max_tension",
            "normalized_min",
            "normalized_max",
            "near_critical",
            "critical",
        ],
    );
    for pt in &points {
        let near = (pt.alpha - acr).abs() < NEAR_CRITICAL_BAND;
        let mut row = vec![num(pt.alpha), num(pt.sign * p_abs)];
        match pt.extrema {
            Some(e) => row.extend(
                [
                    e.min_compression,
                    e.max_tension,
                    e.normalized_min,
                    e.normalized_max,
                ]
                .map(num),
            ),
            None => row.extend(std::iter::repeat_n("NaN".to_string(), 4)),
        }
        row.push(u8::from(near).to_string());
        row.push(u8::from(pt.extrema.is_none()).to_string());
        t.push_cells(row);
    }
    Ok(Outputs {
        tables: vec![t],
        result: json!({
            "alpha_cr": acr,
            "near_critical_band": NEAR_CRITICAL_BAND,
            "points": points.len(),
        }),
        notes: vec![format!("alpha_cr = {}", num(acr))],
    })
}
