use cablewave::simulator::first_step;
use cablewave::{
    run, solve_single_wave, BoundaryDriver, InitialCondition, RecordPlan, SimConfig, Substrate,
};

/// With equal stiffnesses the closed-form wave is a plain sinusoid solving
/// the linear Klein-Gordon equation, so it is an exact solution everywhere.
fn linear_setup(dx: f64, t_end: f64) -> (SimConfig<f64>, cablewave::TravelingWave64) {
    let s = Substrate::new(2.0, 2.0).unwrap();
    let w = solve_single_wave(s, 1).unwrap().with_amplitude(0.01);
    let cfg = SimConfig::new(s, BoundaryDriver::Wave(w), t_end)
        .with_resolution(dx)
        .with_initial(InitialCondition::Wave(w))
        .with_domain_length(8.0);
    (cfg, w)
}

fn order(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect()
}

#[test]
fn linear_solution_converges_at_second_order() {
    let t_end = 2.0;
    let errors: Vec<f64> = [1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0]
        .iter()
        .map(|&dx| {
            let (cfg, w) = linear_setup(dx, t_end);
            let t_snap = (t_end / cfg.dt).floor() * cfg.dt;
            let rec = run(&cfg, &RecordPlan::default().snapshots([t_snap])).unwrap();
            let snap = &rec.snapshots[0];
            // nodes the far-boundary disturbance cannot reach
            (0..=(3.0 / dx) as usize)
                .map(|i| (snap.w[i] - w.evaluate_spacetime(rec.x(i), snap.t)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for p in order(&errors) {
        assert!(
            (p - 2.0).abs() < 0.2,
            "orders {:?} errors {errors:?}",
            order(&errors)
        );
    }
}

#[test]
fn taylor_start_is_third_order() {
    let errors: Vec<f64> = [1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0]
        .iter()
        .map(|&dx| {
            let (cfg, w) = linear_setup(dx, 1.0);
            let st = first_step(&cfg).unwrap();
            (1..=(3.0 / dx) as usize)
                .map(|i| (st.curr[i] - w.evaluate_spacetime(cfg.x(i), st.t)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for p in order(&errors) {
        assert!((p - 3.0).abs() < 0.3, "orders {:?}", order(&errors));
    }
}

fn pulse(k1: f64, k2: f64, amplitude: f64, t_end: f64) -> SimConfig<f64> {
    let s = Substrate::new(k1, k2).unwrap();
    SimConfig::new(s, BoundaryDriver::Zero, t_end)
        .with_initial(InitialCondition::Gaussian {
            amplitude,
            center: 12.0,
            width: 1.0,
        })
        .with_domain_length(24.0)
}

#[test]
fn isolated_pulse_conserves_energy() {
    let cfg = pulse(1.0, 5.0, 0.01, 8.0);
    let rec = run(&cfg, &RecordPlan::default().energy_every(1)).unwrap();
    let e0 = rec.energy[0].total;
    let drift = rec
        .energy
        .iter()
        .map(|e| (e.total - e0).abs())
        .fold(0.0, f64::max);
    assert!(drift <= 1e-4 * e0, "drift {drift} of {e0}");
    let b = rec.balance.unwrap();
    assert!(b.integrated_flux.abs() < 1e-15);
    assert!(b.relative_residual() <= 1e-4);
}

#[test]
fn swapping_stiffnesses_negates_the_field() {
    let t_end = 6.0;
    let a = run(
        &pulse(1.0, 5.0, 0.02, t_end),
        &RecordPlan::default().snapshots([t_end]),
    )
    .unwrap();
    let b = run(
        &pulse(5.0, 1.0, -0.02, t_end),
        &RecordPlan::default().snapshots([t_end]),
    )
    .unwrap();
    let (u, v) = (&a.snapshots[0].w, &b.snapshots[0].w);
    assert_eq!(u.len(), v.len());
    let worst = u
        .iter()
        .zip(v)
        .map(|(x, y)| (x + y).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-15, "{worst}");
}

#[test]
fn driven_run_stays_bounded_and_causal() {
    let s = Substrate::new(1.0_f64, 5.0).unwrap();
    let w = solve_single_wave(s, 1).unwrap().with_amplitude(0.01);
    let t_end = 30.0;
    let cfg = SimConfig::new(s, BoundaryDriver::Wave(w), t_end);
    let times = [10.0, 20.0, 30.0];
    let rec = run(&cfg, &RecordPlan::default().snapshots(times)).unwrap();
    for snap in &rec.snapshots {
        let peak = snap.w.iter().map(|x| x.abs()).fold(0.0, f64::max);
        assert!(peak < 10.0 * w.max_abs(), "peak {peak} at t = {}", snap.t);
        assert_eq!(*snap.w.last().unwrap(), 0.0);
        // the stencil moves one cell per step, so nothing lies beyond t dx/dt
        let reach = (snap.t / rec.dt).round() as usize + 1;
        assert!(snap.w[reach + 1..].iter().all(|&x| x == 0.0));
    }
}

#[test]
fn single_precision_run() {
    let s = Substrate::new(1.0f32, 5.0).unwrap();
    let w = solve_single_wave(s, 1).unwrap().with_amplitude(0.01);
    let cfg = SimConfig::new(s, BoundaryDriver::Wave(w), 10.0);
    let rec = run(&cfg, &RecordPlan::default().snapshots([10.0])).unwrap();
    let peak = rec.snapshots[0]
        .w
        .iter()
        .map(|x: &f32| x.abs())
        .fold(0.0f32, f32::max);
    assert!(peak.is_finite() && peak < 0.05);
}

#[test]
fn invalid_configs_are_rejected() {
    let s = Substrate::new(1.0_f64, 5.0).unwrap();
    let w = solve_single_wave(s, 1).unwrap();
    let cfg = SimConfig::new(s, BoundaryDriver::Wave(w), 10.0);
    assert!(run(&cfg.clone().with_dt(cfg.dx), &RecordPlan::default()).is_err());
    assert!(run(&cfg.clone().with_domain_length(5.0), &RecordPlan::default()).is_err());
    assert!(run(&cfg.clone().with_t_end(-1.0), &RecordPlan::default()).is_err());
}
