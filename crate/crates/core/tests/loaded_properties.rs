use cablewave::loaded::{scan_roots, ScanOptions};
use cablewave::{alpha_critical, solve_loaded_wave_with, LoadedWave64, Substrate};
use proptest::prelude::*;
use std::f64::consts::PI;

fn options(k1: f64, k2: f64, alpha: f64) -> ScanOptions<f64> {
    let reach = 4.0 * PI * (1.0 / alpha + 1.0 / (1.0 - alpha)) * (k1 / k2).sqrt().max(1.0);
    ScanOptions {
        a_max: reach.max(12.0 * PI),
        grid: 40_000,
    }
}

/// Admissible load sign for `alpha`: positive below the critical split.
fn solve(k1: f64, k2: f64, p_abs: f64, alpha: f64) -> Option<LoadedWave64> {
    let s = Substrate::new(k1, k2).unwrap();
    let acr = alpha_critical(s).unwrap();
    if (alpha - acr).abs() < 0.02 {
        return None;
    }
    let p = if alpha < acr { p_abs } else { -p_abs };
    Some(solve_loaded_wave_with(s, p, alpha, 0, &options(k1, k2, alpha)).unwrap())
}

fn stiffness() -> impl Strategy<Value = f64> {
    (-0.7f64..0.7).prop_map(|e| 10f64.powf(e))
}

fn load() -> impl Strategy<Value = f64> {
    (-3.0f64..0.0).prop_map(|e| 10f64.powf(e))
}

/// Classical RK4 for `(c^2 - 1) W'' = p - k(W) W` from `W(0) = 0`.
fn shoot(k1: f64, k2: f64, p: f64, c: f64, slope0: f64, targets: &[f64]) -> Vec<f64> {
    let e = c * c - 1.0;
    let f = |w: f64, d: f64| -> (f64, f64) {
        let k = if w <= 0.0 { k1 } else { k2 };
        (d, (p - k * w) / e)
    };
    let steps = 40_000;
    let h = 1.0 / steps as f64;
    let (mut w, mut d) = (0.0, slope0);
    let mut out = Vec::new();
    let mut next = 0;
    for i in 0..=steps {
        while next < targets.len() && (targets[next] - i as f64 * h).abs() < 0.5 * h {
            out.push(w);
            next += 1;
        }
        let (a1, b1) = f(w, d);
        let (a2, b2) = f(w + 0.5 * h * a1, d + 0.5 * h * b1);
        let (a3, b3) = f(w + 0.5 * h * a2, d + 0.5 * h * b2);
        let (a4, b4) = f(w + h * a3, d + h * b3);
        w += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        d += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn matching_conditions(k1 in stiffness(), k2 in stiffness(), p in load(), alpha in 0.05f64..0.95) {
        let Some(w) = solve(k1, k2, p, alpha) else { return Ok(()) };
        prop_assert!(w.dispersion_residual().unwrap().abs() < 1e-10);
        prop_assert!((w.c() - (1.0 + k1 / (w.a() * w.a())).sqrt()).abs() < 1e-14);
        prop_assert!((w.b() - w.a() * (k2 / k1).sqrt()).abs() <= 1e-12 * w.b());
        let scale = w.max_abs();
        prop_assert!(w.profile(0.0).abs() <= 1e-12 * scale);
        prop_assert!(w.profile(alpha).abs() <= 1e-9 * scale);
        prop_assert!(w.profile(1.0 - 1e-15).abs() <= 1e-9 * scale);
        let [l0, r1, la, ra] = w.junction_slopes();
        prop_assert!((l0 - r1).abs() <= 1e-8 * l0.abs(), "{l0} {r1}");
        prop_assert!((la - ra).abs() <= 1e-8 * la.abs(), "{la} {ra}");
    }

    #[test]
    fn harmonic_amplitudes(k1 in stiffness(), k2 in stiffness(), p in load(), alpha in 0.05f64..0.95) {
        let Some(w) = solve(k1, k2, p, alpha) else { return Ok(()) };
        let [c1, c2, c3, c4] = w.coefficients();
        let p = w.p();
        let sec1 = 1.0 / (0.5 * w.a() * alpha).cos();
        let sec2 = 1.0 / (0.5 * w.b() * (1.0 - alpha)).cos();
        let (lhs1, lhs2) = (c1 * c1 + c2 * c2, c3 * c3 + c4 * c4);
        let (rhs1, rhs2) = ((p / k1 * sec1).powi(2), (p / k2 * sec2).powi(2));
        prop_assert!((lhs1 - rhs1).abs() <= 1e-12 * lhs1, "{lhs1} {rhs1}");
        prop_assert!((lhs2 - rhs2).abs() <= 1e-12 * lhs2, "{lhs2} {rhs2}");
    }

    #[test]
    fn sign_partition(k1 in stiffness(), k2 in stiffness(), p in load(), alpha in 0.05f64..0.95) {
        let Some(w) = solve(k1, k2, p, alpha) else { return Ok(()) };
        let n = 10_000;
        let tol = 1e-9 * w.max_abs();
        for i in 1..n {
            let xi = i as f64 / n as f64;
            let v = w.profile(xi);
            if xi < alpha {
                prop_assert!(v <= tol, "W({xi}) = {v} in compression");
            } else if xi > alpha {
                prop_assert!(v >= -tol, "W({xi}) = {v} in tension");
            }
        }
    }

    #[test]
    fn mirrored_load(k1 in stiffness(), k2 in stiffness(), p in load(), alpha in 0.05f64..0.95, xi in 0.0f64..1.0) {
        let Some(w) = solve(k1, k2, p, alpha) else { return Ok(()) };
        let s = Substrate::new(k2, k1).unwrap();
        let m = solve_loaded_wave_with(s, -w.p(), 1.0 - alpha, 0, &options(k2, k1, 1.0 - alpha)).unwrap();
        prop_assert!((w.c() - m.c()).abs() <= 1e-10 * w.c());
        let diff = m.profile(xi) + w.profile(xi + alpha);
        prop_assert!(diff.abs() <= 1e-8 * w.max_abs(), "{diff}");
    }

    #[test]
    fn shooting_reproduces_profile(k1 in stiffness(), k2 in stiffness(), p in load(), alpha in 0.1f64..0.9) {
        let Some(w) = solve(k1, k2, p, alpha) else { return Ok(()) };
        let targets = [0.2, 0.4, 0.6, 0.8, 1.0];
        let shot = shoot(k1, k2, w.p(), w.c(), w.slope(0.0), &targets);
        let scale = w.max_abs();
        for (&xi, &v) in targets.iter().zip(&shot) {
            let exact = if xi == 1.0 { 0.0 } else { w.profile(xi) };
            prop_assert!((v - exact).abs() <= 1e-6 * scale, "xi {xi}: {v} vs {exact}");
        }
    }
}

#[test]
fn critical_split_examples() {
    let s = Substrate::new(1.0, 2.0).unwrap();
    let acr = alpha_critical(s).unwrap();
    assert!((acr - (2.0 - 2f64.sqrt())).abs() < 1e-12);
    let scan = scan_roots(s, acr, &ScanOptions::default()).unwrap();
    assert!((scan.critical_limit.unwrap() - PI / acr).abs() < 1e-12);
    for r in &scan.roots {
        assert!(scan.singularities.iter().all(|&q| (q - r.a).abs() > 1e-9));
    }
}

#[test]
fn amplitude_grows_towards_critical_split() {
    let s = Substrate::new(1.0, 2.0).unwrap();
    let acr = alpha_critical(s).unwrap();
    let size = |alpha: f64| {
        let p = if alpha < acr { 0.01 } else { -0.01 };
        cablewave::solve_loaded_wave(s, p, alpha, 0)
            .unwrap()
            .max_abs()
    };
    let below: Vec<f64> = [0.3, 0.45, 0.55, 0.58].iter().map(|&a| size(a)).collect();
    let above: Vec<f64> = [0.9, 0.75, 0.62, 0.59].iter().map(|&a| size(a)).collect();
    assert!(below.windows(2).all(|p| p[1] > p[0]), "{below:?}");
    assert!(above.windows(2).all(|p| p[1] > p[0]), "{above:?}");
}
