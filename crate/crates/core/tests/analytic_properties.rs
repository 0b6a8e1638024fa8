use cablewave::{solve_single_wave, Substrate};
use proptest::prelude::*;
use std::f64::consts::PI;

fn stiffness() -> impl Strategy<Value = f64> {
    (-2.0f64..2.0).prop_map(|e| 10f64.powf(e))
}

fn wave(k1: f64, k2: f64) -> cablewave::TravelingWave64 {
    solve_single_wave(Substrate::new(k1, k2).unwrap(), 1).unwrap()
}

/// Independent evaluation of the closed form from its defining arcs.
fn reference_profile(k1: f64, k2: f64, c3: f64, xi: f64) -> f64 {
    let alpha = k2.sqrt() / (k1.sqrt() + k2.sqrt());
    let s = xi.rem_euclid(1.0);
    if s <= alpha {
        -c3 * (k2 / k1).sqrt() * (PI * s / alpha).sin()
    } else {
        c3 * (PI * (s - alpha) / (1.0 - alpha)).sin()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_reference_profile(k1 in stiffness(), k2 in stiffness(), c3 in 0.01f64..2.0, xi in -3.0f64..3.0) {
        let w = solve_single_wave(Substrate::new(k1, k2).unwrap(), 1).unwrap().with_amplitude(c3);
        let expected = reference_profile(k1, k2, c3, xi);
        prop_assert!((w.profile(xi) - expected).abs() <= 1e-12 * w.max_abs());
    }

    #[test]
    fn node_conditions_hold(k1 in stiffness(), k2 in stiffness(), n in 1u32..6) {
        let w = solve_single_wave(Substrate::new(k1, k2).unwrap(), n).unwrap();
        let (r1, r2) = w.junction_residuals();
        prop_assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12, "{r1} {r2}");
    }

    #[test]
    fn continuous_with_continuous_slope(k1 in stiffness(), k2 in stiffness(), c3 in 0.1f64..2.0) {
        let w = wave(k1, k2).with_amplitude(c3);
        let alpha = w.alpha();
        let h = 1e-9;
        for node in [alpha, 1.0] {
            let (l, r) = (node - h, node + h);
            prop_assert!((w.profile(l) - w.profile(r)).abs() <= 1e-6 * w.max_abs());
            let scale = w.slope(node).abs();
            prop_assert!((w.slope(l) - w.slope(r)).abs() <= 1e-6 * scale);
        }
    }

    #[test]
    fn compression_then_tension(k1 in stiffness(), k2 in stiffness(), xi in 0.0f64..1.0) {
        let w = wave(k1, k2);
        let v = w.profile(xi);
        if xi <= w.alpha() {
            prop_assert!(v <= 0.0);
        } else {
            prop_assert!(v > 0.0 || xi - w.alpha() < 1e-15);
        }
    }

    #[test]
    fn swap_reflects_the_wave(k1 in stiffness(), k2 in stiffness(), c3 in 0.1f64..2.0, xi in 0.0f64..1.0) {
        let s = Substrate::new(k1, k2).unwrap();
        let w = solve_single_wave(s, 1).unwrap().with_amplitude(c3);
        let m = solve_single_wave(s.swapped(), 1)
            .unwrap()
            .with_amplitude(c3 * (k2 / k1).sqrt());
        prop_assert!((w.c() - m.c()).abs() <= 1e-15 * w.c());
        prop_assert!((m.alpha() - (1.0 - w.alpha())).abs() < 1e-14);
        let diff = m.profile(xi) + w.profile(xi + w.alpha());
        prop_assert!(diff.abs() <= 1e-9 * w.max_abs(), "{diff}");
    }

    #[test]
    fn speed_grows_with_each_stiffness(k1 in stiffness(), k2 in stiffness(), f in 1.01f64..3.0) {
        let c = wave(k1, k2).c();
        prop_assert!(wave(k1 * f, k2).c() > c);
        prop_assert!(wave(k1, k2 * f).c() > c);
    }

    #[test]
    fn repetition_rescales(k1 in stiffness(), k2 in stiffness(), n in 2u32..6, xi in 0.0f64..1.0) {
        let s = Substrate::new(k1, k2).unwrap();
        let one = solve_single_wave(s, 1).unwrap();
        let many = solve_single_wave(s, n).unwrap();
        let nf = n as f64;
        prop_assert!((many.alpha() - one.alpha() / nf).abs() < 1e-15);
        // c^2 - 1 = k1 / a^2 scales with 1/n^2
        let (e1, en) = (k1 / (one.a() * one.a()), k1 / (many.a() * many.a()));
        prop_assert!((en - e1 / (nf * nf)).abs() <= 1e-13 * en);
        prop_assert!((many.c_squared() - 1.0 - en).abs() <= 1e-15);
        let diff = many.profile(xi) - one.profile(nf * xi);
        prop_assert!(diff.abs() <= 1e-9 * one.max_abs());
    }

    #[test]
    fn satisfies_the_profile_equation(k1 in stiffness(), k2 in stiffness(), xi in 0.0f64..1.0) {
        let w = wave(k1, k2);
        let h = 1e-4;
        // stay clear of the nodes where W'' jumps
        prop_assume!((xi - w.alpha()).abs() > 2.0 * h && xi > 2.0 * h && xi < 1.0 - 2.0 * h);
        let second = (w.profile(xi + h) - 2.0 * w.profile(xi) + w.profile(xi - h)) / (h * h);
        let v = w.profile(xi);
        let k = if v <= 0.0 { k1 } else { k2 };
        let residual = (w.c_squared() - 1.0) * second + k * v;
        let scale = k1.max(k2) * w.max_abs();
        prop_assert!(residual.abs() <= 1e-5 * scale, "{residual} vs {scale}");
    }
}

#[test]
fn single_precision_agrees() {
    let w32 = solve_single_wave(Substrate::new(1.0f32, 5.0).unwrap(), 1).unwrap();
    let w64 = wave(1.0, 5.0);
    assert!((w32.c() as f64 - w64.c()).abs() < 1e-6);
    assert!((w32.alpha() as f64 - w64.alpha()).abs() < 1e-6);
    assert!((w32.profile(0.7) as f64 - w64.profile(0.7)).abs() < 1e-5);
}
