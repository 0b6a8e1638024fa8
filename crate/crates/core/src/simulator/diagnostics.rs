//! Post-processing of run records against the closed-form waves.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::wave::PeriodicWave;

use super::run::Snapshot;

const SHIFT_SCAN: usize = 400;
const GOLDEN_ITERS: usize = 80;

/// Distance between a simulated window and the best-aligned analytic wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettledError<T> {
    /// Phase offset (in units of `L`) that minimizes the L2 distance.
    pub shift: T,
    pub linf: T,
    /// Root-mean-square distance over the window nodes.
    pub rms: T,
    /// `linf / max|W|`.
    pub relative_linf: T,
    pub nodes: usize,
}

fn window_nodes<T: Scalar>(len: usize, dx: T, window: (T, T)) -> Result<(usize, usize)> {
    let (xa, xb) = window;
    if !(xa >= T::zero() && xb > xa) {
        return Err(Error::InvalidParameter(format!(
            "window [{xa}, {xb}] must satisfy 0 <= xa < xb"
        )));
    }
    let i0 = (xa / dx).ceil().to_usize().unwrap_or(0);
    let i1 = (xb / dx)
        .floor()
        .to_usize()
        .unwrap_or(0)
        .min(len.saturating_sub(1));
    if i1 < i0 + 1 {
        return Err(Error::InvalidParameter(format!(
            "window [{xa}, {xb}] holds fewer than two grid nodes"
        )));
    }
    Ok((i0, i1))
}

fn misfit<T: Scalar, W: PeriodicWave<T>>(
    snap: &Snapshot<T>,
    dx: T,
    (i0, i1): (usize, usize),
    wave: &W,
    shift: T,
) -> T {
    (i0..=i1).fold(T::zero(), |acc, i| {
        let xi = wave.phase(T::count(i) * dx, snap.t) - shift;
        let d = snap.w[i] - wave.profile(xi);
        acc + d * d
    })
}

/// Phase-aligned error of `snapshot` against `wave` over `window`.
///
/// The shift is found by a coarse scan of one period followed by a
/// golden-section refinement of the L2 misfit; the L-infinity error is then
/// reported at that shift.
pub fn settled_error<T: Scalar, W: PeriodicWave<T>>(
    snapshot: &Snapshot<T>,
    dx: T,
    window: (T, T),
    wave: &W,
) -> Result<SettledError<T>> {
    let nodes = window_nodes(snapshot.w.len(), dx, window)?;
    let half = T::lit(0.5);
    let step = T::one() / T::count(SHIFT_SCAN);
    let mut best = (T::zero(), T::infinity());
    for j in 0..SHIFT_SCAN {
        let s = T::count(j) * step - half;
        let m = misfit(snapshot, dx, nodes, wave, s);
        if m < best.1 {
            best = (s, m);
        }
    }
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let g = T::lit(0.618_033_988_749_894_8);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = misfit(snapshot, dx, nodes, wave, x1);
    let mut f2 = misfit(snapshot, dx, nodes, wave, x2);
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = misfit(snapshot, dx, nodes, wave, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = misfit(snapshot, dx, nodes, wave, x2);
        }
    }
    let shift = half * (lo + hi);
    let (i0, i1) = nodes;
    let mut linf = T::zero();
    let mut sum = T::zero();
    for i in i0..=i1 {
        let xi = wave.phase(T::count(i) * dx, snapshot.t) - shift;
        let d = (snapshot.w[i] - wave.profile(xi)).abs();
        linf = linf.max(d);
        sum = sum + d * d;
    }
    let n = i1 - i0 + 1;
    Ok(SettledError {
        shift,
        linf,
        rms: (sum / T::count(n)).sqrt(),
        relative_linf: linf / wave.max_abs(),
        nodes: n,
    })
}

/// Positions of upward crossings of `level` inside the window, by linear
/// interpolation between nodes.
pub fn upward_crossings<T: Scalar>(w: &[T], dx: T, window: (T, T), level: T) -> Result<Vec<T>> {
    let (i0, i1) = window_nodes(w.len(), dx, window)?;
    let mut out = Vec::new();
    for i in i0..i1 {
        let (a, b) = (w[i] - level, w[i + 1] - level);
        if a < T::zero() && b >= T::zero() {
            out.push((T::count(i) + a / (a - b)) * dx);
        }
    }
    Ok(out)
}

/// Measured propagation speed of the pattern between two snapshots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingSpeed<T> {
    pub speed: T,
    /// Sample standard deviation over the matched crossings.
    pub spread: T,
    pub matched: usize,
}

/// Speed at which upward zero crossings move between `early` and `late`.
///
/// Each crossing of `early` inside the window is matched with the first
/// crossing of `late` at or ahead of it, so the displacement over
/// `late.t - early.t` must stay below the spacing of successive crossings.
pub fn crossing_speed<T: Scalar>(
    early: &Snapshot<T>,
    late: &Snapshot<T>,
    dx: T,
    window: (T, T),
) -> Result<CrossingSpeed<T>> {
    let span = late.t - early.t;
    if !(span > T::zero()) {
        return Err(Error::InvalidParameter(
            "snapshots must be in increasing time order".into(),
        ));
    }
    let a = upward_crossings(&early.w, dx, window, T::zero())?;
    let (xa, xb) = window;
    let b = upward_crossings(&late.w, dx, (xa, xb + (xb - xa)), T::zero())?;
    let mut speeds = Vec::new();
    for &x in &a {
        if let Some(&y) = b.iter().find(|&&y| y >= x) {
            speeds.push((y - x) / span);
        }
    }
    if speeds.len() < 2 {
        return Err(Error::TooFewSamples {
            got: speeds.len(),
            needed: 2,
        });
    }
    let n = T::count(speeds.len());
    let mean = speeds.iter().fold(T::zero(), |s, &v| s + v) / n;
    let var = speeds
        .iter()
        .fold(T::zero(), |s, &v| s + (v - mean) * (v - mean))
        / (n - T::one());
    Ok(CrossingSpeed {
        speed: mean,
        spread: var.sqrt(),
        matched: speeds.len(),
    })
}

/// Smallest and largest displacement over the window across all snapshots.
pub fn window_extrema<T: Scalar>(
    snapshots: &[Snapshot<T>],
    dx: T,
    window: (T, T),
) -> Result<(T, T)> {
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for s in snapshots {
        let (i0, i1) = window_nodes(s.w.len(), dx, window)?;
        for &w in &s.w[i0..=i1] {
            lo = lo.min(w);
            hi = hi.max(w);
        }
    }
    if snapshots.is_empty() {
        return Err(Error::TooFewSamples { got: 0, needed: 1 });
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{solve_single_wave, Substrate};

    fn exact_snapshot(t: f64, shift: f64) -> (Snapshot<f64>, crate::TravelingWave<f64>) {
        let w = solve_single_wave(Substrate::new(1.0, 5.0).unwrap(), 1)
            .unwrap()
            .with_amplitude(0.01);
        let dx = 0.005;
        let snap = Snapshot {
            t,
            w: (0..2000)
                .map(|i| w.evaluate_spacetime(i as f64 * dx - shift, t))
                .collect(),
        };
        (snap, w)
    }

    #[test]
    fn exact_field_has_no_error() {
        let (snap, w) = exact_snapshot(3.0, 0.0);
        let e = settled_error(&snap, 0.005, (1.0, 6.0), &w).unwrap();
        assert!(e.linf < 1e-12, "{e:?}");
        assert!(e.shift.abs() < 1e-9);
    }

    #[test]
    fn alignment_recovers_a_shift() {
        let (snap, w) = exact_snapshot(3.0, 0.123);
        let e = settled_error(&snap, 0.005, (1.0, 6.0), &w).unwrap();
        assert!((e.shift - 0.123).abs() < 1e-7, "{e:?}");
        assert!(e.relative_linf < 1e-6);
    }

    #[test]
    fn crossings_move_at_the_phase_speed() {
        let (a, w) = exact_snapshot(3.0, 0.0);
        let (b, _) = exact_snapshot(3.2, 0.0);
        let s = crossing_speed(&a, &b, 0.005, (1.0, 4.0)).unwrap();
        assert!((s.speed - w.phase_speed()).abs() < 1e-6, "{s:?}");
        assert!(s.matched >= 3);
    }

    #[test]
    fn extrema_over_window() {
        let (snap, w) = exact_snapshot(0.0, 0.0);
        let (lo, hi) = window_extrema(&[snap], 0.005, (0.0, 5.0)).unwrap();
        assert!((lo + w.compression_peak()).abs() < 1e-6);
        assert!((hi - w.amplitude()).abs() < 1e-6);
    }

    #[test]
    fn bad_window() {
        let (snap, w) = exact_snapshot(0.0, 0.0);
        assert!(settled_error(&snap, 0.005, (2.0, 1.0), &w).is_err());
    }
}
