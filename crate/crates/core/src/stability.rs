//! Orbital-stability experiments: the period map of the traveling-wave ODE,
//! perturbed simulations and stroboscopic return maps at a probe.

use num_complex::Complex;

use crate::analytic::TravelingWave;
use crate::error::{Error, Result};
use crate::loaded::LoadedWave;
use crate::scalar::Scalar;
use crate::simulator::{
    run, run_loaded, BoundaryDriver, InitialCondition, ProbeSeries, RecordPlan, RunRecord,
    SimConfig,
};

/// Minimum number of stroboscopic periods after the transient skip.
pub const MIN_RETURN_PERIODS: usize = 30;
/// Minimum samples for [`orbit_metrics`].
pub const MIN_ORBIT_SAMPLES: usize = 20;
/// Periods skipped after the front passes the probe.
pub const DEFAULT_SKIP_PERIODS: usize = 10;

pub type Matrix2<T> = [[T; 2]; 2];

fn mul<T: Scalar>(x: &Matrix2<T>, y: &Matrix2<T>) -> Matrix2<T> {
    let mut out = [[T::zero(); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// Flow of `W'' = -q^2 W` over a length `s`.
fn harmonic_block<T: Scalar>(q: T, s: T) -> Matrix2<T> {
    let (sn, cs) = (q * s).sin_cos();
    [[cs, sn / q], [-q * sn, cs]]
}

/// Period map of the profile ODE linearized about the wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetResult<T> {
    pub monodromy: Matrix2<T>,
    pub multipliers: [Complex<T>; 2],
}

impl<T: Scalar> FloquetResult<T> {
    pub fn determinant(&self) -> T {
        let m = &self.monodromy;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> T {
        self.monodromy[0][0] + self.monodromy[1][1]
    }

    /// Largest `|lambda - 1|` over both multipliers.
    pub fn distance_from_unity(&self) -> T {
        let one = Complex::new(T::one(), T::zero());
        self.multipliers
            .iter()
            .map(|&l| (l - one).norm())
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// Eigenvalues of a 2x2 matrix, computed about the mean of the diagonal so
/// that a nearly repeated pair keeps full relative accuracy.
pub fn eigenvalues<T: Scalar>(m: &Matrix2<T>) -> [Complex<T>; 2] {
    let mu = (m[0][0] + m[1][1]) / T::lit(2.0);
    let d = m[0][0] - mu;
    // det(M - mu I) = -d^2 - m01 m10 since the shifted diagonal is (d, -d)
    let disc = d * d + m[0][1] * m[1][0];
    let root = Complex::new(disc, T::zero()).sqrt();
    let centre = Complex::new(mu, T::zero());
    [centre + root, centre - root]
}

/// Monodromy of `W'' = -k(W) W / (c^2 - 1)` over one period of `wave`.
///
/// The vector field is continuous across `W = 0`, so the branch switches
/// carry no jump and the map is the product of the harmonic blocks of the
/// compression and tension arcs, once per repetition.
pub fn floquet_map<T: Scalar>(wave: &TravelingWave<T>) -> FloquetResult<T> {
    let (a, b) = (wave.a(), wave.b());
    let arc = mul(
        &harmonic_block(b, wave.repeat() - wave.alpha()),
        &harmonic_block(a, wave.alpha()),
    );
    let mut monodromy = [[T::one(), T::zero()], [T::zero(), T::one()]];
    for _ in 0..wave.n() {
        monodromy = mul(&arc, &monodromy);
    }
    FloquetResult {
        monodromy,
        multipliers: eigenvalues(&monodromy),
    }
}

/// Which family of perturbation is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationKind {
    /// `phi(t) + epsilon sin(omega1 t)` at the driven boundary.
    BoundaryHarmonic,
    /// `epsilon sin(q x) exp(-d x)` added to the initial state.
    InitialProfile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation<T> {
    pub kind: PerturbationKind,
    pub epsilon: T,
    pub omega1: T,
    pub wavenumber: T,
    pub decay: T,
}

impl<T: Scalar> Perturbation<T> {
    pub fn boundary(epsilon: T, omega1: T) -> Self {
        Self {
            kind: PerturbationKind::BoundaryHarmonic,
            epsilon,
            omega1,
            wavenumber: T::SQRT_2(),
            decay: T::lit(0.8),
        }
    }

    pub fn initial(epsilon: T) -> Self {
        Self {
            kind: PerturbationKind::InitialProfile,
            epsilon,
            omega1: T::zero(),
            wavenumber: T::SQRT_2(),
            decay: T::lit(0.8),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= T::zero()) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be finite and >= 0, got {}",
                self.epsilon
            )));
        }
        match self.kind {
            PerturbationKind::BoundaryHarmonic => {
                if !(self.omega1 > T::zero()) || !self.omega1.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "omega1 must be finite and > 0, got {}",
                        self.omega1
                    )));
                }
            }
            PerturbationKind::InitialProfile => {
                if !(self.decay >= T::zero() && self.wavenumber.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "initial profile needs a finite wavenumber and decay >= 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Wave driving a perturbed run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseWave<T> {
    Free(TravelingWave<T>),
    Loaded(LoadedWave<T>),
}

impl<T: Scalar> BaseWave<T> {
    fn driver(&self) -> BoundaryDriver<T> {
        match self {
            BaseWave::Free(w) => BoundaryDriver::Wave(*w),
            BaseWave::Loaded(w) => BoundaryDriver::Loaded(*w),
        }
    }

    pub fn period_frequency(&self) -> (T, T) {
        match self {
            BaseWave::Free(w) => w.period_frequency(),
            BaseWave::Loaded(w) => w.period_frequency(),
        }
    }

    pub fn max_abs(&self) -> T {
        match self {
            BaseWave::Free(w) => w.max_abs(),
            BaseWave::Loaded(w) => w.max_abs(),
        }
    }

    /// Stroboscopic point `(w, dw/dt)` of the unperturbed wave at `x0`.
    pub fn fixed_point(&self, x0: T) -> (T, T) {
        match self {
            BaseWave::Free(w) => (
                w.evaluate_spacetime(x0, T::zero()),
                w.velocity_spacetime(x0, T::zero()),
            ),
            BaseWave::Loaded(w) => (
                w.evaluate_spacetime(x0, T::zero()),
                w.velocity_spacetime(x0, T::zero()),
            ),
        }
    }
}

impl<T> From<TravelingWave<T>> for BaseWave<T> {
    fn from(w: TravelingWave<T>) -> Self {
        BaseWave::Free(w)
    }
}

impl<T> From<LoadedWave<T>> for BaseWave<T> {
    fn from(w: LoadedWave<T>) -> Self {
        BaseWave::Loaded(w)
    }
}

/// Runs `config` driven by `base` with the perturbation folded into the
/// boundary or initial data. The boundary and initial fields of `config`
/// are overwritten.
pub fn perturbed_run<T: Scalar>(
    base: &BaseWave<T>,
    pert: &Perturbation<T>,
    config: &SimConfig<T>,
    plan: &RecordPlan<T>,
) -> Result<RunRecord<T>> {
    pert.validate()?;
    let mut cfg = config.clone();
    cfg.boundary = base.driver();
    cfg.initial = InitialCondition::Rest;
    match pert.kind {
        PerturbationKind::BoundaryHarmonic => {
            if pert.epsilon > T::zero() {
                cfg.boundary = cfg.boundary.perturbed(pert.epsilon, pert.omega1);
            }
        }
        PerturbationKind::InitialProfile => {
            cfg.initial = InitialCondition::DecayingSinusoid {
                epsilon: pert.epsilon,
                wavenumber: pert.wavenumber,
                decay: pert.decay,
            };
        }
    }
    match base {
        BaseWave::Free(_) => run(&cfg, plan),
        BaseWave::Loaded(w) => run_loaded(&cfg, w, plan),
    }
}

/// Stroboscopic samples `(f, df/dt)` at `t = k tau` of a probe series.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMapSeries<T> {
    pub x0: T,
    pub tau: T,
    pub times: Vec<T>,
    pub samples: Vec<(T, T)>,
}

/// Four-point Lagrange interpolation on a uniform grid.
fn cubic_at<T: Scalar>(t0: T, h: T, y: &[T], t: T) -> T {
    let s = (t - t0) / h;
    let n = y.len();
    let i = s.floor().to_usize().unwrap_or(0).clamp(1, n - 3);
    let u = s - T::count(i);
    let (ym, y0, y1, y2) = (y[i - 1], y[i], y[i + 1], y[i + 2]);
    let one = T::one();
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    -u * (u - one) * (u - two) / six * ym + (u + one) * (u - one) * (u - two) / two * y0
        - (u + one) * u * (u - two) / two * y1
        + (u + one) * u * (u - one) / six * y2
}

/// Samples `series` at every multiple of `tau` not earlier than `skip`.
pub fn return_map<T: Scalar>(
    series: &ProbeSeries<T>,
    tau: T,
    skip: T,
) -> Result<ReturnMapSeries<T>> {
    if !(tau > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "tau must be > 0, got {tau}"
        )));
    }
    let needed = skip + T::count(MIN_RETURN_PERIODS) * tau;
    let n = series.t.len();
    let available = if n == 0 { T::zero() } else { series.t[n - 1] };
    if n < 4 || available < needed {
        return Err(Error::InsufficientDuration {
            needed: needed.as_f64(),
            available: available.as_f64(),
        });
    }
    let t0 = series.t[0];
    let h = (series.t[n - 1] - t0) / T::count(n - 1);
    let first = (skip.max(t0) / tau).ceil().to_usize().unwrap_or(0);
    let mut times = Vec::new();
    let mut samples = Vec::new();
    let mut k = first;
    loop {
        let t = T::count(k) * tau;
        // the stencil needs one node on the far side
        if t > series.t[n - 2] {
            break;
        }
        times.push(t);
        samples.push((
            cubic_at(t0, h, &series.w, t),
            cubic_at(t0, h, &series.wdot, t),
        ));
        k += 1;
    }
    Ok(ReturnMapSeries {
        x0: series.x,
        tau,
        times,
        samples,
    })
}

/// Shape statistics of a return-map cloud in the plane `(f, (df/dt)/omega)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitMetrics<T> {
    /// Mean of the samples, in `(f, df/dt)` units.
    pub centroid: (T, T),
    pub mean_radius: T,
    /// Standard deviation of the radius.
    pub spread: T,
    /// `spread / mean_radius`.
    pub closure: T,
}

/// Radii are measured after dividing the velocity by `omega = 2 pi / tau`
/// so both axes carry displacement units.
pub fn orbit_metrics<T: Scalar>(series: &ReturnMapSeries<T>) -> Result<OrbitMetrics<T>> {
    let n = series.samples.len();
    if n < MIN_ORBIT_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            needed: MIN_ORBIT_SAMPLES,
        });
    }
    let omega = T::TAU() / series.tau;
    let count = T::count(n);
    let (sf, sv) = series
        .samples
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(f, v)| (a + f, b + v));
    let centroid = (sf / count, sv / count);
    let radii: Vec<T> = series
        .samples
        .iter()
        .map(|&(f, v)| (f - centroid.0).hypot((v - centroid.1) / omega))
        .collect();
    let mean_radius = radii.iter().fold(T::zero(), |a, &r| a + r) / count;
    let var = radii
        .iter()
        .fold(T::zero(), |a, &r| a + (r - mean_radius) * (r - mean_radius))
        / count;
    let spread = var.sqrt();
    let closure = if mean_radius > T::zero() {
        spread / mean_radius
    } else {
        T::zero()
    };
    Ok(OrbitMetrics {
        centroid,
        mean_radius,
        spread,
        closure,
    })
}

/// Smallest and largest scaled distance of the samples from `point`.
pub fn distance_range<T: Scalar>(series: &ReturnMapSeries<T>, point: (T, T)) -> (T, T) {
    let omega = T::TAU() / series.tau;
    series
        .samples
        .iter()
        .map(|&(f, v)| (f - point.0).hypot((v - point.1) / omega))
        .fold((T::infinity(), T::zero()), |(lo, hi), d| {
            (lo.min(d), hi.max(d))
        })
}

/// Mean scaled distance from `center` of the samples falling in each of
/// `sectors` equal angular sectors around it; `None` marks an empty sector.
///
/// Two loops around the same centre are nested when one has the larger
/// radius in every sector both occupy.
pub fn sector_radii<T: Scalar>(
    series: &ReturnMapSeries<T>,
    center: (T, T),
    sectors: usize,
) -> Vec<Option<T>> {
    let omega = T::TAU() / series.tau;
    let mut sum = vec![(T::zero(), 0usize); sectors.max(1)];
    let width = T::TAU() / T::count(sum.len());
    for &(f, v) in &series.samples {
        let (dx, dy) = (f - center.0, (v - center.1) / omega);
        let angle = dy.atan2(dx) + T::PI();
        let k = (angle / width)
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(sum.len() - 1);
        sum[k].0 = sum[k].0 + dx.hypot(dy);
        sum[k].1 += 1;
    }
    sum.into_iter()
        .map(|(r, n)| (n > 0).then(|| r / T::count(n)))
        .collect()
}

/// Slow modulation of the per-period oscillation range at a probe.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeEstimate<T> {
    /// Angular frequency of the dominant modulation.
    pub frequency: T,
    /// Half the peak-to-peak variation of the envelope.
    pub depth: T,
    /// Mid-window times and peak-to-peak ranges, one per period.
    pub times: Vec<T>,
    pub envelope: Vec<T>,
}

/// Envelope of `series` from `skip` on, one peak-to-peak value per period
/// `tau`, and the frequency of its dominant component below the per-period
/// Nyquist limit `pi / tau`.
pub fn envelope_modulation<T: Scalar>(
    series: &ProbeSeries<T>,
    tau: T,
    skip: T,
) -> Result<EnvelopeEstimate<T>> {
    if !(tau > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "tau must be > 0, got {tau}"
        )));
    }
    let mut times = Vec::new();
    let mut envelope = Vec::new();
    let mut start = skip;
    let mut idx = series.t.partition_point(|&t| t < start);
    loop {
        let end = start + tau;
        let stop = series.t.partition_point(|&t| t < end);
        if stop >= series.t.len() {
            break;
        }
        let window = &series.w[idx..stop];
        if window.is_empty() {
            break;
        }
        let (lo, hi) = window
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(a, b), &w| {
                (a.min(w), b.max(w))
            });
        times.push(start + tau / T::lit(2.0));
        envelope.push(hi - lo);
        start = end;
        idx = stop;
    }
    const MIN_WINDOWS: usize = 8;
    if envelope.len() < MIN_WINDOWS {
        return Err(Error::TooFewSamples {
            got: envelope.len(),
            needed: MIN_WINDOWS,
        });
    }
    let count = T::count(envelope.len());
    let mean = envelope.iter().fold(T::zero(), |a, &e| a + e) / count;
    let power = |omega: T| {
        let (re, im) =
            times
                .iter()
                .zip(&envelope)
                .fold((T::zero(), T::zero()), |(re, im), (&t, &e)| {
                    let (s, c) = (omega * t).sin_cos();
                    (re + (e - mean) * c, im - (e - mean) * s)
                });
        re * re + im * im
    };
    let nyquist = T::PI() / tau;
    let span = times[times.len() - 1] - times[0];
    // several grid points per Fourier bin, then a golden-section refinement
    let bins = (nyquist * span / T::PI())
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let grid = 8 * bins;
    let step = nyquist / T::count(grid);
    let mut best = (step, T::neg_infinity());
    for j in 1..grid {
        let om = T::count(j) * step;
        let pw = power(om);
        if pw > best.1 {
            best = (om, pw);
        }
    }
    let (mut lo, mut hi) = ((best.0 - step).max(step / T::lit(4.0)), best.0 + step);
    let g = T::lit(0.618_033_988_749_894_8);
    for _ in 0..60 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if power(x1) > power(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let (emin, emax) = envelope
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(a, b), &e| {
            (a.min(e), b.max(e))
        });
    Ok(EnvelopeEstimate {
        frequency: (lo + hi) / T::lit(2.0),
        depth: (emax - emin) / T::lit(2.0),
        times,
        envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{solve_single_wave, Substrate};

    #[test]
    fn equal_stiffness_map_is_identity() {
        let w = solve_single_wave(Substrate::symmetric(1.0_f64).unwrap(), 1).unwrap();
        let f = floquet_map(&w);
        for (i, row) in f.monodromy.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-13, "{:?}", f.monodromy);
            }
        }
        assert!(f.distance_from_unity() < 1e-12);
    }

    #[test]
    fn multipliers_for_one_five() {
        let w = solve_single_wave(Substrate::new(1.0_f64, 5.0).unwrap(), 1).unwrap();
        let f = floquet_map(&w);
        assert!(f.distance_from_unity() < 1e-12);
        assert!((f.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_waves_compose() {
        let w = solve_single_wave(Substrate::new(2.0_f64, 7.0).unwrap(), 3).unwrap();
        let f = floquet_map(&w);
        assert!(f.distance_from_unity() < 1e-10);
    }

    #[test]
    fn eigenvalues_of_a_rotation() {
        let th = 0.3_f64;
        let m = [[th.cos(), -th.sin()], [th.sin(), th.cos()]];
        let [l1, l2] = eigenvalues(&m);
        assert!((l1.im.abs() - th.sin()).abs() < 1e-15);
        assert!((l1.re - th.cos()).abs() < 1e-15);
        assert!((l1 * l2).re - 1.0 < 1e-15);
    }

    #[test]
    fn cubic_reproduces_cubics() {
        let h = 0.1;
        let y: Vec<f64> = (0..20)
            .map(|i| {
                let t = i as f64 * h;
                t * t * t - 2.0 * t + 1.0
            })
            .collect();
        for &t in &[0.05_f64, 0.37, 1.23, 1.849] {
            let want = t * t * t - 2.0 * t + 1.0;
            assert!((cubic_at(0.0, h, &y, t) - want).abs() < 1e-12);
        }
    }

    fn synthetic(n: usize, dt: f64, f: impl Fn(f64) -> (f64, f64)) -> ProbeSeries<f64> {
        let t: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
        let (w, wdot) = t.iter().map(|&t| f(t)).unzip();
        ProbeSeries { x: 0.0, t, w, wdot }
    }

    #[test]
    fn circle_has_perfect_closure() {
        let tau = 1.0;
        let om = std::f64::consts::TAU;
        let om1 = std::f64::consts::SQRT_2 * om;
        let eps = 1e-3_f64;
        let s = synthetic(80_000, 1e-3, |t| {
            (
                (om * t).sin() + eps * (om1 * t).sin(),
                om * (om * t).cos() + eps * om * (om1 * t).cos(),
            )
        });
        let r = return_map(&s, tau, 5.0).unwrap();
        assert_eq!(r.times.first(), Some(&5.0));
        // every sample sits at the same point of the main tone
        for &(f, v) in &r.samples {
            assert!(f.abs() <= eps * 1.000_001 && (v - om).abs() <= eps * om * 1.000_001);
        }
        let m = orbit_metrics(&r).unwrap();
        assert!((m.mean_radius / eps - 1.0).abs() < 0.01, "{m:?}");
        assert!(m.closure < 0.01);
    }

    #[test]
    fn sectors_of_nested_ellipses() {
        let ring = |scale: f64| {
            let samples = (0..40)
                .map(|k| {
                    let th = 0.7 * k as f64;
                    (
                        scale * th.cos(),
                        scale * 3.0 * std::f64::consts::TAU * th.sin(),
                    )
                })
                .collect();
            ReturnMapSeries {
                x0: 0.0,
                tau: 1.0,
                times: vec![0.0; 40],
                samples,
            }
        };
        let (small, big) = (
            sector_radii(&ring(1.0), (0.0, 0.0), 8),
            sector_radii(&ring(1.5), (0.0, 0.0), 8),
        );
        let mut compared = 0;
        for (a, b) in small.iter().zip(&big) {
            if let (Some(a), Some(b)) = (a, b) {
                assert!(b > a);
                compared += 1;
            }
        }
        assert!(compared >= 4);
        // the minor axis of the larger loop is still inside the smaller one's mean radius
        let m = orbit_metrics(&ring(1.0)).unwrap();
        let (dmin, _) = distance_range(&ring(1.5), (0.0, 0.0));
        assert!(dmin < m.mean_radius);
    }

    #[test]
    fn exact_circle_metrics() {
        let n = 64;
        let samples = (0..n)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / n as f64;
                (
                    0.3 + 0.01 * th.cos(),
                    -2.0 + 0.01 * std::f64::consts::TAU * th.sin(),
                )
            })
            .collect();
        let r = ReturnMapSeries {
            x0: 0.0,
            tau: 1.0,
            times: vec![0.0; n],
            samples,
        };
        let m = orbit_metrics(&r).unwrap();
        assert!(m.closure < 1e-6, "{m:?}");
        assert!((m.mean_radius - 0.01).abs() < 1e-12);
        assert!((m.centroid.0 - 0.3).abs() < 1e-12);
    }

    #[test]
    fn duration_and_sample_guards() {
        let s = synthetic(1000, 0.01, |t| (t.sin(), t.cos()));
        assert!(matches!(
            return_map(&s, 1.0, 0.0),
            Err(Error::InsufficientDuration { .. })
        ));
        let r = ReturnMapSeries {
            x0: 0.0,
            tau: 1.0,
            times: vec![0.0; 5],
            samples: vec![(0.0, 0.0); 5],
        };
        assert!(matches!(
            orbit_metrics(&r),
            Err(Error::TooFewSamples { got: 5, .. })
        ));
    }

    #[test]
    fn beat_frequency_of_two_tones() {
        let om = std::f64::consts::TAU;
        let om1 = 1.1 * om;
        let s = synthetic(100_000, 1e-3, |t| {
            ((om * t).sin() + 0.3 * (om1 * t).sin(), 0.0)
        });
        let e = envelope_modulation(&s, 1.0, 2.0).unwrap();
        assert!(
            (e.frequency / (om1 - om) - 1.0).abs() < 0.02,
            "{}",
            e.frequency
        );
        assert!((e.depth - 0.6).abs() < 0.05, "{}", e.depth);
    }

    #[test]
    fn perturbation_validation() {
        assert!(Perturbation::boundary(-1.0, 1.0).validate().is_err());
        assert!(Perturbation::boundary(0.1, 0.0).validate().is_err());
        assert!(Perturbation::initial(0.1_f64).validate().is_ok());
    }
}
