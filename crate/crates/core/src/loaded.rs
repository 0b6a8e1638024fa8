//! Traveling waves under a constant transverse load.
//!
//! With a load `p` each branch of the profile becomes a harmonic plus the
//! constant `p/k`, the compression fraction `alpha` becomes a free parameter,
//! and the branch wavenumber `a` solves the transcendental relation
//!
//! ```text
//! sqrt(k1/k2) = sin(a alpha)/(cos(a alpha) + 1) * sin(b (1 - alpha))/(cos(b (1 - alpha)) - 1),
//! b = a sqrt(k2/k1).
//! ```
//!
//! Writing the right-hand side with half angles, the residual equals
//! `h(a) / (cos(A/2) sin(B/2))` with `A = a alpha`, `B = b (1 - alpha)` and
//! `h(a) = sin(A/2) cos(B/2) + sqrt(k1/k2) cos(A/2) sin(B/2)`. The numerator is
//! smooth, so roots are bracketed between the (analytically known) poles and
//! refined by bisection on `h`.

use crate::analytic::solve_single_wave;
use crate::error::{Error, Result};
use crate::scalar::{wrap_unit, Scalar};
use crate::substrate::Substrate;

/// `|cos(a alpha) + 1|` or `|cos(b (1 - alpha)) - 1|` below this is a pole.
pub const SINGULAR_GUARD: f64 = 1e-9;

/// `alpha` this close to `alpha_cr` is rejected: the amplitude diverges there.
pub const CRITICAL_ALPHA_TOL: f64 = 1e-6;

/// Absolute bisection tolerance on `a`.
pub const ROOT_TOL: f64 = 1e-12;

/// Roots whose pole factor `|cos(A/2) sin(B/2)|` falls below this coincide
/// with a singularity and are discarded.
const DEGENERATE_ROOT: f64 = 1e-8;

/// Compression fraction at which the loaded amplitude diverges; it equals the
/// unloaded `alpha` for the same substrate.
pub fn alpha_critical<T: Scalar>(substrate: Substrate<T>) -> Result<T> {
    Ok(solve_single_wave(substrate, 1)?.alpha())
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// Left minus right side of the dispersion relation at `(alpha, a)`.
pub fn dispersion_residual<T: Scalar>(substrate: Substrate<T>, alpha: T, a: T) -> Result<T> {
    substrate.require_regular()?;
    check_alpha(alpha)?;
    if !(a > T::zero()) {
        return Err(Error::InvalidParameter(format!("a must be > 0, got {a}")));
    }
    let big_a = a * alpha;
    let big_b = a * (substrate.k2() / substrate.k1()).sqrt() * (T::one() - alpha);
    let half = T::lit(0.5);
    let (ha, hb) = (half * big_a, half * big_b);
    // cos x + 1 = 2 cos^2(x/2), cos x - 1 = -2 sin^2(x/2), without cancellation
    let d1 = T::lit(2.0) * ha.cos() * ha.cos();
    let d2 = -T::lit(2.0) * hb.sin() * hb.sin();
    let guard = T::lit(SINGULAR_GUARD);
    if d1.abs() < guard || d2.abs() < guard {
        return Err(Error::SingularPoint { a: a.as_f64() });
    }
    let q = (substrate.k1() / substrate.k2()).sqrt();
    Ok(q - big_a.sin() / d1 * big_b.sin() / d2)
}

/// Pole-free numerator of the residual and the pole factor it is divided by.
#[derive(Debug, Clone, Copy)]
struct Cleared<T> {
    q: T,
    r: T,
    alpha: T,
}

impl<T: Scalar> Cleared<T> {
    fn new(substrate: Substrate<T>, alpha: T) -> Self {
        Self {
            q: (substrate.k1() / substrate.k2()).sqrt(),
            r: (substrate.k2() / substrate.k1()).sqrt(),
            alpha,
        }
    }

    fn half_angles(&self, a: T) -> (T, T) {
        let half = T::lit(0.5);
        (
            half * a * self.alpha,
            half * a * self.r * (T::one() - self.alpha),
        )
    }

    fn numerator(&self, a: T) -> T {
        let (ha, hb) = self.half_angles(a);
        ha.sin() * hb.cos() + self.q * ha.cos() * hb.sin()
    }

    fn pole_factor(&self, a: T) -> T {
        let (ha, hb) = self.half_angles(a);
        ha.cos() * hb.sin()
    }
}

/// Load sign required by the admissibility condition `c1 <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadSign {
    Positive,
    Negative,
    Either,
}

impl LoadSign {
    pub fn admits<T: Scalar>(self, p: T) -> bool {
        match self {
            LoadSign::Positive => p > T::zero(),
            LoadSign::Negative => p < T::zero(),
            LoadSign::Either => p != T::zero(),
        }
    }
}

/// One root `a` of the dispersion relation at fixed `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRoot<T> {
    pub a: T,
    pub load_sign: LoadSign,
}

/// Roots and poles of the dispersion relation on `(0, a_max)` at fixed `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionScan<T> {
    pub alpha: T,
    /// Increasing; the first entry is the simple wave.
    pub roots: Vec<DispersionRoot<T>>,
    /// Increasing positions where either denominator vanishes.
    pub singularities: Vec<T>,
    /// At `alpha_cr` the lowest branch collapses onto the pole `a = pi/alpha`;
    /// that limit is reported here and is not admissible for any load.
    pub critical_limit: Option<T>,
}

/// Range and sampling density of a root scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions<T> {
    pub a_max: T,
    pub grid: usize,
}

impl<T: Scalar> Default for ScanOptions<T> {
    fn default() -> Self {
        Self {
            a_max: T::lit(12.0) * T::PI(),
            grid: 20_000,
        }
    }
}

fn singularities<T: Scalar>(substrate: Substrate<T>, alpha: T, a_max: T) -> Vec<T> {
    let mut out = Vec::new();
    let pi = T::PI();
    // cos(a alpha) = -1
    let mut m = 0usize;
    loop {
        let s = (T::lit(2.0) * T::count(m) + T::one()) * pi / alpha;
        if s >= a_max {
            break;
        }
        out.push(s);
        m += 1;
    }
    // cos(b (1 - alpha)) = 1
    let rate = (substrate.k2() / substrate.k1()).sqrt() * (T::one() - alpha);
    let mut m = 1usize;
    loop {
        let s = T::TAU() * T::count(m) / rate;
        if s >= a_max {
            break;
        }
        out.push(s);
        m += 1;
    }
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite singularity"));
    out.dedup_by(|x, y| (*x - *y).abs() <= T::epsilon() * y.abs());
    out
}

fn bisect<T: Scalar>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, mut f_lo: T) -> T {
    let tol = T::lit(ROOT_TOL);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return mid;
        }
        if (f_mid < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / T::lit(2.0)
}

/// Locates the roots of the dispersion relation for `a` in `(0, a_max)`.
pub fn scan_roots<T: Scalar>(
    substrate: Substrate<T>,
    alpha: T,
    options: &ScanOptions<T>,
) -> Result<DispersionScan<T>> {
    substrate.require_regular()?;
    check_alpha(alpha)?;
    if !(options.a_max > T::zero()) || !options.a_max.is_finite() {
        return Err(Error::InvalidParameter("a_max must be positive".into()));
    }
    if options.grid < 1000 {
        return Err(Error::InvalidParameter(format!(
            "scan grid must have at least 1000 points, got {}",
            options.grid
        )));
    }
    let step = options.a_max / T::count(options.grid);
    let sings = singularities(substrate, alpha, options.a_max);
    let cleared = Cleared::new(substrate, alpha);

    let mut edges = Vec::with_capacity(sings.len() + 2);
    // h vanishes trivially at a = 0
    edges.push(step * T::lit(1e-3));
    edges.extend(sings.iter().copied());
    edges.push(options.a_max);

    let mut roots = Vec::new();
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        let pieces = ((hi - lo) / step).ceil().to_usize().unwrap_or(1).max(8);
        let width = (hi - lo) / T::count(pieces);
        let mut x0 = lo;
        let mut f0 = cleared.numerator(x0);
        for j in 1..=pieces {
            let x1 = if j == pieces {
                hi
            } else {
                lo + width * T::count(j)
            };
            let f1 = cleared.numerator(x1);
            let root = if f0 == T::zero() && j > 1 {
                Some(x0)
            } else if (f0 < T::zero()) != (f1 < T::zero()) && f1 != T::zero() {
                Some(bisect(|a| cleared.numerator(a), x0, x1, f0))
            } else {
                None
            };
            if let Some(a) = root {
                if cleared.pole_factor(a).abs() > T::lit(DEGENERATE_ROOT) {
                    let s = (a * alpha).sin();
                    let load_sign = if s.abs() < T::lit(SINGULAR_GUARD) {
                        LoadSign::Either
                    } else if s > T::zero() {
                        LoadSign::Positive
                    } else {
                        LoadSign::Negative
                    };
                    roots.push(DispersionRoot { a, load_sign });
                }
            }
            x0 = x1;
            f0 = f1;
        }
    }

    let alpha_cr = alpha_critical(substrate)?;
    let critical_limit =
        ((alpha - alpha_cr).abs() <= T::lit(CRITICAL_ALPHA_TOL)).then(|| T::PI() / alpha);
    if roots.is_empty() && critical_limit.is_none() {
        return Err(Error::NoRootInRange {
            a_max: options.a_max.as_f64(),
        });
    }
    Ok(DispersionScan {
        alpha,
        roots,
        singularities: sings,
        critical_limit,
    })
}

/// Loaded traveling wave on a bilinear substrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadedWave<T> {
    substrate: Substrate<T>,
    p: T,
    alpha: T,
    a: T,
    b: T,
    c: T,
    coeffs: [T; 4],
    branch: usize,
    length: T,
    base_speed: T,
}

/// Solves for the loaded wave with the default scan range.
pub fn solve_loaded_wave<T: Scalar>(
    substrate: Substrate<T>,
    p: T,
    alpha: T,
    branch: usize,
) -> Result<LoadedWave<T>> {
    solve_loaded_wave_with(substrate, p, alpha, branch, &ScanOptions::default())
}

/// Solves for the loaded wave on the `branch`-th root (0 = simple wave).
///
/// The sign of `p` must match the admissibility of the lowest root: `p > 0`
/// below `alpha_cr`, `p < 0` above it.
pub fn solve_loaded_wave_with<T: Scalar>(
    substrate: Substrate<T>,
    p: T,
    alpha: T,
    branch: usize,
    options: &ScanOptions<T>,
) -> Result<LoadedWave<T>> {
    substrate.require_regular()?;
    check_alpha(alpha)?;
    if p == T::zero() || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "load p must be finite and nonzero, got {p}"
        )));
    }
    let alpha_cr = alpha_critical(substrate)?;
    if (alpha - alpha_cr).abs() <= T::lit(CRITICAL_ALPHA_TOL) {
        return Err(Error::CriticalAlpha {
            alpha: alpha.as_f64(),
            alpha_cr: alpha_cr.as_f64(),
        });
    }
    let scan = scan_roots(substrate, alpha, options)?;
    let inadmissible = || Error::InadmissibleLoadSign {
        p: p.as_f64(),
        alpha: alpha.as_f64(),
        alpha_cr: alpha_cr.as_f64(),
    };
    let lowest = scan.roots.first().ok_or(Error::NoRootInRange {
        a_max: options.a_max.as_f64(),
    })?;
    if !lowest.load_sign.admits(p) {
        return Err(inadmissible());
    }
    let root = scan.roots.get(branch).ok_or(Error::NoRoot {
        branch,
        available: scan.roots.len(),
    })?;
    if !root.load_sign.admits(p) {
        return Err(inadmissible());
    }
    Ok(LoadedWave::from_root(substrate, p, alpha, root.a, branch))
}

impl<T: Scalar> LoadedWave<T> {
    fn from_root(substrate: Substrate<T>, p: T, alpha: T, a: T, branch: usize) -> Self {
        let (k1, k2) = (substrate.k1(), substrate.k2());
        let b = a * (k2 / k1).sqrt();
        let half = T::lit(0.5);
        // (cos x - 1)/sin x = -tan(x/2)
        let c1 = -(p / k1) * (half * a * alpha).tan();
        let c3 = -(p / k2) * (half * b * (T::one() - alpha)).tan();
        Self {
            substrate,
            p,
            alpha,
            a,
            b,
            c: (T::one() + k1 / (a * a)).sqrt(),
            coeffs: [c1, -p / k1, c3, -p / k2],
            branch,
            length: T::one(),
            base_speed: T::one(),
        }
    }

    pub fn with_length(mut self, length: T) -> Self {
        self.length = length;
        self
    }

    pub fn with_base_speed(mut self, v: T) -> Self {
        self.base_speed = v;
        self
    }

    pub fn substrate(&self) -> Substrate<T> {
        self.substrate
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Nondimensional phase speed `sqrt(1 + k1/a^2)`.
    pub fn c(&self) -> T {
        self.c
    }

    /// `[c1, c2, c3, c4]`.
    pub fn coefficients(&self) -> [T; 4] {
        self.coeffs
    }

    pub fn branch(&self) -> usize {
        self.branch
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn base_speed(&self) -> T {
        self.base_speed
    }

    pub fn phase_speed(&self) -> T {
        self.c * self.base_speed
    }

    /// Constant equilibrium of the loaded equation: `p/k1` for `p < 0`,
    /// `p/k2` for `p > 0`.
    pub fn particular_solution(&self) -> T {
        particular_solution(self.substrate, self.p)
    }

    /// Residual of the dispersion relation at this wave's `(alpha, a)`.
    pub fn dispersion_residual(&self) -> Result<T> {
        dispersion_residual(self.substrate, self.alpha, self.a)
    }

    /// `W(xi)` with `xi` reduced into `[0, 1)`.
    pub fn profile(&self, xi: T) -> T {
        let s = wrap_unit(xi, T::one());
        let [c1, c2, c3, c4] = self.coeffs;
        if s <= self.alpha {
            let x = self.a * s;
            c1 * x.sin() + c2 * x.cos() + self.p / self.substrate.k1()
        } else {
            let x = self.b * (s - self.alpha);
            c3 * x.sin() + c4 * x.cos() + self.p / self.substrate.k2()
        }
    }

    /// `dW/dxi`; at the nodes the compression branch is used.
    pub fn slope(&self, xi: T) -> T {
        let s = wrap_unit(xi, T::one());
        let [c1, c2, c3, c4] = self.coeffs;
        if s <= self.alpha {
            let x = self.a * s;
            self.a * (c1 * x.cos() - c2 * x.sin())
        } else {
            let x = self.b * (s - self.alpha);
            self.b * (c3 * x.cos() - c4 * x.sin())
        }
    }

    /// One-sided slopes `(W1'(0), W2'(1), W1'(alpha), W2'(alpha))`.
    pub fn junction_slopes(&self) -> [T; 4] {
        let [c1, c2, c3, c4] = self.coeffs;
        let (x1, x2) = (self.a * self.alpha, self.b * (T::one() - self.alpha));
        [
            self.a * c1,
            self.b * (c3 * x2.cos() - c4 * x2.sin()),
            self.a * (c1 * x1.cos() - c2 * x1.sin()),
            self.b * c3,
        ]
    }

    pub fn phase(&self, x: T, t: T) -> T {
        (x - self.phase_speed() * t) / self.length
    }

    pub fn evaluate_spacetime(&self, x: T, t: T) -> T {
        self.profile(self.phase(x, t))
    }

    pub fn velocity_spacetime(&self, x: T, t: T) -> T {
        -self.phase_speed() / self.length * self.slope(self.phase(x, t))
    }

    pub fn period_frequency(&self) -> (T, T) {
        let tau = self.length / self.phase_speed();
        (tau, T::TAU() / tau)
    }

    /// Minimum of the compression branch and maximum of the tension branch.
    ///
    /// Each branch is a harmonic plus an offset, symmetric about its
    /// midpoint, so the extremum is offset minus (or plus) the harmonic
    /// amplitude.
    pub fn extrema(&self) -> LoadedExtrema<T> {
        let [c1, c2, c3, c4] = self.coeffs;
        let (k1, k2) = (self.substrate.k1(), self.substrate.k2());
        let min_compression = self.p / k1 - c1.hypot(c2);
        let max_tension = self.p / k2 + c3.hypot(c4);
        LoadedExtrema {
            min_compression,
            max_tension,
            normalized_min: min_compression * k1 / self.p,
            normalized_max: max_tension * k2 / self.p,
        }
    }

    pub fn max_abs(&self) -> T {
        let e = self.extrema();
        e.min_compression.abs().max(e.max_tension.abs())
    }
}

/// Branch extrema of a loaded wave, raw and normalized by `k/p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadedExtrema<T> {
    pub min_compression: T,
    pub max_tension: T,
    pub normalized_min: T,
    pub normalized_max: T,
}

/// Constant particular solution `w_p` of the loaded equation.
pub fn particular_solution<T: Scalar>(substrate: Substrate<T>, p: T) -> T {
    if p < T::zero() {
        p / substrate.k1()
    } else if p > T::zero() {
        p / substrate.k2()
    } else {
        T::zero()
    }
}

/// True when an oscillation of the given magnitude never reaches zero around
/// the constant offset selected by the sign of `p`.
pub fn zero_wave_exists<T: Scalar>(substrate: Substrate<T>, p: T, amplitude: T) -> bool {
    if p == T::zero() {
        return false;
    }
    let offset = particular_solution(substrate, p).abs();
    amplitude.abs() < offset
}
