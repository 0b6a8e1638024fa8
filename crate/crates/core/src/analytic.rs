//! Closed-form traveling waves of the unloaded bilinear Klein-Gordon equation.
//!
//! In the co-moving coordinate `xi = (x - c v t) / L` a single wave is negative
//! on `[0, alpha]` (compression, stiffness `k1`) and positive on `[alpha, 1]`
//! (tension, stiffness `k2`). Each branch is half a sine arc; matching values
//! and slopes at the nodes fixes both `alpha` and the phase speed `c`, leaving
//! the amplitude free.

use crate::error::Result;
use crate::scalar::{wrap_unit, Scalar};
use crate::substrate::Substrate;

/// Periodic single (or `n`-fold repeated) traveling wave without load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWave<T> {
    substrate: Substrate<T>,
    alpha: T,
    c: T,
    /// `c^2 - 1`, kept separately to avoid cancellation for soft substrates.
    excess: T,
    amplitude: T,
    n: u32,
    length: T,
    base_speed: T,
}

/// Solves the free-boundary matching problem for the `n`-fold repeated wave.
///
/// Returns the wave with unit amplitude, wavelength `L = 1` and base speed
/// `v = 1`; see the `with_*` builders to rescale.
pub fn solve_single_wave<T: Scalar>(substrate: Substrate<T>, n: u32) -> Result<TravelingWave<T>> {
    substrate.require_regular()?;
    if n == 0 {
        return Err(crate::Error::InvalidParameter(
            "repetition index n must be >= 1".into(),
        ));
    }
    let (r1, r2) = (substrate.k1().sqrt(), substrate.k2().sqrt());
    let nn = T::count(n as usize);
    let alpha = r2 / (r1 + r2) / nn;
    let pi_n = T::PI() * nn;
    let c2m1 = substrate.k1() * substrate.k2() / (pi_n * pi_n * (r1 + r2) * (r1 + r2));
    Ok(TravelingWave {
        substrate,
        alpha,
        c: (T::one() + c2m1).sqrt(),
        excess: c2m1,
        amplitude: T::one(),
        n,
        length: T::one(),
        base_speed: T::one(),
    })
}

impl<T: Scalar> TravelingWave<T> {
    /// Sets the free amplitude `c3` (peak of the tension branch).
    pub fn with_amplitude(mut self, amplitude: T) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Sets the physical wavelength `L`.
    pub fn with_length(mut self, length: T) -> Self {
        self.length = length;
        self
    }

    /// Sets the substrate-free wave speed `v`.
    pub fn with_base_speed(mut self, v: T) -> Self {
        self.base_speed = v;
        self
    }

    pub fn substrate(&self) -> Substrate<T> {
        self.substrate
    }

    /// Fraction of the period spent in compression.
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Nondimensional phase speed `c = c_hat / v`.
    pub fn c(&self) -> T {
        self.c
    }

    pub fn c_squared(&self) -> T {
        T::one() + self.excess
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn base_speed(&self) -> T {
        self.base_speed
    }

    /// Physical phase speed `c v`.
    pub fn phase_speed(&self) -> T {
        self.c * self.base_speed
    }

    /// Nondimensional length of one repetition, `1/n`.
    pub fn repeat(&self) -> T {
        T::one() / T::count(self.n as usize)
    }

    /// Compression-branch wavenumber `a = sqrt(k1 / (c^2 - 1))`.
    pub fn a(&self) -> T {
        (self.substrate.k1() / self.excess).sqrt()
    }

    /// Tension-branch wavenumber `b = sqrt(k2 / (c^2 - 1))`.
    pub fn b(&self) -> T {
        (self.substrate.k2() / self.excess).sqrt()
    }

    /// Residuals `(a alpha - pi, b (1/n - alpha) - pi)` of the node conditions.
    pub fn junction_residuals(&self) -> (T, T) {
        (
            self.a() * self.alpha - T::PI(),
            self.b() * (self.repeat() - self.alpha) - T::PI(),
        )
    }

    /// Peak magnitude of the compression branch, `c3 sqrt(k2/k1)`.
    pub fn compression_peak(&self) -> T {
        self.amplitude * (self.substrate.k2() / self.substrate.k1()).sqrt()
    }

    /// Largest `|W|` over the period.
    pub fn max_abs(&self) -> T {
        self.amplitude.abs().max(self.compression_peak().abs())
    }

    fn local(&self, xi: T) -> T {
        let xi = wrap_unit(xi, T::one());
        if self.n == 1 {
            xi
        } else {
            wrap_unit(xi, self.repeat())
        }
    }

    /// Profile `W(xi)`; `xi` is reduced into `[0, 1)`.
    pub fn profile(&self, xi: T) -> T {
        let s = self.local(xi);
        let pi = T::PI();
        if s <= self.alpha {
            -self.compression_peak() * (s * pi / self.alpha).sin()
        } else {
            let tension = self.repeat() - self.alpha;
            self.amplitude * ((s - self.alpha) * pi / tension).sin()
        }
    }

    /// Slope `dW/dxi`. At the nodes the compression branch is used.
    pub fn slope(&self, xi: T) -> T {
        let s = self.local(xi);
        let pi = T::PI();
        if s <= self.alpha {
            -self.compression_peak() * pi / self.alpha * (s * pi / self.alpha).cos()
        } else {
            let tension = self.repeat() - self.alpha;
            self.amplitude * pi / tension * ((s - self.alpha) * pi / tension).cos()
        }
    }

    /// Co-moving coordinate of the physical point `(x, t)`.
    pub fn phase(&self, x: T, t: T) -> T {
        (x - self.phase_speed() * t) / self.length
    }

    /// Displacement `w(x, t) = W((x - c v t) / L)`.
    pub fn evaluate_spacetime(&self, x: T, t: T) -> T {
        self.profile(self.phase(x, t))
    }

    /// Time derivative `dw/dt` at `(x, t)`.
    pub fn velocity_spacetime(&self, x: T, t: T) -> T {
        -self.phase_speed() / self.length * self.slope(self.phase(x, t))
    }

    /// Period `tau = L / (c v)` and angular frequency `omega = 2 pi / tau`.
    pub fn period_frequency(&self) -> (T, T) {
        let tau = self.length / self.phase_speed();
        (tau, T::TAU() / tau)
    }

    /// Phase-plane point `(W(0), W'(0))` that the period map leaves fixed.
    pub fn fixed_point(&self) -> (T, T) {
        (T::zero(), self.slope(T::zero()))
    }
}

/// Which exact limit of the stiffness ratio to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// `k2 -> 0`: tension side detached.
    Unilateral,
    /// `k2 -> inf`: tension side rigid.
    UnilaterallyRigid,
}

/// Limits of the closed-form solution as one stiffness degenerates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitReport<T> {
    pub kind: LimitKind,
    pub alpha: T,
    pub c_squared: T,
    pub c: T,
    /// The slope of the limiting profile jumps at the nodes, so no regular
    /// (continuously differentiable) periodic wave exists in the exact limit.
    pub regular_wave_exists: bool,
}

/// Exact-limit behaviour for `k2 -> 0` or `k2 -> inf` at the given `k1`.
pub fn limit_case<T: Scalar>(substrate: Substrate<T>, kind: LimitKind) -> LimitReport<T> {
    let (alpha, c_squared) = match kind {
        LimitKind::Unilateral => (T::zero(), T::one()),
        LimitKind::UnilaterallyRigid => (T::one(), T::one() + substrate.k1() / (T::PI() * T::PI())),
    };
    LimitReport {
        kind,
        alpha,
        c_squared,
        c: c_squared.sqrt(),
        regular_wave_exists: false,
    }
}
