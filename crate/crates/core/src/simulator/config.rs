use crate::analytic::TravelingWave;
use crate::error::{Error, Result};
use crate::loaded::{particular_solution, LoadedWave};
use crate::scalar::Scalar;
use crate::substrate::Substrate;

/// Largest admissible Courant number `v dt / dx`.
pub const MAX_COURANT: f64 = 0.9;

/// Safety factor applied to the critical time step.
pub const SAFETY: f64 = 0.9;

/// Relative margin between the farthest signal and the far boundary.
pub const DOMAIN_MARGIN: f64 = 1.1;

/// Grid points per wavelength `L` at the default resolution.
pub const DEFAULT_POINTS_PER_LENGTH: usize = 200;

/// Boundary data `phi(t)` imposed at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryDriver<T> {
    Zero,
    /// Held at a fixed displacement.
    Constant(T),
    /// Trace `w(0, t)` of an unloaded traveling wave.
    Wave(TravelingWave<T>),
    /// Trace `w(0, t)` of a loaded traveling wave.
    Loaded(LoadedWave<T>),
    /// `base(t) + epsilon sin(omega1 t)`.
    Perturbed {
        base: Box<BoundaryDriver<T>>,
        epsilon: T,
        omega1: T,
    },
}

impl<T: Scalar> BoundaryDriver<T> {
    pub fn perturbed(self, epsilon: T, omega1: T) -> Self {
        BoundaryDriver::Perturbed {
            base: Box::new(self),
            epsilon,
            omega1,
        }
    }

    pub fn value(&self, t: T) -> T {
        match self {
            BoundaryDriver::Zero => T::zero(),
            BoundaryDriver::Constant(c) => *c,
            BoundaryDriver::Wave(w) => w.evaluate_spacetime(T::zero(), t),
            BoundaryDriver::Loaded(w) => w.evaluate_spacetime(T::zero(), t),
            BoundaryDriver::Perturbed {
                base,
                epsilon,
                omega1,
            } => base.value(t) + *epsilon * (*omega1 * t).sin(),
        }
    }

    /// `d phi / dt`.
    pub fn rate(&self, t: T) -> T {
        match self {
            BoundaryDriver::Zero | BoundaryDriver::Constant(_) => T::zero(),
            BoundaryDriver::Wave(w) => w.velocity_spacetime(T::zero(), t),
            BoundaryDriver::Loaded(w) => w.velocity_spacetime(T::zero(), t),
            BoundaryDriver::Perturbed {
                base,
                epsilon,
                omega1,
            } => base.rate(t) + *epsilon * *omega1 * (*omega1 * t).cos(),
        }
    }

    /// Bound on `|phi|`.
    pub fn amplitude(&self) -> T {
        match self {
            BoundaryDriver::Zero => T::zero(),
            BoundaryDriver::Constant(c) => c.abs(),
            BoundaryDriver::Wave(w) => w.max_abs(),
            BoundaryDriver::Loaded(w) => w.max_abs(),
            BoundaryDriver::Perturbed { base, epsilon, .. } => base.amplitude() + epsilon.abs(),
        }
    }

    /// Physical phase speed of the injected wave, if any.
    pub fn phase_speed(&self) -> Option<T> {
        match self {
            BoundaryDriver::Zero | BoundaryDriver::Constant(_) => None,
            BoundaryDriver::Wave(w) => Some(w.phase_speed()),
            BoundaryDriver::Loaded(w) => Some(w.phase_speed()),
            BoundaryDriver::Perturbed { base, .. } => base.phase_speed(),
        }
    }

    /// True when nothing propagates in from the boundary.
    pub fn is_static(&self) -> bool {
        matches!(self, BoundaryDriver::Zero | BoundaryDriver::Constant(_))
    }
}

/// Initial deviation from the static equilibrium (`w = w_p`, or `0` unloaded).
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition<T> {
    Rest,
    /// `epsilon sin(wavenumber x) exp(-decay x)` with zero velocity.
    DecayingSinusoid {
        epsilon: T,
        wavenumber: T,
        decay: T,
    },
    /// `amplitude exp(-((x - center)/width)^2)` with zero velocity.
    Gaussian {
        amplitude: T,
        center: T,
        width: T,
    },
    /// Displacement and velocity of a traveling wave at `t = 0`.
    Wave(TravelingWave<T>),
}

impl<T: Scalar> InitialCondition<T> {
    /// Perturbation family with the default wavenumber `sqrt(2)` and decay `0.8`.
    pub fn decaying_sinusoid(epsilon: T) -> Self {
        InitialCondition::DecayingSinusoid {
            epsilon,
            wavenumber: T::SQRT_2(),
            decay: T::lit(0.8),
        }
    }

    pub fn displacement(&self, x: T) -> T {
        match self {
            InitialCondition::Rest => T::zero(),
            InitialCondition::DecayingSinusoid {
                epsilon,
                wavenumber,
                decay,
            } => *epsilon * (*wavenumber * x).sin() * (-*decay * x).exp(),
            InitialCondition::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let z = (x - *center) / *width;
                *amplitude * (-z * z).exp()
            }
            InitialCondition::Wave(w) => w.evaluate_spacetime(x, T::zero()),
        }
    }

    pub fn velocity(&self, x: T) -> T {
        match self {
            InitialCondition::Wave(w) => w.velocity_spacetime(x, T::zero()),
            _ => T::zero(),
        }
    }

    pub fn amplitude(&self) -> T {
        match self {
            InitialCondition::Rest => T::zero(),
            InitialCondition::DecayingSinusoid { epsilon, .. } => epsilon.abs(),
            InitialCondition::Gaussian { amplitude, .. } => amplitude.abs(),
            InitialCondition::Wave(w) => w.max_abs(),
        }
    }
}

/// Finite-difference experiment on the half line `0 <= x <= domain_length`.
///
/// The substrate stiffnesses and the load are nondimensional; the physical
/// reaction coefficient is `k v^2 / L^2` and the physical load `p v^2 / L^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<T> {
    pub substrate: Substrate<T>,
    pub base_speed: T,
    pub length_scale: T,
    pub domain_length: T,
    pub dx: T,
    pub dt: T,
    pub t_end: T,
    pub boundary: BoundaryDriver<T>,
    pub initial: InitialCondition<T>,
    pub load: T,
}

impl<T: Scalar> SimConfig<T> {
    /// Default resolution (`dx = L/200`, `dt` from the stability rule) and a
    /// domain just long enough for the boundary signal.
    pub fn new(substrate: Substrate<T>, boundary: BoundaryDriver<T>, t_end: T) -> Self {
        let mut cfg = Self {
            substrate,
            base_speed: T::one(),
            length_scale: T::one(),
            domain_length: T::one(),
            dx: T::one() / T::count(DEFAULT_POINTS_PER_LENGTH),
            dt: T::zero(),
            t_end,
            boundary,
            initial: InitialCondition::Rest,
            load: T::zero(),
        };
        cfg.dt = cfg.stable_dt(cfg.dx);
        cfg.domain_length = cfg.required_domain_length();
        cfg
    }

    /// Sets `L` and `v`; grid spacing, time step and domain are rescaled.
    pub fn with_scales(mut self, length_scale: T, base_speed: T) -> Self {
        self.length_scale = length_scale;
        self.base_speed = base_speed;
        self.dx = length_scale / T::count(DEFAULT_POINTS_PER_LENGTH);
        self.dt = self.stable_dt(self.dx);
        self.domain_length = self.required_domain_length();
        self
    }

    /// Sets `dx` and the matching default `dt`.
    pub fn with_resolution(mut self, dx: T) -> Self {
        self.dx = dx;
        self.dt = self.stable_dt(dx);
        self
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_domain_length(mut self, domain_length: T) -> Self {
        self.domain_length = domain_length;
        self
    }

    pub fn with_initial(mut self, initial: InitialCondition<T>) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_boundary(mut self, boundary: BoundaryDriver<T>) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_load(mut self, p: T) -> Self {
        self.load = p;
        self
    }

    pub fn with_t_end(mut self, t_end: T) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn grid_points(&self) -> usize {
        (self.domain_length / self.dx)
            .round()
            .to_usize()
            .unwrap_or(0)
            + 1
    }

    pub fn x(&self, i: usize) -> T {
        T::count(i) * self.dx
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).ceil().to_usize().unwrap_or(0)
    }

    pub fn courant(&self) -> T {
        self.base_speed * self.dt / self.dx
    }

    /// Physical reaction coefficients `(gamma1, gamma2)`.
    pub fn reaction_coefficients(&self) -> (T, T) {
        let scale = self.base_speed * self.base_speed / (self.length_scale * self.length_scale);
        (self.substrate.k1() * scale, self.substrate.k2() * scale)
    }

    pub fn max_reaction(&self) -> T {
        let (g1, g2) = self.reaction_coefficients();
        g1.max(g2)
    }

    /// Physical load `p v^2 / L^2`.
    pub fn physical_load(&self) -> T {
        self.load * self.base_speed * self.base_speed / (self.length_scale * self.length_scale)
    }

    /// Static equilibrium `w_p` removed from the unknown.
    pub fn offset(&self) -> T {
        if self.load == T::zero() {
            T::zero()
        } else {
            particular_solution(self.substrate, self.load)
        }
    }

    /// Safety factor times the leapfrog limit `2 / sqrt(4 v^2/dx^2 + gamma_max)`.
    pub fn stable_dt(&self, dx: T) -> T {
        let v = self.base_speed;
        let four = T::lit(4.0);
        T::lit(SAFETY) * T::lit(2.0) / (four * v * v / (dx * dx) + self.max_reaction()).sqrt()
    }

    /// Fastest signal leaving the driven boundary.
    pub fn signal_speed(&self) -> T {
        let v = self.base_speed;
        self.boundary.phase_speed().map_or(v, |c| c.max(v))
    }

    /// Domain length the boundary signal cannot cross before `t_end`.
    pub fn required_domain_length(&self) -> T {
        let raw = T::lit(DOMAIN_MARGIN) * self.signal_speed() * self.t_end;
        (raw / self.dx).ceil() * self.dx
    }

    /// Injected amplitude used to detect blow-up.
    pub fn reference_amplitude(&self) -> T {
        self.boundary
            .amplitude()
            .max(self.initial.amplitude())
            .max(self.offset().abs())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("v", self.base_speed),
            ("L", self.length_scale),
            ("domain_length", self.domain_length),
            ("dx", self.dx),
            ("dt", self.dt),
            ("t_end", self.t_end),
        ];
        for (name, x) in positive {
            if !(x > T::zero()) || !x.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {x}"
                )));
            }
        }
        if !self.load.is_finite() {
            return Err(Error::InvalidParameter("load must be finite".into()));
        }
        if self.load != T::zero() && !self.substrate.is_regular() {
            return Err(Error::DegenerateSubstrate {
                k1: self.substrate.k1().as_f64(),
                k2: self.substrate.k2().as_f64(),
            });
        }
        if self.grid_points() < 4 {
            return Err(Error::InvalidParameter(
                "domain must span at least 3 grid cells".into(),
            ));
        }
        let nu = self.courant();
        if nu > T::lit(MAX_COURANT) {
            return Err(Error::UnstableConfig(format!(
                "Courant number {nu} exceeds {MAX_COURANT}"
            )));
        }
        let g = self.max_reaction();
        let dt_g = self.dt * g.sqrt();
        if dt_g > T::lit(SAFETY * 2.0) {
            return Err(Error::UnstableConfig(format!(
                "dt sqrt(k_max) = {dt_g} exceeds {}",
                SAFETY * 2.0
            )));
        }
        let combined = nu * nu + self.dt * self.dt * g / T::lit(4.0);
        if combined >= T::one() {
            return Err(Error::UnstableConfig(format!(
                "nu^2 + dt^2 k_max / 4 = {combined} >= 1"
            )));
        }
        if !self.boundary.is_static() {
            let needed = T::lit(DOMAIN_MARGIN) * self.signal_speed() * self.t_end;
            if self.domain_length < needed * (T::one() - T::lit(1e-9)) {
                return Err(Error::InvalidParameter(format!(
                    "domain_length {} too short: the boundary signal needs {} by t_end",
                    self.domain_length, needed
                )));
            }
        }
        Ok(())
    }
}
