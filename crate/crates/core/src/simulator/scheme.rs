//! Three-level explicit scheme and the energy functionals evaluated on it.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::config::SimConfig;

/// Blow-up threshold relative to the injected amplitude.
pub const BLOWUP_FACTOR: f64 = 1e6;

/// Two consecutive time levels of the shifted unknown `u = w - w_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState<T> {
    /// Time of `curr`.
    pub t: T,
    pub step_index: usize,
    pub prev: Vec<T>,
    pub curr: Vec<T>,
}

/// Restoring term of the shifted equation, `gamma(u + w_p)(u + w_p) - p_hat`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Reaction<T> {
    g1: T,
    g2: T,
    offset: T,
    load: T,
}

impl<T: Scalar> Reaction<T> {
    pub(crate) fn new(cfg: &SimConfig<T>) -> Self {
        let (g1, g2) = cfg.reaction_coefficients();
        Self {
            g1,
            g2,
            offset: cfg.offset(),
            load: cfg.physical_load(),
        }
    }

    #[inline]
    fn raw(&self, w: T) -> T {
        if w <= T::zero() {
            self.g1 * w
        } else {
            self.g2 * w
        }
    }

    #[inline]
    pub(crate) fn force(&self, u: T) -> T {
        self.raw(u + self.offset) - self.load
    }

    #[inline]
    fn primitive(&self, w: T) -> T {
        self.raw(w) * w / T::lit(2.0)
    }

    /// Two-level substrate energy `Q(a, b)`; `Q(a, a)` is the potential.
    ///
    /// Within one branch this is the bilinear form the leapfrog update
    /// conserves exactly; across the kink the plain average is used.
    #[inline]
    pub(crate) fn pair_potential(&self, a: T, b: T) -> T {
        let mean = (self.potential(a) + self.potential(b)) / T::lit(2.0);
        let (wa, wb) = (a + self.offset, b + self.offset);
        let gamma = match (wa <= T::zero(), wb <= T::zero()) {
            (true, true) => self.g1,
            (false, false) => self.g2,
            _ => return mean,
        };
        let d = b - a;
        mean - gamma * d * d / T::lit(4.0)
    }

    /// Potential of the shifted force, zero and minimal at `u = 0`.
    #[inline]
    pub(crate) fn potential(&self, u: T) -> T {
        self.primitive(u + self.offset) - self.primitive(self.offset) - self.load * u
    }
}

fn check_blowup<T: Scalar>(cfg: &SimConfig<T>, max_abs: T, t: T) -> Result<()> {
    let reference = cfg.reference_amplitude();
    let limit = T::lit(BLOWUP_FACTOR) * reference;
    let blown = !max_abs.is_finite() || (reference > T::zero() && max_abs > limit);
    if blown {
        Err(Error::InstabilityDetected {
            t: t.as_f64(),
            max_abs: max_abs.as_f64(),
        })
    } else {
        Ok(())
    }
}

/// Advances `(prev, curr)` one step into `next`; returns `max |u_next|`.
pub(crate) fn advance<T: Scalar>(
    cfg: &SimConfig<T>,
    reaction: &Reaction<T>,
    prev: &[T],
    curr: &[T],
    next: &mut [T],
    t_next: T,
) -> T {
    let n = curr.len();
    let nu = cfg.courant();
    let nu2 = nu * nu;
    let dt2 = cfg.dt * cfg.dt;
    let two = T::lit(2.0);
    let mut max_abs = T::zero();
    for i in 1..n - 1 {
        let u = curr[i];
        let lap = curr[i + 1] - two * u + curr[i - 1];
        let v = two * u - prev[i] + nu2 * lap - dt2 * reaction.force(u);
        next[i] = v;
        max_abs = max_abs.max(v.abs());
    }
    next[0] = cfg.boundary.value(t_next) - reaction.offset;
    next[n - 1] = T::zero();
    max_abs.max(next[0].abs())
}

/// Builds levels 0 and 1 from the initial data with a second-order Taylor start.
pub fn first_step<T: Scalar>(config: &SimConfig<T>) -> Result<SimState<T>> {
    config.validate()?;
    let n = config.grid_points();
    let reaction = Reaction::new(config);
    let off = reaction.offset;
    let mut u0: Vec<T> = (0..n)
        .map(|i| config.initial.displacement(config.x(i)))
        .collect();
    u0[0] = config.boundary.value(T::zero()) - off;
    u0[n - 1] = T::zero();

    let (dt, dx, v) = (config.dt, config.dx, config.base_speed);
    let half_dt2 = dt * dt / T::lit(2.0);
    let c2 = v * v / (dx * dx);
    let mut u1 = vec![T::zero(); n];
    for i in 1..n - 1 {
        let lap = u0[i + 1] - T::lit(2.0) * u0[i] + u0[i - 1];
        let accel = c2 * lap - reaction.force(u0[i]);
        u1[i] = u0[i] + dt * config.initial.velocity(config.x(i)) + half_dt2 * accel;
    }
    u1[0] = config.boundary.value(dt) - off;
    u1[n - 1] = T::zero();
    Ok(SimState {
        t: dt,
        step_index: 1,
        prev: u0,
        curr: u1,
    })
}

/// Returns the state one time step later.
pub fn step<T: Scalar>(state: &SimState<T>, config: &SimConfig<T>) -> Result<SimState<T>> {
    let reaction = Reaction::new(config);
    let mut next = vec![T::zero(); state.curr.len()];
    let step_index = state.step_index + 1;
    let t = T::count(step_index) * config.dt;
    let max_abs = advance(config, &reaction, &state.prev, &state.curr, &mut next, t);
    check_blowup(config, max_abs, t)?;
    Ok(SimState {
        t,
        step_index,
        prev: state.curr.clone(),
        curr: next,
    })
}

/// In-place stepping driver that reuses its buffers.
#[derive(Debug, Clone)]
pub struct Simulator<T> {
    config: SimConfig<T>,
    reaction: Reaction<T>,
    state: SimState<T>,
    scratch: Vec<T>,
}

impl<T: Scalar> Simulator<T> {
    pub fn new(config: SimConfig<T>) -> Result<Self> {
        let state = first_step(&config)?;
        let scratch = vec![T::zero(); state.curr.len()];
        Ok(Self {
            reaction: Reaction::new(&config),
            config,
            state,
            scratch,
        })
    }

    pub fn config(&self) -> &SimConfig<T> {
        &self.config
    }

    pub fn state(&self) -> &SimState<T> {
        &self.state
    }

    pub fn time(&self) -> T {
        self.state.t
    }

    /// Static equilibrium `w_p` added back to the unknown.
    pub fn offset(&self) -> T {
        self.reaction.offset
    }

    /// Current displacement `w = u + w_p`.
    pub fn displacement(&self) -> Vec<T> {
        self.state
            .curr
            .iter()
            .map(|&u| u + self.reaction.offset)
            .collect()
    }

    pub fn step(&mut self) -> Result<()> {
        let step_index = self.state.step_index + 1;
        let t = T::count(step_index) * self.config.dt;
        let max_abs = advance(
            &self.config,
            &self.reaction,
            &self.state.prev,
            &self.state.curr,
            &mut self.scratch,
            t,
        );
        // prev <- curr <- next
        std::mem::swap(&mut self.state.prev, &mut self.state.curr);
        std::mem::swap(&mut self.state.curr, &mut self.scratch);
        self.state.t = t;
        self.state.step_index = step_index;
        check_blowup(&self.config, max_abs, t)
    }

    pub(crate) fn reaction(&self) -> &Reaction<T> {
        &self.reaction
    }
}

/// Energy split `(kinetic, potential)` at the half level between the two
/// levels held by `state`.
///
/// Kinetic energy uses the one-step time difference; the gradient and
/// substrate terms use the two-level products that the scheme conserves.
/// Spatial integrals use the trapezoidal rule (cell differences for the
/// gradient).
pub(crate) fn half_level_energy<T: Scalar>(
    cfg: &SimConfig<T>,
    reaction: &Reaction<T>,
    state: &SimState<T>,
) -> (T, T) {
    let (dx, dt, v) = (cfg.dx, cfg.dt, cfg.base_speed);
    let half = T::lit(0.5);
    let n = state.curr.len();
    let weight = |i: usize| if i == 0 || i == n - 1 { half } else { T::one() };
    let mut kinetic = T::zero();
    let mut substrate = T::zero();
    for i in 0..n {
        let rate = (state.curr[i] - state.prev[i]) / dt;
        kinetic = kinetic + weight(i) * half * rate * rate;
        substrate = substrate + weight(i) * reaction.pair_potential(state.prev[i], state.curr[i]);
    }
    let mut gradient = T::zero();
    for i in 0..n - 1 {
        let g0 = state.prev[i + 1] - state.prev[i];
        let g1 = state.curr[i + 1] - state.curr[i];
        gradient = gradient + g0 * g1;
    }
    let gradient = half * v * v * gradient / (dx * dx);
    (kinetic * dx, (gradient + substrate) * dx)
}

/// Boundary power `-v^2 phi'(t) w_x(0, t)` in the form the discrete energy
/// obeys: centered rate of the boundary data and the first-cell slope.
pub(crate) fn boundary_flux<T: Scalar>(cfg: &SimConfig<T>, u: &[T], t: T) -> T {
    let slope = (u[1] - u[0]) / cfg.dx;
    let rate =
        (cfg.boundary.value(t + cfg.dt) - cfg.boundary.value(t - cfg.dt)) / (T::lit(2.0) * cfg.dt);
    -cfg.base_speed * cfg.base_speed * rate * slope
}

/// Continuum boundary power with the exact boundary rate and a one-sided
/// second-order slope. Off by `O(dx)` from what the discrete energy obeys.
pub fn continuum_boundary_flux<T: Scalar>(cfg: &SimConfig<T>, u: &[T], t: T) -> T {
    let slope = (T::lit(-3.0) * u[0] + T::lit(4.0) * u[1] - u[2]) / (T::lit(2.0) * cfg.dx);
    -cfg.base_speed * cfg.base_speed * cfg.boundary.rate(t) * slope
}

/// Energy bookkeeping at time `t_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    pub t: T,
    pub kinetic: T,
    pub potential: T,
    pub total: T,
    /// `-v^2 phi'(t) w_x(0, t)`.
    pub boundary_flux: T,
    /// `|dE/dt - boundary_flux|`.
    pub balance_residual: T,
}

/// Energy report at the level shared by two consecutive states.
///
/// `earlier` holds levels `(n-1, n)` and `later` holds `(n, n+1)`; the
/// energies at `n -/+ 1/2` give `dE/dt` at `t_n`.
pub fn energy_report<T: Scalar>(
    earlier: &SimState<T>,
    later: &SimState<T>,
    config: &SimConfig<T>,
) -> EnergyReport<T> {
    let reaction = Reaction::new(config);
    let (k0, p0) = half_level_energy(config, &reaction, earlier);
    let (k1, p1) = half_level_energy(config, &reaction, later);
    let flux = boundary_flux(config, &earlier.curr, earlier.t);
    let rate = (k1 + p1 - k0 - p0) / config.dt;
    let half = T::lit(0.5);
    EnergyReport {
        t: earlier.t,
        kinetic: half * (k0 + k1),
        potential: half * (p0 + p1),
        total: half * (k0 + p0 + k1 + p1),
        boundary_flux: flux,
        balance_residual: (rate - flux).abs(),
    }
}
