//! Common view of the closed-form waves used by the simulator diagnostics.

use crate::analytic::TravelingWave;
use crate::loaded::LoadedWave;
use crate::scalar::Scalar;

/// A wave `w(x, t) = W((x - c v t) / L)` with a 1-periodic profile `W`.
pub trait PeriodicWave<T: Scalar> {
    fn profile(&self, xi: T) -> T;
    fn slope(&self, xi: T) -> T;
    fn length(&self) -> T;
    /// Dimensional speed `c v`.
    fn phase_speed(&self) -> T;
    fn max_abs(&self) -> T;

    fn phase(&self, x: T, t: T) -> T {
        (x - self.phase_speed() * t) / self.length()
    }

    fn evaluate_spacetime(&self, x: T, t: T) -> T {
        self.profile(self.phase(x, t))
    }

    fn velocity_spacetime(&self, x: T, t: T) -> T {
        -self.phase_speed() / self.length() * self.slope(self.phase(x, t))
    }

    /// `(tau, omega)` with `tau = L / (c v)`.
    fn period_frequency(&self) -> (T, T) {
        let tau = self.length() / self.phase_speed();
        (tau, T::TAU() / tau)
    }
}

macro_rules! delegate {
    ($ty:ident) => {
        impl<T: Scalar> PeriodicWave<T> for $ty<T> {
            fn profile(&self, xi: T) -> T {
                $ty::profile(self, xi)
            }
            fn slope(&self, xi: T) -> T {
                $ty::slope(self, xi)
            }
            fn length(&self) -> T {
                $ty::length(self)
            }
            fn phase_speed(&self) -> T {
                $ty::phase_speed(self)
            }
            fn max_abs(&self) -> T {
                $ty::max_abs(self)
            }
        }
    };
}

delegate!(TravelingWave);
delegate!(LoadedWave);
