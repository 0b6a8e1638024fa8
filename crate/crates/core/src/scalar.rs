//! Scalar abstraction shared by every solver in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the solvers are generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count into `Self`.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy conversion used for error payloads and reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Reduces `x` into the half-open interval `[0, period)`.
pub(crate) fn wrap_unit<T: Scalar>(x: T, period: T) -> T {
    let r = x - (x / period).floor() * period;
    // floor can round so that r == period for tiny negative x
    if r >= period || r < T::zero() {
        T::zero()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_stays_half_open() {
        assert_eq!(wrap_unit(1.0_f64, 1.0), 0.0);
        assert_eq!(wrap_unit(-1e-20_f64, 1.0), 0.0);
        assert!((wrap_unit(-0.25_f64, 1.0) - 0.75).abs() < 1e-15);
        assert!((wrap_unit(3.5_f32, 1.0) - 0.5).abs() < 1e-6);
    }
}
