use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bilinear elastic foundation described by its two nondimensional stiffnesses.
///
/// `k1` acts in compression (`w <= 0`), `k2` in tension (`w > 0`). The value at
/// `w = 0` belongs to the compression branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Substrate<T> {
    k1: T,
    k2: T,
}

impl<T: Scalar> Substrate<T> {
    pub fn new(k1: T, k2: T) -> Result<Self> {
        for (name, k) in [("k1", k1), ("k2", k2)] {
            if !k.is_finite() || k < T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {k}"
                )));
            }
        }
        Ok(Self { k1, k2 })
    }

    /// Linear substrate with equal stiffness on both sides.
    pub fn symmetric(k: T) -> Result<Self> {
        Self::new(k, k)
    }

    pub fn k1(&self) -> T {
        self.k1
    }

    pub fn k2(&self) -> T {
        self.k2
    }

    /// True when both stiffnesses are strictly positive.
    pub fn is_regular(&self) -> bool {
        self.k1 > T::zero() && self.k2 > T::zero()
    }

    /// Same foundation with compression and tension stiffnesses exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            k1: self.k2,
            k2: self.k1,
        }
    }

    /// Stiffness `k(w)`.
    #[inline]
    pub fn stiffness(&self, w: T) -> T {
        if w <= T::zero() {
            self.k1
        } else {
            self.k2
        }
    }

    /// Restoring force `k(w) w`.
    #[inline]
    pub fn restoring(&self, w: T) -> T {
        self.stiffness(w) * w
    }

    /// Primitive of the restoring force, `k(w) w^2 / 2`, vanishing at zero.
    #[inline]
    pub fn potential(&self, w: T) -> T {
        self.stiffness(w) * w * w / T::lit(2.0)
    }

    pub(crate) fn require_regular(&self) -> Result<()> {
        if self.is_regular() {
            Ok(())
        } else {
            Err(Error::DegenerateSubstrate {
                k1: self.k1.as_f64(),
                k2: self.k2.as_f64(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_belongs_to_compression_branch() {
        let s = Substrate::new(1.0, 5.0).unwrap();
        assert_eq!(s.stiffness(0.0), 1.0);
        assert_eq!(s.stiffness(-1e-300), 1.0);
        assert_eq!(s.stiffness(1e-300), 5.0);
    }

    #[test]
    fn potential_is_primitive_of_restoring_force() {
        let s = Substrate::new(0.7, 3.0).unwrap();
        let h = 1e-6_f64;
        for &w in &[-1.3_f64, -0.2, 0.4, 2.0] {
            let fd = (s.potential(w + h) - s.potential(w - h)) / (2.0 * h);
            assert!((fd - s.restoring(w)).abs() < 1e-8);
            assert!(s.potential(w) >= 0.0);
        }
        assert_eq!(s.potential(0.0), 0.0);
    }

    #[test]
    fn rejects_negative_or_nonfinite() {
        assert!(Substrate::new(-1.0, 1.0).is_err());
        assert!(Substrate::new(1.0, f64::NAN).is_err());
        assert!(Substrate::new(0.0, 0.0).is_ok());
        assert!(matches!(
            Substrate::new(0.0, 1.0).unwrap().require_regular(),
            Err(Error::DegenerateSubstrate { .. })
        ));
    }
}
