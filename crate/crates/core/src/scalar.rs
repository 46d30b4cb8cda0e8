//! Scalar abstraction: everything numeric in this crate is generic over [`Real`].

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by all matrix and graph routines (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + std::iter::Sum
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for lifting an `f64` constant into the working scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// A tolerance stated for the f64 lane, floored at a small multiple of the
/// scalar's epsilon so the same checks stay meaningful in f32.
#[inline]
pub fn tolerance<T: Real>(f64_tol: f64) -> T {
    let t: T = real(f64_tol);
    t.max(T::epsilon() * real(32.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_is_exact_for_f64() {
        assert_eq!(tolerance::<f64>(1e-12), 1e-12);
        assert_eq!(tolerance::<f64>(1e-14), 1e-14);
    }

    #[test]
    fn tolerance_widens_for_f32() {
        assert!(tolerance::<f32>(1e-12) > 1e-12);
        assert!(tolerance::<f32>(1e-3) == 1e-3);
    }
}
