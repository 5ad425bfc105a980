//! Floating-point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the library is generic over. Implemented for `f32` and `f64`.
///
/// All reference tolerances in the test-suite are stated for `f64`; `f32`
/// works through the same code paths but needs correspondingly looser
/// quadrature tolerances.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        // from_f64 is total for f32/f64 (it rounds, never fails).
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Narrows to `f32`. Used to split a value into a short-mantissa head.
    #[inline]
    fn head(self) -> Self {
        Self::from_f32(self.to_f32().unwrap_or(f32::NAN)).unwrap_or_else(Self::nan)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `1/√(2π)`, the standard normal density at the origin.
#[inline]
pub(crate) fn inv_sqrt_2pi<S: Scalar>() -> S {
    S::FRAC_2_SQRT_PI() * S::FRAC_1_SQRT_2() / S::lit(2.0)
}

/// `√(2π)`.
#[inline]
pub(crate) fn sqrt_2pi<S: Scalar>() -> S {
    S::one() / inv_sqrt_2pi::<S>()
}
