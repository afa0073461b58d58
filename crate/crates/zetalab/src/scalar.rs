//! Floating-point scalar abstraction.
//!
//! Every numerical kernel in this crate is generic over [`Scalar`], which is a
//! thin bundle of `num-traits` bounds plus two conversion helpers.  Both `f32`
//! and `f64` implement it; the crate root exports `f64`-based aliases for
//! callers that do not care about the generic form.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};

/// Real scalar usable in all numerical kernels.
///
/// The `lit` helper converts an `f64` literal into the scalar type and is the
/// idiomatic way to write constants in generic code:
///
/// ```
/// use zetalab::Scalar;
///
/// fn half_plus<T: Scalar>(x: T) -> T {
///     x + T::lit(0.5)
/// }
/// assert_eq!(half_plus(1.0_f64), 1.5);
/// assert_eq!(half_plus(1.0_f32), 1.5);
/// ```
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssignOps
    + Send
    + Sync
    + std::fmt::Debug
    + std::fmt::Display
    + 'static
{
    /// Converts an `f64` literal to `Self`, rounding if necessary.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal converts to any Scalar")
    }

    /// Widens (or narrows) to `f64` for reporting and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for a complex number over a generic scalar.
pub type Cx<T> = Complex<T>;

/// Builds a complex number from `f64` literals in generic code.
#[inline]
pub fn cx<T: Scalar>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Imaginary unit over a generic scalar.
#[inline]
pub fn i<T: Scalar>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lit_round_trips_through_both_widths() {
        assert_eq!(f64::lit(0.1), 0.1);
        assert_eq!(f32::lit(0.5), 0.5_f32);
        assert_eq!(1.25_f64.as_f64(), 1.25);
    }

    #[test]
    fn complex_helpers() {
        let z: Cx<f64> = cx(1.0, -2.0);
        assert_eq!(z.re, 1.0);
        assert_eq!(z.im, -2.0);
        assert_eq!(i::<f64>() * i::<f64>(), cx(-1.0, 0.0));
    }
}
