use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar used throughout the solvers.
///
/// Everything in this crate is generic over `Real` so the same code runs in
/// `f32` and `f64`. The supertraits pull in the usual transcendental
/// functions, the `PI` constant, and conversion from `f64` literals.
pub trait Real:
    Float + FloatConst + FromPrimitive + Display + LowerExp + Debug + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    ///
    /// Panics if the value is not representable, which cannot happen for the
    /// finite literals this crate feeds it.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal must be representable")
    }

    /// Lossy widening to `f64` for error payloads and diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lit_round_trips_through_both_widths() {
        assert_eq!(f64::lit(0.25), 0.25);
        assert_eq!(f32::lit(0.25), 0.25_f32);
        assert_eq!(f32::lit(1.0e-40).as_f64() as f32, 1.0e-40_f32);
    }

    #[test]
    fn as_f64_widens_exactly_for_f32() {
        let x = 0.1_f32;
        assert_eq!(x.as_f64(), f64::from(x));
    }
}
