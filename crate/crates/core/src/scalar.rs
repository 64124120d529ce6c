use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the geometric kernels are written against.
///
/// The construction pipeline instantiates everything at `f64`; the kernels
/// themselves only need ordered field operations plus `sqrt`, `hypot` and the
/// trigonometric functions, so `f32` works for quick experiments.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal out of range for scalar type")
    }

    /// Absolute rounding floor used by certificate slack (a few hundred ulps at unit scale).
    #[inline]
    fn rounding_floor() -> Self {
        Self::epsilon() * Self::lit(64.0)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}
