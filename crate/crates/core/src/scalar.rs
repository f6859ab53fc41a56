//! Scalar traits the generic code is written against.

use std::fmt::{Debug, Display, LowerExp};
use std::hash::Hash;

use nalgebra::RealField;
use num_integer::Integer;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};

/// Exact integer ring element: `BigInt`, `i128`, `i64`, ...
///
/// Everything in the exact layer assumes Euclidean division is available and
/// exact whenever the divisor divides the dividend.
pub trait Exact:
    Clone + Integer + Signed + FromPrimitive + ToPrimitive + Debug + Display + Hash + Send + Sync
{
}

impl<T> Exact for T where
    T: Clone
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Hash
        + Send
        + Sync
{
}

/// Real scalar underlying the complex matrices of the correspondence calculus.
pub trait Real:
    RealField + Float + FromPrimitive + Copy + Default + Display + LowerExp + Send + Sync + 'static
{
    /// Tolerance used when the caller does not supply one.
    fn default_tolerance() -> Self;

    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 converts")
    }

    fn to_f64_lossy(self) -> f64 {
        <Self as num_traits::ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_tolerance() -> Self {
        crate::DEFAULT_TOLERANCE
    }
}

impl Real for f32 {
    fn default_tolerance() -> Self {
        1e-4
    }
}
