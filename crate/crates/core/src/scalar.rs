//! Floating-point scalar abstraction for the physics layer.

use num_traits::{Float, FromPrimitive};

/// Scalar type the component models are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + core::iter::Sum + core::fmt::Debug + core::fmt::Display + Default + 'static
{
    /// Converts an `f64` constant into this scalar type.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 constant")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
