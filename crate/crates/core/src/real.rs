//! Scalar abstraction for the simulation core.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the dynamics and integrator are generic over.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into the active scalar type.
///
/// Panics only if the target type cannot represent any `f64`, which cannot
/// happen for the provided `f32`/`f64` implementations.
pub fn real<R: Real>(value: f64) -> R {
    R::from_f64(value).expect("f64 constant must convert into the scalar type")
}
