use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

/// Scalar type the numeric kernels are generic over: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Debug + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + 'static {}

/// Shorthand for lifting an `f64` constant into the working scalar type.
pub(crate) fn real<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("f64 constant representable in scalar type")
}
