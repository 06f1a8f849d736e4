//! Scalar abstraction for the real-valued machinery.
//!
//! Distributions, bias curves and estimators are generic over [`Real`] so the
//! same formulas run in `f32` or `f64`. The crate root exports `f64` aliases,
//! which is what the harness and the CLI use: the documented tolerances
//! (`1e-9`, `1e-12`) assume double precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the analytic machinery is generic over.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
///
/// Panics only if `T` cannot represent ordinary finite constants, which no
/// `Float` implementation of interest fails to do.
pub(crate) fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 constant must convert to the scalar type")
}

/// Converts a `usize` (a degree or a count) into the working scalar type.
pub(crate) fn cast_usize<T: Real>(x: usize) -> T {
    T::from_usize(x).expect("count must convert to the scalar type")
}
