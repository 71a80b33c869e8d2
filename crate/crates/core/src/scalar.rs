//! Scalar abstraction for the numeric kernel.

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the whole crate is generic over.
///
/// `f32` works for quick exploration; every tolerance quoted in the crate's
/// checks assumes `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant (tolerances, closed-form coefficients).
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
