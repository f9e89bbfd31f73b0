//! Scalar abstraction shared by the simulator and the zeta routines.
//!
//! Everything numeric in this crate is written against [`Real`], which is a
//! thin extension of `num_traits::Float`. It is implemented for `f32`, `f64`
//! and [`DoubleDouble`](crate::dd::DoubleDouble).

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Decimal digits the type carries reliably.
    const DIGITS: u32;

    /// Converts an `f64` literal. Exact for every type in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Nearest value to an exact rational.
    fn from_big_rational(r: &BigRational) -> Self {
        Self::lit(r.to_f64().unwrap_or(f64::NAN))
    }

    fn from_big_int(n: &BigInt) -> Self {
        Self::lit(n.to_f64().unwrap_or(f64::NAN))
    }

    /// Absolute slack used when checking unit norm and similar invariants.
    fn norm_tolerance() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(1e4))
    }
}

impl Real for f32 {
    const DIGITS: u32 = 6;
}

impl Real for f64 {
    const DIGITS: u32 = 15;
}
