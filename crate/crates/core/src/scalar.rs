//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the solver can run in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Slack used for `|x| <= 1` style domain checks. Never tighter than a few ulps.
    #[inline]
    fn domain_slack() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(8.0))
    }

    /// Target accuracy for iterative node computations.
    #[inline]
    fn node_tolerance() -> Self {
        Self::lit(1e-14).max(Self::epsilon() * Self::lit(8.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
