//! Scalar abstraction shared by every model in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the models are generic over (`f32` or `f64`).
///
/// On top of `num_traits::Float` this adds the two transcendental functions
/// the energy formulas need and that `core` does not provide.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Complementary error function.
    fn erfc(self) -> Self;

    /// Gamma function.
    fn tgamma(self) -> Self;

    /// Converts an `f64` constant into this scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable in scalar type")
    }

    /// Converts an integer count into this scalar type.
    #[inline]
    fn count(v: u32) -> Self {
        Self::from_u32(v).expect("count representable in scalar type")
    }

    /// Lossy widening to `f64`, used for error payloads and CSV output.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance for iterative solvers: `1e-13`, or a small
    /// multiple of machine epsilon when the type cannot resolve that.
    #[inline]
    fn solver_tolerance() -> Self {
        Self::lit(1e-13).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl Real for f64 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }

    #[inline]
    fn tgamma(self) -> Self {
        libm::tgamma(self)
    }
}

impl Real for f32 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }

    #[inline]
    fn tgamma(self) -> Self {
        libm::tgammaf(self)
    }
}

/// `2^k - 1` evaluated without cancellation for small `k`.
#[inline]
pub(crate) fn pow2_m1<T: Real>(k: T) -> T {
    (k * T::LN_2()).exp_m1()
}

/// `1 - 2^-k`, the overflow-safe factor used when forming ratios of
/// `2^k - 1` terms.
#[inline]
pub(crate) fn one_minus_pow2_neg<T: Real>(k: T) -> T {
    -(-k * T::LN_2()).exp_m1()
}

/// `(2^a - 1) / (2^b - 1)` for `a, b > 0`, evaluated in exponent space so
/// it stays finite when `a` and `b` are individually huge.
#[inline]
pub(crate) fn pow2_m1_ratio<T: Real>(a: T, b: T) -> T {
    ((a - b) * T::LN_2()).exp() * one_minus_pow2_neg(a) / one_minus_pow2_neg(b)
}
