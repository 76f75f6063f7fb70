//! Numeric abstractions shared by the decoder, the simulator and the metrics.
//!
//! Soft-decision decoding is written once against [`Llr`] and instantiated for
//! `f32` and `f64`. The latency and complexity formulas are written against
//! [`Scalar`], which additionally admits exact rationals so ratios such as
//! `(m_h + 1) / (m_h* + 1)` can be carried without rounding.

use std::fmt::Debug;
use std::iter::Sum;

use num_rational::Rational64;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating-point type usable for log-likelihood ratios.
pub trait Llr:
    Float + FromPrimitive + ToPrimitive + Debug + Default + Sum + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Llr for f32 {}
impl Llr for f64 {}

/// Scalar field for the closed-form metrics: floats or exact rationals.
pub trait Scalar: Num + Copy + PartialOrd + Debug + Send + Sync + 'static {
    /// The value `num / den`. `den` must be non-zero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(x: i64) -> Self {
        Self::from_ratio(x, 1)
    }

    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// Converts a float to the nearest exact rational with a bounded denominator.
/// Used when a measured quantity (a rate, an iteration average) feeds an
/// exact-arithmetic formula.
pub fn rational_from_f64(x: f64) -> Rational64 {
    Rational64::approximate_float(x).unwrap_or_else(|| Rational64::from_integer(x.round() as i64))
}
