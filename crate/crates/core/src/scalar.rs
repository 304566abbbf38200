//! Coefficient scalars.
//!
//! Every algorithm in this crate is exact: verdicts come from equalities and
//! sign checks on coefficients, never from tolerances. The [`Scalar`] alias
//! therefore expects an exact field in practice. Floating-point types satisfy
//! the bounds and will compile, but rounding makes the decision procedures
//! meaningless for them; use a rational type. [`Rat`] (arbitrary precision)
//! and [`Rat64`] (fixed-width, faster, can overflow on adversarial input) are
//! the intended choices.

use num_traits::{FromPrimitive, Num, Signed};
use std::fmt;

/// Trait alias for coefficient types: an ordered signed field-like type with
/// exact arithmetic, printable and constructible from machine integers.
pub trait Scalar: Num + Signed + PartialOrd + Clone + fmt::Debug + fmt::Display + FromPrimitive {}

impl<T> Scalar for T where
    T: Num + Signed + PartialOrd + Clone + fmt::Debug + fmt::Display + FromPrimitive
{
}

/// Converts a subword count to a scalar. Counts in this crate stay far below
/// 2^53, so the conversion is total for every sensible scalar.
pub(crate) fn from_count<R: Scalar>(n: u64) -> R {
    R::from_u64(n).expect("scalar must represent small integer counts")
}
