//! The scalar abstraction for edge lengths and offsets.

use std::fmt;

use num::traits::Signed;

/// Exact ordered scalar for lengths, offsets and distances.
///
/// The metric operations need ring arithmetic, total order and exact
/// division (dilation factors are length ratios), so the intended models
/// are rational types such as [`num::BigRational`] or
/// [`num::rational::Rational64`]. Floating point types do not implement
/// `Ord` and are deliberately ruled out.
pub trait Scalar: Clone + Ord + Signed + fmt::Debug + fmt::Display {}

impl<T: Clone + Ord + Signed + fmt::Debug + fmt::Display> Scalar for T {}

/// `a/b` as an exact scalar; callers must ensure `b != 0`.
pub fn ratio<S: Scalar>(a: &S, b: &S) -> S {
    a.clone() / b.clone()
}

/// Doubles a scalar without requiring integer conversions.
pub fn twice<S: Scalar>(a: &S) -> S {
    a.clone() + a.clone()
}
