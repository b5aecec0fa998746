use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num};

/// Numeric type carried by utilities, shares and ratios.
///
/// Every algorithm in the crate is written against this trait. Exact
/// rationals (`Value`, `Value64`) decide every threshold comparison
/// exactly; `f64` works too but ties are then subject to rounding.
pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + Debug + Display + Send + Sync + 'static {
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits the scalar type")
    }

    /// `num / den` for small integers.
    fn fraction(num: usize, den: usize) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    fn is_negative_value(&self) -> bool {
        *self < Self::zero()
    }
}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Sum of `utility` over the given vertices. Indices must be in range.
pub fn total<'a, S: Scalar>(utility: &[S], vertices: impl IntoIterator<Item = &'a usize>) -> S {
    vertices.into_iter().fold(S::zero(), |acc, &v| acc + utility[v].clone())
}

/// `value / share`, or one when the share is zero.
pub fn share_ratio<S: Scalar>(value: &S, share: &S) -> S {
    if *share > S::zero() {
        value.clone() / share.clone()
    } else {
        S::one()
    }
}
