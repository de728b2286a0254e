use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, NumAssignRef, Signed};

/// Scalar type usable as a resource payoff.
///
/// Exact types (`BigRational`, `Ratio<i64>`) make every tie decidable. `f64`
/// satisfies the bound too, but greedy tie detection and Nash indifference then
/// rely on exact float equality.
pub trait Payoff:
    Clone + Debug + Display + PartialOrd + NumAssignRef + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `numerator / denominator` in this scalar type.
    fn ratio(numerator: i64, denominator: i64) -> Self {
        let n = Self::from_i64(numerator).expect("numerator representable");
        let d = Self::from_i64(denominator).expect("denominator representable");
        n / d
    }
}

impl<T> Payoff for T where
    T: Clone
        + Debug
        + Display
        + PartialOrd
        + NumAssignRef
        + Signed
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}
