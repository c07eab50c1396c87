//! Numeric abstraction shared by the solver and the model code.
//!
//! Everything in the crate that does arithmetic is generic over [`Scalar`].
//! Floating-point types compare against tolerances; exact types (rationals)
//! report zero for every tolerance so comparisons become exact.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact and tolerances collapse to zero.
    const EXACT: bool;

    /// Smallest magnitude treated as nonzero when choosing a pivot.
    fn pivot_eps() -> Self;

    /// Converts an `f64`, exactly where the type allows it.
    fn from_f64_lossy(v: f64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// A tolerance given in `f64`, or zero for exact types.
    fn tol(v: f64) -> Self {
        if Self::EXACT {
            Self::zero()
        } else {
            Self::from_f64_lossy(v)
        }
    }

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits scalar")
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn pivot_eps() -> Self {
        1e-11
    }

    fn from_f64_lossy(v: f64) -> Self {
        v
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn pivot_eps() -> Self {
        1e-6
    }

    fn from_f64_lossy(v: f64) -> Self {
        v as f32
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn pivot_eps() -> Self {
        BigRational::zero()
    }

    fn from_f64_lossy(v: f64) -> Self {
        BigRational::from_float(v).expect("finite value")
    }
}

/// Builds an exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `|a - b| <= tol * (1 + max(|a|, |b|))`, exact equality for exact scalars.
pub fn approx_eq<T: Scalar>(a: &T, b: &T, rel_tol: f64) -> bool {
    let diff = (a.clone() - b.clone()).abs();
    let scale = T::one() + T::max_of(a.abs(), b.abs());
    diff <= T::tol(rel_tol) * scale
}
