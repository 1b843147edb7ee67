//! Scalar abstraction for the geometry kernels.
//!
//! Exact predicates need an ordered ring without rounding, so the polytope code
//! is generic over [`ExactScalar`] instead of `num_traits::Float`. Machine
//! integers are accepted for speed when the caller knows coordinates stay small;
//! results that leave the ring (volumes) are reported as rationals.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed};

pub trait ExactScalar: Clone + Debug + Ord + Hash + Num + Signed + Send + Sync + 'static {
    fn to_rational(&self) -> BigRational;

    fn from_usize(k: usize) -> Self {
        (0..k).fold(Self::zero(), |acc, _| acc + Self::one())
    }
}

impl ExactScalar for BigInt {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl ExactScalar for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

impl ExactScalar for i64 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}

impl ExactScalar for i128 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}
