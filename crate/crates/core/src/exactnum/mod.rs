//! Exact arithmetic: rationals, certified root enclosures and Sturm sequences.
//!
//! Nothing here touches floating point. Rationals are `num_rational::BigRational`,
//! which keeps the canonical form (positive denominator, reduced) as an invariant.

mod rational;
mod roots;
pub mod upoly;

pub use rational::{format_rational, parse_rational, pow_rational, serde_rational, serde_rational_vec};
pub use roots::{binomial, lt_pow, nth_root_enclosure, Enclosure};
pub use upoly::UPoly;

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
