//! Certified computation of dynamical degrees of dominant rational self-maps
//! of projective space.
//!
//! Every quantity on the certification path is an exact integer or rational.
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: rationals, root enclosures, Sturm sequences.
//! - [`polyring`]: sparse homogeneous polynomials over Q and F_p, composition
//!   with content removal.
//! - [`polytope`]: exact convex hulls, volumes and mixed volumes, generic over
//!   the coordinate scalar.
//! - [`oracle`]: the mixed-degree oracle with a monomial (polytope) backend and a
//!   projective (composition) backend, plus self-validation.
//! - [`certificate`]: the lower-bound conditions and the recursive-inequality
//!   engine.
//! - [`solver`]: enumeration, enclosures, the surface fast path and reference
//!   values.
//! - [`seqlab`]: submultiplicative sequence diagnostics.

pub mod certificate;
pub mod exactnum;
pub mod oracle;
pub mod polyring;
pub mod polytope;
pub mod scalar;
pub mod seqlab;
pub mod solver;

pub use exactnum::{Enclosure, Rational};
pub use scalar::ExactScalar;

/// Polytope with rational coordinates.
pub type RationalPolytope = polytope::Polytope<num_rational::BigRational>;
/// Polytope with integer (lattice) coordinates.
pub type LatticePolytope = polytope::Polytope<num_bigint::BigInt>;

/// Recursive-inequality verdict over exact rationals.
pub type RationalGrowthVerdict = certificate::GrowthVerdict<num_rational::BigRational>;
/// Recursive-inequality verdict over `f64`, for exploratory diagnostics only.
pub type FloatGrowthVerdict = certificate::GrowthVerdict<f64>;
