//! Lie-central series, c-nilpotent Schur Lie-multipliers, Lie-stem covers and
//! Lie-capability for finite-dimensional Leibniz algebras, in exact arithmetic.
//!
//! The library is generic over a [`Scalar`] field. Exact rationals are the
//! supported instance for every rank decision; the aliases below fix it.

pub mod algebra;
pub mod baer;
pub mod catalog;
pub mod error;
pub mod exactlin;
pub mod extension;
pub mod format;
pub mod free;
pub mod lie;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;
pub type Vector = exactlin::SparseVec<Rational>;
pub type Subspace = exactlin::Subspace<Rational>;
pub type Mat = exactlin::Mat<Rational>;
pub type LeibnizAlgebra = algebra::Algebra<Rational>;
pub type Ideal = algebra::Ideal<Rational>;
pub type Morphism = algebra::Morphism<Rational>;
pub type FreeTruncation = free::FreeTruncation<Rational>;
pub type Extension = extension::Extension<Rational>;
pub type MultiplierReport = baer::MultiplierReport<Rational>;

pub use baer::{LevelPolicy, Mode};
