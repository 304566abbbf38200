//! Exact computation with finite sums of subword-counting functions on free
//! monoids and free groups.
//!
//! A formal sum of words denotes the function `w -> sum of c_v * (number of
//! occurrences of v in w)`. This crate decides whether that function is
//! bounded ([`decision::decide`]), whether two sums denote the same function
//! up to a bounded error ([`decision::equivalent`],
//! [`decision::brooks_equal`] for quasimorphisms), and expands classes into
//! canonical basis coordinates ([`decision::expand_pure`]). All arithmetic
//! is exact over a caller-chosen rational scalar.
//!
//! The decision path raises a sum to a single level, tests the result for
//! being a coboundary on the level transition graph ([`graphs`]), and
//! certifies failures with short cycles whose homogenized values are
//! invariants ([`certificates`]). A second, independently printed rewriting
//! procedure on weighted trees ([`trees`], [`decision::tree_algorithm`])
//! cross-validates the graph test where it is sound. The [`oracle`] module
//! regenerates ground truth by brute force for the test suite.

pub mod certificates;
pub mod decision;
mod error;
pub mod formal;
pub mod graphs;
pub mod oracle;
mod scalar;
pub mod trees;
pub mod words;

pub use error::{Error, Result};
pub use formal::{Depth, FormalSum};
pub use scalar::Scalar;
pub use words::{CyclicWord, Kind, Letter, Mode, Word};

/// Arbitrary-precision rational scalar; the safe default.
pub type Rat = num_rational::BigRational;

/// Machine-word rational scalar for small exact computations.
pub type Rat64 = num_rational::Rational64;
