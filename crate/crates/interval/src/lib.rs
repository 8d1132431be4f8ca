//! Circular complex interval arithmetic with guaranteed outward rounding,
//! and the dense interval linear algebra built on it.
//!
//! A [`ComplexDisc`] `⟨m, r⟩` represents every complex number within
//! distance `r` of `m`. Every operation returns a disc that contains all
//! exact results obtainable from members of its operands, so a chain of
//! operations yields a rigorous enclosure of the exact result.

// `!(x > 0.0)` also rejects NaN, and the arithmetic methods return
// `Result`, so they cannot be the operator traits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::should_implement_trait)]

pub mod disc;
pub mod error;
pub mod kron;
pub mod matrix;
pub mod round;
pub mod solve;

pub use disc::ComplexDisc;
pub use error::{IntervalError, Result};
pub use matrix::{IntervalMatrix, PointMatrix, RealInterval};
pub use solve::{approximate_inverse, enclose_inverse, point_identity, verified_solve_right};
