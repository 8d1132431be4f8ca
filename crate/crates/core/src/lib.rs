//! Verified enclosures of the stabilizing solution of the continuous-time
//! algebraic Riccati equation `A*X + XA + Q = XGX`.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod bench;
pub mod eft;
pub mod enclosure;
pub mod error;
pub mod fixedpoint;
pub mod krawczyk;
pub mod methods;
pub mod permuted;
pub mod problem;
pub mod slope;
pub mod stability;

pub use enclosure::{Enclosure, Method, VerifyOptions};
pub use error::{CoreError, Result};
pub use methods::{verify, Verified};
pub use problem::{build_hamiltonian, CareProblem, HamiltonianMatrix};
