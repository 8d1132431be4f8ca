//! Problem generators, quality metrics, reports and the benchmark runner.

pub mod generate;
pub mod metrics;
pub mod report;
pub mod suite;

pub use generate::{gen_experiment1, gen_known_solution, gen_lyapunov, KnownOptions};
pub use metrics::{garp, nre};
pub use report::{Status, VerificationReport};
pub use suite::{run_suite, SuiteProblem};
