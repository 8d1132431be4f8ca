//! Types shared by the verification methods.

use std::fmt;

use riccati_interval::{ComplexDisc, IntervalMatrix, PointMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::problem::CareProblem;

/// Iteration budget used by every iterative verifier.
pub const DEFAULT_K_MAX: usize = 50;
/// Bound on the entries of the permuted-basis solution.
pub const DEFAULT_TAU: f64 = 3.0;
/// Relative widening applied in each ε-inflation step.
pub const INFLATION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    H,
    K,
    F,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::H, Method::K, Method::F];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::H => "H",
            Method::K => "K",
            Method::F => "F",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h" => Ok(Method::H),
            "k" => Ok(Method::K),
            "f" => Ok(Method::F),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub k_max: usize,
    pub tau: f64,
    /// Replaces the default shift of the fixed-point method.
    pub shift: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            k_max: DEFAULT_K_MAX,
            tau: DEFAULT_TAU,
            shift: None,
        }
    }
}

/// Interval matrix certified to contain a solution of the CARE.
#[derive(Debug, Clone)]
pub struct Enclosure {
    pub x: IntervalMatrix,
    pub iterations: usize,
    pub method: Method,
    /// Set once every matrix in `A − G·X` is proven Hurwitz stable, which
    /// makes the enclosed solution the unique stabilizing one.
    pub stabilizing_certified: bool,
    /// The fixed-point method fell back to `V = I`.
    pub degraded_basis: bool,
}

impl Enclosure {
    pub(crate) fn new(x: IntervalMatrix, iterations: usize, method: Method) -> Self {
        Self {
            x,
            iterations,
            method,
            stabilizing_certified: false,
            degraded_basis: false,
        }
    }
}

/// Arithmetic breakdown inside an iteration (an unrepresentable radius)
/// means the iterates diverged, which is an ordinary failure.
pub(crate) fn diverged(e: CoreError, k_max: usize) -> CoreError {
    match e {
        CoreError::Interval(_) => CoreError::VerificationFailed(k_max),
        other => other,
    }
}

pub(crate) fn point(m: &PointMatrix) -> Result<IntervalMatrix> {
    Ok(IntervalMatrix::from_point(m)?)
}

/// `hull(0, Z·⟨1, 0.1⟩ + ⟨0, η⟩)` with `η` the smallest normal float.
pub fn epsilon_inflate(z: &IntervalMatrix) -> Result<IntervalMatrix> {
    Ok(z.inflate(INFLATION, f64::MIN_POSITIVE)?)
}

/// Interval evaluation of `A*X + XA + Q − XGX` over the interval `x`.
pub fn interval_residual(p: &CareProblem, x: &IntervalMatrix) -> Result<IntervalMatrix> {
    let a = point(p.a())?;
    let g = point(p.g())?;
    let q = point(p.q())?;
    let quad = x.mul(&g)?.mul(x)?;
    Ok(a.conj_transpose()
        .mul(x)?
        .add(&x.mul(&a)?)?
        .add(&q)?
        .sub(&quad)?)
}

/// Necessary condition for `x` to contain a solution: the interval
/// residual contains zero in every entry.
pub fn residual_contains_zero(p: &CareProblem, x: &IntervalMatrix) -> Result<bool> {
    let r = interval_residual(p, x)?;
    let zero = num_complex::Complex64::new(0.0, 0.0);
    Ok(r.entries().iter().all(|d: &ComplexDisc| d.contains(zero)))
}
