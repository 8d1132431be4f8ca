//! Certification that every matrix of an interval matrix is Hurwitz stable.
//! Applied to `A − G·X` it proves the enclosed solution is the unique
//! stabilizing one.

use nalgebra::DMatrix;
use riccati_interval::round::{add_up, div_up, mul_up, sub_down};
use riccati_interval::IntervalMatrix;
use serde::{Deserialize, Serialize};

use crate::approx::approx_eig;
use crate::enclosure::{point, Enclosure};
use crate::error::Result;
use crate::problem::CareProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    pub success: bool,
    pub mu: f64,
    pub t_max: f64,
    /// Upper bound of `max r + max Re λ`.
    pub spectral_bound: f64,
}

impl StabilityCertificate {
    fn failed(mu: f64, t_max: f64, spectral_bound: f64) -> Self {
        Self {
            success: false,
            mu,
            t_max,
            spectral_bound,
        }
    }
}

fn row_sums_up(m: &DMatrix<f64>) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).fold(0.0, |s, j| add_up(s, m[(i, j)])))
        .collect()
}

/// Stability test from an eigendecomposition `mid(M) ≈ VΛW`:
/// `R = mag(W(MV − VΛ))`, `S = mag(I − VW)`, `u = Re`, `t = Se`,
/// `μ = max u./(e − t)` and `r = u + μt`. Success requires `max t < 1` and
/// `r + max Re λ < 0`, with all rounding pushing toward failure.
pub fn verify_hurwitz(m: &IntervalMatrix) -> Result<StabilityCertificate> {
    let n = m.rows();
    let eig = approx_eig(&m.mid())?;
    let v = point(&eig.v)?;
    let w = point(&eig.w)?;
    let lam = point(&DMatrix::from_diagonal(&eig.lambda))?;

    let r = w.mul(&m.mul(&v)?.sub(&v.mul(&lam)?)?)?.mag();
    let s = IntervalMatrix::identity(n).sub(&v.mul(&w)?)?.mag();
    let u = row_sums_up(&r);
    let t = row_sums_up(&s);
    let t_max = t.iter().copied().fold(0.0, f64::max);

    let mut mu: f64 = 0.0;
    for (&ui, &ti) in u.iter().zip(&t) {
        let gap = sub_down(1.0, ti);
        if !(gap > 0.0) {
            return Ok(StabilityCertificate::failed(
                f64::INFINITY,
                t_max,
                f64::INFINITY,
            ));
        }
        mu = mu.max(div_up(ui, gap));
    }
    let r_max = u
        .iter()
        .zip(&t)
        .map(|(&ui, &ti)| add_up(ui, mul_up(mu, ti)))
        .fold(0.0, f64::max);
    let re_max = eig
        .lambda
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let spectral_bound = add_up(r_max, re_max);
    let success = t_max < 1.0 && spectral_bound < 0.0 && mu.is_finite();
    Ok(StabilityCertificate {
        success,
        mu,
        t_max,
        spectral_bound,
    })
}

/// Interval closed loop `A − G·X`.
pub fn closed_loop(p: &CareProblem, x: &IntervalMatrix) -> Result<IntervalMatrix> {
    Ok(point(p.a())?.sub(&point(p.g())?.mul(x)?)?)
}

/// Runs the stability test on `A − G·X` and records the outcome.
pub fn certify_enclosure(p: &CareProblem, mut enc: Enclosure) -> Enclosure {
    enc.stabilizing_certified = closed_loop(p, &enc.x)
        .and_then(|m| verify_hurwitz(&m))
        .is_ok_and(|c| c.success);
    enc
}
