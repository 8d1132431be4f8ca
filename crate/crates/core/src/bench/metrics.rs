//! Quality measures of an enclosure.

use riccati_interval::round::{div_up, UNIT_ROUNDOFF};
use riccati_interval::IntervalMatrix;

use crate::error::{CoreError, Result};

/// Norm-wise relative error `‖rad X‖_F / ‖X‖_F`, taken as the upper bound
/// of the quotient of the radius norm by the norm interval.
pub fn nre(x: &IntervalMatrix) -> Result<f64> {
    let num = x.rad_fro_norm_up();
    let den = x.fro_norm();
    if !(den.lo() > 0.0) {
        return Err(CoreError::ZeroNorm);
    }
    Ok(div_up(num, den.lo()))
}

/// Exact entries get this relative precision in [`garp`], so that one
/// point entry does not zero the whole mean.
pub const GARP_FLOOR: f64 = UNIT_ROUNDOFF * UNIT_ROUNDOFF;

/// Geometric mean of the entrywise relative precisions `rp`.
///
/// Point entries count as [`GARP_FLOOR`]; the result is zero only when
/// every entry is a point.
pub fn garp(x: &IntervalMatrix) -> f64 {
    let rps: Vec<f64> = x.entries().iter().map(|d| d.rp()).collect();
    if rps.is_empty() || rps.iter().all(|&r| r == 0.0) {
        return 0.0;
    }
    let mean_log = rps.iter().map(|&r| r.max(GARP_FLOOR).ln()).sum::<f64>() / rps.len() as f64;
    mean_log.exp().clamp(0.0, 1.0)
}
