//! The three complete verification methods.
//!
//! * H: Krawczyk iteration in the original basis.
//! * K: permuted basis around the transformed Krawczyk iteration.
//! * F: permuted basis around the shifted fixed-point iteration.
//!
//! Every method ends with the stability test and with a check that the
//! interval residual over the enclosure contains zero.

use crate::approx::approx_solution;
use crate::enclosure::{residual_contains_zero, Enclosure, Method, VerifyOptions};
use crate::error::{CoreError, Result};
use crate::fixedpoint::method_f;
use crate::krawczyk::{method_h, method_k_inner};
use crate::permuted::{algorithm5_driver, SwapSet};
use crate::problem::CareProblem;
use crate::stability::certify_enclosure;
use riccati_interval::PointMatrix;

#[derive(Debug, Clone)]
pub struct Verified {
    pub enclosure: Enclosure,
    /// Swap set used by methods K and F.
    pub swap: Option<SwapSet>,
    /// Eigenvector matrix that preconditioned the iteration, for
    /// diagnostics.
    pub eigvecs: PointMatrix,
}

pub fn verify(p: &CareProblem, method: Method, opts: &VerifyOptions) -> Result<Verified> {
    let (enc, swap, eigvecs) = match method {
        Method::H => {
            let approx = approx_solution(p)?;
            (method_h(p, &approx, opts.k_max)?, None, approx.v)
        }
        Method::K => {
            let out = algorithm5_driver(p, &|pp, a, o| method_k_inner(pp, a, o.k_max), opts)?;
            (out.enclosure, Some(out.swap), out.approx_p.v)
        }
        Method::F => {
            let out = algorithm5_driver(p, &|pp, a, o| method_f(pp, a, o.k_max, o.shift), opts)?;
            (out.enclosure, Some(out.swap), out.approx_p.v)
        }
    };
    if !residual_contains_zero(p, &enc.x)? {
        return Err(CoreError::ResidualCheckFailed);
    }
    Ok(Verified {
        enclosure: certify_enclosure(p, enc),
        swap,
        eigvecs,
    })
}
