//! Method F: verification through the shifted fixed-point form of the
//! residual equation. Only the shift is read from the spectrum of the closed
//! loop, so a defective closed-loop matrix is no obstacle.

use nalgebra::DMatrix;
use riccati_interval::{
    enclose_inverse, verified_solve_right, ComplexDisc, IntervalError, IntervalMatrix, PointMatrix,
};

use crate::approx::{complex_schur, ApproxSolution};
use crate::enclosure::{diverged, epsilon_inflate, point, Enclosure, Method};
use crate::error::{CoreError, Result};
use crate::krawczyk::residual_enclosure;
use crate::problem::CareProblem;

/// Shift `s` and unitary basis `V` for the fixed-point iteration.
#[derive(Debug, Clone)]
pub struct ShiftBasis {
    pub s: f64,
    pub v: PointMatrix,
    /// The Schur factorization was unavailable and `V = I` is used.
    pub degraded: bool,
}

/// `s = −min Re λ(Ã)` and `V` the unitary factor of the complex Schur form
/// of `Ã`. An explicit `shift` replaces the default.
pub fn choose_shift_and_basis(a_tilde: &PointMatrix, shift: Option<f64>) -> Result<ShiftBasis> {
    let n = a_tilde.nrows();
    let (v, lambda, degraded) = match complex_schur(a_tilde) {
        Ok((q, t)) => (
            q,
            Some((0..n).map(|i| t[(i, i)]).collect::<Vec<_>>()),
            false,
        ),
        Err(_) => (DMatrix::identity(n, n), None, true),
    };
    let s = match (&lambda, shift) {
        (Some(l), _) => {
            let max_re = l.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            if !(max_re < 0.0) {
                return Err(CoreError::UnstableClosedLoop(max_re));
            }
            let min_re = l.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            shift.unwrap_or(-min_re)
        }
        (None, Some(s)) => s,
        // Without eigenvalues, any bound on the spectral radius will do.
        (None, None) => a_tilde.iter().map(|z| z.norm()).sum::<f64>().max(1.0),
    };
    if !(s > 0.0 && s.is_finite()) {
        return Err(CoreError::InvalidProblem(format!(
            "shift must be positive, got {s}"
        )));
    }
    Ok(ShiftBasis { s, v, degraded })
}

/// Method F on the problem as given.
pub fn method_f(
    p: &CareProblem,
    approx: &ApproxSolution,
    k_max: usize,
    shift: Option<f64>,
) -> Result<Enclosure> {
    let n = p.n();
    let a_tilde = p.a() - p.g() * &approx.x;
    let basis = choose_shift_and_basis(&a_tilde, shift)?;
    let s = ComplexDisc::real(basis.s);

    let iv = enclose_inverse(&basis.v).map_err(|_| CoreError::InverseEnclosureFailed("V"))?;
    let v = point(&basis.v)?;
    let a = point(p.a())?;
    let g = point(p.g())?;
    let xc = point(&approx.x)?;

    let a_v = iv.mul(&a.sub(&g.mul(&xc)?)?)?.mul(&v)?;
    let q_v = v
        .conj_transpose()
        .mul(&residual_enclosure(p, &approx.x)?)?
        .mul(&v)?;
    let g_v = iv.mul(&g)?.mul(&iv.conj_transpose())?;
    let i_s = verified_solve_right(
        &a_v.conj_transpose().add_diag(s.neg())?,
        &IntervalMatrix::identity(n),
    )
    .map_err(|e| match e {
        IntervalError::SingularInterval(_) => CoreError::InverseEnclosureFailed("A_V* - sI"),
        other => other.into(),
    })?;
    let shifted = a_v.add_diag(s)?;
    let neg_q = q_v.neg();

    let iterate = || -> Result<Enclosure> {
        let mut z = i_s.mul(&neg_q)?;
        for k in 1..=k_max {
            z = epsilon_inflate(&z)?;
            let y = i_s.mul(&neg_q.sub(&z.mul(&shifted.sub(&g_v.mul(&z)?)?)?)?)?;
            if y.subset_interior(&z) {
                let x = xc.add(&iv.conj_transpose().mul(&z)?.mul(&iv)?)?;
                let mut enc = Enclosure::new(x, k, Method::F);
                enc.degraded_basis = basis.degraded;
                return Ok(enc);
            }
            if !y.is_finite() {
                break;
            }
            // The printed algorithm leaves Z unchanged here; iterating on Y
            // is what lets the inflation converge.
            z = y;
        }
        Err(CoreError::VerificationFailed(k_max))
    };
    iterate().map_err(|e| diverged(e, k_max))
}
