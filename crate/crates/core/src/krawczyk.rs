//! Modified Krawczyk verification in the original basis (method H) and in
//! the eigenvector-transformed coordinates with the tightened slope
//! superset (the inner engine of method K).
//!
//! Unparenthesized products are evaluated left to right; this fixes the
//! widths of the enclosures.

use nalgebra::DMatrix;
use num_complex::Complex64;
use riccati_interval::{enclose_inverse, IntervalMatrix};

use crate::approx::ApproxSolution;
use crate::eft::enclose_care_residual;
use crate::enclosure::{diverged, epsilon_inflate, point, Enclosure, Method};
use crate::error::{CoreError, Result};
use crate::problem::CareProblem;

/// Enclosure of `F(X̌) = A*X̌ + X̌A + Q − X̌GX̌` for a point `X̌`, from
/// compensated sums with a rigorous error bound.
pub fn residual_enclosure(p: &CareProblem, x: &DMatrix<Complex64>) -> Result<IntervalMatrix> {
    Ok(enclose_care_residual(p.a(), p.g(), p.q(), x)?)
}

/// Enclosures of `V⁻¹` and `W⁻¹` plus a zero check on `D`.
struct Preconditioner {
    v: IntervalMatrix,
    w_adj: IntervalMatrix,
    iv: IntervalMatrix,
    iw_adj: IntervalMatrix,
    lambda: IntervalMatrix,
}

impl Preconditioner {
    fn new(s: &ApproxSolution) -> Result<Self> {
        if let Some(idx) = s.d.iter().position(|z| *z == Complex64::new(0.0, 0.0)) {
            let n = s.d.nrows();
            return Err(CoreError::ZeroDivisor(idx % n, idx / n));
        }
        let iv = enclose_inverse(&s.v).map_err(|_| CoreError::InverseEnclosureFailed("V"))?;
        let iw = enclose_inverse(&s.w).map_err(|_| CoreError::InverseEnclosureFailed("W"))?;
        Ok(Self {
            v: point(&s.v)?,
            w_adj: point(&s.w.adjoint())?,
            iv,
            iw_adj: iw.conj_transpose(),
            lambda: point(&s.lambda_matrix())?,
        })
    }
}

/// Method H: residual Krawczyk iteration on `f(x) = vec F(X)` with the
/// Kronecker-structured preconditioner built from `A − GX̌ ≈ VΛW`.
pub fn method_h(p: &CareProblem, s: &ApproxSolution, k_max: usize) -> Result<Enclosure> {
    let pre = Preconditioner::new(s)?;
    let a = point(p.a())?;
    let g = point(p.g())?;
    let xc = point(&s.x)?;
    let w = point(&s.w)?;

    let f = residual_enclosure(p, &s.x)?;
    let l = pre
        .w_adj
        .mul(&pre.iw_adj.mul(&f)?.mul(&pre.v)?.hadamard_div(&s.d)?)?
        .mul(&pre.iv)?
        .neg();

    let iterate = || -> Result<Enclosure> {
        let mut z = l.clone();
        for k in 1..=k_max {
            z = epsilon_inflate(&z)?;
            let m = pre.iw_adj.mul(&z)?.mul(&pre.v)?;
            let closed = a.sub(&g.mul(&xc.add(&z)?)?)?;
            let nn = w.mul(&closed)?.mul(&pre.iw_adj.conj_transpose())?;
            let o = pre.iv.mul(&closed)?.mul(&pre.v)?;
            let pm = pre
                .lambda
                .sub(&nn)?
                .conj_transpose()
                .mul(&m)?
                .add(&m.mul(&pre.lambda.sub(&o)?)?)?;
            let u = pre.w_adj.mul(&pm.hadamard_div(&s.d)?)?.mul(&pre.iv)?;
            let kk = l.add(&u)?;
            if kk.subset_interior(&z) {
                return Ok(Enclosure::new(xc.add(&kk)?, k, Method::H));
            }
            if !kk.is_finite() {
                break;
            }
            z = kk;
        }
        Err(CoreError::VerificationFailed(k_max))
    };
    iterate().map_err(|e| diverged(e, k_max))
}

/// State of the transformed Krawczyk iteration, exposed so that single
/// steps can be examined.
pub struct TransformedKrawczyk {
    pre: Preconditioner,
    a: IntervalMatrix,
    g: IntervalMatrix,
    xc: IntervalMatrix,
    d: DMatrix<Complex64>,
    /// `L̂ = −(I_W*·F·V) ./ D`.
    pub l_hat: IntervalMatrix,
    /// `N̂ = I_W*·(A − GX̌)*·W*`, the point-`X̌` slope block.
    n_hat: IntervalMatrix,
}

impl TransformedKrawczyk {
    pub fn new(p: &CareProblem, s: &ApproxSolution) -> Result<Self> {
        let pre = Preconditioner::new(s)?;
        let a = point(p.a())?;
        let g = point(p.g())?;
        let xc = point(&s.x)?;
        let f = residual_enclosure(p, &s.x)?;
        let l_hat = pre.iw_adj.mul(&f)?.mul(&pre.v)?.hadamard_div(&s.d)?.neg();
        let closed = a.sub(&g.mul(&xc)?)?;
        let n_hat = pre.iw_adj.mul(&closed.conj_transpose())?.mul(&pre.w_adj)?;
        Ok(Self {
            pre,
            a,
            g,
            xc,
            d: s.d.clone(),
            l_hat,
            n_hat,
        })
    }

    /// One evaluation `K̂ = L̂ + ((Λ* − N̂)Ẑ + Ẑ(Λ − Ô)) ./ D`.
    pub fn step(&self, z_hat: &IntervalMatrix) -> Result<IntervalMatrix> {
        let pre = &self.pre;
        let m_hat = pre.w_adj.mul(z_hat)?.mul(&pre.iv)?;
        let closed = self.a.sub(&self.g.mul(&self.xc.add(&m_hat)?)?)?;
        let o_hat = pre.iv.mul(&closed)?.mul(&pre.v)?;
        let p_hat = pre
            .lambda
            .conj_transpose()
            .sub(&self.n_hat)?
            .mul(z_hat)?
            .add(&z_hat.mul(&pre.lambda.sub(&o_hat)?)?)?;
        Ok(self.l_hat.add(&p_hat.hadamard_div(&self.d)?)?)
    }

    /// Maps a transformed enclosure back: `X̌ + W*·K̂·I_V`.
    pub fn back_transform(&self, k_hat: &IntervalMatrix) -> Result<IntervalMatrix> {
        Ok(self
            .xc
            .add(&self.pre.w_adj.mul(k_hat)?.mul(&self.pre.iv)?)?)
    }
}

/// Inner verifier of method K.
pub fn method_k_inner(p: &CareProblem, s: &ApproxSolution, k_max: usize) -> Result<Enclosure> {
    let t = TransformedKrawczyk::new(p, s)?;
    let iterate = || -> Result<Enclosure> {
        let mut z = t.l_hat.clone();
        for k in 1..=k_max {
            z = epsilon_inflate(&z)?;
            let kk = t.step(&z)?;
            if kk.subset_interior(&z) {
                return Ok(Enclosure::new(t.back_transform(&kk)?, k, Method::K));
            }
            if !kk.is_finite() {
                break;
            }
            z = kk;
        }
        Err(CoreError::VerificationFailed(k_max))
    };
    iterate().map_err(|e| diverged(e, k_max))
}
