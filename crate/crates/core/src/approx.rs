//! Floating-point approximation of the stabilizing solution and of the
//! spectral data used to precondition the verification methods. Nothing here
//! is rigorous; the verification stages restore rigor.

use nalgebra::{ComplexField, DMatrix, DVector, Schur};
use num_complex::Complex64;
use riccati_interval::{approximate_inverse, PointMatrix};

use crate::eft::care_residual;
use crate::error::{CoreError, Result};
use crate::problem::{hermitian_part, CareProblem, HamiltonianMatrix};

const SIGN_MAX_ITER: usize = 100;
const SCHUR_ITER_PER_ROW: usize = 200;
/// Reject a stable basis whose first block is worse conditioned than this.
const U1_COND_LIMIT: f64 = 1e14;

/// Approximate stabilizing solution together with an approximate
/// eigendecomposition `A − G·X̌ ≈ V·Λ·W` and the divisor matrix `D`.
#[derive(Debug, Clone)]
pub struct ApproxSolution {
    pub x: PointMatrix,
    pub v: PointMatrix,
    pub w: PointMatrix,
    pub lambda: DVector<Complex64>,
    /// `D_ij = conj(λ_i) + λ_j`.
    pub d: PointMatrix,
}

impl ApproxSolution {
    pub fn lambda_matrix(&self) -> PointMatrix {
        DMatrix::from_diagonal(&self.lambda)
    }
}

/// Eigenvalues and right eigenvectors `M ≈ V·diag(λ)·W` with `W ≈ V⁻¹`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub v: PointMatrix,
    pub lambda: DVector<Complex64>,
    pub w: PointMatrix,
}

/// Sign of a matrix by the Newton iteration `S ← (cS + (cS)⁻¹)/2` with
/// determinant scaling `c = |det S|^(−1/N)`.
fn sign_newton<T>(h: DMatrix<T>) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let nn = h.nrows();
    let mut s = h;
    let mut scaling = true;
    let mut prev_diff = f64::INFINITY;
    let tol = 1e2 * f64::EPSILON * (nn as f64).sqrt();
    for _ in 0..SIGN_MAX_ITER {
        let lu = s.clone().lu();
        let u = lu.u();
        let logdet: f64 = (0..nn).map(|i| u[(i, i)].modulus().ln()).sum();
        if !logdet.is_finite() {
            return Err(CoreError::NoSplitting);
        }
        let inv = lu.try_inverse().ok_or(CoreError::NoSplitting)?;
        let c = if scaling {
            (-logdet / nn as f64).exp()
        } else {
            1.0
        };
        let next = (s.scale(c) + inv.scale(1.0 / c)).scale(0.5);
        let diff = (&next - &s).norm();
        let size = next.norm();
        s = next;
        if !size.is_finite() {
            return Err(CoreError::NoSplitting);
        }
        if diff <= 1e-2 * size {
            scaling = false;
        }
        // Stop at full accuracy, or once quadratic convergence has stalled
        // at the attainable accuracy.
        if diff <= tol * size || (diff <= 1e-8 * size && diff >= 0.5 * prev_diff) {
            break;
        }
        prev_diff = diff;
    }
    let id = DMatrix::<T>::identity(nn, nn);
    let defect = (&s * &s - &id).norm();
    if !(defect <= 1e-6 * s.norm().powi(2).max(1.0)) {
        return Err(CoreError::NoSplitting);
    }
    Ok(s)
}

/// Matrix sign function of the Hamiltonian, computed in real arithmetic
/// when the Hamiltonian is real.
pub fn sign_function(h: &HamiltonianMatrix) -> Result<PointMatrix> {
    let m = h.matrix();
    if m.iter().all(|z| z.im == 0.0) {
        let s = sign_newton(m.map(|z| z.re))?;
        Ok(s.map(|x| Complex64::new(x, 0.0)))
    } else {
        sign_newton(m.clone())
    }
}

/// Orthonormal basis `[U1; U2]` of the stable invariant subspace of `H`,
/// taken from the range of the spectral projector `(I − sign H)/2`.
pub fn stable_subspace(h: &HamiltonianMatrix) -> Result<(PointMatrix, PointMatrix)> {
    let n = h.n();
    let s = sign_function(h)?;
    let proj = (DMatrix::identity(2 * n, 2 * n) - s).scale(0.5);
    let q = proj.col_piv_qr().q();
    let basis = q.columns(0, n);
    Ok((basis.rows(0, n).into_owned(), basis.rows(n, n).into_owned()))
}

/// `X = U2·U1⁻¹`, made exactly Hermitian.
pub fn solution_from_basis(u1: &PointMatrix, u2: &PointMatrix) -> Result<PointMatrix> {
    let inv = approximate_inverse(u1).ok_or(CoreError::SingularU1)?;
    let cond = one_norm(u1) * one_norm(&inv);
    if !(cond <= U1_COND_LIMIT) {
        return Err(CoreError::SingularU1);
    }
    let x = u2 * inv;
    if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(CoreError::SingularU1);
    }
    Ok(hermitian_part(&x))
}

fn one_norm(m: &PointMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Complex Schur factorization `M = Q·T·Q*` with `T` upper triangular.
///
/// With tightly clustered eigenvalues the QR iteration may never push a
/// subdiagonal entry below `ε` times its neighbours. The deflation
/// tolerance is then relaxed in steps, up to about 1e-11; the result only feeds
/// preconditioners and shifts, never a verified bound.
pub fn complex_schur(m: &PointMatrix) -> Result<(PointMatrix, PointMatrix)> {
    let max_iter = SCHUR_ITER_PER_ROW * m.nrows().max(1);
    let schur = [1.0, 16.0, 256.0, 4096.0, 65536.0]
        .iter()
        .find_map(|k| Schur::try_new(m.clone(), k * f64::EPSILON, max_iter))
        .ok_or(CoreError::EigFailure)?;
    let (q, t) = schur.unpack();
    if q.iter()
        .chain(t.iter())
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(CoreError::EigFailure);
    }
    Ok((q, t))
}

/// Fixed dense perturbation of Frobenius norm `4ε‖M‖_F`.
fn rounding_nudge(m: &PointMatrix) -> PointMatrix {
    let n = m.nrows();
    let delta = 4.0 * f64::EPSILON * m.norm().max(f64::MIN_POSITIVE);
    let nudge = DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(((7 * i + 13 * j + 1) as f64).sin(), 0.0)
    });
    let scale = delta / nudge.norm();
    nudge.scale(scale)
}

/// Approximate eigendecomposition from the complex Schur form.
///
/// Eigenvectors of the triangular factor come from back substitution; a
/// denominator smaller than `ε·‖T‖` is replaced by that threshold. A
/// defective matrix whose computed eigenvalues coincide to full precision
/// would give numerically parallel vectors, so in that case the matrix is
/// perturbed at the level of its own rounding errors. This splits the
/// multiple eigenvalue by about `√ε`, as a standard QR eigensolver does on
/// its own, and keeps `V` invertible in floating point.
pub fn approx_eig(m: &PointMatrix) -> Result<Eigen> {
    let e = eig_from_schur(m)?;
    let n = m.nrows();
    let cond = e.v.norm() * e.w.norm();
    if n > 1 && !(cond < EIG_COND_RETRY) {
        if let Ok(alt) = eig_from_schur(&(m + rounding_nudge(m))) {
            if alt.v.norm() * alt.w.norm() < cond {
                return Ok(alt);
            }
        }
    }
    Ok(e)
}

/// Condition of `V` beyond which the eigenvectors count as parallel.
const EIG_COND_RETRY: f64 = 1e12;

fn eig_from_schur(m: &PointMatrix) -> Result<Eigen> {
    let n = m.nrows();
    let (q, t) = complex_schur(m)?;
    let smin = (f64::EPSILON * t.norm()).max(f64::MIN_POSITIVE);
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let tk = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for l in j + 1..=k {
                s += t[(j, l)] * y[(l, k)];
            }
            let mut den = t[(j, j)] - tk;
            if den.norm() < smin {
                den = Complex64::new(smin, 0.0);
            }
            y[(j, k)] = -s / den;
        }
    }
    let mut v = q * y;
    for k in 0..n {
        let nrm = v.column(k).norm();
        if nrm > 0.0 && nrm.is_finite() {
            v.column_mut(k).unscale_mut(nrm);
        }
    }
    let w = approximate_inverse(&v).ok_or(CoreError::EigFailure)?;
    let lambda = DVector::from_iterator(n, (0..n).map(|i| t[(i, i)]));
    Ok(Eigen { v, lambda, w })
}

/// `D_ij = conj(λ_i) + λ_j`.
pub fn divisor_matrix(lambda: &DVector<Complex64>) -> PointMatrix {
    let n = lambda.len();
    DMatrix::from_fn(n, n, |i, j| lambda[i].conj() + lambda[j])
}

/// Residual `A*X + XA + Q − XGX` in compensated arithmetic.
pub fn residual(p: &CareProblem, x: &PointMatrix) -> PointMatrix {
    care_residual(p.a(), p.g(), p.q(), x)
}

/// One Newton step: solve `(A − GX̌)*E + E(A − GX̌) = −F(X̌)` through the
/// eigendecomposition and return the Hermitian part of `X̌ + E`.
pub fn newton_refine(p: &CareProblem, x: &PointMatrix, eig: &Eigen) -> Result<PointMatrix> {
    newton_step(x, &residual(p, x), eig)
}

fn newton_step(x: &PointMatrix, f: &PointMatrix, eig: &Eigen) -> Result<PointMatrix> {
    let d = divisor_matrix(&eig.lambda);
    let rhs = eig.v.adjoint() * f * &eig.v;
    let n = x.nrows();
    let mut e_hat = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let dij = d[(i, j)];
            if dij == Complex64::new(0.0, 0.0) {
                return Err(CoreError::ZeroDivisor(i, j));
            }
            e_hat[(i, j)] = -rhs[(i, j)] / dij;
        }
    }
    let e = eig.w.adjoint() * e_hat * &eig.w;
    Ok(hermitian_part(&(x + e)))
}

/// Refines `X̌` once, keeping the refinement only if it lowers the residual,
/// then assembles the spectral data of the closed loop.
pub fn approx_from_solution(p: &CareProblem, x0: PointMatrix) -> Result<ApproxSolution> {
    let closed = |x: &PointMatrix| p.a() - p.g() * x;
    let eig0 = approx_eig(&closed(&x0))?;
    let f0 = residual(p, &x0);
    let mut x = x0;
    let mut eig = None;
    if let Ok(x1) = newton_step(&x, &f0, &eig0) {
        let r1 = residual(p, &x1).norm();
        if r1.is_finite() && r1 < f0.norm() {
            x = x1;
        } else {
            eig = Some(eig0);
        }
    } else {
        eig = Some(eig0);
    }
    let eig = match eig {
        Some(e) => e,
        None => approx_eig(&closed(&x))?,
    };
    let d = divisor_matrix(&eig.lambda);
    Ok(ApproxSolution {
        x,
        v: eig.v,
        w: eig.w,
        lambda: eig.lambda,
        d,
    })
}

/// Approximation from a basis of the stable invariant subspace.
pub fn approx_from_basis(
    p: &CareProblem,
    u1: &PointMatrix,
    u2: &PointMatrix,
) -> Result<ApproxSolution> {
    approx_from_solution(p, solution_from_basis(u1, u2)?)
}

pub fn approx_solution(p: &CareProblem) -> Result<ApproxSolution> {
    let (u1, u2) = stable_subspace(&p.hamiltonian())?;
    approx_from_basis(p, &u1, &u2)
}

/// Estimate of the 2-norm condition number by power iteration on `M*M`
/// and on `(M*M)⁻¹`. Diagnostic only.
pub fn cond2_estimate(m: &PointMatrix) -> f64 {
    let Some(inv) = approximate_inverse(m) else {
        return f64::INFINITY;
    };
    norm2_estimate(m) * norm2_estimate(&inv)
}

fn norm2_estimate(m: &PointMatrix) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    let mut x = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.3));
    x.unscale_mut(x.norm());
    let mut est = 0.0;
    for _ in 0..50 {
        let y = m * &x;
        let z = m.adjoint() * &y;
        let nz = z.norm();
        if !(nz > 0.0) || !nz.is_finite() {
            return y.norm();
        }
        let next = nz.sqrt();
        x = z.unscale(nz);
        if (next - est).abs() <= 1e-10 * next {
            return next;
        }
        est = next;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::to_complex;

    fn re(n: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, v)
    }

    #[test]
    fn lyapunov_case() {
        let p = CareProblem::from_real(
            -DMatrix::identity(2, 2),
            DMatrix::zeros(2, 2),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        let s = approx_solution(&p).unwrap();
        assert!((&s.x - to_complex(&DMatrix::identity(2, 2).scale(0.5))).norm() < 1e-14);
        for l in s.lambda.iter() {
            assert!((l - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        }
        for d in s.d.iter() {
            assert!((d - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn experiment_one_is_accurate_despite_defective_closed_loop() {
        let p = CareProblem::from_real(
            re(2, &[0.0, 1.0, 0.0, 0.0]),
            re(2, &[0.0, 0.0, 0.0, 1.0]),
            re(2, &[1.0, 0.0, 0.0, 2.0]),
        )
        .unwrap();
        let s = approx_solution(&p).unwrap();
        let xs = to_complex(&re(2, &[2.0, 1.0, 1.0, 2.0]));
        assert!((&s.x - &xs).norm() < 1e-13, "{}", (&s.x - &xs).norm());
        assert!(cond2_estimate(&s.v) > 1e5);
    }

    #[test]
    fn diagonal_eigendecomposition() {
        let m = to_complex(&re(2, &[-1.0, 0.0, 0.0, -2.0]));
        let e = approx_eig(&m).unwrap();
        let mut l: Vec<f64> = e.lambda.iter().map(|z| z.re).collect();
        l.sort_by(f64::total_cmp);
        assert_eq!(l, vec![-2.0, -1.0]);
        let recon = &e.v * DMatrix::from_diagonal(&e.lambda) * &e.w;
        assert!((recon - m).norm() < 1e-14);
    }

    #[test]
    fn defective_matrix_gives_ill_conditioned_vectors() {
        let m = to_complex(&re(2, &[0.0, 1.0, -1.0, -2.0]));
        let e = approx_eig(&m).unwrap();
        assert!(cond2_estimate(&e.v) > 1e6);
    }

    #[test]
    fn divisor_definition() {
        let l = DVector::from_vec(vec![Complex64::new(-1.0, 2.0), Complex64::new(-3.0, -0.5)]);
        let d = divisor_matrix(&l);
        assert_eq!(d[(0, 1)], l[0].conj() + l[1]);
        assert_eq!(d[(1, 0)], l[1].conj() + l[0]);
    }
}
