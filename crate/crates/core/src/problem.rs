//! Problem data: the coefficient triple and its Hamiltonian.

use nalgebra::DMatrix;
use num_complex::Complex64;
use riccati_interval::PointMatrix;

use crate::error::{CoreError, Result};

/// Coefficients of `A*X + XA + Q = XGX` with Hermitian `G` and `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CareProblem {
    a: PointMatrix,
    g: PointMatrix,
    q: PointMatrix,
}

const HERMITIAN_TOL: f64 = 1e-12;

impl CareProblem {
    /// Validates shapes and finiteness, checks that `G` and `Q` are Hermitian
    /// to a relative tolerance of 1e-12, and replaces them by their exact
    /// Hermitian parts.
    pub fn new(a: PointMatrix, g: PointMatrix, q: PointMatrix) -> Result<Self> {
        let n = a.nrows();
        for (name, m) in [("A", &a), ("G", &g), ("Q", &q)] {
            if m.shape() != (n, n) {
                return Err(CoreError::InvalidProblem(format!(
                    "{name} has shape {:?}, expected ({n}, {n})",
                    m.shape()
                )));
            }
            if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(CoreError::InvalidProblem(format!(
                    "{name} has non-finite entries"
                )));
            }
        }
        if n == 0 {
            return Err(CoreError::InvalidProblem("empty problem".into()));
        }
        for (name, m) in [("G", &g), ("Q", &q)] {
            let skew = (m - m.adjoint()).norm();
            if skew > HERMITIAN_TOL * m.norm().max(1.0) {
                return Err(CoreError::InvalidProblem(format!(
                    "{name} is not Hermitian"
                )));
            }
        }
        Ok(Self {
            a,
            g: hermitian_part(&g),
            q: hermitian_part(&q),
        })
    }

    pub fn from_real(a: DMatrix<f64>, g: DMatrix<f64>, q: DMatrix<f64>) -> Result<Self> {
        Self::new(to_complex(&a), to_complex(&g), to_complex(&q))
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &PointMatrix {
        &self.a
    }

    pub fn g(&self) -> &PointMatrix {
        &self.g
    }

    pub fn q(&self) -> &PointMatrix {
        &self.q
    }

    pub fn is_real(&self) -> bool {
        [&self.a, &self.g, &self.q]
            .iter()
            .all(|m| m.iter().all(|z| z.im == 0.0))
    }

    pub fn hamiltonian(&self) -> HamiltonianMatrix {
        build_hamiltonian(self)
    }
}

/// The `2n × 2n` matrix `[[A, −G], [−Q, −A*]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    h: PointMatrix,
}

impl HamiltonianMatrix {
    pub fn from_matrix(h: PointMatrix) -> Self {
        assert!(h.is_square() && h.nrows().is_multiple_of(2));
        Self { h }
    }

    pub fn matrix(&self) -> &PointMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.nrows() / 2
    }

    /// Reads `(A, G, Q)` back off the blocks. Negation is exact.
    pub fn blocks(&self) -> (PointMatrix, PointMatrix, PointMatrix) {
        let n = self.n();
        let a = self.h.view((0, 0), (n, n)).into_owned();
        let g = -self.h.view((0, n), (n, n)).into_owned();
        let q = -self.h.view((n, 0), (n, n)).into_owned();
        (a, g, q)
    }
}

pub fn build_hamiltonian(p: &CareProblem) -> HamiltonianMatrix {
    let n = p.n();
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&p.a);
    h.view_mut((0, n), (n, n)).copy_from(&(-&p.g));
    h.view_mut((n, 0), (n, n)).copy_from(&(-&p.q));
    h.view_mut((n, n), (n, n)).copy_from(&(-p.a.adjoint()));
    HamiltonianMatrix { h }
}

/// `(M + M*)/2`, exactly Hermitian by construction.
pub fn hermitian_part(m: &PointMatrix) -> PointMatrix {
    let n = m.nrows();
    let mut out = m.clone();
    for i in 0..n {
        out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = z;
            out[(j, i)] = z.conj();
        }
    }
    out
}

pub fn to_complex(m: &DMatrix<f64>) -> PointMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(n: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, v)
    }

    #[test]
    fn experiment_one_hamiltonian() {
        let p = CareProblem::from_real(
            re(2, &[0.0, 1.0, 0.0, 0.0]),
            re(2, &[0.0, 0.0, 0.0, 1.0]),
            re(2, &[1.0, 0.0, 0.0, 2.0]),
        )
        .unwrap();
        let h = build_hamiltonian(&p);
        let expected = re(
            4,
            &[
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, -1.0, //
                -1.0, 0.0, 0.0, 0.0, //
                0.0, -2.0, -1.0, 0.0,
            ],
        );
        assert_eq!(h.matrix(), &to_complex(&expected));
        let (a, g, q) = h.blocks();
        assert_eq!((&a, &g, &q), (p.a(), p.g(), p.q()));
    }

    #[test]
    fn zero_problem_has_zero_hamiltonian() {
        let z = DMatrix::zeros(3, 3);
        let p = CareProblem::from_real(z.clone(), z.clone(), z).unwrap();
        assert!(build_hamiltonian(&p)
            .matrix()
            .iter()
            .all(|x| *x == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn rejects_non_hermitian_weights() {
        let a = DMatrix::zeros(2, 2);
        let g = re(2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(CareProblem::from_real(a.clone(), g, DMatrix::zeros(2, 2)).is_err());
        assert!(CareProblem::from_real(a, DMatrix::zeros(3, 3), DMatrix::zeros(2, 2)).is_err());
    }
}
