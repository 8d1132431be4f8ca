//! Column-stacking vectorization and Kronecker products.
//!
//! These materialize `n² × n²` matrices and exist to check the matrix
//! identities behind the verification methods on small inputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Stacks the columns of `a` into one vector.
pub fn vec(a: &DMatrix<Complex64>) -> DVector<Complex64> {
    // nalgebra stores column-major, so the storage order is already right.
    DVector::from_iterator(a.len(), a.iter().copied())
}

/// Inverse of [`vec`] for a `rows × cols` result.
pub fn unvec(v: &DVector<Complex64>, rows: usize, cols: usize) -> DMatrix<Complex64> {
    assert_eq!(v.len(), rows * cols);
    DMatrix::from_column_slice(rows, cols, v.as_slice())
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Both sides of `vec(A·B·C) = (Cᵀ ⊗ A)·vec(B)`.
pub fn kron_vec_oracle(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    c: &DMatrix<Complex64>,
) -> (DVector<Complex64>, DVector<Complex64>) {
    let lhs = vec(&(a * b * c));
    let rhs = kron(&c.transpose(), a) * vec(b);
    (lhs, rhs)
}

/// Both sides of `diag(vec A)⁻¹·vec(B) = vec(B ./ A)`.
pub fn hadamard_vec_oracle(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
) -> (DVector<Complex64>, DVector<Complex64>) {
    let d = DMatrix::from_diagonal(&vec(a));
    let lhs = d.try_inverse().expect("divisor has a zero entry") * vec(b);
    let rhs = vec(&b.component_div(a));
    (lhs, rhs)
}
