//! Verified enclosures of inverses and of right-hand matrix systems.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::disc::ComplexDisc;
use crate::error::{IntervalError, Result};
use crate::matrix::{IntervalMatrix, PointMatrix};
use crate::round::{add_up, div_up, mul_up, sub_down};

/// Encloses every `X` with `X·A = B` for `A ∈ u1`, `B ∈ u2`.
///
/// With `R ≈ mid(u1)⁻¹` and `C = I − A·R`, every such solution satisfies
/// `X = Y(I − C)⁻¹ = Y + Y·C + Y·C²(I − C)⁻¹` where `Y = B·R`. If the largest
/// column sum `β` of `|C|` is below one, row `i` of the last term is bounded
/// entrywise by `max_j |Y_ij| / (1 − β) · (eᵀ|C|²)`. The same bound shows
/// that every `A ∈ u1` is nonsingular.
pub fn verified_solve_right(u1: &IntervalMatrix, u2: &IntervalMatrix) -> Result<IntervalMatrix> {
    let n = u1.rows();
    if !u1.is_square() {
        return Err(IntervalError::DimensionMismatch {
            left: u1.shape(),
            right: u1.shape(),
        });
    }
    if u2.cols() != n {
        return Err(IntervalError::DimensionMismatch {
            left: u2.shape(),
            right: u1.shape(),
        });
    }
    if n == 0 {
        return Ok(IntervalMatrix::zeros(u2.rows(), 0));
    }
    let r = approximate_inverse(&u1.mid()).ok_or(IntervalError::SingularInterval(f64::INFINITY))?;
    let r = IntervalMatrix::from_point(&r)?;

    let c = IntervalMatrix::identity(n).sub(&u1.mul(&r)?)?;
    let c_mag = c.mag();
    let beta = (0..n)
        .map(|j| (0..n).fold(0.0, |s, i| add_up(s, c_mag[(i, j)])))
        .fold(0.0, f64::max);
    if !(beta < 1.0) {
        return Err(IntervalError::SingularInterval(beta));
    }

    let y = u2.mul(&r)?;
    let yc = y.mul(&c)?;
    let head = y.add(&yc)?;

    // s = eᵀ·|C|·|C|, with every partial sum rounded upward
    let col_sums: Vec<f64> = (0..n)
        .map(|k| (0..n).fold(0.0, |s, i| add_up(s, c_mag[(i, k)])))
        .collect();
    let s: Vec<f64> = (0..n)
        .map(|j| {
            (0..n).fold(0.0, |acc, k| {
                add_up(acc, mul_up(col_sums[k], c_mag[(k, j)]))
            })
        })
        .collect();
    let gap = sub_down(1.0, beta);
    let y_mag = y.mag();

    IntervalMatrix::try_from_fn(u2.rows(), n, |i, j| {
        let row_max = (0..n).fold(0.0, |m: f64, k| m.max(y_mag[(i, k)]));
        let rho = div_up(row_max, gap);
        let x = head.get(i, j);
        ComplexDisc::new(x.mid(), add_up(x.rad(), mul_up(rho, s[j])))
    })
}

/// Interval matrix containing the exact inverse of the point matrix `m`.
pub fn enclose_inverse(m: &PointMatrix) -> Result<IntervalMatrix> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(IntervalError::DimensionMismatch {
            left: (rows, cols),
            right: (cols, rows),
        });
    }
    let a = IntervalMatrix::from_point(m)?;
    verified_solve_right(&a, &IntervalMatrix::identity(rows)).map_err(|e| match e {
        IntervalError::SingularInterval(b) => IntervalError::VerificationFailed(b),
        other => other,
    })
}

/// Floating-point inverse, `None` when LU breaks down.
pub fn approximate_inverse(m: &PointMatrix) -> Option<PointMatrix> {
    let inv = m.clone().try_inverse()?;
    inv.iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then_some(inv)
}

/// Point identity matrix of order `n`.
pub fn point_identity(n: usize) -> PointMatrix {
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(n: usize, v: &[f64]) -> PointMatrix {
        DMatrix::from_row_slice(n, n, v).map(|x| Complex64::new(x, 0.0))
    }

    #[test]
    fn inverse_of_identity_is_tight() {
        let inv = enclose_inverse(&point_identity(5)).unwrap();
        assert!(inv.contains_point(&point_identity(5)));
        assert!(inv.max_rad() <= 1e-14);
    }

    #[test]
    fn inverse_of_diagonal() {
        let inv = enclose_inverse(&pm(2, &[2.0, 0.0, 0.0, 4.0])).unwrap();
        assert!(inv.contains_point(&pm(2, &[0.5, 0.0, 0.0, 0.25])));
    }

    #[test]
    fn singular_point_matrix_fails() {
        let r = enclose_inverse(&pm(2, &[1.0, 2.0, 2.0, 4.0]));
        assert!(matches!(r, Err(IntervalError::VerificationFailed(_))));
    }

    #[test]
    fn solve_with_identity() {
        let m = pm(2, &[1.0, -2.0, 3.5, 0.125]);
        let x = verified_solve_right(
            &IntervalMatrix::identity(2),
            &IntervalMatrix::from_point(&m).unwrap(),
        )
        .unwrap();
        assert!(x.contains_point(&m));
        assert!(x.max_rad() < 1e-14);
    }

    #[test]
    fn interval_containing_singular_member() {
        let mid = pm(2, &[1.0, 0.0, 0.0, 0.5]);
        let mut rad = DMatrix::zeros(2, 2);
        rad[(1, 1)] = 0.6;
        let u1 = IntervalMatrix::from_mid_rad(&mid, &rad).unwrap();
        let r = verified_solve_right(&u1, &IntervalMatrix::identity(2));
        assert!(matches!(r, Err(IntervalError::SingularInterval(_))));
    }
}
