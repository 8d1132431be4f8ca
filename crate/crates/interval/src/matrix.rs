//! Dense matrices of circular complex intervals.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::disc::ComplexDisc;
use crate::error::{IntervalError, Result};
use crate::round::{
    abs_up, add_down, add_up, gamma, mul_up, sqr_down, sqr_up, sqrt_down, sqrt_up, ETA,
    UNIT_ROUNDOFF,
};

/// A closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(IntervalError::NonFinite);
        }
        if lo > hi {
            return Err(IntervalError::NegativeRadius(hi - lo));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Row-major `rows × cols` matrix of discs.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexDisc>,
}

pub type PointMatrix = DMatrix<Complex64>;

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ComplexDisc>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(IntervalError::DimensionMismatch {
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ComplexDisc::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ComplexDisc::real(1.0);
        }
        m
    }

    /// Point interval matrix. Fails on non-finite entries.
    pub fn from_point(m: &PointMatrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(ComplexDisc::new(m[(i, j)], 0.0)?);
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Interval matrix with the given midpoints and radii.
    pub fn from_mid_rad(mid: &PointMatrix, rad: &DMatrix<f64>) -> Result<Self> {
        if mid.shape() != rad.shape() {
            return Err(IntervalError::DimensionMismatch {
                left: mid.shape(),
                right: rad.shape(),
            });
        }
        let (rows, cols) = mid.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(ComplexDisc::new(mid[(i, j)], rad[(i, j)])?);
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ComplexDisc,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<ComplexDisc>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(Self { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ComplexDisc {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: ComplexDisc) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[ComplexDisc] {
        &self.data
    }

    pub fn mid(&self) -> PointMatrix {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mid())
    }

    pub fn rad(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).rad())
    }

    /// Entrywise upper bounds of the moduli.
    pub fn mag(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mag())
    }

    pub fn max_rad(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.rad()))
    }

    /// True when every entry is the exact point zero.
    pub fn is_zero(&self) -> bool {
        self.data
            .iter()
            .all(|x| x.rad() == 0.0 && x.mid() == Complex64::new(0.0, 0.0))
    }

    pub fn is_point(&self) -> bool {
        self.data.iter().all(ComplexDisc::is_point)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(IntervalError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(ComplexDisc, ComplexDisc) -> Result<ComplexDisc>,
    ) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&x, &y)| f(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    fn map(&self, f: impl Fn(ComplexDisc) -> Result<ComplexDisc>) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|&x| f(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, ComplexDisc::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, ComplexDisc::sub)
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.neg()).collect(),
        }
    }

    pub fn scale(&self, s: ComplexDisc) -> Result<Self> {
        self.map(|x| x.mul(s))
    }

    /// `self + s·I` for a square matrix.
    pub fn add_diag(&self, s: ComplexDisc) -> Result<Self> {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.set(i, i, self.get(i, i).add(s)?);
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Entrywise division by a point matrix.
    pub fn hadamard_div(&self, d: &PointMatrix) -> Result<Self> {
        if self.shape() != d.shape() {
            return Err(IntervalError::DimensionMismatch {
                left: self.shape(),
                right: d.shape(),
            });
        }
        Self::try_from_fn(self.rows, self.cols, |i, j| {
            let dij = d[(i, j)];
            if dij == Complex64::new(0.0, 0.0) {
                return Err(IntervalError::ZeroDivisor(i, j));
            }
            self.get(i, j).div(ComplexDisc::new(dij, 0.0)?)
        })
    }

    /// Rigorous product via midpoint-radius arithmetic.
    ///
    /// The midpoint is one floating-point complex product of the midpoints.
    /// With `k` the inner dimension the radius bounds
    /// `|Aₘ|·(B_r + 2γ_k|Bₘ|) + A_r·(|Bₘ| + B_r)` plus the rounding of the
    /// midpoint and the evaluation of the bound itself.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(IntervalError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let (m, k, n) = (self.rows, self.cols, other.cols);
        if m == 0 || n == 0 {
            return Ok(Self::zeros(m, n));
        }
        if k == 0 || self.is_zero() || other.is_zero() {
            return Ok(Self::zeros(m, n));
        }
        let a = Split::of(self);
        let b = Split::of(other);
        let complex = !(a.real && b.real);

        let mut c_re = gemm(m, k, n, &a.re, &b.re);
        let mut c_im = vec![0.0; m * n];
        if complex {
            sub_assign(&mut c_re, &gemm(m, k, n, &a.im, &b.im));
            c_im = gemm(m, k, n, &a.re, &b.im);
            add_assign(&mut c_im, &gemm(m, k, n, &a.im, &b.re));
        }

        let g = mul_up(2.0, gamma(k));
        let b_inner: Vec<f64> = b
            .abs
            .iter()
            .zip(&b.rad)
            .map(|(&bm, &br)| add_up(br, mul_up(g, bm)))
            .collect();
        let b_outer: Vec<f64> = b
            .abs
            .iter()
            .zip(&b.rad)
            .map(|(&bm, &br)| add_up(bm, br))
            .collect();
        let mut r = gemm(m, k, n, &a.abs, &b_inner);
        add_assign(&mut r, &gemm(m, k, n, &a.rad, &b_outer));

        // Nonnegative sums of depth k + 1 evaluated to nearest.
        let scale = add_up(1.0, mul_up(2.0, gamma(k + 2)));
        let under = mul_up((6 * k + 4) as f64, ETA);
        let u_mid = if complex {
            2.0 * UNIT_ROUNDOFF
        } else {
            UNIT_ROUNDOFF
        };
        let mut data = Vec::with_capacity(m * n);
        for idx in 0..m * n {
            let mid = Complex64::new(c_re[idx], c_im[idx]);
            let rad = add_up(
                add_up(mul_up(r[idx], scale), mul_up(u_mid, abs_up(mid))),
                under,
            );
            data.push(ComplexDisc::new(mid, rad)?);
        }
        Ok(Self {
            rows: m,
            cols: n,
            data,
        })
    }

    pub fn mul_point(&self, other: &PointMatrix) -> Result<Self> {
        self.mul(&Self::from_point(other)?)
    }

    pub fn point_mul(left: &PointMatrix, right: &Self) -> Result<Self> {
        Self::from_point(left)?.mul(right)
    }

    /// Enclosure of the Frobenius norm of every member.
    pub fn fro_norm(&self) -> RealInterval {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for x in &self.data {
            lo = add_down(lo, sqr_down(x.mig()));
            hi = add_up(hi, sqr_up(x.mag()));
        }
        RealInterval {
            lo: sqrt_down(lo),
            hi: sqrt_up(hi),
        }
    }

    /// Upper bound of the Frobenius norm of the radius matrix.
    pub fn rad_fro_norm_up(&self) -> f64 {
        let s = self
            .data
            .iter()
            .fold(0.0, |s, x| add_up(s, sqr_up(x.rad())));
        sqrt_up(s)
    }

    /// Entrywise `self ⊂ int(other)`.
    pub fn subset_interior(&self, other: &Self) -> bool {
        self.shape() == other.shape()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(x, y)| x.subset_interior(y))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.shape() == other.shape()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(x, y)| x.is_subset_of(y))
    }

    pub fn contains_point(&self, m: &PointMatrix) -> bool {
        self.shape() == m.shape()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j).contains(m[(i, j)])))
    }

    pub fn hull(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, ComplexDisc::hull)
    }

    /// Entrywise intersection, `None` when any pair of entries is disjoint.
    pub fn intersect(&self, other: &Self) -> Result<Option<Self>> {
        self.check_same_shape(other)?;
        let mut data = Vec::with_capacity(self.data.len());
        for (&x, &y) in self.data.iter().zip(&other.data) {
            match x.intersect(y) {
                Some(z) => data.push(z),
                None => return Ok(None),
            }
        }
        Ok(Some(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }))
    }

    /// Epsilon-inflation `hull(0, Z·⟨1, δ⟩ + ⟨0, abs⟩)` applied entrywise.
    pub fn inflate(&self, delta: f64, abs: f64) -> Result<Self> {
        let factor = ComplexDisc::new(Complex64::new(1.0, 0.0), delta)?;
        let pad = ComplexDisc::new(Complex64::new(0.0, 0.0), abs)?;
        self.map(|x| x.mul(factor)?.add(pad)?.hull(ComplexDisc::ZERO))
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|x| x.mid().re.is_finite() && x.mid().im.is_finite() && x.rad().is_finite())
    }

    /// Sub-block `[r0, r0 + nr) × [c0, c0 + nc)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j))
    }
}

/// Real and imaginary parts, moduli and radii of a matrix, row-major.
struct Split {
    re: Vec<f64>,
    im: Vec<f64>,
    abs: Vec<f64>,
    rad: Vec<f64>,
    real: bool,
}

impl Split {
    fn of(m: &IntervalMatrix) -> Self {
        let n = m.data.len();
        let mut s = Split {
            re: Vec::with_capacity(n),
            im: Vec::with_capacity(n),
            abs: Vec::with_capacity(n),
            rad: Vec::with_capacity(n),
            real: true,
        };
        for x in &m.data {
            let z = x.mid();
            s.re.push(z.re);
            s.im.push(z.im);
            s.abs.push(abs_up(z));
            s.rad.push(x.rad());
            s.real &= z.im == 0.0;
        }
        s
    }
}

/// Row-major `C = A·B` with `A: m×k`, `B: k×n`.
fn gemm(m: usize, k: usize, n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), m * k);
    assert_eq!(b.len(), k * n);
    let mut c = vec![0.0; m * n];
    // SAFETY: the slices have exactly the lengths described by the
    // dimensions and strides passed below, and `c` does not alias `a` or `b`.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            0.0,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
    c
}

fn add_assign(x: &mut [f64], y: &[f64]) {
    x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
}

fn sub_assign(x: &mut [f64], y: &[f64]) {
    x.iter_mut().zip(y).for_each(|(a, b)| *a -= b);
}
