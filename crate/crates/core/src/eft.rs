//! Error-free transformations and compensated dot products, giving results
//! as accurate as if computed in twice the working precision.

use nalgebra::DMatrix;
use num_complex::Complex64;
use riccati_interval::round::{abs_up, add_up, gamma, mul_up, sub_down, ETA};
use riccati_interval::{ComplexDisc, IntervalError, IntervalMatrix};

/// `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `a · b = p + e` exactly, barring underflow.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Running sum that carries its rounding errors separately.
#[derive(Clone, Copy, Default, Debug)]
pub struct Acc {
    hi: f64,
    lo: f64,
}

impl Acc {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
    }

    #[inline]
    pub fn add_prod(&mut self, a: f64, b: f64) {
        if a == 0.0 || b == 0.0 {
            return;
        }
        let (p, e) = two_prod(a, b);
        self.add(p);
        self.lo += e;
    }

    /// Leading and trailing parts of the accumulated value.
    #[inline]
    pub fn split(self) -> (f64, f64) {
        two_sum(self.hi, self.lo)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Clone, Copy, Default, Debug)]
pub struct CAcc {
    re: Acc,
    im: Acc,
}

impl CAcc {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn add_prod(&mut self, a: Complex64, b: Complex64) {
        self.re.add_prod(a.re, b.re);
        self.re.add_prod(-a.im, b.im);
        self.im.add_prod(a.re, b.im);
        self.im.add_prod(a.im, b.re);
    }

    pub fn split(self) -> (Complex64, Complex64) {
        let (rh, rl) = self.re.split();
        let (ih, il) = self.im.split();
        (Complex64::new(rh, ih), Complex64::new(rl, il))
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// A matrix stored as an unevaluated sum `hi + lo`.
#[derive(Clone, Debug)]
pub struct DdMatrix {
    pub hi: DMatrix<Complex64>,
    pub lo: DMatrix<Complex64>,
}

/// `A · (B_hi + B_lo)` in compensated arithmetic.
pub fn dd_product(a: &DMatrix<Complex64>, b: &DdMatrix) -> DdMatrix {
    let (m, k, n) = (a.nrows(), a.ncols(), b.hi.ncols());
    let mut hi = DMatrix::zeros(m, n);
    let mut lo = DMatrix::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            let mut acc = CAcc::default();
            for l in 0..k {
                acc.add_prod(a[(i, l)], b.hi[(l, j)]);
                acc.add_prod(a[(i, l)], b.lo[(l, j)]);
            }
            let (h, e) = acc.split();
            hi[(i, j)] = h;
            lo[(i, j)] = e;
        }
    }
    DdMatrix { hi, lo }
}

/// Residual `A*X + XA + Q − XGX` evaluated with compensated dot products.
pub fn care_residual(
    a: &DMatrix<Complex64>,
    g: &DMatrix<Complex64>,
    q: &DMatrix<Complex64>,
    x: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let n = a.nrows();
    let gx = dd_product(
        g,
        &DdMatrix {
            hi: x.clone(),
            lo: DMatrix::zeros(n, n),
        },
    );
    let xgx = dd_product(x, &gx);
    let ah = a.adjoint();
    DMatrix::from_fn(n, n, |i, j| {
        let mut acc = CAcc::default();
        for l in 0..n {
            acc.add_prod(ah[(i, l)], x[(l, j)]);
            acc.add_prod(x[(i, l)], a[(l, j)]);
        }
        acc.add(q[(i, j)]);
        acc.add(-xgx.hi[(i, j)]);
        acc.add(-xgx.lo[(i, j)]);
        acc.value()
    })
}

/// Exact sum of floats and exact products, kept as a leading part plus a
/// float sum of the captured rounding errors, with a rigorous bound on the
/// error of that trailing sum.
#[derive(Clone, Copy, Default, Debug)]
struct ExactSum {
    hi: f64,
    lo: f64,
    lo_abs: f64,
    terms: usize,
    prods: usize,
}

impl ExactSum {
    #[inline]
    fn push_low(&mut self, e: f64) {
        self.lo += e;
        self.lo_abs = add_up(self.lo_abs, e.abs());
        self.terms += 1;
    }

    #[inline]
    fn add(&mut self, x: f64) {
        let (s, q) = two_sum(self.hi, x);
        self.hi = s;
        self.push_low(q);
    }

    #[inline]
    fn add_prod(&mut self, a: f64, b: f64) {
        if a == 0.0 || b == 0.0 {
            return;
        }
        let (p, e) = two_prod(a, b);
        self.add(p);
        self.push_low(e);
        self.prods += 1;
    }

    /// `(hi, lo, err)` with the exact sum within `err` of `hi + lo`. An
    /// underflowing product residual is off by at most half of `ETA`.
    fn finish(self) -> (f64, f64, f64) {
        let err = add_up(
            mul_up(gamma(self.terms), self.lo_abs),
            mul_up(self.prods as f64, ETA),
        );
        (self.hi, self.lo, err)
    }
}

#[derive(Clone, Copy, Default, Debug)]
struct CExactSum {
    re: ExactSum,
    im: ExactSum,
}

impl CExactSum {
    #[inline]
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    fn add_prod(&mut self, a: Complex64, b: Complex64) {
        self.re.add_prod(a.re, b.re);
        self.re.add_prod(-a.im, b.im);
        self.im.add_prod(a.re, b.im);
        self.im.add_prod(a.im, b.re);
    }

    /// Leading part, trailing part and a bound on the modulus of the error.
    fn finish(self) -> (Complex64, Complex64, f64) {
        let (rh, rl, re) = self.re.finish();
        let (ih, il, ie) = self.im.finish();
        (
            Complex64::new(rh, ih),
            Complex64::new(rl, il),
            add_up(re, ie),
        )
    }
}

/// Rigorous enclosure of `A*X + XA + Q − XGX` for point data.
///
/// Every product is split exactly with an FMA and every addition with
/// TwoSum, so the only rounding left is in the float sum of the captured
/// errors. Radii are therefore of order `u·|F(X)| + n·u²·|terms|` rather
/// than the `n·u·|terms|` of plain interval products.
pub fn enclose_care_residual(
    a: &DMatrix<Complex64>,
    g: &DMatrix<Complex64>,
    q: &DMatrix<Complex64>,
    x: &DMatrix<Complex64>,
) -> Result<IntervalMatrix, IntervalError> {
    let n = a.nrows();
    let mut t_hi = DMatrix::zeros(n, n);
    let mut t_lo = DMatrix::zeros(n, n);
    let mut t_err = DMatrix::<f64>::zeros(n, n);
    let gt = g.transpose();
    for j in 0..n {
        for i in 0..n {
            let mut acc = CExactSum::default();
            for l in 0..n {
                acc.add_prod(gt[(l, i)], x[(l, j)]);
            }
            let (h, lo, e) = acc.finish();
            t_hi[(i, j)] = h;
            t_lo[(i, j)] = lo;
            t_err[(i, j)] = e;
        }
    }
    // |X|·err(T) bounds the part of X·T lost in T's enclosure. The float
    // product of nonnegative matrices is within γ_n of the exact one, up to
    // one ETA per underflowing product.
    let prod = x.map(abs_up) * &t_err;
    let inflate = 1.0 / sub_down(1.0, gamma(n));
    let under = mul_up(n as f64, ETA);
    // row access to X along contiguous memory
    let xt = x.transpose();
    IntervalMatrix::try_from_fn(n, n, |i, j| {
        let mut acc = CExactSum::default();
        let extra = add_up(mul_up(prod[(i, j)], inflate.next_up()), under);
        for l in 0..n {
            acc.add_prod(a[(l, i)].conj(), x[(l, j)]);
            let xil = xt[(l, i)];
            acc.add_prod(xil, a[(l, j)]);
            acc.add_prod(-xil, t_hi[(l, j)]);
            acc.add_prod(-xil, t_lo[(l, j)]);
        }
        acc.add(q[(i, j)]);
        let (h, lo, e) = acc.finish();
        let (mid_re, d_re) = two_sum(h.re, lo.re);
        let (mid_im, d_im) = two_sum(h.im, lo.im);
        let rad = add_up(add_up(add_up(d_re.abs(), d_im.abs()), e), extra);
        let mid = Complex64::new(mid_re, mid_im);
        if !(mid.re.is_finite() && mid.im.is_finite() && rad.is_finite()) {
            return Err(IntervalError::NonFinite);
        }
        ComplexDisc::new(mid, rad)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sum_recovers_lost_bits() {
        let (s, e) = two_sum(1.0, 1e-17);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-17);
    }

    #[test]
    fn two_prod_is_exact() {
        let a = 1.0 + f64::EPSILON;
        let (p, e) = two_prod(a, a);
        assert_eq!(p, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(e, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn compensated_sum_survives_cancellation() {
        let mut acc = Acc::default();
        for x in [1e16, 1.0, -1e16, 1.0] {
            acc.add(x);
        }
        assert_eq!(acc.value(), 2.0);
    }
}
