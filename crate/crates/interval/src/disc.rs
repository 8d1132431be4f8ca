//! Circular complex intervals in midpoint-radius form.

use std::fmt;

use num_complex::Complex64;

use crate::error::{IntervalError, Result};
use crate::round::{
    abs_down, abs_up, add_up, dist_down, dist_up, div_up, mul_up, norm_sqr_down, norm_sqr_up,
    sqr_down, sqr_up, sqrt_up, sub_down, sub_up, ETA, REALMIN, UNIT_ROUNDOFF,
};

/// The closed disc `{z : |z − mid| ≤ rad}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDisc {
    mid: Complex64,
    rad: f64,
}

impl ComplexDisc {
    pub const ZERO: ComplexDisc = ComplexDisc {
        mid: Complex64 { re: 0.0, im: 0.0 },
        rad: 0.0,
    };

    pub fn new(mid: Complex64, rad: f64) -> Result<Self> {
        if !(mid.re.is_finite() && mid.im.is_finite() && rad.is_finite()) {
            return Err(IntervalError::NonFinite);
        }
        if rad < 0.0 {
            return Err(IntervalError::NegativeRadius(rad));
        }
        // Normalize -0.0 so that equality and hashing of point discs behave.
        Ok(Self {
            mid,
            rad: rad + 0.0,
        })
    }

    /// Exact point interval. Panics on non-finite input.
    pub fn point(mid: Complex64) -> Self {
        Self::new(mid, 0.0).expect("point disc requires a finite midpoint")
    }

    pub fn real(x: f64) -> Self {
        Self::point(Complex64::new(x, 0.0))
    }

    #[inline]
    pub fn mid(&self) -> Complex64 {
        self.mid
    }

    #[inline]
    pub fn rad(&self) -> f64 {
        self.rad
    }

    pub fn is_point(&self) -> bool {
        self.rad == 0.0
    }

    /// Negation is exact.
    pub fn neg(self) -> Self {
        Self {
            mid: -self.mid,
            rad: self.rad,
        }
    }

    /// Complex conjugation is exact.
    pub fn conj(self) -> Self {
        Self {
            mid: self.mid.conj(),
            rad: self.rad,
        }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        let (re, e_re) = two_sum(self.mid.re, other.mid.re);
        let (im, e_im) = two_sum(self.mid.im, other.mid.im);
        // The rounding error of each component is exactly representable.
        let rad = add_up(
            add_up(self.rad, other.rad),
            abs_up(Complex64::new(e_re, e_im)),
        );
        Self::new(Complex64::new(re, im), rad)
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        self.add(other.neg())
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        let mid = self.mid * other.mid;
        let ax = abs_up(self.mid);
        let ay = abs_up(other.mid);
        let spread = add_up(
            add_up(mul_up(ax, other.rad), mul_up(ay, self.rad)),
            mul_up(self.rad, other.rad),
        );
        // The textbook product has error below 2√2·u·|x||y| plus underflow.
        let rounding = add_up(mul_up(4.0 * UNIT_ROUNDOFF, mul_up(ax, ay)), 4.0 * ETA);
        let rounding = if mid == Complex64::new(0.0, 0.0) && (ax == 0.0 || ay == 0.0) {
            0.0
        } else {
            rounding
        };
        Self::new(mid, add_up(spread, rounding))
    }

    /// Multiplication by a real scalar.
    pub fn scale(self, s: f64) -> Result<Self> {
        self.mul(Self::real(s))
    }

    /// `1/x = ⟨conj(m)/(|m|² − r²), r/(|m|² − r²)⟩`, valid when `0 ∉ x`.
    pub fn recip(self) -> Result<Self> {
        let m = self.mid;
        let d_lo = sub_down(norm_sqr_down(m), sqr_up(self.rad));
        if !(d_lo > 0.0) {
            return Err(IntervalError::ZeroInDisc);
        }
        let d_hi = sub_up(norm_sqr_up(m), sqr_down(self.rad));
        let c = Complex64::new(m.re / d_lo, -m.im / d_lo);
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(IntervalError::NonFinite);
        }
        // true center conj(m)/d with d ∈ [d_lo, d_hi]
        let shift = div_up(
            mul_up(abs_up(m), sub_up(d_hi, d_lo)),
            crate::round::mul_down(d_lo, d_lo),
        );
        let rad = add_up(
            add_up(div_up(self.rad, d_lo), mul_up(UNIT_ROUNDOFF, abs_up(c))),
            add_up(shift, 2.0 * ETA),
        );
        Self::new(c, rad)
    }

    pub fn div(self, other: Self) -> Result<Self> {
        if other.rad == 0.0 && other.mid.im == 0.0 && other.mid.re != 0.0 {
            return self.div_real(other.mid.re);
        }
        self.mul(other.recip()?)
    }

    /// Division by a nonzero real point, which keeps quotients of exact
    /// values exact.
    fn div_real(self, d: f64) -> Result<Self> {
        let mid = Complex64::new(self.mid.re / d, self.mid.im / d);
        let rounding = if mid == Complex64::new(0.0, 0.0) && self.mid == mid {
            0.0
        } else {
            add_up(mul_up(UNIT_ROUNDOFF, abs_up(mid)), 2.0 * ETA)
        };
        let rad = add_up(div_up(self.rad, d.abs()), rounding);
        Self::new(mid, rad)
    }

    /// Upper bound of `max{|z| : z ∈ x}`.
    pub fn mag(&self) -> f64 {
        add_up(abs_up(self.mid), self.rad)
    }

    /// Lower bound of `min{|z| : z ∈ x}`.
    pub fn mig(&self) -> f64 {
        sub_down(abs_down(self.mid), self.rad).max(0.0)
    }

    /// `min(relerr(x), 1)` rounded upward, where `relerr = |rad/mid|` when the
    /// disc excludes zero and `rad` otherwise.
    pub fn rp(&self) -> f64 {
        let m = abs_down(self.mid);
        let relerr = if m > self.rad {
            div_up(self.rad, m)
        } else {
            self.rad
        };
        relerr.min(1.0)
    }

    /// Conservative membership test: never reports a point outside the disc as
    /// contained, and may reject points on the boundary.
    pub fn contains(&self, z: Complex64) -> bool {
        dist_up(z, self.mid) <= self.rad
    }

    /// `self ⊆ other`, decided conservatively.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        add_up(dist_up(self.mid, other.mid), self.rad) <= other.rad
    }

    /// `self ⊂ int(other)`, decided conservatively: ties count as failure.
    pub fn subset_interior(&self, other: &Self) -> bool {
        add_up(dist_up(self.mid, other.mid), self.rad) < other.rad
    }

    /// Smallest disc containing both operands, inflated for rounding.
    pub fn hull(self, other: Self) -> Result<Self> {
        if self.is_subset_of(&other) {
            return Ok(other);
        }
        if other.is_subset_of(&self) {
            return Ok(self);
        }
        let w = other.mid - self.mid;
        let d = w.norm();
        if !(d > 0.0) || !d.is_finite() {
            // Concentric up to rounding: take the larger radius around one center.
            let rad = add_up(dist_up(self.mid, other.mid), self.rad.max(other.rad));
            return Self::new(self.mid, rad);
        }
        let big = 0.5 * (d + self.rad + other.rad);
        let c = self.mid + w * ((big - self.rad) / d);
        let rad =
            add_up(dist_up(c, self.mid), self.rad).max(add_up(dist_up(c, other.mid), other.rad));
        Self::new(c, rad)
    }

    /// A disc containing `x ∩ y`, or `None` when the discs are disjoint.
    ///
    /// Returns the contained operand when one disc contains the other;
    /// otherwise the smaller of the two operands and the disc centred on the
    /// common chord.
    pub fn intersect(self, other: Self) -> Option<Self> {
        let d_lo = dist_down(self.mid, other.mid);
        if d_lo > add_up(self.rad, other.rad) {
            return None;
        }
        if self.is_subset_of(&other) {
            return Some(self);
        }
        if other.is_subset_of(&self) {
            return Some(other);
        }
        let smaller = if self.rad <= other.rad { self } else { other };
        let lens = self.lens_disc(other, d_lo);
        match lens {
            Some(l) if l.rad < smaller.rad => Some(l),
            _ => Some(smaller),
        }
    }

    /// Disc centred on the axis at distance `a` from `self.mid`. For any
    /// `a ∈ [0, d]` every lens point lies within
    /// `sqrt(max(r₁² − a², r₂² − (d − a)²))` of that center.
    fn lens_disc(self, other: Self, d_lo: f64) -> Option<Self> {
        let w = other.mid - self.mid;
        let d = w.norm();
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let a = (d * d + self.rad * self.rad - other.rad * other.rad) / (2.0 * d);
        let a = a.clamp(0.0, d_lo);
        let rest = sub_down(d_lo, a).max(0.0);
        let r2 =
            sub_up(sqr_up(self.rad), sqr_down(a)).max(sub_up(sqr_up(other.rad), sqr_down(rest)));
        let rho = sqrt_up(r2);
        let c = self.mid + w * (a / d);
        // distance between the computed center and the exact axis point
        let offset = add_up(
            add_up(
                mul_up(8.0 * UNIT_ROUNDOFF, a),
                mul_up(2.0 * UNIT_ROUNDOFF, abs_up(c)),
            ),
            8.0 * REALMIN,
        );
        Self::new(c, add_up(rho, offset)).ok()
    }
}

impl fmt::Display for ComplexDisc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}{:+}i, {:e}>", self.mid.re, self.mid.im, self.rad)
    }
}

impl From<f64> for ComplexDisc {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

/// Knuth's TwoSum; the error term is meaningless once the sum overflows,
/// which `new` then rejects.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}
