//! Directed rounding emulated on top of round-to-nearest.
//!
//! Every IEEE-754 basic operation and `sqrt` is correctly rounded, so the
//! exact result lies within half an ulp of the computed one. The exact
//! rounding error is recovered with TwoSum or a fused multiply-add, and the
//! result is stepped one ulp outward only when that error points outward.
//! Near the underflow threshold the residual test is skipped and the step is
//! taken unconditionally. The floating-point environment is never touched.

use num_complex::Complex64;

/// Unit roundoff, 2^-53.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Smallest positive normalized double (`realmin`).
pub const REALMIN: f64 = f64::MIN_POSITIVE;

/// Smallest positive subnormal double. A product or quotient that
/// underflows is off by at most half of this; sums never underflow.
pub const ETA: f64 = 5e-324;

// Below this magnitude an FMA residual may itself round, so the exactness
// test is skipped and the result is stepped outward unconditionally.
const RESIDUAL_SAFE: f64 = 1.0e-290;

#[inline]
fn round_up_by(r: f64, err_positive: bool) -> f64 {
    if err_positive {
        r.next_up()
    } else {
        r
    }
}

#[inline]
fn round_down_by(r: f64, err_negative: bool) -> f64 {
    if err_negative {
        r.next_down()
    } else {
        r
    }
}

/// Exact rounding error of `a + b` (Knuth's TwoSum).
#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    let e = two_sum_err(a, b, s);
    round_up_by(s, e > 0.0)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY { f64::MAX } else { s };
    }
    let e = two_sum_err(a, b, s);
    round_down_by(s, e < 0.0)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return p;
    }
    if p.abs() < RESIDUAL_SAFE {
        return if a == 0.0 || b == 0.0 { p } else { p.next_up() };
    }
    let e = a.mul_add(b, -p);
    round_up_by(p, e > 0.0)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::INFINITY { f64::MAX } else { p };
    }
    if p.abs() < RESIDUAL_SAFE {
        return if a == 0.0 || b == 0.0 {
            p
        } else {
            p.next_down()
        };
    }
    let e = a.mul_add(b, -p);
    round_down_by(p, e < 0.0)
}

/// Sign of `a/b − q`, read off the exact remainder `a − q·b`.
#[inline]
fn div_residual(a: f64, b: f64, q: f64) -> f64 {
    let r = (-q).mul_add(b, a);
    if b > 0.0 {
        r
    } else {
        -r
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    if q.abs() < RESIDUAL_SAFE || a.abs() < RESIDUAL_SAFE {
        return if a == 0.0 { q } else { q.next_up() };
    }
    let e = div_residual(a, b, q);
    round_up_by(q, e > 0.0)
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return if q == f64::INFINITY { f64::MAX } else { q };
    }
    if q.abs() < RESIDUAL_SAFE || a.abs() < RESIDUAL_SAFE {
        return if a == 0.0 { q } else { q.next_down() };
    }
    let e = div_residual(a, b, q);
    round_down_by(q, e < 0.0)
}

/// Upper bound of `a²`.
#[inline]
pub fn sqr_up(a: f64) -> f64 {
    mul_up(a, a)
}

/// Lower bound of `a²`, clamped at zero.
#[inline]
pub fn sqr_down(a: f64) -> f64 {
    mul_down(a, a).max(0.0)
}

#[inline]
pub fn sqrt_up(a: f64) -> f64 {
    let a = a.max(0.0);
    let r = a.sqrt();
    if !r.is_finite() || a < RESIDUAL_SAFE {
        return if a == 0.0 { 0.0 } else { r.next_up() };
    }
    let e = (-r).mul_add(r, a);
    round_up_by(r, e > 0.0)
}

#[inline]
pub fn sqrt_down(a: f64) -> f64 {
    let a = a.max(0.0);
    let r = a.sqrt();
    if !r.is_finite() || a < RESIDUAL_SAFE {
        return if a == 0.0 {
            0.0
        } else {
            r.next_down().max(0.0)
        };
    }
    let e = (-r).mul_add(r, a);
    round_down_by(r, e < 0.0)
}

/// Upper bound of `|z|`.
#[inline]
pub fn abs_up(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return z.re.abs();
    }
    if z.re == 0.0 {
        return z.im.abs();
    }
    sqrt_up(add_up(sqr_up(z.re), sqr_up(z.im)))
}

/// Lower bound of `|z|`.
#[inline]
pub fn abs_down(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return z.re.abs();
    }
    if z.re == 0.0 {
        return z.im.abs();
    }
    sqrt_down(add_down(sqr_down(z.re), sqr_down(z.im)))
}

/// Upper bound of `|a|²`.
#[inline]
pub fn norm_sqr_up(z: Complex64) -> f64 {
    add_up(sqr_up(z.re), sqr_up(z.im))
}

/// Lower bound of `|a|²`.
#[inline]
pub fn norm_sqr_down(z: Complex64) -> f64 {
    add_down(sqr_down(z.re), sqr_down(z.im)).max(0.0)
}

/// Upper bound of the exact distance `|a − b|`.
///
/// The componentwise subtraction has relative error at most `u`, so the
/// exact modulus is at most `(1 + u)` times the computed one.
#[inline]
pub fn dist_up(a: Complex64, b: Complex64) -> f64 {
    mul_up(abs_up(a - b), 1.0 + f64::EPSILON)
}

/// Lower bound of the exact distance `|a − b|`.
#[inline]
pub fn dist_down(a: Complex64, b: Complex64) -> f64 {
    mul_down(abs_down(a - b), 1.0 - f64::EPSILON).max(0.0)
}

/// Upper bound for `γ_k = k·u / (1 − k·u)`, the classical error constant of a
/// length-`k` floating-point dot product.
pub fn gamma(k: usize) -> f64 {
    let ku = mul_up(k as f64, UNIT_ROUNDOFF);
    assert!(ku < 0.25, "dimension too large for a priori error bounds");
    div_up(ku, sub_down(1.0, ku))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_bounds_bracket_exact_thirds() {
        // 1/3 is not representable; the bounds must straddle it.
        let lo = div_down(1.0, 3.0);
        let hi = div_up(1.0, 3.0);
        assert!(lo < hi);
        assert!(mul_down(lo, 3.0) <= 1.0);
        assert!(mul_up(hi, 3.0) >= 1.0);
    }

    #[test]
    fn abs_bounds_exact_on_axes() {
        assert_eq!(abs_up(Complex64::new(-3.0, 0.0)), 3.0);
        assert_eq!(abs_down(Complex64::new(0.0, 2.5)), 2.5);
        let z = Complex64::new(3.0, 4.0);
        assert!(abs_down(z) <= 5.0 && abs_up(z) >= 5.0);
        assert!(abs_up(z) - 5.0 < 1e-14);
    }

    #[test]
    fn gamma_grows_linearly() {
        let g1 = gamma(1);
        let g10 = gamma(10);
        assert!(g1 >= UNIT_ROUNDOFF);
        assert!(g10 >= 10.0 * UNIT_ROUNDOFF);
        assert!(g10 < 11.0 * UNIT_ROUNDOFF);
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let lo = sqrt_down(2.0);
        let hi = sqrt_up(2.0);
        assert!(sqr_down(lo) <= 2.0);
        assert!(sqr_up(hi) >= 2.0);
        assert_eq!(sqrt_down(-0.0), 0.0);
    }
}
