//! Exact rational reference arithmetic and random generators shared by the
//! containment tests.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num::{BigInt, BigRational, Signed, Zero};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use riccati_interval::{ComplexDisc, IntervalMatrix};

/// Exact dyadic number `m · 2^e`. Every finite double is one, and sums and
/// products of dyadics stay dyadic, so no gcd reductions are needed.
#[derive(Clone, Debug)]
pub struct Dy {
    m: BigInt,
    e: i64,
}

impl Dy {
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Dy {
                m: BigInt::zero(),
                e: 0,
            };
        }
        let (mant, exp, sign) = num::Float::integer_decode(x);
        let m = BigInt::from(mant) * BigInt::from(sign);
        Dy { m, e: exp as i64 }
    }

    fn align(&self, o: &Self) -> (BigInt, BigInt, i64) {
        let e = self.e.min(o.e);
        (
            (&self.m) << (self.e - e) as usize,
            (&o.m) << (o.e - e) as usize,
            e,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b, e) = self.align(o);
        Dy { m: a + b, e }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let (a, b, e) = self.align(o);
        Dy { m: a - b, e }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Dy {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn le(&self, o: &Self) -> bool {
        let (a, b, _) = self.align(o);
        a <= b
    }

    pub fn lt(&self, o: &Self) -> bool {
        let (a, b, _) = self.align(o);
        a < b
    }

    pub fn to_rational(&self) -> BigRational {
        let one = BigInt::from(1);
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as usize)
        } else {
            BigRational::new(self.m.clone(), one << (-self.e) as usize)
        }
    }
}

/// Exact complex dyadic.
#[derive(Clone, Debug)]
pub struct QC {
    pub re: Dy,
    pub im: Dy,
}

impl QC {
    pub fn from(z: Complex64) -> Self {
        QC {
            re: Dy::from_f64(z.re),
            im: Dy::from_f64(z.im),
        }
    }

    pub fn zero() -> Self {
        QC::from(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, o: &Self) -> Self {
        QC {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QC {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        QC {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn norm_sqr(&self) -> Dy {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}

fn rad_sqr(x: &ComplexDisc) -> Dy {
    let r = Dy::from_f64(x.rad());
    r.mul(&r)
}

/// Exact test `|z − mid| ≤ rad`.
pub fn in_disc(z: &QC, x: &ComplexDisc) -> bool {
    z.sub(&QC::from(x.mid())).norm_sqr().le(&rad_sqr(x))
}

/// Exact test `|z − mid| < rad`.
pub fn strictly_in_disc(z: &QC, x: &ComplexDisc) -> bool {
    z.sub(&QC::from(x.mid())).norm_sqr().lt(&rad_sqr(x))
}

/// Exact test `a / b ∈ x` for `b ≠ 0`, evaluated as
/// `|a − mid·b|² ≤ rad²·|b|²` so that no division is needed.
pub fn quotient_in_disc(a: &QC, b: &QC, x: &ComplexDisc) -> bool {
    let lhs = a.sub(&QC::from(x.mid()).mul(b)).norm_sqr();
    lhs.le(&rad_sqr(x).mul(&b.norm_sqr()))
}

pub fn abs_exceeds(z: &QC, bound: f64) -> bool {
    let b = Dy::from_f64(bound);
    b.mul(&b).lt(&z.norm_sqr())
}

pub fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Number with random sign and magnitude spread over several decades.
pub fn spread(rng: &mut ChaCha8Rng, lo_exp: f64, hi_exp: f64) -> f64 {
    let e = rng.random_range(lo_exp..hi_exp);
    let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    s * 10f64.powf(e)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    match rng.random_range(0..4) {
        0 => Complex64::new(spread(rng, -3.0, 3.0), 0.0),
        1 => Complex64::new(0.0, spread(rng, -3.0, 3.0)),
        _ => Complex64::new(spread(rng, -3.0, 3.0), spread(rng, -3.0, 3.0)),
    }
}

pub fn random_disc(rng: &mut ChaCha8Rng) -> ComplexDisc {
    let mid = random_complex(rng);
    let rad = match rng.random_range(0..5) {
        0 => 0.0,
        1 => mid.norm() * 10f64.powf(rng.random_range(-16.0..-10.0)),
        2 => mid.norm() * rng.random_range(0.0..2.0),
        _ => mid.norm() * 10f64.powf(rng.random_range(-6.0..0.0)),
    };
    ComplexDisc::new(mid, rad).unwrap()
}

/// A floating-point point of `x`, biased toward the boundary. Exact
/// membership is checked; `None` if rounding pushed the candidate out.
pub fn sample_in(rng: &mut ChaCha8Rng, x: &ComplexDisc) -> Option<Complex64> {
    let t = if rng.random_bool(0.4) {
        1.0
    } else {
        rng.random_range(0.0f64..1.0).sqrt()
    };
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let r = x.rad() * t * (1.0 - 4.0 * f64::EPSILON);
    let z = x.mid() + Complex64::new(r * theta.cos(), r * theta.sin());
    in_disc(&QC::from(z), x).then_some(z)
}

pub fn random_interval_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntervalMatrix {
    IntervalMatrix::from_fn(rows, cols, |_, _| {
        let mid = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let rad = if rng.random_bool(0.2) {
            0.0
        } else {
            rng.random_range(0.0..0.3)
        };
        ComplexDisc::new(mid, rad).unwrap()
    })
}

pub fn sample_matrix(rng: &mut ChaCha8Rng, m: &IntervalMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let x = m.get(i, j);
        loop {
            if let Some(z) = sample_in(rng, &x) {
                break z;
            }
        }
    })
}

pub fn exact_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Vec<Vec<QC>> {
    let qa: Vec<Vec<QC>> = (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|k| QC::from(a[(i, k)])).collect())
        .collect();
    let qb: Vec<Vec<QC>> = (0..b.nrows())
        .map(|k| (0..b.ncols()).map(|j| QC::from(b[(k, j)])).collect())
        .collect();
    (0..a.nrows())
        .map(|i| {
            (0..b.ncols())
                .map(|j| (0..a.ncols()).fold(QC::zero(), |s, k| s.add(&qa[i][k].mul(&qb[k][j]))))
                .collect()
        })
        .collect()
}

/// Exact inverse of a real matrix by Gauss-Jordan elimination.
pub fn exact_real_inverse(m: &DMatrix<f64>) -> Vec<Vec<BigRational>> {
    let n = m.nrows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        q(m[(i, j)])
                    } else if j - n == i {
                        q(1.0)
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular");
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}
