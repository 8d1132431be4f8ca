//! Test problems with known solutions.
//!
//! Planted problems are assembled in integer arithmetic carried out in
//! doubles, every intermediate staying far below 2^53, so the planted
//! solution is exact.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riccati_interval::PointMatrix;
use serde::{Deserialize, Serialize};

use crate::approx::{approx_eig, cond2_estimate};
use crate::problem::{to_complex, CareProblem};

const EXACT_LIMIT: f64 = (1u64 << 50) as f64;

/// The two-by-two warm-up problem. Its closed loop `[[0,1],[−1,−2]]` has a
/// defective double eigenvalue at −1.
pub fn gen_experiment1() -> CareProblem {
    let m = |v: [f64; 4]| DMatrix::from_row_slice(2, 2, &v);
    CareProblem::from_real(
        m([0.0, 1.0, 0.0, 0.0]),
        m([0.0, 0.0, 0.0, 1.0]),
        m([1.0, 0.0, 0.0, 2.0]),
    )
    .expect("constant data is valid")
}

pub fn experiment1_solution() -> PointMatrix {
    to_complex(&DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]))
}

/// `A = tridiag(1, −3, 1)`, `G = 0`, `Q = I`: a Lyapunov equation whose
/// closed loop has its spectrum in (−5, −1) for every `n`.
pub fn gen_lyapunov(n: usize) -> CareProblem {
    let a = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => -3.0,
        1 => 1.0,
        _ => 0.0,
    });
    CareProblem::from_real(a, DMatrix::zeros(n, n), DMatrix::identity(n, n))
        .expect("constant data is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnownOptions {
    /// Plant a Jordan block in the closed loop.
    pub defective: bool,
    /// Use Gaussian-integer instead of integer data.
    pub complex: bool,
    /// Redraw until the eigenvector matrix of the closed loop has a
    /// condition estimate below this (ignored for defective problems).
    pub cond_target: Option<f64>,
}

impl Default for KnownOptions {
    fn default() -> Self {
        Self {
            defective: false,
            complex: false,
            cond_target: Some(1e3),
        }
    }
}

struct Draw<'a> {
    rng: &'a mut ChaCha8Rng,
    complex: bool,
    density: f64,
}

impl Draw<'_> {
    fn unit(&mut self) -> f64 {
        if self.rng.random::<f64>() < self.density {
            if self.rng.random::<bool>() {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    }

    fn entry(&mut self) -> Complex64 {
        let re = self.unit();
        let im = if self.complex { self.unit() } else { 0.0 };
        Complex64::new(re, im)
    }

    fn matrix(&mut self, n: usize) -> PointMatrix {
        DMatrix::from_fn(n, n, |_, _| self.entry())
    }
}

fn one_norm(m: &PointMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| {
            m.column(j)
                .iter()
                .map(|z| z.re.abs() + z.im.abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

fn inf_norm(m: &PointMatrix) -> f64 {
    one_norm(&m.transpose())
}

/// Hurwitz `F = −cI + K + N` with `K` skew-Hermitian and `N` strictly upper
/// triangular; `c² > ‖N‖₁‖N‖∞ ≥ ‖N‖₂²` makes `F + F*` negative definite.
fn stable_closed_loop(d: &mut Draw<'_>, n: usize) -> PointMatrix {
    let mut k = DMatrix::zeros(n, n);
    let mut nn = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let e = d.entry();
            k[(i, j)] = e;
            k[(j, i)] = -e.conj();
            nn[(i, j)] = d.entry();
        }
    }
    let c = ((one_norm(&nn) * inf_norm(&nn)).sqrt().floor() + 1.0).max(2.0);
    k + nn - DMatrix::identity(n, n).scale(c)
}

/// `(I + N)⁻¹ = Σ (−N)^k` for nilpotent `N`, exact on integer data.
fn unipotent_inverse(nil: &PointMatrix) -> PointMatrix {
    let n = nil.nrows();
    let mut inv = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for _ in 1..n {
        term = -(&term * nil);
        inv += &term;
    }
    inv
}

/// `F = S·J·S⁻¹` with a Jordan block at −1 in `J` and `S = (I + L)(I + U)`
/// for strictly triangular integer `L` and `U`, so that `S⁻¹` is integer.
fn defective_closed_loop(d: &mut Draw<'_>, n: usize) -> PointMatrix {
    let mut j = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = Complex64::new(if i < 2 || i % 2 == 0 { -1.0 } else { -2.0 }, 0.0);
    }
    if n >= 2 {
        j[(0, 1)] = Complex64::new(1.0, 0.0);
    }
    let mut low = DMatrix::<Complex64>::zeros(n, n);
    let mut up = DMatrix::<Complex64>::zeros(n, n);
    for r in 0..n {
        for c in r + 1..n {
            up[(r, c)] = d.entry();
            low[(c, r)] = d.entry();
        }
    }
    let id = DMatrix::identity(n, n);
    let s = (&id + &low) * (&id + &up);
    let s_inv = unipotent_inverse(&up) * unipotent_inverse(&low);
    debug_assert!((&s * &s_inv - &id).norm() == 0.0);
    s * j * s_inv
}

fn max_abs(m: &PointMatrix) -> f64 {
    m.iter()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0, f64::max)
}

/// Problem with planted stabilizing solution `X_s = B*B + I` and
/// `G = CC*`: with a Hurwitz closed loop `F`, set `A = F + G·X_s` and
/// `Q = −F*X_s − X_s·F − X_s·G·X_s`. Then `A − G·X_s = F`.
pub fn gen_known_solution(n: usize, seed: u64, opts: KnownOptions) -> (CareProblem, PointMatrix) {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = (3.0 / n as f64).min(0.8);
    for _ in 0..1000 {
        let mut d = Draw {
            rng: &mut rng,
            complex: opts.complex,
            density,
        };
        let b = d.matrix(n);
        let c = d.matrix(n);
        let f = if opts.defective {
            defective_closed_loop(&mut d, n)
        } else {
            stable_closed_loop(&mut d, n)
        };
        let xs = b.adjoint() * &b + DMatrix::identity(n, n);
        let g = &c * c.adjoint();
        let a = &f + &g * &xs;
        let q = -(f.adjoint() * &xs) - &xs * &f - &xs * &g * &xs;
        if [&a, &g, &q, &xs, &f]
            .iter()
            .any(|m| max_abs(m) > EXACT_LIMIT)
        {
            continue;
        }
        if !opts.defective {
            if let Some(target) = opts.cond_target {
                let ok = approx_eig(&f)
                    .map(|e| cond2_estimate(&e.v) <= target)
                    .unwrap_or(false);
                if !ok {
                    continue;
                }
            }
        }
        let p = CareProblem::new(a, g, q).expect("integer data is Hermitian");
        return (p, xs);
    }
    panic!("no acceptable problem of size {n} found for seed {seed}");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eft::care_residual;

    #[test]
    fn experiment1_data() {
        let p = gen_experiment1();
        let r = care_residual(p.a(), p.g(), p.q(), &experiment1_solution());
        assert_eq!(r.norm(), 0.0);
    }

    #[test]
    fn planted_solutions_are_exact() {
        for (n, defective, complex) in [
            (1, false, false),
            (4, true, false),
            (6, false, true),
            (5, true, true),
        ] {
            let opts = KnownOptions {
                defective,
                complex,
                ..KnownOptions::default()
            };
            let (p, xs) = gen_known_solution(n, 7, opts);
            let r = care_residual(p.a(), p.g(), p.q(), &xs);
            assert_eq!(r.norm(), 0.0, "n = {n}");
            let closed = p.a() - p.g() * &xs;
            let e = approx_eig(&closed).unwrap();
            assert!(e.lambda.iter().all(|l| l.re < 0.0));
        }
    }

    #[test]
    fn lyapunov_two_by_two() {
        let p = gen_lyapunov(2);
        let xs = to_complex(&DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 3.0])).unscale(16.0);
        assert_eq!(care_residual(p.a(), p.g(), p.q(), &xs).norm(), 0.0);
    }
}
