//! Explicit `n² × n²` slope sets, for checking on small problems that the
//! supersets used by the Krawczyk methods contain the true slopes.
//!
//! For `f(x) = vec(A*X + XA + Q − XGX)` the slope between `y` and `y′` is
//! `I ⊗ (A − GY)* + (A − GY′)ᵀ ⊗ I` when `Y` is Hermitian.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riccati_interval::kron::kron;
use riccati_interval::{ComplexDisc, IntervalMatrix, PointMatrix};

use crate::enclosure::point;
use crate::error::Result;
use crate::problem::{hermitian_part, CareProblem};

/// Interval Kronecker product, entry by entry.
pub fn interval_kron(a: &IntervalMatrix, b: &IntervalMatrix) -> Result<IntervalMatrix> {
    let (p, q) = b.shape();
    Ok(IntervalMatrix::try_from_fn(
        a.rows() * p,
        a.cols() * q,
        |r, c| a.get(r / p, c / q).mul(b.get(r % p, c % q)),
    )?)
}

/// The superset of slopes over a box, in its original form
/// `I ⊗ (A − G𝐗)* + (A − G𝐗)ᵀ ⊗ I` and in the tightened form
/// `I ⊗ (A − GX̌)* + (A − G𝐗)ᵀ ⊗ I`.
pub struct SlopeSupersets {
    pub original: IntervalMatrix,
    pub tightened: IntervalMatrix,
}

pub fn slope_supersets(
    p: &CareProblem,
    x_check: &PointMatrix,
    x_box: &IntervalMatrix,
) -> Result<SlopeSupersets> {
    let n = p.n();
    let a = point(p.a())?;
    let g = point(p.g())?;
    let id = IntervalMatrix::identity(n);
    let closed_box = a.sub(&g.mul(x_box)?)?;
    let closed_pt = a.sub(&g.mul(&point(x_check)?)?)?;
    let right = interval_kron(&closed_box.transpose(), &id)?;
    Ok(SlopeSupersets {
        original: interval_kron(&id, &closed_box.conj_transpose())?.add(&right)?,
        tightened: interval_kron(&id, &closed_pt.conj_transpose())?.add(&right)?,
    })
}

/// Slope `S(f; y, y′)` between a Hermitian `Y` and any `Y′`.
pub fn point_slope(p: &CareProblem, y: &PointMatrix, y_prime: &PointMatrix) -> PointMatrix {
    let n = p.n();
    let id = DMatrix::identity(n, n);
    let c1 = p.a() - p.g() * y;
    let c2 = p.a() - p.g() * y_prime;
    kron(&id, &c1.adjoint()) + kron(&c2.transpose(), &id)
}

fn sample_box(x_box: &IntervalMatrix, rng: &mut ChaCha8Rng) -> PointMatrix {
    DMatrix::from_fn(x_box.rows(), x_box.cols(), |i, j| {
        let d: ComplexDisc = x_box.get(i, j);
        let r = d.rad() * rng.random::<f64>().sqrt() * 0.999;
        let t = rng.random::<f64>() * std::f64::consts::TAU;
        d.mid() + Complex64::from_polar(r, t)
    })
}

/// Containment up to the rounding of the sampled slope itself.
fn roughly_contains(set: &IntervalMatrix, s: &PointMatrix, scale: f64) -> bool {
    let tol = 64.0 * f64::EPSILON * scale;
    (0..s.nrows()).all(|i| {
        (0..s.ncols()).all(|j| {
            let d = set.get(i, j);
            (s[(i, j)] - d.mid()).norm() <= d.rad() + tol
        })
    })
}

/// Samples `Y′` from the box and checks that `S(f; x̌, y′)` lies in both
/// supersets, and that `S(f; y, y′)` for Hermitian `Y` from the box lies in
/// the original one. The sampled slopes carry rounding errors, so
/// containment is judged up to a tolerance of a few ulps.
pub fn compute_slope_superset_check(
    p: &CareProblem,
    x_check: &PointMatrix,
    x_box: &IntervalMatrix,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let sets = slope_supersets(p, x_check, x_box)?;
    let mag = |m: &PointMatrix| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let box_mag = x_box.mag().iter().copied().fold(0.0, f64::max);
    let scale = (mag(p.a()) + mag(p.g()) * box_mag * p.n() as f64).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let y_prime = sample_box(x_box, &mut rng);
        let s = point_slope(p, x_check, &y_prime);
        if !roughly_contains(&sets.tightened, &s, scale)
            || !roughly_contains(&sets.original, &s, scale)
        {
            return Ok(false);
        }
        let y = hermitian_part(&sample_box(x_box, &mut rng));
        if x_box.contains_point(&y)
            && !roughly_contains(&sets.original, &point_slope(p, &y, &y_prime), scale)
        {
            return Ok(false);
        }
    }
    Ok(true)
}
