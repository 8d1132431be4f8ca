//! Change of basis by signed swaps `S_k` of the coordinates `k` and `n + k`.
//!
//! `P = ∏_{k∈ℐ} S_k` is a signed permutation with `P·e_c = σ_c·e_{π(c)}`,
//! where `π(k) = n + k`, `σ_k = −1` and `π(n + k) = k`, `σ_{n+k} = 1` for
//! `k ∈ ℐ`. Conjugating the Hamiltonian by `P` only moves entries and flips
//! signs, so the transformed coefficients carry no rounding error.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use riccati_interval::{
    approximate_inverse, verified_solve_right, ComplexDisc, IntervalError, IntervalMatrix,
    PointMatrix,
};

use crate::approx::{approx_from_basis, stable_subspace, ApproxSolution};
use crate::enclosure::{Enclosure, VerifyOptions};
use crate::error::{CoreError, Result};
use crate::problem::{CareProblem, HamiltonianMatrix};

/// Swap set `ℐ` (zero-based) together with the entry bound `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapSet {
    indices: BTreeSet<usize>,
    n: usize,
    pub tau: f64,
}

impl SwapSet {
    pub fn new(n: usize, indices: impl IntoIterator<Item = usize>, tau: f64) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&k) = indices.iter().find(|&&k| k >= n) {
            return Err(CoreError::InvalidProblem(format!(
                "swap index {k} out of range for n = {n}"
            )));
        }
        if !(tau > std::f64::consts::SQRT_2) {
            return Err(CoreError::InvalidProblem(format!(
                "tau must exceed sqrt(2), got {tau}"
            )));
        }
        Ok(Self { indices, n, tau })
    }

    pub fn empty(n: usize, tau: f64) -> Result<Self> {
        Self::new(n, [], tau)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.contains(&k)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn toggle(&mut self, k: usize) {
        if !self.indices.remove(&k) {
            self.indices.insert(k);
        }
    }

    /// Image `π(c)` and sign `σ_c` of coordinate `c < 2n`.
    fn map(&self, c: usize) -> (usize, f64) {
        let n = self.n;
        if c < n && self.contains(c) {
            (c + n, -1.0)
        } else if c >= n && self.contains(c - n) {
            (c - n, 1.0)
        } else {
            (c, 1.0)
        }
    }
}

/// Coefficients of the CARE whose Hamiltonian is `P⁻¹HP`.
#[derive(Debug, Clone)]
pub struct TransformedProblem {
    pub problem: CareProblem,
    pub swap: SwapSet,
}

fn check_dim(n: usize, swap: &SwapSet) -> Result<()> {
    if swap.n != n {
        return Err(CoreError::InvalidProblem(format!(
            "swap set built for n = {} applied to n = {n}",
            swap.n
        )));
    }
    Ok(())
}

/// `P⁻¹HP`, entry `(r, c)` being `σ_r·σ_c·H_{π(r)π(c)}`.
pub fn conjugate_hamiltonian(h: &HamiltonianMatrix, swap: &SwapSet) -> HamiltonianMatrix {
    let m = h.matrix();
    let nn = m.nrows();
    let maps: Vec<(usize, f64)> = (0..nn).map(|c| swap.map(c)).collect();
    HamiltonianMatrix::from_matrix(DMatrix::from_fn(nn, nn, |r, c| {
        let (pr, sr) = maps[r];
        let (pc, sc) = maps[c];
        m[(pr, pc)] * (sr * sc)
    }))
}

/// `PHP⁻¹`, the inverse of [`conjugate_hamiltonian`].
pub fn unconjugate_hamiltonian(h: &HamiltonianMatrix, swap: &SwapSet) -> HamiltonianMatrix {
    let m = h.matrix();
    let nn = m.nrows();
    let mut out = DMatrix::zeros(nn, nn);
    for r in 0..nn {
        let (pr, sr) = swap.map(r);
        for c in 0..nn {
            let (pc, sc) = swap.map(c);
            out[(pr, pc)] = m[(r, c)] * (sr * sc);
        }
    }
    HamiltonianMatrix::from_matrix(out)
}

fn problem_from_hamiltonian(h: &HamiltonianMatrix) -> Result<CareProblem> {
    let (a, g, q) = h.blocks();
    CareProblem::new(a, g, q)
}

/// `(A_P, G_P, Q_P)` read off the blocks of `P⁻¹HP`.
pub fn transform_coefficients(p: &CareProblem, swap: &SwapSet) -> Result<TransformedProblem> {
    check_dim(p.n(), swap)?;
    let problem = problem_from_hamiltonian(&conjugate_hamiltonian(&p.hamiltonian(), swap))?;
    Ok(TransformedProblem {
        problem,
        swap: swap.clone(),
    })
}

/// Coefficients of the original CARE recovered from transformed ones.
pub fn untransform_coefficients(p: &CareProblem, swap: &SwapSet) -> Result<CareProblem> {
    check_dim(p.n(), swap)?;
    problem_from_hamiltonian(&unconjugate_hamiltonian(&p.hamiltonian(), swap))
}

/// Blocks of `Pᵀ·[U1; U2]`, a basis of the same subspace for `P⁻¹HP`.
pub fn transformed_basis(
    u1: &PointMatrix,
    u2: &PointMatrix,
    swap: &SwapSet,
) -> (PointMatrix, PointMatrix) {
    let n = u1.nrows();
    let cols = u1.ncols();
    let row = |k: usize| if k < n { u1.row(k) } else { u2.row(k - n) };
    let mut v1 = DMatrix::zeros(n, cols);
    let mut v2 = DMatrix::zeros(n, cols);
    for c in 0..2 * n {
        let (pc, sc) = swap.map(c);
        let src = row(pc) * Complex64::new(sc, 0.0);
        if c < n {
            v1.row_mut(c).copy_from(&src);
        } else {
            v2.row_mut(c - n).copy_from(&src);
        }
    }
    (v1, v2)
}

/// Largest modulus with its position.
type Peak = (f64, usize, usize);

fn max_modulus(y: &PointMatrix) -> Option<Peak> {
    let mut best: Option<Peak> = None;
    for i in 0..y.nrows() {
        for j in 0..y.ncols() {
            let a = y[(i, j)].norm();
            if !a.is_finite() {
                return None;
            }
            // strict comparison keeps the lowest index on ties
            if best.is_none_or(|(b, _, _)| a > b) {
                best = Some((a, i, j));
            }
        }
    }
    best
}

/// Largest entry of `V2·V1⁻¹` for the basis transformed by `swap`, or
/// `None` when `V1` is numerically singular.
fn swapped_max(u1: &PointMatrix, u2: &PointMatrix, swap: &SwapSet) -> Option<Peak> {
    let (v1, v2) = transformed_basis(u1, u2, swap);
    let inv = approximate_inverse(&v1)?;
    max_modulus(&(v2 * inv))
}

/// Greedy search for `ℐ` with `max |Y_ij| ≤ τ`.
///
/// From the largest entry `Y_ij` the candidates toggle `{i}`, `{j}` and
/// `{i, j}`; the one with the smallest resulting maximum is kept. Toggling
/// only `i` can cycle when the largest entry is off the diagonal, which the
/// pair `{i, j}` resolves. At most `4n` toggles are spent.
pub fn select_index_set(u1: &PointMatrix, u2: &PointMatrix, tau: f64) -> Result<SwapSet> {
    let n = u1.nrows();
    let mut swap = SwapSet::empty(n, tau)?;
    let mut current = swapped_max(u1, u2, &swap);
    let mut budget = 4 * n;
    loop {
        let (m, i, j) = match current {
            Some(c) if c.0 <= tau => return Ok(swap),
            Some(c) => c,
            None => (f64::INFINITY, 0, 0),
        };
        if budget == 0 {
            return Err(CoreError::SelectionFailed(tau));
        }
        let mut options: Vec<Vec<usize>> = vec![vec![i]];
        if j != i {
            options.push(vec![j]);
            options.push(vec![i, j]);
        }
        if current.is_none() {
            // singular first block: try every single toggle
            options = (0..n).map(|k| vec![k]).collect();
        }
        let mut best: Option<(f64, SwapSet, Option<Peak>)> = None;
        for opt in options {
            let mut cand = swap.clone();
            for &k in &opt {
                cand.toggle(k);
            }
            let res = swapped_max(u1, u2, &cand);
            let score = res.map_or(f64::INFINITY, |r| r.0);
            if best.as_ref().is_none_or(|b| score < b.0) {
                best = Some((score, cand, res));
            }
        }
        let (score, cand, res) = best.expect("at least one candidate");
        let spent = cand.indices.symmetric_difference(&swap.indices).count();
        budget = budget.saturating_sub(spent.max(1));
        if !score.is_finite() && m.is_finite() {
            return Err(CoreError::SelectionFailed(tau));
        }
        swap = cand;
        current = res;
    }
}

/// `[U1; U2] = P·[I; Y]` formed by signed row selection, then `X·U1 = U2`
/// solved with a verified enclosure.
pub fn recover_solution(y: &IntervalMatrix, swap: &SwapSet) -> Result<IntervalMatrix> {
    let n = y.rows();
    check_dim(n, swap)?;
    let ident = |i: usize, j: usize| {
        if i == j {
            ComplexDisc::real(1.0)
        } else {
            ComplexDisc::ZERO
        }
    };
    let u1 = IntervalMatrix::from_fn(n, n, |i, j| {
        if swap.contains(i) {
            y.get(i, j)
        } else {
            ident(i, j)
        }
    });
    let u2 = IntervalMatrix::from_fn(n, n, |i, j| {
        if swap.contains(i) {
            ident(i, j).neg()
        } else {
            y.get(i, j)
        }
    });
    verified_solve_right(&u1, &u2).map_err(|e| match e {
        IntervalError::SingularInterval(_) => CoreError::SingularInterval,
        other => other.into(),
    })
}

/// Inner verifier run on the transformed CARE.
pub type InnerVerifier = dyn Fn(&CareProblem, &ApproxSolution, &VerifyOptions) -> Result<Enclosure>;

/// Result of the permuted-basis driver.
#[derive(Debug, Clone)]
pub struct PermutedOutcome {
    pub enclosure: Enclosure,
    pub swap: SwapSet,
    /// Approximate data of the transformed problem, kept for diagnostics.
    pub approx_p: ApproxSolution,
}

/// Approximate stable basis, swap selection, transformation, inner
/// verification and recovery of the original solution.
pub fn algorithm5_driver(
    p: &CareProblem,
    inner: &InnerVerifier,
    opts: &VerifyOptions,
) -> Result<PermutedOutcome> {
    let (u1, u2) = stable_subspace(&p.hamiltonian())?;
    let swap = select_index_set(&u1, &u2, opts.tau)?;
    let tp = transform_coefficients(p, &swap)?;
    let (v1, v2) = transformed_basis(&u1, &u2, &swap);
    let approx_p = approx_from_basis(&tp.problem, &v1, &v2)?;
    let inner_enc = inner(&tp.problem, &approx_p, opts)?;
    let x = recover_solution(&inner_enc.x, &swap)?;
    let mut enclosure = inner_enc.clone();
    enclosure.x = x;
    Ok(PermutedOutcome {
        enclosure,
        swap,
        approx_p,
    })
}
