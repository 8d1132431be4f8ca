//! Signed-swap change of basis: exactness of the coefficient maps, the
//! bound after selection, and recovery of the original solution.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riccati_core::bench::generate::gen_known_solution;
use riccati_core::bench::KnownOptions;
use riccati_core::permuted::{
    select_index_set, transform_coefficients, transformed_basis, untransform_coefficients, SwapSet,
};
use riccati_core::{verify, CareProblem, Method, VerifyOptions};
use riccati_interval::{approximate_inverse, PointMatrix};

fn random(rng: &mut ChaCha8Rng, n: usize) -> PointMatrix {
    DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
    })
}

fn hermitian(rng: &mut ChaCha8Rng, n: usize) -> PointMatrix {
    let m = random(rng, n);
    &m + m.adjoint()
}

fn problem(rng: &mut ChaCha8Rng, n: usize) -> CareProblem {
    CareProblem::new(random(rng, n), hermitian(rng, n), hermitian(rng, n)).unwrap()
}

#[test]
fn tau_must_exceed_sqrt_two() {
    assert!(SwapSet::new(2, [0], 1.4).is_err());
    assert!(SwapSet::new(2, [2], 3.0).is_err());
    assert!(SwapSet::new(2, [1, 1], 3.0).unwrap().len() == 1);
}

#[test]
fn swapped_problems_still_enclose_planted_solutions() {
    // X → cX, G → G/c, Q → cQ keeps the closed loop; a large c forces swaps
    for seed in 0..4 {
        let (p, xs) = gen_known_solution(5, 60 + seed, KnownOptions::default());
        let c = 1048576.0;
        let p = CareProblem::new(p.a().clone(), p.g().unscale(c), p.q().scale(c)).unwrap();
        let xs = xs.scale(c);
        for m in [Method::K, Method::F] {
            let v = verify(&p, m, &VerifyOptions::default()).unwrap();
            assert!(v.enclosure.x.contains_point(&xs), "seed {seed} method {m}");
            assert!(!v.swap.unwrap().is_empty(), "seed {seed} method {m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_map_is_exact(seed in any::<u64>(), n in 1usize..7, mask in any::<u8>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = problem(&mut rng, n);
        let swap = SwapSet::new(n, (0..n).filter(|k| mask >> k & 1 == 1), 3.0).unwrap();
        let t = transform_coefficients(&p, &swap).unwrap();
        prop_assert_eq!(untransform_coefficients(&t.problem, &swap).unwrap(), p);
    }

    #[test]
    fn hermitian_structure_is_kept(seed in any::<u64>(), n in 1usize..7, mask in any::<u8>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = problem(&mut rng, n);
        let swap = SwapSet::new(n, (0..n).filter(|k| mask >> k & 1 == 1), 3.0).unwrap();
        let t = transform_coefficients(&p, &swap).unwrap().problem;
        prop_assert_eq!(t.g().clone(), t.g().adjoint());
        prop_assert_eq!(t.q().clone(), t.q().adjoint());
    }

    #[test]
    fn selection_bounds_the_transformed_solution(seed in any::<u64>(), n in 1usize..8, exp in 0.0..8.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u1 = random(&mut rng, n);
        let x = hermitian(&mut rng, n).scale(10f64.powf(exp));
        let u2 = &x * &u1;
        let swap = select_index_set(&u1, &u2, 3.0).unwrap();
        let (v1, v2) = transformed_basis(&u1, &u2, &swap);
        let y = v2 * approximate_inverse(&v1).unwrap();
        prop_assert!(y.iter().all(|z| z.norm() <= 3.0));
    }
}
