//! Metrics, report formats and the suite runner.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use riccati_core::bench::generate::{gen_experiment1, gen_known_solution, gen_lyapunov};
use riccati_core::bench::report::{
    problem_to_json, read_problem_json, reports_to_json, write_csv, FORMAT_VERSION,
};
use riccati_core::bench::suite::{
    default_suite, radii, run_method, seed_from_env, DEFAULT_SEED, SEED_ENV,
};
use riccati_core::bench::{garp, nre, run_suite, KnownOptions, Status, VerificationReport};
use riccati_core::{Method, VerifyOptions};
use riccati_interval::{ComplexDisc, IntervalMatrix};

#[test]
fn nre_of_identity_with_uniform_radius() {
    let x =
        IntervalMatrix::from_mid_rad(&DMatrix::identity(2, 2), &DMatrix::from_element(2, 2, 0.01))
            .unwrap();
    // ‖rad‖_F = 0.02; the smallest member norm is √2·0.99 since the
    // off-diagonal discs contain zero
    let expect = 0.02 / (2f64.sqrt() * 0.99);
    let got = nre(&x).unwrap();
    assert!(got >= expect && got - expect < 1e-6, "{got}");
}

#[test]
fn garp_examples() {
    let disc = |rp: f64| ComplexDisc::new(Complex64::new(1.0, 0.0), rp).unwrap();
    let useless = IntervalMatrix::new(
        1,
        2,
        vec![ComplexDisc::new(Complex64::new(1.0, 0.0), 1.0).unwrap(); 2],
    )
    .unwrap();
    assert_eq!(garp(&useless), 1.0);
    let mixed =
        IntervalMatrix::new(2, 2, vec![disc(0.1), disc(0.1), disc(0.4), disc(0.4)]).unwrap();
    assert!((garp(&mixed) - 0.2).abs() < 1e-12);
    assert_eq!(
        garp(&IntervalMatrix::from_point(&DMatrix::identity(3, 3)).unwrap()),
        0.0
    );
}

#[test]
fn experiment1_matrices() {
    let p = gen_experiment1();
    let c = |v: [f64; 4]| DMatrix::from_row_slice(2, 2, &v).map(|x| Complex64::new(x, 0.0));
    assert_eq!(*p.a(), c([0.0, 1.0, 0.0, 0.0]));
    assert_eq!(*p.g(), c([0.0, 0.0, 0.0, 1.0]));
    assert_eq!(*p.q(), c([1.0, 0.0, 0.0, 2.0]));
}

#[test]
fn default_suite_gives_nine_reports() {
    let reports = run_suite(
        &default_suite(DEFAULT_SEED),
        &Method::ALL,
        &VerifyOptions::default(),
    );
    assert_eq!(reports.len(), 9);
    let status = |id: &str, m: Method| {
        reports
            .iter()
            .find(|r| r.problem_id == id && r.method == m)
            .unwrap()
            .status
            .clone()
    };
    assert_eq!(status("experiment1", Method::F), Status::Success);
    assert_eq!(status("experiment1", Method::H), Status::Failure);
    assert_eq!(status("experiment1", Method::K), Status::Failure);
    for id in ["lyapunov8", "known10"] {
        for m in Method::ALL {
            assert_eq!(status(id, m), Status::Success, "{id} {m}");
        }
    }
    for r in &reports {
        assert_eq!(r.nre.is_some(), r.status.is_success());
        assert_eq!(r.garp.is_some(), r.status.is_success());
        assert!(r.cond_v.is_some());
        if r.method != Method::H && r.status.is_success() {
            assert!(r.cond_vp.is_some());
        }
    }
    let back: Vec<VerificationReport> = serde_json::from_str(&reports_to_json(&reports)).unwrap();
    assert_eq!(back, reports);
}

#[test]
fn csv_has_metric_columns_in_table_order() {
    let sp = &default_suite(DEFAULT_SEED)[0];
    let (r, _) = run_method(sp, Method::F, &VerifyOptions::default());
    let mut out = Vec::new();
    write_csv(&mut out, &[r]).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "problem_id,n,method,status,nre,k,garp,time,stabilizing"
    );
    assert!(lines
        .next()
        .unwrap()
        .starts_with("experiment1,2,f,success,"));
}

#[test]
fn runs_are_deterministic() {
    let a = default_suite(7);
    let b = default_suite(7);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.problem, y.problem);
        for m in Method::ALL {
            let (_, vx) = run_method(x, m, &VerifyOptions::default());
            let (_, vy) = run_method(y, m, &VerifyOptions::default());
            let r = |v: Option<riccati_core::Verified>| v.map(|v| radii(&v.enclosure.x));
            assert_eq!(r(vx), r(vy), "{} {m}", x.id);
        }
    }
}

#[test]
fn seed_comes_from_the_environment() {
    std::env::set_var(SEED_ENV, "42");
    assert_eq!(seed_from_env(), 42);
    std::env::set_var(SEED_ENV, "not a number");
    assert_eq!(seed_from_env(), DEFAULT_SEED);
    std::env::remove_var(SEED_ENV);
    assert_eq!(seed_from_env(), DEFAULT_SEED);
}

#[test]
fn lyapunov_solution_is_positive_definite() {
    let p = gen_lyapunov(6);
    let v = riccati_core::verify(&p, Method::H, &VerifyOptions::default()).unwrap();
    let x = v.enclosure.x.mid();
    let herm = (&x + x.adjoint()).scale(0.5);
    let eig = herm.map(|z| z.re).symmetric_eigen();
    assert!(eig.eigenvalues.iter().all(|&l| l > 0.0));
}

fn report_strategy() -> impl Strategy<Value = VerificationReport> {
    let status = prop_oneof![
        Just(Status::Success),
        Just(Status::Failure),
        "[a-z]{1,12}".prop_map(Status::Error),
    ];
    let method = prop_oneof![Just(Method::H), Just(Method::K), Just(Method::F)];
    (
        ("[a-z0-9_-]{1,16}", 1usize..500, method, status, 0usize..60),
        (
            proptest::option::of(0.0..1.0f64),
            proptest::option::of(0.0..1.0f64),
            any::<bool>(),
            0.0..100.0f64,
        ),
        (
            proptest::option::of(1.0..1e12f64),
            proptest::option::of(1.0..1e12f64),
            proptest::option::of(any::<bool>()),
        ),
        (
            any::<bool>(),
            proptest::option::of(proptest::collection::vec(0usize..50, 0..5)),
        ),
    )
        .prop_map(
            |(
                (id, n, method, status, k),
                (nre, garp, stab, t),
                (cv, cvp, contains),
                (deg, swap),
            )| VerificationReport {
                format: FORMAT_VERSION.to_owned(),
                problem_id: id,
                n,
                method,
                status,
                iterations: k,
                nre,
                garp,
                stabilizing: stab,
                wall_time: t,
                cond_v: cv,
                cond_vp: cvp,
                contains_reference: contains,
                degraded_basis: deg,
                swap,
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reports_round_trip(r in report_strategy()) {
        let text = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn garp_is_a_fraction(rads in proptest::collection::vec(0.0..1e3f64, 1..16), mids in proptest::collection::vec(-1e3..1e3f64, 16)) {
        let entries: Vec<_> = rads
            .iter()
            .zip(&mids)
            .map(|(&r, &m)| ComplexDisc::new(Complex64::new(m, 0.0), r).unwrap())
            .collect();
        let x = IntervalMatrix::new(1, entries.len(), entries).unwrap();
        let g = garp(&x);
        prop_assert!((0.0..=1.0).contains(&g));
        if let Ok(v) = nre(&x) {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn problem_files_round_trip(n in 1usize..6, seed in 0u64..200, complex in any::<bool>()) {
        let (p, _) = gen_known_solution(n, seed, KnownOptions { complex, ..KnownOptions::default() });
        prop_assert_eq!(read_problem_json(&problem_to_json(&p)).unwrap(), p);
    }
}
