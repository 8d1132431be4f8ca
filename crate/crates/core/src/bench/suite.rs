//! Benchmark runner comparing the methods on a list of problems.

use std::time::Instant;

use riccati_interval::{IntervalMatrix, PointMatrix};

use super::generate::{
    experiment1_solution, gen_experiment1, gen_known_solution, gen_lyapunov, KnownOptions,
};
use super::metrics::{garp, nre};
use super::report::{Status, VerificationReport, FORMAT_VERSION};
use crate::approx::{approx_solution, cond2_estimate};
use crate::enclosure::{Method, VerifyOptions};
use crate::error::CoreError;
use crate::methods::{verify, Verified};
use crate::problem::CareProblem;

pub const DEFAULT_SEED: u64 = 20150101;
pub const SEED_ENV: &str = "RICCATI_SEED";

/// Seed from `RICCATI_SEED` if it parses, otherwise the default.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone)]
pub struct SuiteProblem {
    pub id: String,
    pub problem: CareProblem,
    /// Known exact solution, if any.
    pub reference: Option<PointMatrix>,
}

impl SuiteProblem {
    pub fn new(
        id: impl Into<String>,
        problem: CareProblem,
        reference: Option<PointMatrix>,
    ) -> Self {
        Self {
            id: id.into(),
            problem,
            reference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Default,
    Scaling,
}

impl std::str::FromStr for SuiteKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "default" => Ok(SuiteKind::Default),
            "scaling" => Ok(SuiteKind::Scaling),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

pub const SCALING_SIZES: [usize; 4] = [25, 50, 100, 200];

/// Experiment 1, a Lyapunov problem of size 8 and a planted problem of
/// size 10.
pub fn default_suite(seed: u64) -> Vec<SuiteProblem> {
    let (known, xs) = gen_known_solution(10, seed, KnownOptions::default());
    vec![
        SuiteProblem::new(
            "experiment1",
            gen_experiment1(),
            Some(experiment1_solution()),
        ),
        SuiteProblem::new("lyapunov8", gen_lyapunov(8), None),
        SuiteProblem::new("known10", known, Some(xs)),
    ]
}

pub fn scaling_suite() -> Vec<SuiteProblem> {
    SCALING_SIZES
        .iter()
        .map(|&n| SuiteProblem::new(format!("lyapunov{n}"), gen_lyapunov(n), None))
        .collect()
}

pub fn suite(kind: SuiteKind, seed: u64) -> Vec<SuiteProblem> {
    match kind {
        SuiteKind::Default => default_suite(seed),
        SuiteKind::Scaling => scaling_suite(),
    }
}

/// Runs one method and times it. The enclosure is returned next to the
/// report so that callers can inspect it.
pub fn run_method(
    sp: &SuiteProblem,
    method: Method,
    opts: &VerifyOptions,
) -> (VerificationReport, Option<Verified>) {
    let start = Instant::now();
    let outcome = verify(&sp.problem, method, opts);
    let wall_time = start.elapsed().as_secs_f64();
    let mut report = VerificationReport {
        format: FORMAT_VERSION.to_owned(),
        problem_id: sp.id.clone(),
        n: sp.problem.n(),
        method,
        status: Status::Failure,
        iterations: 0,
        nre: None,
        garp: None,
        stabilizing: false,
        wall_time,
        cond_v: None,
        cond_vp: None,
        contains_reference: None,
        degraded_basis: false,
        swap: None,
    };
    match outcome {
        Ok(v) => {
            let x = &v.enclosure.x;
            report.iterations = v.enclosure.iterations;
            report.stabilizing = v.enclosure.stabilizing_certified;
            report.degraded_basis = v.enclosure.degraded_basis;
            report.swap = v.swap.as_ref().map(|s| s.indices().collect());
            report.contains_reference = sp.reference.as_ref().map(|xs| x.contains_point(xs));
            match nre(x) {
                Ok(q) => {
                    report.status = Status::Success;
                    report.nre = Some(q);
                    report.garp = Some(garp(x));
                }
                Err(e) => report.status = Status::from_error(&e),
            }
            if v.swap.is_some() {
                report.cond_vp = Some(cond2_estimate(&v.eigvecs));
            } else {
                report.cond_v = Some(cond2_estimate(&v.eigvecs));
            }
            (report, Some(v))
        }
        Err(e) => {
            report.status = Status::from_error(&e);
            if let CoreError::VerificationFailed(k) = e {
                report.iterations = k;
            }
            (report, None)
        }
    }
}

/// Condition estimate of the eigenvector matrix of the unpermuted closed
/// loop, shared by every method on a problem.
pub fn original_cond(p: &CareProblem) -> Option<f64> {
    approx_solution(p).ok().map(|a| cond2_estimate(&a.v))
}

/// Runs every requested method on every problem, in problem order.
pub fn run_suite(
    problems: &[SuiteProblem],
    methods: &[Method],
    opts: &VerifyOptions,
) -> Vec<VerificationReport> {
    let mut out = Vec::with_capacity(problems.len() * methods.len());
    for sp in problems {
        let cond_v = original_cond(&sp.problem);
        for &m in methods {
            let (mut r, _) = run_method(sp, m, opts);
            if r.cond_v.is_none() {
                r.cond_v = cond_v;
            }
            out.push(r);
        }
    }
    out
}

/// Least-squares slope of `log t` against `log n`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, t)| (n.ln(), t.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Entry radii in storage order, for comparing runs.
pub fn radii(x: &IntervalMatrix) -> Vec<f64> {
    x.entries().iter().map(|d| d.rad()).collect()
}
