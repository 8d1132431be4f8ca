//! JSON problem and report files and the CSV table.

use std::fmt;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::enclosure::Method;
use crate::error::{CoreError, Result};
use crate::problem::CareProblem;
use riccati_interval::PointMatrix;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &PointMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self, n: usize) -> Result<PointMatrix> {
        let bad = || CoreError::InvalidProblem(format!("matrix data is not {n}x{n}"));
        let square = |v: &Vec<Vec<f64>>| v.len() == n && v.iter().all(|r| r.len() == n);
        // an omitted imaginary part reads as zero
        let has_im = !self.im.is_empty();
        if !square(&self.re) || (has_im && !square(&self.im)) {
            return Err(bad());
        }
        Ok(DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(self.re[i][j], if has_im { self.im[i][j] } else { 0.0 })
        }))
    }
}

/// On-disk form of a [`CareProblem`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub format: String,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "G")]
    pub g: MatrixJson,
    #[serde(rename = "Q")]
    pub q: MatrixJson,
}

impl ProblemFile {
    pub fn from_problem(p: &CareProblem) -> Self {
        Self {
            format: FORMAT_VERSION.to_owned(),
            n: p.n(),
            a: MatrixJson::from_matrix(p.a()),
            g: MatrixJson::from_matrix(p.g()),
            q: MatrixJson::from_matrix(p.q()),
        }
    }

    pub fn to_problem(&self) -> Result<CareProblem> {
        if self.format != FORMAT_VERSION {
            return Err(CoreError::InvalidProblem(format!(
                "unsupported format {:?}",
                self.format
            )));
        }
        CareProblem::new(
            self.a.to_matrix(self.n)?,
            self.g.to_matrix(self.n)?,
            self.q.to_matrix(self.n)?,
        )
    }
}

pub fn read_problem_json(text: &str) -> Result<CareProblem> {
    let file: ProblemFile = serde_json::from_str(text)
        .map_err(|e| CoreError::InvalidProblem(format!("bad problem JSON: {e}")))?;
    file.to_problem()
}

pub fn problem_to_json(p: &CareProblem) -> String {
    serde_json::to_string_pretty(&ProblemFile::from_problem(p)).expect("problem serializes")
}

/// Outcome of one verification, written as `success`, `failure` or
/// `error:<stage>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
    Error(String),
}

impl Status {
    pub fn from_error(e: &CoreError) -> Self {
        if e.is_verification_failure() {
            Status::Failure
        } else {
            Status::Error(e.stage().to_owned())
        }
    }

    pub fn is_success(&self) -> bool {
        *self == Status::Success
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Success => f.write_str("success"),
            Status::Failure => f.write_str("failure"),
            Status::Error(stage) => write!(f, "error:{stage}"),
        }
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "success" => Ok(Status::Success),
            "failure" => Ok(Status::Failure),
            _ => s
                .strip_prefix("error:")
                .map(|stage| Status::Error(stage.to_owned()))
                .ok_or_else(|| format!("unknown status {s:?}")),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Status {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format: String,
    pub problem_id: String,
    pub n: usize,
    pub method: Method,
    pub status: Status,
    pub iterations: usize,
    /// Present on success only.
    pub nre: Option<f64>,
    pub garp: Option<f64>,
    pub stabilizing: bool,
    /// Seconds.
    pub wall_time: f64,
    /// Condition estimates of the eigenvector matrices of the original and
    /// of the permuted problem; `None` when not computed.
    #[serde(rename = "cond_V")]
    pub cond_v: Option<f64>,
    #[serde(rename = "cond_VP")]
    pub cond_vp: Option<f64>,
    /// Whether the enclosure contains the known solution, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contains_reference: Option<bool>,
    #[serde(default)]
    pub degraded_basis: bool,
    /// Swapped indices of the permuted basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap: Option<Vec<usize>>,
}

pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

#[derive(Serialize)]
struct CsvRow<'a> {
    problem_id: &'a str,
    n: usize,
    method: Method,
    status: String,
    nre: Option<f64>,
    k: usize,
    garp: Option<f64>,
    time: f64,
    stabilizing: bool,
}

/// One row per report, metric columns in the order `nre, k, garp, time`.
pub fn write_csv<W: Write>(out: W, reports: &[VerificationReport]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(CsvRow {
            problem_id: &r.problem_id,
            n: r.n,
            method: r.method,
            status: r.status.to_string(),
            nre: r.nre,
            k: r.iterations,
            garp: r.garp,
            time: r.wall_time,
            stabilizing: r.stabilizing,
        })
        .map_err(std::io::Error::other)?;
    }
    w.flush()
}
