//! JSON artifacts exchanged between pipeline stages.
//!
//! Rationals are strings `"p/q"` (or `"p"`), so every file is exact.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use xclab_core::approximator::ApproxExtension;
use xclab_core::counting::CountReport;
use xclab_core::discretizer::DiscretizedSystem;
use xclab_core::factorization::{ExtendedFormulation, Factorization};
use xclab_core::matroid::{validate_matroid, Matroid};
use xclab_core::polytope::{HPolytope, SlackMatrix, VertexSet};
use xclab_core::rational::parse;
use xclab_core::{RatMatrix, Rational, Report};

use crate::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize");
    s.push('\n');
    s
}

fn rat(s: &str) -> Result<Rational, CliError> {
    parse(s).map_err(CliError::from)
}

fn rat_vec(v: &[String]) -> Result<Vec<Rational>, CliError> {
    v.iter().map(|s| rat(s)).collect()
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|e| e.to_string()).collect()).collect()
}

/// Parses a row-major string matrix; `cols` fixes the width when there are no rows.
fn parse_matrix(rows: &[Vec<String>], cols: Option<usize>) -> Result<RatMatrix, CliError> {
    let width = rows.first().map(|r| r.len()).or(cols).unwrap_or(0);
    let parsed = rows.iter().map(|r| rat_vec(r)).collect::<Result<Vec<_>, _>>()?;
    RatMatrix::from_rows(parsed, width).map_err(CliError::from)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSetFile {
    pub n: usize,
    pub vertices: Vec<Vec<u8>>,
}

impl VertexSetFile {
    pub fn from_set(x: &VertexSet) -> Self {
        Self { n: x.n(), vertices: x.vertices().to_vec() }
    }

    pub fn to_set(&self) -> Result<VertexSet, CliError> {
        Ok(VertexSet::new(self.n, self.vertices.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    pub delta: i64,
}

impl PolytopeFile {
    pub fn from_polytope(p: &HPolytope) -> Self {
        Self { n: p.n(), a: p.a().to_vec(), b: p.b().to_vec(), delta: p.delta() }
    }

    pub fn to_polytope(&self) -> Result<HPolytope, CliError> {
        Ok(HPolytope::new(self.n, self.a.clone(), self.b.clone(), self.delta)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackFile {
    #[serde(rename = "S")]
    pub s: Vec<Vec<String>>,
    /// Number of vertices, needed when there are no rows.
    pub v: usize,
}

impl SlackFile {
    pub fn from_slack(s: &SlackMatrix) -> Self {
        Self { s: matrix_strings(s.matrix()), v: s.v() }
    }

    pub fn to_slack(&self) -> Result<SlackMatrix, CliError> {
        Ok(SlackMatrix::from_matrix(parse_matrix(&self.s, Some(self.v))?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationFile {
    #[serde(rename = "U")]
    pub u: Vec<Vec<String>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<String>>,
    pub r: usize,
}

impl FactorizationFile {
    pub fn from_factorization(f: &Factorization) -> Self {
        Self { u: matrix_strings(f.u()), v: matrix_strings(f.v()), r: f.r() }
    }

    pub fn to_factorization(&self) -> Result<Factorization, CliError> {
        let u = parse_matrix(&self.u, Some(self.r))?;
        let v = parse_matrix(&self.v, None)?;
        if u.cols() != self.r || v.rows() != self.r {
            return Err(CliError::Usage(format!("factorization declares r = {} but U is {}x{} and V is {}x{}", self.r, u.rows(), u.cols(), v.rows(), v.cols())));
        }
        Ok(Factorization::new(u, v)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
    #[serde(rename = "U")]
    pub u: Vec<Vec<String>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<String>>,
    pub r: usize,
}

impl ExtensionFile {
    pub fn from_extension(ef: &ExtendedFormulation) -> Self {
        Self {
            n: ef.n,
            a: matrix_strings(&ef.a),
            b: ef.b.iter().map(|e| e.to_string()).collect(),
            u: matrix_strings(&ef.u),
            v: matrix_strings(&ef.witnesses),
            r: ef.r(),
        }
    }

    pub fn to_extension(&self) -> Result<ExtendedFormulation, CliError> {
        let a = parse_matrix(&self.a, Some(self.n))?;
        let u = parse_matrix(&self.u, Some(self.r))?;
        let witnesses = parse_matrix(&self.v, None)?;
        let b = rat_vec(&self.b)?;
        if a.cols() != self.n || b.len() != a.rows() || u.rows() != a.rows() || u.cols() != self.r || witnesses.rows() != self.r {
            return Err(CliError::Usage("extension file has inconsistent shapes".into()));
        }
        Ok(ExtendedFormulation { n: self.n, a, b, u, witnesses })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretizedFile {
    pub n: usize,
    pub r: usize,
    pub delta: i64,
    pub q: String,
    pub tol: String,
    #[serde(rename = "Abar")]
    pub abar: Vec<Vec<i64>>,
    #[serde(rename = "Ubar")]
    pub ubar: Vec<Vec<String>>,
    pub bbar: Vec<i64>,
}

impl DiscretizedFile {
    pub fn from_system(d: &DiscretizedSystem) -> Self {
        Self {
            n: d.n,
            r: d.r,
            delta: d.delta,
            q: d.q.to_string(),
            tol: d.tol.to_string(),
            abar: d.abar.clone(),
            ubar: matrix_strings(&d.ubar),
            bbar: d.bbar.clone(),
        }
    }

    pub fn to_system(&self) -> Result<DiscretizedSystem, CliError> {
        let d = DiscretizedSystem {
            n: self.n,
            r: self.r,
            delta: self.delta,
            abar: self.abar.clone(),
            ubar: parse_matrix(&self.ubar, Some(self.r))?,
            bbar: self.bbar.clone(),
            q: rat(&self.q)?,
            tol: rat(&self.tol)?,
        };
        d.check()?;
        Ok(d)
    }
}

/// Independent sets listed with 1-based elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidFile {
    pub n: usize,
    pub independent: Vec<Vec<usize>>,
}

impl MatroidFile {
    pub fn from_matroid(m: &Matroid) -> Self {
        let independent = m
            .independent_sets()
            .iter()
            .map(|&s| (0..m.n()).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect())
            .collect();
        Self { n: m.n(), independent }
    }

    pub fn to_matroid(&self) -> Result<Matroid, CliError> {
        let mut family = Vec::with_capacity(self.independent.len());
        for set in &self.independent {
            let mut mask = 0u64;
            for &e in set {
                if e < 1 || e > self.n {
                    return Err(CliError::Usage(format!("element {e} is outside 1..={}", self.n)));
                }
                mask |= 1 << (e - 1);
            }
            family.push(mask);
        }
        Ok(validate_matroid(self.n, &family)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxFile {
    pub n: usize,
    pub r: usize,
    pub epsilon: String,
    pub delta_small: String,
    pub grid: String,
    pub tol: String,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<String>>,
    pub d: Vec<String>,
}

impl ApproxFile {
    pub fn from_approx(q: &ApproxExtension) -> Self {
        Self {
            n: q.n,
            r: q.r,
            epsilon: q.epsilon.to_string(),
            delta_small: q.delta_small.to_string(),
            grid: q.grid.to_string(),
            tol: q.tol.to_string(),
            b: matrix_strings(&q.b),
            c: matrix_strings(&q.c),
            d: q.d.iter().map(|e| e.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
}

impl ReportFile {
    pub fn from_report(r: &Report) -> Self {
        Self {
            passed: r.all_passed(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckEntry { label: c.label.clone(), passed: c.passed, detail: c.detail.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountFile {
    pub n: usize,
    pub target: String,
    #[serde(rename = "R_star")]
    pub r_star: String,
    pub bound_at: String,
    pub bound_below: Option<String>,
    pub saturated: bool,
    pub trivial: bool,
    pub bracket_holds: bool,
    /// `R_star / (2^(n/2) / sqrt(n log2(2n)))`, informational only.
    pub ratio: f64,
    pub transcript: Vec<String>,
}

impl CountFile {
    pub fn from_report(r: &CountReport) -> Self {
        Self {
            n: r.n,
            target: r.target.to_string(),
            r_star: r.r_star.to_string(),
            bound_at: r.bound_at.to_string(),
            bound_below: r.bound_below.as_ref().map(|b| b.to_string()),
            saturated: r.saturated,
            trivial: r.trivial,
            bracket_holds: r.bracket_holds(),
            ratio: crate::xc_ratio(r),
            transcript: r.transcript.clone(),
        }
    }
}
