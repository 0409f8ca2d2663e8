//! Nonnegative factorizations `S = UV` of slack matrices and the extensions
//! `{(x, y) : Ax + Uy = b, y >= 0}` they induce.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::certificate::Report;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::lp::{lp_optimize, LinearSystem, LpStatus, Relation, Sense};
use crate::polytope::{slack_matrix, HPolytope, SlackMatrix, VertexSet};
use crate::rational::{dot, int, Rational};

pub use crate::nmf::nmf_heuristic;

/// Nonnegative `U` (f × r) and `V` (r × v).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    u: RatMatrix,
    v: RatMatrix,
}

impl Factorization {
    pub fn new(u: RatMatrix, v: RatMatrix) -> Result<Self> {
        if u.cols() != v.rows() {
            return Err(Error::Dimension(format!(
                "U has {} columns but V has {} rows",
                u.cols(),
                v.rows()
            )));
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> &RatMatrix {
        &self.u
    }

    pub fn v(&self) -> &RatMatrix {
        &self.v
    }

    /// Inner dimension.
    pub fn r(&self) -> usize {
        self.u.cols()
    }

    pub fn product(&self) -> RatMatrix {
        self.u.mul(&self.v).expect("inner dimensions checked at construction")
    }

    pub fn into_parts(self) -> (RatMatrix, RatMatrix) {
        (self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `U = S`, `V = I`.
    Left,
    /// `U = I`, `V = S`.
    Right,
}

pub fn trivial_factorization(s: &SlackMatrix, side: Side) -> Factorization {
    let m = s.matrix().clone();
    match side {
        Side::Left => Factorization {
            v: RatMatrix::identity(m.cols()),
            u: m,
        },
        Side::Right => Factorization {
            u: RatMatrix::identity(m.rows()),
            v: m,
        },
    }
}

/// First offending entry of a factorization, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    NegativeU { row: usize, col: usize },
    NegativeV { row: usize, col: usize },
    Product { row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeU { row, col } => write!(f, "U[{row}][{col}] is negative"),
            Violation::NegativeV { row, col } => write!(f, "V[{row}][{col}] is negative"),
            Violation::Product { row, col } => write!(f, "(UV)[{row}][{col}] differs from S"),
        }
    }
}

fn first_negative(m: &RatMatrix) -> Option<(usize, usize)> {
    let cols = m.cols().max(1);
    m.entries()
        .iter()
        .position(|v| v.is_negative())
        .map(|k| (k / cols, k % cols))
}

/// Checks `U >= 0`, `V >= 0` and `UV = S` exactly.
pub fn validate_factorization(s: &SlackMatrix, f: &Factorization) -> Result<()> {
    let sm = s.matrix();
    if f.u.rows() != sm.rows() || f.v.cols() != sm.cols() {
        return Err(Error::Dimension(format!(
            "factorization of shape {}x{} for a {}x{} slack matrix",
            f.u.rows(),
            f.v.cols(),
            sm.rows(),
            sm.cols()
        )));
    }
    if let Some((row, col)) = first_negative(&f.u) {
        return Err(Error::InvalidFactorization(Violation::NegativeU { row, col }));
    }
    if let Some((row, col)) = first_negative(&f.v) {
        return Err(Error::InvalidFactorization(Violation::NegativeV { row, col }));
    }
    let p = f.product();
    for i in 0..sm.rows() {
        for j in 0..sm.cols() {
            if p.get(i, j) != sm.get(i, j) {
                return Err(Error::InvalidFactorization(Violation::Product { row: i, col: j }));
            }
        }
    }
    Ok(())
}

/// Rescales each column of `U` against the matching row of `V` so that both
/// factors have entries at most `delta`, keeping `UV` fixed.
///
/// A column already within bounds is left alone; otherwise the scale is
/// `‖V_ℓ‖∞ / delta`. A zero column of `U` zeroes the row of `V` and vice versa.
pub fn normalize(f: &Factorization, delta: i64) -> Result<Factorization> {
    if delta < 1 {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    if let Some((row, col)) = first_negative(&f.u) {
        return Err(Error::InvalidFactorization(Violation::NegativeU { row, col }));
    }
    if let Some((row, col)) = first_negative(&f.v) {
        return Err(Error::InvalidFactorization(Violation::NegativeV { row, col }));
    }
    let delta = int(delta);
    let delta_sq = &delta * &delta;
    let mut u = f.u.clone();
    let mut v = f.v.clone();
    for l in 0..f.r() {
        let u_max = crate::rational::max_abs(&f.u.column(l));
        let v_max = crate::rational::max_abs(f.v.row(l));
        if u_max.is_zero() {
            v.row_mut(l).iter_mut().for_each(|e| *e = Rational::zero());
            continue;
        }
        if v_max.is_zero() {
            for i in 0..u.rows() {
                u.set(i, l, Rational::zero());
            }
            continue;
        }
        if &u_max * &v_max > delta_sq {
            return Err(Error::Precondition(format!(
                "column {l}: ‖U^l‖·‖V_l‖ = {} exceeds delta² = {delta_sq}",
                &u_max * &v_max
            )));
        }
        if u_max <= delta && v_max <= delta {
            continue;
        }
        let scale = &v_max / &delta;
        for i in 0..u.rows() {
            let e = u.get(i, l) * &scale;
            u.set(i, l, e);
        }
        for e in v.row_mut(l) {
            *e /= &scale;
        }
    }
    Ok(Factorization { u, v })
}

/// `Q = {(x, y) : Ax + Uy = b, y >= 0}` projected onto `x`; `witnesses` holds `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedFormulation {
    pub n: usize,
    pub a: RatMatrix,
    pub b: Vec<Rational>,
    pub u: RatMatrix,
    pub witnesses: RatMatrix,
}

impl ExtendedFormulation {
    pub fn r(&self) -> usize {
        self.u.cols()
    }

    /// Number of inequality rows, i.e. the `y >= 0` constraints.
    pub fn size(&self) -> usize {
        self.r()
    }

    /// The system over `(x, y)` with `n + r` variables.
    pub fn linear_system(&self) -> LinearSystem {
        let (n, r) = (self.n, self.r());
        let mut sys = LinearSystem::new(n + r);
        for i in 0..self.a.rows() {
            let mut row = self.a.row(i).to_vec();
            row.extend_from_slice(self.u.row(i));
            sys.push(row, Relation::Eq, self.b[i].clone()).expect("row width");
        }
        for k in 0..r {
            sys.nonnegative(n + k);
        }
        sys
    }
}

pub fn build_extension(p: &HPolytope, x: &VertexSet, f: &Factorization) -> Result<ExtendedFormulation> {
    let s = slack_matrix(p, x)?;
    validate_factorization(&s, f)?;
    Ok(ExtendedFormulation {
        n: p.n(),
        a: p.a_matrix(),
        b: p.b_vector(),
        u: f.u.clone(),
        witnesses: f.v.clone(),
    })
}

/// Certifies that every vertex lifts with its factorization witness and that
/// every row of `Ax <= b` attains exactly `b_ℓ` over `Q`.
pub fn verify_extension(ef: &ExtendedFormulation, x: &VertexSet) -> Result<Report> {
    if x.n() != ef.n || x.len() != ef.witnesses.cols() {
        return Err(Error::Dimension(format!(
            "extension for dimension {} with {} witnesses, vertex set of dimension {} with {} points",
            ef.n,
            ef.witnesses.cols(),
            x.n(),
            x.len()
        )));
    }
    let mut report = Report::new();
    for j in 0..x.len() {
        let xj = x.rational_vertex(j);
        let y = ef.witnesses.column(j);
        let nonneg = y.iter().all(|v| !v.is_negative());
        let bad_row = (0..ef.a.rows())
            .find(|&i| dot(ef.a.row(i), &xj) + dot(ef.u.row(i), &y) != ef.b[i]);
        let detail = match (nonneg, bad_row) {
            (false, _) => format!("witness for {:?} has a negative entry", x.vertices()[j]),
            (true, Some(i)) => format!("row {i} fails A x + U y = b at {:?}", x.vertices()[j]),
            (true, None) => format!("{:?} lifts with y = V^{j}", x.vertices()[j]),
        };
        report.push(format!("vertex {j}"), nonneg && bad_row.is_none(), detail);
    }
    let sys = ef.linear_system();
    for l in 0..ef.a.rows() {
        let mut obj = ef.a.row(l).to_vec();
        obj.extend((0..ef.r()).map(|_| Rational::zero()));
        let res = lp_optimize(&obj, &sys, Sense::Max)?;
        let (ok, detail) = match res.status {
            LpStatus::Feasible => {
                let opt = res.optimum.unwrap();
                (opt == ef.b[l], format!("max A_{l}·x over Q = {opt}, b_{l} = {}", ef.b[l]))
            }
            LpStatus::Infeasible => (false, "Q is empty".into()),
            LpStatus::Unbounded => (false, format!("A_{l}·x is unbounded over Q")),
        };
        report.push(format!("facet {l}"), ok, detail);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::hull;
    use alloc::vec;

    fn slack(rows: &[&[i64]]) -> SlackMatrix {
        SlackMatrix::from_matrix(RatMatrix::from_ints(rows)).unwrap()
    }

    fn segment() -> VertexSet {
        VertexSet::new(1, vec![vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn trivial_factorizations() {
        let f = trivial_factorization(&slack(&[&[1, 0], &[0, 1]]), Side::Left);
        assert_eq!((f.u(), f.v(), f.r()), (&RatMatrix::identity(2), &RatMatrix::identity(2), 2));

        let s = slack(&[&[1, 0], &[0, 1], &[1, 1]]);
        let f = trivial_factorization(&s, Side::Right);
        assert_eq!(f.u(), &RatMatrix::identity(3));
        assert_eq!(f.v(), s.matrix());
        assert_eq!(f.r(), 3);

        let s = SlackMatrix::from_matrix(RatMatrix::zeros(4, 1)).unwrap();
        let f = trivial_factorization(&s, Side::Left);
        assert_eq!((f.v(), f.r()), (&RatMatrix::identity(1), 1));
    }

    #[test]
    fn validation_reports_first_violation() {
        let s = slack(&[&[1, 0], &[0, 1]]);
        let ok = Factorization::new(RatMatrix::identity(2), RatMatrix::identity(2)).unwrap();
        assert_eq!(validate_factorization(&s, &ok), Ok(()));

        let bad = Factorization::new(
            RatMatrix::identity(2),
            RatMatrix::from_ints(&[[1, 1], [0, 1]]),
        )
        .unwrap();
        assert_eq!(
            validate_factorization(&s, &bad),
            Err(Error::InvalidFactorization(Violation::Product { row: 0, col: 1 }))
        );

        let neg = Factorization::new(RatMatrix::from_ints(&[[-1]]), RatMatrix::from_ints(&[[-1]]))
            .unwrap();
        assert_eq!(
            validate_factorization(&slack(&[&[1]]), &neg),
            Err(Error::InvalidFactorization(Violation::NegativeU { row: 0, col: 0 }))
        );

        let wrong_shape = Factorization::new(RatMatrix::identity(3), RatMatrix::identity(3)).unwrap();
        assert!(matches!(
            validate_factorization(&s, &wrong_shape),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn normalize_examples() {
        let f = Factorization::new(RatMatrix::from_ints(&[[1]]), RatMatrix::from_ints(&[[4, 0]]))
            .unwrap();
        let g = normalize(&f, 2).unwrap();
        assert_eq!(g.u(), &RatMatrix::from_ints(&[[2]]));
        assert_eq!(g.v(), &RatMatrix::from_ints(&[[2, 0]]));

        let f = Factorization::new(
            RatMatrix::from_ints(&[[0, 1], [0, 2]]),
            RatMatrix::from_ints(&[[5, 5], [1, 0]]),
        )
        .unwrap();
        let g = normalize(&f, 2).unwrap();
        assert_eq!(g.v().row(0), &[int(0), int(0)]);
        assert_eq!(g.product(), f.product());

        let f = Factorization::new(RatMatrix::from_ints(&[[2]]), RatMatrix::from_ints(&[[1, 1]]))
            .unwrap();
        assert_eq!(normalize(&f, 2).unwrap(), f);
    }

    #[test]
    fn normalize_rejects_oversized_column() {
        let f = Factorization::new(RatMatrix::from_ints(&[[3]]), RatMatrix::from_ints(&[[3]]))
            .unwrap();
        assert!(matches!(normalize(&f, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn segment_extension() {
        let x = segment();
        let p = hull(&x).unwrap();
        let s = slack_matrix(&p, &x).unwrap();
        let f = trivial_factorization(&s, Side::Left);
        let ef = build_extension(&p, &x, &f).unwrap();
        assert_eq!(ef.size(), 2);
        let sys = ef.linear_system();
        // x + y1 = 1, -x + y2 = 0, y >= 0
        assert_eq!(sys.constraints()[0].coeffs, vec![int(1), int(1), int(0)]);
        assert_eq!(sys.constraints()[1].coeffs, vec![int(-1), int(0), int(1)]);
        let report = verify_extension(&ef, &x).unwrap();
        assert!(report.all_passed(), "{report:?}");
        let max = lp_optimize(&[int(1), int(0), int(0)], &sys, Sense::Max).unwrap();
        assert_eq!(max.optimum, Some(int(1)));
    }

    #[test]
    fn corrupted_extension_fails_witness_check() {
        let x = VertexSet::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        let p = hull(&x).unwrap();
        let f = trivial_factorization(&slack_matrix(&p, &x).unwrap(), Side::Left);
        let mut ef = build_extension(&p, &x, &f).unwrap();
        assert!(verify_extension(&ef, &x).unwrap().all_passed());
        let bumped = ef.u.get(0, 1) + int(1);
        ef.u.set(0, 1, bumped);
        let report = verify_extension(&ef, &x).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.label.as_str()).collect();
        assert!(failed.contains(&"vertex 1"), "{failed:?}");
    }

    #[test]
    fn build_rejects_invalid_factorization() {
        let x = segment();
        let p = hull(&x).unwrap();
        let f = Factorization::new(RatMatrix::identity(2), RatMatrix::from_ints(&[[1, 1], [0, 1]]))
            .unwrap();
        assert!(build_extension(&p, &x, &f).is_err());
    }
}
