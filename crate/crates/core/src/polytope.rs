//! 0/1 vertex sets, integer facet descriptions of their convex hulls, and
//! slack matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::lp::{lp_optimize, LinearSystem, LpStatus, Relation, Sense};
use crate::rational::{int, Rational};

/// A nonempty set of distinct 0/1 points in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    n: usize,
    vertices: Vec<Vec<u8>>,
}

impl VertexSet {
    pub fn new(n: usize, mut vertices: Vec<Vec<u8>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidVertexSet("empty vertex set".into()));
        }
        for v in &vertices {
            if v.len() != n {
                return Err(Error::InvalidVertexSet(format!(
                    "vertex of length {} in dimension {n}",
                    v.len()
                )));
            }
            if v.iter().any(|&c| c > 1) {
                return Err(Error::InvalidVertexSet(format!("non-0/1 vertex {v:?}")));
            }
        }
        vertices.sort();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidVertexSet("duplicate vertex".into()));
        }
        Ok(Self { n, vertices })
    }

    /// The set whose members are the cube points with the given lexicographic
    /// ranks (see [`cube_point`]).
    pub fn from_ranks(n: usize, ranks: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(n, ranks.into_iter().map(|r| cube_point(n, r)).collect())
    }

    /// Enumerates the nonempty subsets of `{0,1}^n` by bitmask over cube ranks.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        Self::from_ranks(n, (0..1usize << n).filter(|&r| mask >> r & 1 == 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec<u8>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &[u8]) -> bool {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(x)).is_ok()
    }

    pub fn rational_vertex(&self, j: usize) -> Vec<Rational> {
        self.vertices[j].iter().map(|&c| int(c as i64)).collect()
    }
}

/// Point of `{0,1}^n` with lexicographic rank `rank` (first coordinate most significant).
pub fn cube_point(n: usize, rank: usize) -> Vec<u8> {
    (0..n).map(|i| (rank >> (n - 1 - i) & 1) as u8).collect()
}

pub fn cube_points(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1usize << n).map(move |r| cube_point(n, r))
}

/// `⌈(n+1)^((n+1)/2)⌉`, the integral coefficient bound used wherever Δ appears.
pub fn delta_int(n: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::Domain("delta_int needs n >= 1".into()));
    }
    let base = BigUint::from(n + 1);
    let exp = (n + 1) as u32;
    if exp.is_multiple_of(2) {
        return Ok(base.pow(exp / 2));
    }
    let square = base.pow(exp);
    let root = square.sqrt();
    Ok(if &root * &root == square { root } else { root + 1u32 })
}

pub fn delta_i64(n: usize) -> Result<i64> {
    delta_int(n)?
        .to_i64()
        .ok_or_else(|| Error::Domain(format!("delta_int({n}) does not fit in 64 bits")))
}

/// Integer system `Ax <= b` describing `conv(X)`, without redundant rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPolytope {
    n: usize,
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
    delta: i64,
}

impl HPolytope {
    pub fn new(n: usize, a: Vec<Vec<i64>>, b: Vec<i64>, delta: i64) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Dimension(format!(
                "{} rows in A but {} entries in b",
                a.len(),
                b.len()
            )));
        }
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row of length {} in dimension {n}",
                row.len()
            )));
        }
        let too_big = a.iter().flatten().chain(&b).any(|v| v.abs() > delta);
        if too_big {
            return Err(Error::Domain(format!("coefficient exceeds delta = {delta}")));
        }
        Ok(Self { n, a, b, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn a_matrix(&self) -> RatMatrix {
        if self.a.is_empty() {
            return RatMatrix::zeros(0, self.n);
        }
        RatMatrix::from_ints(&self.a)
    }

    pub fn b_vector(&self) -> Vec<Rational> {
        self.b.iter().map(|&v| int(v)).collect()
    }

    pub fn row_rational(&self, i: usize) -> Vec<Rational> {
        self.a[i].iter().map(|&v| int(v)).collect()
    }

    pub fn as_linear_system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.n);
        for i in 0..self.a.len() {
            sys.push(self.row_rational(i), Relation::Le, int(self.b[i]))
                .expect("row lengths checked at construction");
        }
        sys
    }

    pub fn contains(&self, x: &[u8]) -> bool {
        self.a.iter().zip(&self.b).all(|(row, &rhs)| {
            row.iter().zip(x).map(|(&a, &c)| a * c as i64).sum::<i64>() <= rhs
        })
    }
}

/// Canonical row order: descending lexicographic on `(A_i, b_i)`.
pub(crate) fn canonical_order(rows: &mut Vec<(Vec<i64>, i64)>) {
    rows.sort_by(|x, y| match y.0.cmp(&x.0) {
        Ordering::Equal => y.1.cmp(&x.1),
        o => o,
    });
    rows.dedup();
}

/// Non-redundant integer facet description of `conv(X)`.
///
/// Affine-hull equations appear as pairs of opposite inequalities; a single
/// point yields the `2n` box equalities.
pub fn hull(x: &VertexSet) -> Result<HPolytope> {
    let delta = delta_i64(x.n())?;
    let mut rows = crate::hull::facet_rows(x);
    canonical_order(&mut rows);
    let (a, b) = rows.into_iter().unzip();
    HPolytope::new(x.n(), a, b, delta)
        .map_err(|e| Error::Internal(format!("hull of {:?}: {e}", x.vertices())))
}

/// Integral slack matrix with rows indexed by inequalities, columns by vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlackMatrix {
    s: RatMatrix,
}

impl SlackMatrix {
    /// Wraps a matrix after checking entries are nonnegative integers.
    pub fn from_matrix(s: RatMatrix) -> Result<Self> {
        if !s.is_nonnegative() || !s.entries().iter().all(crate::rational::is_integer) {
            return Err(Error::Domain("slack entries must be nonnegative integers".into()));
        }
        Ok(Self { s })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.s
    }

    /// Number of inequalities.
    pub fn f(&self) -> usize {
        self.s.rows()
    }

    /// Number of vertices.
    pub fn v(&self) -> usize {
        self.s.cols()
    }
}

/// `S_ij = b_i - A_i x_j`.
pub fn slack_matrix(p: &HPolytope, x: &VertexSet) -> Result<SlackMatrix> {
    if p.n() != x.n() {
        return Err(Error::Dimension(format!(
            "polytope in dimension {} with vertices in dimension {}",
            p.n(),
            x.n()
        )));
    }
    let f = p.num_rows();
    let v = x.len();
    let mut s = RatMatrix::zeros(f, v);
    for i in 0..f {
        for (j, vert) in x.vertices().iter().enumerate() {
            let lhs: i64 = p.a[i].iter().zip(vert).map(|(&a, &c)| a * c as i64).sum();
            let slack = p.b[i] - lhs;
            if slack < 0 {
                return Err(Error::Consistency { row: i, vertex: j });
            }
            s.set(i, j, int(slack));
        }
    }
    Ok(SlackMatrix { s })
}

/// Drops rows implied by the others, one at a time in the order given by
/// `removal_order`, certifying each removal with an LP.
pub fn prune_redundant(
    n: usize,
    rows: Vec<(Vec<i64>, i64)>,
    removal_order: &[usize],
) -> Vec<(Vec<i64>, i64)> {
    let mut alive = vec![true; rows.len()];
    for &i in removal_order {
        let mut sys = LinearSystem::new(n);
        for (j, (a, b)) in rows.iter().enumerate() {
            if alive[j] && j != i {
                sys.push(a.iter().map(|&v| int(v)).collect(), Relation::Le, int(*b))
                    .expect("row width");
            }
        }
        let obj: Vec<Rational> = rows[i].0.iter().map(|&v| int(v)).collect();
        let res = lp_optimize(&obj, &sys, Sense::Max).expect("objective width");
        let redundant = match res.status {
            LpStatus::Feasible => res.optimum.unwrap() <= int(rows[i].1),
            LpStatus::Infeasible => true,
            LpStatus::Unbounded => false,
        };
        if redundant {
            alive[i] = false;
        }
    }
    rows.into_iter()
        .zip(alive)
        .filter_map(|(r, keep)| keep.then_some(r))
        .collect()
}

/// Whether every row of `p` is needed: removing it lets some point of the
/// remaining system exceed its right-hand side.
pub fn is_nonredundant(p: &HPolytope) -> bool {
    let sys = p.as_linear_system();
    (0..p.num_rows()).all(|i| {
        let res = lp_optimize(&p.row_rational(i), &sys.without(i), Sense::Max).unwrap();
        match res.status {
            LpStatus::Unbounded => true,
            LpStatus::Feasible => res.optimum.unwrap() > int(p.b()[i]),
            LpStatus::Infeasible => false,
        }
    })
}

/// Whether `{x : p} ⊆ {x : q}`, certified by maximizing each row of `q` over `p`.
pub fn system_contained_in(p: &HPolytope, q: &HPolytope) -> bool {
    let sys = p.as_linear_system();
    (0..q.num_rows()).all(|i| {
        let res = lp_optimize(&q.row_rational(i), &sys, Sense::Max).unwrap();
        match res.status {
            LpStatus::Infeasible => true,
            LpStatus::Unbounded => false,
            LpStatus::Feasible => res.optimum.unwrap() <= int(q.b()[i]),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(n: usize, pts: &[&[u8]]) -> VertexSet {
        VertexSet::new(n, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn rows_of(p: &HPolytope) -> Vec<(Vec<i64>, i64)> {
        p.a().iter().cloned().zip(p.b().iter().copied()).collect()
    }

    #[test]
    fn delta_int_values() {
        assert_eq!(delta_int(1).unwrap(), BigUint::from(2u32));
        assert_eq!(delta_int(2).unwrap(), BigUint::from(6u32));
        assert_eq!(delta_int(3).unwrap(), BigUint::from(16u32));
        assert_eq!(delta_int(4).unwrap(), BigUint::from(56u32));
        assert!(delta_int(0).is_err());
    }

    #[test]
    fn vertex_set_validation() {
        assert!(VertexSet::new(2, vec![]).is_err());
        assert!(VertexSet::new(2, vec![vec![0, 2]]).is_err());
        assert!(VertexSet::new(2, vec![vec![0]]).is_err());
        assert!(VertexSet::new(1, vec![vec![1], vec![1]]).is_err());
        let x = vs(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(x.vertices(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(VertexSet::from_mask(2, 0b0110).unwrap(), x);
    }

    #[test]
    fn hull_segment() {
        let p = hull(&vs(1, &[&[0], &[1]])).unwrap();
        assert_eq!(rows_of(&p), vec![(vec![1], 1), (vec![-1], 0)]);
    }

    #[test]
    fn hull_triangle() {
        let p = hull(&vs(2, &[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(
            rows_of(&p),
            vec![(vec![1, 1], 1), (vec![0, -1], 0), (vec![-1, 0], 0)]
        );
    }

    #[test]
    fn hull_point_is_box_equalities() {
        let p = hull(&vs(2, &[&[1, 1]])).unwrap();
        assert_eq!(
            rows_of(&p),
            vec![
                (vec![1, 0], 1),
                (vec![0, 1], 1),
                (vec![0, -1], -1),
                (vec![-1, 0], -1)
            ]
        );
    }

    #[test]
    fn hull_of_diagonal_uses_equation_pair() {
        let x = vs(2, &[&[0, 0], &[1, 1]]);
        let p = hull(&x).unwrap();
        for pt in cube_points(2) {
            assert_eq!(p.contains(&pt), x.contains(&pt));
        }
        assert!(is_nonredundant(&p));
    }

    #[test]
    fn slack_examples() {
        let seg = vs(1, &[&[0], &[1]]);
        let s = slack_matrix(&hull(&seg).unwrap(), &seg).unwrap();
        assert_eq!(s.matrix(), &RatMatrix::identity(2));

        let tri = vs(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let s = slack_matrix(&hull(&tri).unwrap(), &tri).unwrap();
        assert_eq!(s.matrix(), &RatMatrix::identity(3));

        let pt = vs(2, &[&[1, 1]]);
        let s = slack_matrix(&hull(&pt).unwrap(), &pt).unwrap();
        assert_eq!(s.matrix(), &RatMatrix::zeros(4, 1));
    }

    #[test]
    fn slack_with_listed_row_order() {
        // Rows {x1+x2 <= 1, -x1 <= 0, -x2 <= 0} against vertices (0,0),(0,1),(1,0).
        let p = HPolytope::new(2, vec![vec![1, 1], vec![-1, 0], vec![0, -1]], vec![1, 0, 0], 6)
            .unwrap();
        let tri = vs(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let s = slack_matrix(&p, &tri).unwrap();
        assert_eq!(
            s.matrix(),
            &RatMatrix::from_ints(&[[1, 0, 0], [0, 0, 1], [0, 1, 0]])
        );
    }

    #[test]
    fn slack_rejects_violating_vertex() {
        let p = HPolytope::new(1, vec![vec![1]], vec![0], 2).unwrap();
        let x = vs(1, &[&[1]]);
        assert_eq!(
            slack_matrix(&p, &x),
            Err(Error::Consistency { row: 0, vertex: 0 })
        );
    }
}
