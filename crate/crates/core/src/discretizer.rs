//! The discretization map: from a 0/1 set `X` to a small rounded system
//! `(Ā, Ū, b̄)` from which `X` can be read back by approximate membership.
//!
//! Pipeline: facet description `Ax <= b`, a normalized factorization of the
//! slack matrix, a locally volume-maximal row basis of `[A | U]`, and
//! rounding of the selected `U` rows down to a grid of spacing
//! `q = 1/(4 r (n+r) Δ)`. A point `x` belongs to `X` iff some
//! `y ∈ [0, Δ]^r` brings `‖Āx + Ūy − b̄‖∞` under `1/(4(n+r))`; non-members
//! stay at least `1/(2(n+r))` away.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::factorization::{normalize, trivial_factorization, validate_factorization, Factorization, Side};
use crate::linalg::{cramer_coefficients, gram_volume_sq, RatMatrix};
use crate::lp::{lp_feasible, lp_optimize, LinearSystem, Relation, Sense};
use crate::polytope::{cube_points, hull, slack_matrix, HPolytope, VertexSet};
use crate::rational::{big, dot, floor, int, Rational};

/// Row indices (ascending) of a locally volume-maximal basis of the row space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSelection {
    pub indices: Vec<usize>,
    /// Squared volume of the selected rows; 1 for the empty selection.
    pub volume_sq: Rational,
}

impl RowSelection {
    pub fn k(&self) -> usize {
        self.indices.len()
    }
}

fn gather(rows: &[Vec<Rational>], idx: &[usize]) -> Vec<Vec<Rational>> {
    idx.iter().map(|&i| rows[i].clone()).collect()
}

/// Greedy volume growth to a basis, then single-row exchanges while any
/// exchange strictly increases the volume.
///
/// Exchanging basis row `i` for row `ℓ` scales the squared volume by `λ_i²`
/// where `λ` expresses row `ℓ` in the basis, so a basis is locally maximal
/// exactly when every row has Cramer coefficients in `[-1, 1]`.
pub fn select_maxvol_rows(m: &RatMatrix) -> RowSelection {
    let rows = m.to_rows();
    let k = m.rank();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut volume = int(1);
    while chosen.len() < k {
        let mut best: Option<(usize, Rational)> = None;
        for l in (0..rows.len()).filter(|l| !chosen.contains(l)) {
            let mut trial = gather(&rows, &chosen);
            trial.push(rows[l].clone());
            let vol = gram_volume_sq(&trial).expect("rows share a width");
            if best.as_ref().is_none_or(|(_, b)| vol > *b) {
                best = Some((l, vol));
            }
        }
        let (l, vol) = best.expect("rank exceeds available rows");
        chosen.push(l);
        chosen.sort_unstable();
        volume = vol;
    }

    'search: loop {
        let basis = gather(&rows, &chosen);
        for l in (0..rows.len()).filter(|l| !chosen.contains(l)) {
            let lambda = cramer_coefficients(&basis, &rows[l]).expect("basis spans the row space");
            let mut best: Option<(usize, Rational)> = None;
            for (pos, c) in lambda.iter().enumerate() {
                let sq = c * c;
                if sq > int(1) && best.as_ref().is_none_or(|(_, b)| sq > *b) {
                    best = Some((pos, sq));
                }
            }
            if let Some((pos, factor)) = best {
                chosen[pos] = l;
                chosen.sort_unstable();
                volume *= factor;
                continue 'search;
            }
        }
        break;
    }
    debug_assert_eq!(
        volume,
        gram_volume_sq(&gather(&rows, &chosen)).unwrap_or_else(|_| int(1))
    );
    RowSelection {
        indices: chosen,
        volume_sq: volume,
    }
}

/// Entrywise largest multiple of `q` not exceeding the entry.
pub fn grid_round_down(u: &RatMatrix, q: &Rational) -> Result<RatMatrix> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("grid spacing must be positive, got {q}")));
    }
    if !u.is_nonnegative() {
        return Err(Error::Precondition("grid rounding needs a nonnegative matrix".into()));
    }
    let data = u
        .entries()
        .iter()
        .map(|e| big(floor(&(e / q))) * q)
        .collect();
    RatMatrix::new(u.rows(), u.cols(), data)
}

/// `1 / (4 r (n+r) Δ)`.
pub fn grid_spacing(n: usize, r: usize, delta: i64) -> Rational {
    Rational::new(1.into(), (4 * r as i64 * (n + r) as i64 * delta).into())
}

/// `1 / (4 (n+r))`.
pub fn default_tolerance(n: usize, r: usize) -> Rational {
    Rational::new(1.into(), (4 * (n + r) as i64).into())
}

/// `1 / (2 (n+r))`, the guaranteed deviation of every non-member.
pub fn separation_bound(n: usize, r: usize) -> Rational {
    Rational::new(1.into(), (2 * (n + r) as i64).into())
}

/// Rounded subsystem `(Ā, Ū, b̄)` with `n + r` rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscretizedSystem {
    pub n: usize,
    pub r: usize,
    pub delta: i64,
    pub abar: Vec<Vec<i64>>,
    pub ubar: RatMatrix,
    pub bbar: Vec<i64>,
    pub q: Rational,
    pub tol: Rational,
}

impl DiscretizedSystem {
    pub fn with_tolerance(mut self, tol: Rational) -> Self {
        self.tol = tol;
        self
    }

    /// Checks the shape, grid and magnitude invariants.
    pub fn check(&self) -> Result<()> {
        let rows = self.n + self.r;
        if self.abar.len() != rows
            || self.bbar.len() != rows
            || self.ubar.rows() != rows
            || self.ubar.cols() != self.r
            || self.abar.iter().any(|row| row.len() != self.n)
        {
            return Err(Error::Dimension(format!(
                "discretized system must have {rows} rows over {} + {} columns",
                self.n, self.r
            )));
        }
        let delta = self.delta;
        if self.abar.iter().flatten().chain(&self.bbar).any(|v| v.abs() > delta) {
            return Err(Error::Domain("Ā or b̄ exceeds delta".into()));
        }
        for e in self.ubar.entries() {
            if e.is_negative() || *e > int(delta) || !(e / &self.q).is_integer() {
                return Err(Error::Domain(format!("Ū entry {e} is off the grid")));
            }
        }
        Ok(())
    }

    /// Deterministic textual form of `(Ā, Ū, b̄)`, used to compare systems.
    pub fn canonical_key(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{}|{}|{:?}|{:?}|", self.n, self.r, self.abar, self.bbar);
        for e in self.ubar.entries() {
            let _ = write!(s, "{e},");
        }
        s
    }

    fn offsets(&self, x: &[u8]) -> Result<Vec<Rational>> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "point of length {} for a system in dimension {}",
                x.len(),
                self.n
            )));
        }
        Ok(self
            .abar
            .iter()
            .zip(&self.bbar)
            .map(|(row, &b)| {
                int(row.iter().zip(x).map(|(&a, &c)| a * c as i64).sum::<i64>() - b)
            })
            .collect())
    }

    /// `‖Āx + Ūy − b̄‖∞`.
    pub fn deviation(&self, x: &[u8], y: &[Rational]) -> Result<Rational> {
        let off = self.offsets(x)?;
        Ok(crate::rational::max_abs(
            &off.iter()
                .enumerate()
                .map(|(i, c)| c + dot(self.ubar.row(i), y))
                .collect::<Vec<_>>(),
        ))
    }
}

/// Everything the discretization is computed from.
#[derive(Clone, Debug)]
pub struct Construction {
    pub polytope: HPolytope,
    /// Normalized factorization of the slack matrix.
    pub factorization: Factorization,
    /// Locally maximal row basis of `[A | U]`.
    pub selection: RowSelection,
}

pub fn construct(x: &VertexSet, f: Option<&Factorization>) -> Result<Construction> {
    let polytope = hull(x)?;
    let s = slack_matrix(&polytope, x)?;
    let f = match f {
        Some(f) => {
            validate_factorization(&s, f)?;
            f.clone()
        }
        None => trivial_factorization(&s, Side::Left),
    };
    if f.r() == 0 {
        return Err(Error::Domain("factorization width must be at least 1".into()));
    }
    let factorization = normalize(&f, polytope.delta())?;
    let m = polytope.a_matrix().hcat(factorization.u())?;
    let selection = select_maxvol_rows(&m);
    Ok(Construction {
        polytope,
        factorization,
        selection,
    })
}

/// Selected rows of `A`, rounded `U` and `b`, zero-padded to `n + r` rows.
pub(crate) fn rounded_subsystem(
    c: &Construction,
    q: &Rational,
) -> Result<(Vec<Vec<i64>>, RatMatrix, Vec<i64>)> {
    let n = c.polytope.n();
    let r = c.factorization.r();
    let idx = &c.selection.indices;
    let rounded = grid_round_down(&c.factorization.u().select_rows(idx), q)?;
    let mut abar: Vec<Vec<i64>> = idx.iter().map(|&i| c.polytope.a()[i].clone()).collect();
    let mut bbar: Vec<i64> = idx.iter().map(|&i| c.polytope.b()[i]).collect();
    let mut ubar = RatMatrix::zeros(n + r, r);
    for i in 0..idx.len() {
        for j in 0..r {
            ubar.set(i, j, rounded.get(i, j).clone());
        }
    }
    abar.resize(n + r, vec![0; n]);
    bbar.resize(n + r, 0);
    Ok((abar, ubar, bbar))
}

/// The map `X ↦ (Ā, Ū, b̄)`; without a factorization the trivial left one is used.
pub fn discretize(x: &VertexSet, f: Option<&Factorization>) -> Result<DiscretizedSystem> {
    let c = construct(x, f)?;
    let n = x.n();
    let r = c.factorization.r();
    let delta = c.polytope.delta();
    let q = grid_spacing(n, r, delta);
    let (abar, ubar, bbar) = rounded_subsystem(&c, &q)?;
    Ok(DiscretizedSystem {
        n,
        r,
        delta,
        abar,
        ubar,
        bbar,
        q,
        tol: default_tolerance(n, r),
    })
}

/// Feasibility system for `y ∈ [0, Δ]^r`, `|Āx + Ūy − b̄| <= tol` rowwise.
fn membership_system(d: &DiscretizedSystem, x: &[u8]) -> Result<LinearSystem> {
    let off = d.offsets(x)?;
    let mut sys = LinearSystem::new(d.r);
    for (i, c) in off.iter().enumerate() {
        let row = d.ubar.row(i).to_vec();
        sys.push(row.clone(), Relation::Le, &d.tol - c)?;
        sys.push(row, Relation::Ge, -&d.tol - c)?;
    }
    for j in 0..d.r {
        sys.bound(j, Rational::zero(), int(d.delta));
    }
    Ok(sys)
}

/// A `y ∈ [0, Δ]^r` within tolerance, if any.
pub fn membership_witness(d: &DiscretizedSystem, x: &[u8]) -> Result<Option<Vec<Rational>>> {
    Ok(lp_feasible(&membership_system(d, x)?).witness)
}

pub fn membership_test(d: &DiscretizedSystem, x: &[u8]) -> Result<bool> {
    Ok(membership_witness(d, x)?.is_some())
}

/// `min_{y ∈ [0, Δ]^r} ‖Āx + Ūy − b̄‖∞` and a minimizer.
pub fn min_deviation(d: &DiscretizedSystem, x: &[u8]) -> Result<(Rational, Vec<Rational>)> {
    let off = d.offsets(x)?;
    let r = d.r;
    let mut sys = LinearSystem::new(r + 1);
    for (i, c) in off.iter().enumerate() {
        let mut row = d.ubar.row(i).to_vec();
        row.push(int(-1));
        sys.push(row.clone(), Relation::Le, -c)?;
        row[r] = int(1);
        sys.push(row, Relation::Ge, -c)?;
    }
    for j in 0..r {
        sys.bound(j, Rational::zero(), int(d.delta));
    }
    let mut obj = vec![Rational::zero(); r + 1];
    obj[r] = int(1);
    let res = lp_optimize(&obj, &sys, Sense::Min)?;
    match (res.optimum, res.witness) {
        (Some(t), Some(mut w)) => {
            w.truncate(r);
            Ok((t, w))
        }
        _ => Err(Error::Internal("deviation LP has no optimum".into())),
    }
}

/// Minimum deviation at a non-member; at least `1/(2(n+r))` for systems
/// produced by [`discretize`].
pub fn separation_margin(d: &DiscretizedSystem, x: &[u8]) -> Result<Rational> {
    if membership_test(d, x)? {
        return Err(Error::Precondition(format!("{x:?} is a member")));
    }
    Ok(min_deviation(d, x)?.0)
}

/// `{x ∈ {0,1}^n : membership_test(D, x)}`.
pub fn reconstruct(d: &DiscretizedSystem) -> Result<VertexSet> {
    let mut members = Vec::new();
    for x in cube_points(d.n) {
        if membership_test(d, &x)? {
            members.push(x);
        }
    }
    VertexSet::new(d.n, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn vs(n: usize, pts: &[&[u8]]) -> VertexSet {
        VertexSet::new(n, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn selection_examples() {
        let sel = select_maxvol_rows(&RatMatrix::from_ints(&[[2, 0], [1, 1], [0, 1]]));
        assert_eq!(sel.indices, vec![0, 1]);
        assert_eq!(sel.volume_sq, int(4));

        let sel = select_maxvol_rows(&RatMatrix::identity(2));
        assert_eq!((sel.indices, sel.volume_sq), (vec![0, 1], int(1)));

        let sel = select_maxvol_rows(&RatMatrix::from_ints(&[[1, 0], [2, 0]]));
        assert_eq!((sel.k(), sel.indices, sel.volume_sq), (1, vec![1], int(4)));

        let sel = select_maxvol_rows(&RatMatrix::zeros(3, 2));
        assert_eq!(sel.k(), 0);
    }

    #[test]
    fn local_search_escapes_greedy_choice() {
        // Greedy takes row 0 first; the best pair is rows 1 and 2.
        let m = RatMatrix::from_ints(&[[3, 3], [4, 0], [0, 4]]);
        let sel = select_maxvol_rows(&m);
        assert_eq!(sel.volume_sq, int(256));
        assert_eq!(sel.indices, vec![1, 2]);
    }

    #[test]
    fn rounding_examples() {
        let q = frac(1, 48);
        assert_eq!(
            grid_round_down(&RatMatrix::from_ints(&[[1]]), &q).unwrap(),
            RatMatrix::from_ints(&[[1]])
        );
        let m = RatMatrix::new(1, 2, vec![frac(5, 7), int(0)]).unwrap();
        assert_eq!(
            grid_round_down(&m, &frac(1, 4)).unwrap(),
            RatMatrix::new(1, 2, vec![frac(1, 2), int(0)]).unwrap()
        );
        assert!(grid_round_down(&RatMatrix::from_ints(&[[-1]]), &q).is_err());
        assert!(grid_round_down(&RatMatrix::from_ints(&[[1]]), &int(0)).is_err());
    }

    #[test]
    fn segment_system() {
        let d = discretize(&vs(1, &[&[0], &[1]]), None).unwrap();
        assert_eq!(d.r, 2);
        assert_eq!(d.abar, vec![vec![1], vec![-1], vec![0]]);
        assert_eq!(d.bbar, vec![1, 0, 0]);
        let mut ubar = RatMatrix::zeros(3, 2);
        ubar.set(0, 0, int(1));
        ubar.set(1, 1, int(1));
        assert_eq!(d.ubar, ubar);
        assert_eq!((d.q.clone(), d.tol.clone()), (frac(1, 48), frac(1, 12)));
        d.check().unwrap();

        assert!(membership_test(&d, &[0]).unwrap());
        assert!(membership_test(&d, &[1]).unwrap());
        assert_eq!(d.deviation(&[0], &[int(1), int(0)]).unwrap(), int(0));
        assert!(d.deviation(&[1], &[int(0), int(1)]).unwrap() <= d.tol);
        assert_eq!(reconstruct(&d).unwrap(), vs(1, &[&[0], &[1]]));
    }

    #[test]
    fn triangle_excludes_corner() {
        let x = vs(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let d = discretize(&x, None).unwrap();
        assert_eq!((d.r, d.abar.len()), (3, 5));
        assert!(!membership_test(&d, &[1, 1]).unwrap());
        let margin = separation_margin(&d, &[1, 1]).unwrap();
        assert!(margin >= frac(1, 10), "margin {margin}");
        assert!(matches!(
            separation_margin(&d, &[0, 0]),
            Err(Error::Precondition(_))
        ));
        assert_eq!(reconstruct(&d).unwrap(), x);
    }

    #[test]
    fn point_sets() {
        let x = vs(2, &[&[1, 1]]);
        let d = discretize(&x, None).unwrap();
        d.check().unwrap();
        assert_eq!(reconstruct(&d).unwrap(), x);

        let d = discretize(&vs(1, &[&[0]]), None).unwrap();
        let margin = separation_margin(&d, &[1]).unwrap();
        assert!(margin >= separation_bound(1, d.r));
    }

    #[test]
    fn dimension_mismatch() {
        let d = discretize(&vs(1, &[&[0]]), None).unwrap();
        assert!(membership_test(&d, &[0, 1]).is_err());
    }
}
