//! Compact approximate extensions `Q = {(x, y) : Bx + Cy <= d}` with
//! `conv(X) ⊆ proj_x(Q) ⊆ conv(X) + ε`, and their LP certification.
//!
//! The construction reuses the discretization pipeline with the grid refined
//! by a factor `δ`, then unrolls the band `‖Āx + Ūy − b̄‖∞ <= δ/(4(n+r))`
//! and the box `y ∈ [0, Δ]^r` into `4r + 2n` inequality rows.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::Report;
use crate::discretizer::{construct, grid_spacing, rounded_subsystem};
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::linalg::RatMatrix;
use crate::lp::{lp_optimize, LinearSystem, LpStatus, Relation, Sense};
use crate::polytope::{HPolytope, VertexSet};
use crate::rational::{dot, int, Rational};

/// `δ = min{ 1/(2 (nΔ)^(2n+2)), ε / (n (nΔ)^n) }`.
pub fn compute_delta(n: usize, delta: i64, epsilon: &Rational) -> Result<Rational> {
    if !epsilon.is_positive() {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    if n < 1 || delta < 1 {
        return Err(Error::Domain(format!("need n >= 1 and delta >= 1, got {n}, {delta}")));
    }
    let nd = BigInt::from(n as i64 * delta);
    let first = Rational::new(1.into(), BigInt::from(2) * nd.pow(2 * n as u32 + 2));
    let second = epsilon / Rational::from_integer(BigInt::from(n) * nd.pow(n as u32));
    Ok(if first <= second { first } else { second })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxExtension {
    pub n: usize,
    pub r: usize,
    pub epsilon: Rational,
    pub delta_small: Rational,
    /// Integral coefficient bound Δ.
    pub delta: i64,
    pub b: RatMatrix,
    pub c: RatMatrix,
    pub d: Vec<Rational>,
    pub grid: Rational,
    pub tol: Rational,
    /// Facet description of `conv(X)` the construction started from.
    pub polytope: HPolytope,
    /// Normalized `V`; column `j` lifts vertex `j` into `Q`.
    pub witnesses: RatMatrix,
}

impl ApproxExtension {
    pub fn num_rows(&self) -> usize {
        self.b.rows()
    }

    /// `Bx + Cy <= d` over `n + r` variables.
    pub fn linear_system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.n + self.r);
        for i in 0..self.b.rows() {
            let mut row = self.b.row(i).to_vec();
            row.extend_from_slice(self.c.row(i));
            sys.push(row, Relation::Le, self.d[i].clone()).expect("row width");
        }
        sys
    }

    /// Largest numerator-plus-denominator bit length over all entries of `B, C, d`.
    pub fn max_entry_bits(&self) -> u64 {
        self.b
            .entries()
            .iter()
            .chain(self.c.entries())
            .chain(&self.d)
            .map(|v| v.numer().bits() + v.denom().bits())
            .max()
            .unwrap_or(0)
    }
}

pub fn build_approx(x: &VertexSet, f: Option<&Factorization>, epsilon: &Rational) -> Result<ApproxExtension> {
    let delta = crate::polytope::delta_i64(x.n())?;
    let delta_small = compute_delta(x.n(), delta, epsilon)?;
    build_approx_with_delta(x, f, epsilon, delta_small)
}

/// As [`build_approx`] but with an explicit `δ`, which may be any value no
/// larger than [`compute_delta`].
pub fn build_approx_with_delta(
    x: &VertexSet,
    f: Option<&Factorization>,
    epsilon: &Rational,
    delta_small: Rational,
) -> Result<ApproxExtension> {
    if !delta_small.is_positive() {
        return Err(Error::Domain(format!("δ must be positive, got {delta_small}")));
    }
    let con = construct(x, f)?;
    let n = x.n();
    let r = con.factorization.r();
    let delta = con.polytope.delta();
    let grid = &delta_small * grid_spacing(n, r, delta);
    let tol = &delta_small / int(4 * (n + r) as i64);
    let (abar, ubar, bbar) = rounded_subsystem(&con, &grid)?;

    let rows = 4 * r + 2 * n;
    let mut b = RatMatrix::zeros(rows, n);
    let mut c = RatMatrix::zeros(rows, r);
    let mut d = Vec::with_capacity(rows);
    for i in 0..n + r {
        for (sign, row) in [(1i64, 2 * i), (-1, 2 * i + 1)] {
            for k in 0..n {
                b.set(row, k, int(sign * abar[i][k]));
            }
            for k in 0..r {
                c.set(row, k, int(sign) * ubar.get(i, k));
            }
            d.push(int(sign * bbar[i]) + &tol);
        }
    }
    let box_start = 2 * (n + r);
    for k in 0..r {
        c.set(box_start + 2 * k, k, int(-1));
        d.push(Rational::zero());
        c.set(box_start + 2 * k + 1, k, int(1));
        d.push(int(delta));
    }
    Ok(ApproxExtension {
        n,
        r,
        epsilon: epsilon.clone(),
        delta_small,
        delta,
        b,
        c,
        d,
        grid,
        tol,
        witnesses: con.factorization.v().clone(),
        polytope: con.polytope,
    })
}

/// Facet normals, `±e_i`, and `random` seeded objectives with small rational entries.
pub fn objective_battery(p: &HPolytope, seed: u64, random: usize) -> Vec<Vec<Rational>> {
    let n = p.n();
    let mut out: Vec<Vec<Rational>> = (0..p.num_rows()).map(|i| p.row_rational(i)).collect();
    for i in 0..n {
        for s in [1, -1] {
            let mut e = vec![Rational::zero(); n];
            e[i] = int(s);
            out.push(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        out.push(
            (0..n)
                .map(|_| {
                    Rational::new(
                        BigInt::from(rng.gen_range(-6i64..=6)),
                        BigInt::from(rng.gen_range(1i64..=4)),
                    )
                })
                .collect(),
        );
    }
    out
}

fn max_over(obj: &[Rational], sys: &LinearSystem) -> Result<core::result::Result<Rational, LpStatus>> {
    let res = lp_optimize(obj, sys, Sense::Max)?;
    Ok(match res.status {
        LpStatus::Feasible => Ok(res.optimum.unwrap()),
        s => Err(s),
    })
}

/// Certifies vertex containment, the lifted facet bound `A_ℓ x <= b_ℓ + δ` over
/// `Q`, and the objective gap `max_Q c·x − max_P c·x <= ε ‖c‖₂` (compared in squares).
pub fn verify_sandwich(q: &ApproxExtension, x: &VertexSet, objectives: &[Vec<Rational>]) -> Result<Report> {
    let (n, r) = (q.n, q.r);
    if x.n() != n || x.len() != q.witnesses.cols() {
        return Err(Error::Dimension("vertex set does not match the extension".into()));
    }
    let sys = q.linear_system();
    let mut report = Report::new();

    for j in 0..x.len() {
        let mut point = x.rational_vertex(j);
        point.extend(q.witnesses.column(j));
        let bad = sys
            .constraints()
            .iter()
            .position(|c| dot(&c.coeffs, &point) > c.rhs);
        let detail = match bad {
            None => format!("({:?}, V^{j}) satisfies all {} rows", x.vertices()[j], q.num_rows()),
            Some(i) => format!("({:?}, V^{j}) violates row {i}", x.vertices()[j]),
        };
        report.push(format!("vertex {j}"), bad.is_none(), detail);
    }

    let p = &q.polytope;
    let pad = |c: &[Rational]| {
        let mut v = c.to_vec();
        v.extend((0..r).map(|_| Rational::zero()));
        v
    };
    for l in 0..p.num_rows() {
        let limit = int(p.b()[l]) + &q.delta_small;
        let (ok, detail) = match max_over(&pad(&p.row_rational(l)), &sys)? {
            Ok(opt) => (opt <= limit, format!("max A_{l}·x over Q = {opt} <= {limit}")),
            Err(s) => (false, format!("LP status {s:?}")),
        };
        report.push(format!("facet {l}"), ok, detail);
    }

    let eps_sq = &q.epsilon * &q.epsilon;
    for (k, c) in objectives.iter().enumerate() {
        if c.len() != n {
            return Err(Error::Dimension(format!("objective {k} has length {}", c.len())));
        }
        let max_p = (0..x.len())
            .map(|j| dot(c, &x.rational_vertex(j)))
            .max()
            .expect("vertex set is nonempty");
        let (ok, detail) = match max_over(&pad(c), &sys)? {
            Ok(max_q) => {
                let gap = &max_q - &max_p;
                let norm_sq = dot(c, c);
                let ok = !gap.is_positive() || &gap * &gap <= &eps_sq * &norm_sq;
                (ok, format!("gap {gap}, ε²‖c‖² = {}", &eps_sq * &norm_sq))
            }
            Err(s) => (false, format!("LP status {s:?}")),
        };
        report.push(format!("objective {k}"), ok, detail);
    }
    Ok(report)
}
