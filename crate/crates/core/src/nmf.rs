//! Best-effort search for narrow nonnegative factorizations.
//!
//! Floating-point multiplicative updates find an approximate factorization;
//! one factor is then snapped to small rationals and the other is recovered
//! exactly by LP, so anything returned has been validated in exact arithmetic.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::factorization::{validate_factorization, Factorization};
use crate::linalg::RatMatrix;
use crate::lp::{lp_feasible, LinearSystem, Relation};
use crate::polytope::SlackMatrix;
use crate::rational::{int, Rational};

const RESTARTS: u64 = 4;
const MAX_DENOMINATOR: i64 = 24;

/// Tries to factor `S = UV` with inner dimension `r`, deterministically in `seed`.
///
/// Returns `None` when nothing was found; never returns an unvalidated result.
pub fn nmf_heuristic(s: &SlackMatrix, r: usize, seed: u64, iterations: usize) -> Option<Factorization> {
    let (f, v) = (s.f(), s.v());
    let sm = s.matrix();
    if r >= v {
        let mut u = RatMatrix::zeros(f, r);
        let mut w = RatMatrix::zeros(r, v);
        for i in 0..f {
            for j in 0..v {
                u.set(i, j, sm.get(i, j).clone());
            }
        }
        for j in 0..v {
            w.set(j, j, int(1));
        }
        return checked(s, u, w);
    }
    if r >= f {
        let mut u = RatMatrix::zeros(f, r);
        let mut w = RatMatrix::zeros(r, v);
        for i in 0..f {
            u.set(i, i, int(1));
            for j in 0..v {
                w.set(i, j, sm.get(i, j).clone());
            }
        }
        return checked(s, u, w);
    }
    if r == 0 {
        return None;
    }

    let target: Vec<Vec<f64>> = (0..f)
        .map(|i| (0..v).map(|j| sm.get(i, j).to_f64().unwrap_or(0.0)).collect())
        .collect();
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart));
        let mut u: Vec<Vec<f64>> = (0..f)
            .map(|_| (0..r).map(|_| rng.gen_range(0.1..1.0)).collect())
            .collect();
        let mut w: Vec<Vec<f64>> = (0..r)
            .map(|_| (0..v).map(|_| rng.gen_range(0.1..1.0)).collect())
            .collect();
        for _ in 0..iterations {
            multiplicative_step(&target, &mut u, &mut w);
        }
        for threshold in [1e-2, 1e-4] {
            if let Some(fac) = snap_left(s, &u, threshold) {
                return Some(fac);
            }
            if let Some(fac) = snap_right(s, &w, threshold) {
                return Some(fac);
            }
        }
    }
    None
}

fn checked(s: &SlackMatrix, u: RatMatrix, v: RatMatrix) -> Option<Factorization> {
    let fac = Factorization::new(u, v).ok()?;
    validate_factorization(s, &fac).ok()?;
    Some(fac)
}

/// Lee-Seung updates for the Frobenius objective.
fn multiplicative_step(s: &[Vec<f64>], u: &mut [Vec<f64>], w: &mut [Vec<f64>]) {
    const EPS: f64 = 1e-12;
    let (f, r, v) = (u.len(), w.len(), s[0].len());
    // W <- W ∘ (Uᵀ S) / (Uᵀ U W)
    let mut utu = vec![vec![0.0; r]; r];
    for a in 0..r {
        for b in 0..r {
            utu[a][b] = (0..f).map(|i| u[i][a] * u[i][b]).sum();
        }
    }
    for a in 0..r {
        for j in 0..v {
            let num: f64 = (0..f).map(|i| u[i][a] * s[i][j]).sum();
            let den: f64 = (0..r).map(|b| utu[a][b] * w[b][j]).sum();
            w[a][j] *= num / (den + EPS);
        }
    }
    // U <- U ∘ (S Wᵀ) / (U W Wᵀ)
    let mut wwt = vec![vec![0.0; r]; r];
    for a in 0..r {
        for b in 0..r {
            wwt[a][b] = (0..v).map(|j| w[a][j] * w[b][j]).sum();
        }
    }
    for i in 0..f {
        for a in 0..r {
            let num: f64 = (0..v).map(|j| s[i][j] * w[a][j]).sum();
            let den: f64 = (0..r).map(|b| u[i][b] * wwt[b][a]).sum();
            u[i][a] *= num / (den + EPS);
        }
    }
}

/// Closest fraction with denominator at most `MAX_DENOMINATOR` (continued fractions).
fn approximate(x: f64) -> Rational {
    if !(x > 0.0) {
        return int(0);
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut rem = x;
    for _ in 0..32 {
        let a = rem as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > MAX_DENOMINATOR {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rem - a as f64;
        if frac < 1e-9 {
            break;
        }
        rem = 1.0 / frac;
    }
    if q1 == 0 {
        return int(0);
    }
    Rational::new(BigInt::from(p1), BigInt::from(q1))
}

/// Snaps each column of a factor, scaled to unit maximum, to small rationals.
fn snap_columns(m: &[Vec<f64>], cols: usize, threshold: f64) -> Vec<Vec<Rational>> {
    let rows = m.len();
    let mut out = vec![vec![int(0); cols]; rows];
    for c in 0..cols {
        let max = (0..rows).map(|i| m[i][c]).fold(0.0, f64::max);
        if !(max > 0.0) {
            continue;
        }
        for i in 0..rows {
            let x = m[i][c] / max;
            if x >= threshold {
                out[i][c] = approximate(x);
            }
        }
    }
    out
}

/// Fixes a snapped `U` and solves `U V^j = S^j`, `V^j >= 0` exactly per column.
fn snap_left(s: &SlackMatrix, u: &[Vec<f64>], threshold: f64) -> Option<Factorization> {
    let r = u[0].len();
    let snapped = snap_columns(u, r, threshold);
    let um = RatMatrix::from_rows(snapped, r).ok()?;
    let v = solve_other_factor(&um, s.matrix())?;
    checked(s, um, v)
}

/// Fixes a snapped `V` and solves for `U` through the transposed problem.
fn snap_right(s: &SlackMatrix, w: &[Vec<f64>], threshold: f64) -> Option<Factorization> {
    let r = w.len();
    let v = w[0].len();
    let wt: Vec<Vec<f64>> = (0..v).map(|j| (0..r).map(|a| w[a][j]).collect()).collect();
    let snapped = snap_columns(&wt, r, threshold);
    let vt = RatMatrix::from_rows(snapped, r).ok()?;
    let ut = solve_other_factor(&vt, &s.matrix().transpose())?;
    checked(s, ut.transpose(), vt.transpose())
}

/// Nonnegative `X` with `known · X = target`, column by column.
fn solve_other_factor(known: &RatMatrix, target: &RatMatrix) -> Option<RatMatrix> {
    let r = known.cols();
    let mut x = RatMatrix::zeros(r, target.cols());
    for j in 0..target.cols() {
        let mut sys = LinearSystem::new(r);
        for i in 0..known.rows() {
            sys.push(known.row(i).to_vec(), Relation::Eq, target.get(i, j).clone())
                .ok()?;
        }
        for k in 0..r {
            sys.nonnegative(k);
        }
        let witness = lp_feasible(&sys).witness?;
        for (k, val) in witness.into_iter().enumerate() {
            x.set(k, j, val);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slack(rows: &[&[i64]]) -> SlackMatrix {
        SlackMatrix::from_matrix(RatMatrix::from_ints(rows)).unwrap()
    }

    #[test]
    fn identity_at_full_width() {
        let s = slack(&[&[1, 0], &[0, 1]]);
        let f = nmf_heuristic(&s, 2, 7, 100).unwrap();
        assert!(validate_factorization(&s, &f).is_ok());
    }

    #[test]
    fn identity_three_has_no_width_two_factorization() {
        let s = slack(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(nmf_heuristic(&s, 2, 7, 500).is_none());
    }

    #[test]
    fn rank_one_matrix() {
        let s = slack(&[&[1, 1], &[1, 1]]);
        let f = nmf_heuristic(&s, 1, 3, 200).unwrap();
        assert_eq!(f.r(), 1);
        assert_eq!(f.product(), *s.matrix());
    }

    #[test]
    fn finds_width_below_both_trivial_ones() {
        // Rank-2 nonnegative 3x3 matrix with an obvious width-2 factorization.
        let s = slack(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 2]]);
        let f = nmf_heuristic(&s, 2, 11, 2000).unwrap();
        assert_eq!(f.r(), 2);
        assert!(validate_factorization(&s, &f).is_ok());
    }

    #[test]
    fn continued_fraction_approximation() {
        assert_eq!(approximate(0.5), Rational::new(1.into(), 2.into()));
        assert_eq!(approximate(1.0 / 3.0 + 1e-7), Rational::new(1.into(), 3.into()));
        assert_eq!(approximate(0.0), int(0));
    }
}
