//! Facet enumeration for 0/1 point sets.
//!
//! The affine hull is computed first by exact elimination. Points are then
//! projected onto the pivot coordinates of the direction space, where they are
//! full-dimensional, and the facets are the extreme rays of the cone of valid
//! inequalities, found by the double description method in integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::row_echelon;
use crate::polytope::VertexSet;
use crate::rational::{int, Rational};

/// Rows `(A_i, b_i)` of a non-redundant description of `conv(X)`, unordered.
pub(crate) fn facet_rows(x: &VertexSet) -> Vec<(Vec<i64>, i64)> {
    let n = x.n();
    let base = &x.vertices()[0];
    let directions: Vec<Vec<Rational>> = x.vertices()[1..]
        .iter()
        .map(|v| (0..n).map(|i| int(v[i] as i64 - base[i] as i64)).collect())
        .collect();
    let ech = row_echelon(directions, n);
    let free = ech.pivots.clone();
    let d = free.len();

    let mut rows = Vec::new();
    // Each dependent coordinate k: x_k - Σ_t R[t][k] x_{free_t} = const.
    for k in (0..n).filter(|k| !free.contains(k)) {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[k] = int(1);
        for (t, &p) in free.iter().enumerate() {
            coeffs[p] = -ech.rows[t][k].clone();
        }
        let rhs: Rational = coeffs
            .iter()
            .zip(base)
            .map(|(c, &v)| c * int(v as i64))
            .sum();
        let (a, b) = integral_row(&coeffs, &rhs);
        rows.push((a.iter().map(|v| -v).collect(), -b));
        rows.push((a, b));
    }
    if d == 0 {
        return rows;
    }

    let projected: Vec<Vec<i64>> = x
        .vertices()
        .iter()
        .map(|v| free.iter().map(|&i| v[i] as i64).collect())
        .collect();
    for (a_proj, b) in full_dimensional_facets(&projected, d) {
        let mut a = vec![0i64; n];
        for (t, &p) in free.iter().enumerate() {
            a[p] = a_proj[t];
        }
        rows.push((a, b));
    }
    rows
}

/// Scales a rational row to a primitive integer row with the same sign.
fn integral_row(coeffs: &[Rational], rhs: &Rational) -> (Vec<i64>, i64) {
    let lcm = coeffs
        .iter()
        .chain(core::iter::once(rhs))
        .fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .chain(core::iter::once(rhs))
        .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let ints: Vec<i64> = ints
        .iter()
        .map(|v| (v / &g).to_i64().expect("hull coefficient overflow"))
        .collect();
    let (a, b) = ints.split_at(coeffs.len());
    (a.to_vec(), b[0])
}

struct Ray {
    v: Vec<BigInt>,
    zeros: Vec<u64>,
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn popcount(set: &[u64]) -> u32 {
    set.iter().map(|w| w.count_ones()).sum()
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn normalize(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

fn eval(g: &[i64], v: &[BigInt]) -> BigInt {
    g.iter()
        .zip(v)
        .filter(|(a, _)| **a != 0)
        .map(|(&a, x)| x * a)
        .sum()
}

/// Facets `a·x <= b` of the convex hull of integer points spanning `R^d`.
///
/// Valid inequalities `(b, -a)` form the cone `{z : (1, p)·z >= 0 ∀p}`, which
/// is pointed for full-dimensional input; its extreme rays are the facets.
fn full_dimensional_facets(points: &[Vec<i64>], d: usize) -> Vec<(Vec<i64>, i64)> {
    let gens: Vec<Vec<i64>> = points
        .iter()
        .map(|p| {
            let mut g = Vec::with_capacity(d + 1);
            g.push(1);
            g.extend_from_slice(p);
            g
        })
        .collect();
    let m = gens.len();
    let words = m.div_ceil(64);

    // Initial simplex cone from d+1 affinely independent points.
    let mut basis: Vec<usize> = Vec::with_capacity(d + 1);
    for i in 0..m {
        let mut trial: Vec<Vec<Rational>> = basis
            .iter()
            .map(|&b| gens[b].iter().map(|&v| int(v)).collect())
            .collect();
        trial.push(gens[i].iter().map(|&v| int(v)).collect());
        if row_echelon(trial, d + 1).pivots.len() == basis.len() + 1 {
            basis.push(i);
            if basis.len() == d + 1 {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), d + 1, "points are not full-dimensional");

    // Columns of the inverse of the basis matrix are the initial rays.
    let mut aug: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .map(|(r, &b)| {
            let mut row: Vec<Rational> = gens[b].iter().map(|&v| int(v)).collect();
            row.extend((0..=d).map(|c| int((c == r) as i64)));
            row
        })
        .collect();
    aug = row_echelon(aug, 2 * (d + 1)).rows;
    let mut processed = vec![false; m];
    for &b in &basis {
        processed[b] = true;
    }
    let mut rays: Vec<Ray> = (0..=d)
        .map(|c| {
            let col: Vec<Rational> = (0..=d).map(|r| aug[r][d + 1 + c].clone()).collect();
            let lcm = col
                .iter()
                .fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
            let mut v: Vec<BigInt> = col
                .iter()
                .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
                .collect();
            normalize(&mut v);
            let mut zeros = vec![0u64; words];
            for (r, &b) in basis.iter().enumerate() {
                if r != c {
                    set_bit(&mut zeros, b);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for i in 0..m {
        if processed[i] {
            continue;
        }
        processed[i] = true;
        let g = &gens[i];
        let signs: Vec<BigInt> = rays.iter().map(|r| eval(g, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| signs[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| signs[k].is_negative()).collect();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[q].zeros)
                    .map(|(a, b)| a & b)
                    .collect();
                if (popcount(&common) as usize) + 1 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == p || k == q || !is_subset(&common, &rays[k].zeros));
                if !adjacent {
                    continue;
                }
                let sp = &signs[p];
                let sq = -&signs[q];
                let mut v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| a * sp + b * &sq)
                    .collect();
                normalize(&mut v);
                let mut zeros = common;
                set_bit(&mut zeros, i);
                next.push(Ray { v, zeros });
            }
        }
        for (k, mut ray) in rays.into_iter().enumerate() {
            if signs[k].is_negative() {
                continue;
            }
            if signs[k].is_zero() {
                set_bit(&mut ray.zeros, i);
            }
            next.push(ray);
        }
        rays = next;
    }

    rays.into_iter()
        .map(|r| {
            let b = r.v[0].to_i64().expect("hull coefficient overflow");
            let a = r.v[1..]
                .iter()
                .map(|x| -x.to_i64().expect("hull coefficient overflow"))
                .collect();
            (a, b)
        })
        .collect()
}
