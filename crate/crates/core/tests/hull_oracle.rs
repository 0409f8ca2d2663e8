use num_integer::Integer;
use proptest::prelude::*;
use xclab_core::linalg::RatMatrix;
use xclab_core::polytope::{cube_points, delta_i64, hull, is_nonredundant, slack_matrix, HPolytope, VertexSet};
use xclab_core::rational::int;

fn laplace(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * laplace(&minor)
        })
        .sum()
}

fn combinations(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..m {
        cur.push(i);
        combinations(m, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Facets of a full-dimensional point set: every hyperplane through `n`
/// affinely independent points that has all points on one side.
fn facets_by_subsets(x: &VertexSet) -> Vec<(Vec<i64>, i64)> {
    let n = x.n();
    let pts: Vec<Vec<i64>> = x.vertices().iter().map(|v| v.iter().map(|&c| c as i64).collect()).collect();
    let mut subsets = Vec::new();
    combinations(pts.len(), n, 0, &mut Vec::new(), &mut subsets);
    let mut out: Vec<(Vec<i64>, i64)> = Vec::new();
    for s in subsets {
        // Null vector z of rows (p, 1): a = z[..n], b = -z[n].
        let m: Vec<Vec<i64>> = s.iter().map(|&i| {
            let mut r = pts[i].clone();
            r.push(1);
            r
        }).collect();
        let z: Vec<i64> = (0..=n)
            .map(|k| {
                let minor: Vec<Vec<i64>> = m
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect())
                    .collect();
                if k % 2 == 0 { laplace(&minor) } else { -laplace(&minor) }
            })
            .collect();
        if z.iter().all(|&v| v == 0) {
            continue;
        }
        let g = z.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        let mut a: Vec<i64> = z[..n].iter().map(|v| v / g).collect();
        let mut b = -z[n] / g;
        let slack: Vec<i64> = pts.iter().map(|p| b - a.iter().zip(p).map(|(u, v)| u * v).sum::<i64>()).collect();
        if slack.iter().all(|&v| v <= 0) {
            a.iter_mut().for_each(|v| *v = -*v);
            b = -b;
        } else if !slack.iter().all(|&v| v >= 0) {
            continue;
        }
        if !out.contains(&(a.clone(), b)) {
            out.push((a, b));
        }
    }
    out.sort();
    out
}

fn rows_of(p: &HPolytope) -> Vec<(Vec<i64>, i64)> {
    let mut rows: Vec<(Vec<i64>, i64)> = p.a().iter().cloned().zip(p.b().iter().copied()).collect();
    rows.sort();
    rows
}

fn affine_dim(x: &VertexSet) -> usize {
    let base = &x.vertices()[0];
    let dirs: Vec<Vec<i64>> = x.vertices()[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(&a, &b)| a as i64 - b as i64).collect())
        .collect();
    if dirs.is_empty() {
        return 0;
    }
    RatMatrix::from_ints(&dirs).rank()
}

fn check_hull(x: &VertexSet) {
    let n = x.n();
    let p = hull(x).unwrap();
    let delta = delta_i64(n).unwrap();
    assert!(p.a().iter().flatten().all(|v| v.abs() <= delta));
    for point in cube_points(n) {
        let slacks: Vec<i64> = (0..p.num_rows())
            .map(|i| p.b()[i] - p.a()[i].iter().zip(&point).map(|(&a, &c)| a * c as i64).sum::<i64>())
            .collect();
        if x.contains(&point) {
            assert!(slacks.iter().all(|&s| s >= 0), "{x:?} {point:?}");
        } else {
            assert!(slacks.iter().any(|&s| s <= -1), "{x:?} {point:?}");
        }
    }
    assert!(is_nonredundant(&p), "{x:?}");
    if affine_dim(x) == n {
        assert_eq!(rows_of(&p), facets_by_subsets(x), "{x:?}");
    }
    let s = slack_matrix(&p, x).unwrap();
    let cap = int((n as i64 + 1) * delta);
    assert!(s.matrix().entries().iter().all(|e| *e >= int(0) && *e <= cap));
}

#[test]
fn exhaustive_up_to_three() {
    for n in 1..=3usize {
        for mask in 1..1u64 << (1 << n) {
            check_hull(&VertexSet::from_mask(n, mask).unwrap());
        }
    }
}

#[test]
fn hypercube_and_simplex_in_four() {
    let cube = hull(&VertexSet::from_mask(4, u16::MAX as u64).unwrap()).unwrap();
    assert_eq!(cube.num_rows(), 8);
    let simplex = VertexSet::new(4, vec![vec![0; 4], vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
    assert_eq!(hull(&simplex).unwrap().num_rows(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_sets_in_four(mask in 1u64..1 << 16) {
        check_hull(&VertexSet::from_mask(4, mask).unwrap());
    }
}
