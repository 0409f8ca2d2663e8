use num_traits::Zero;
use proptest::prelude::*;
use xclab_core::lp::{lp_feasible, lp_optimize, LinearSystem, LpStatus, Relation, Sense};
use xclab_core::rational::{dot, int};
use xclab_core::Rational;

const BOX: i64 = 4;

/// Unique solution of a square system, if the matrix is nonsingular.
fn solve_square(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = m.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
                let v = &f * &rhs[c];
                rhs[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if m < k {
        return vec![];
    }
    let mut out = subsets(m - 1, k);
    for mut s in subsets(m - 1, k - 1) {
        s.push(m - 1);
        out.push(s);
    }
    out
}

/// Maximum over all basic feasible points of a bounded system.
fn brute_force_max(obj: &[Rational], sys: &LinearSystem) -> Option<Rational> {
    let n = sys.num_vars();
    let cons = sys.constraints();
    subsets(cons.len(), n)
        .into_iter()
        .filter_map(|idx| {
            let m = idx.iter().map(|&i| cons[i].coeffs.clone()).collect();
            let rhs = idx.iter().map(|&i| cons[i].rhs.clone()).collect();
            solve_square(m, rhs)
        })
        .filter(|x| sys.is_satisfied_by(x))
        .map(|x| dot(obj, &x))
        .max()
}

fn relation(code: u8) -> Relation {
    match code % 5 {
        0 | 1 => Relation::Le,
        2 | 3 => Relation::Ge,
        _ => Relation::Eq,
    }
}

fn boxed_system(vars: usize, rows: &[(Vec<i64>, u8, i64)]) -> LinearSystem {
    let mut sys = LinearSystem::new(vars);
    for (a, rel, b) in rows {
        sys.push(a[..vars].iter().map(|&v| int(v)).collect(), relation(*rel), int(*b))
            .unwrap();
    }
    for j in 0..vars {
        sys.bound(j, int(-BOX), int(BOX));
    }
    sys
}

fn row_strategy() -> impl Strategy<Value = (Vec<i64>, u8, i64)> {
    (prop::collection::vec(-3i64..=3, 4), any::<u8>(), -3i64..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn optimum_matches_vertex_enumeration(
        vars in 1usize..=4,
        rows in prop::collection::vec(row_strategy(), 0..=6),
        obj in prop::collection::vec(-3i64..=3, 4),
        minimize in any::<bool>(),
    ) {
        let sys = boxed_system(vars, &rows);
        let obj: Vec<Rational> = obj[..vars].iter().map(|&v| int(v)).collect();
        let sense = if minimize { Sense::Min } else { Sense::Max };
        let res = lp_optimize(&obj, &sys, sense).unwrap();
        let flipped: Vec<Rational> = obj.iter().map(|v| -v).collect();
        let expected = if minimize {
            brute_force_max(&flipped, &sys).map(|v| -v)
        } else {
            brute_force_max(&obj, &sys)
        };
        match expected {
            None => prop_assert_eq!(res.status, LpStatus::Infeasible),
            Some(opt) => {
                prop_assert_eq!(res.status, LpStatus::Feasible);
                let w = res.witness.clone().unwrap();
                prop_assert!(sys.is_satisfied_by(&w));
                prop_assert_eq!(dot(&obj, &w), opt.clone());
                prop_assert_eq!(res.optimum.clone().unwrap(), opt);
            }
        }
        prop_assert_eq!(lp_optimize(&obj, &sys, sense).unwrap(), res);
    }

    #[test]
    fn feasibility_witness_is_exact(
        vars in 1usize..=4,
        rows in prop::collection::vec(row_strategy(), 0..=6),
    ) {
        let sys = boxed_system(vars, &rows);
        let res = lp_feasible(&sys);
        let zero = vec![Rational::zero(); vars];
        prop_assert_eq!(res.is_feasible(), brute_force_max(&zero, &sys).is_some());
        if let Some(w) = res.witness {
            prop_assert!(sys.is_satisfied_by(&w));
        }
    }
}

#[test]
fn unbounded_ray() {
    let mut sys = LinearSystem::new(2);
    sys.push(vec![int(1), int(-1)], Relation::Le, int(1)).unwrap();
    sys.nonnegative(1);
    let res = lp_optimize(&[int(1), int(1)], &sys, Sense::Max).unwrap();
    assert_eq!(res.status, LpStatus::Unbounded);
    let res = lp_optimize(&[int(1), int(-1)], &sys, Sense::Max).unwrap();
    assert_eq!(res.optimum, Some(int(1)));
}
