//! Matroids over small ground sets with an explicit independence family.
//!
//! Subsets of the ground set `{0, …, n−1}` are bitmasks; bit `i` is element `i`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polytope::{canonical_order, delta_i64, hull, prune_redundant, system_contained_in, HPolytope, VertexSet};
use crate::rational::Rational;

/// Largest ground set accepted; the family is stored as a `2^n` membership table.
pub const MAX_GROUND: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    /// Independent sets in increasing mask order.
    independent: Vec<u64>,
    member: Vec<bool>,
}

pub trait IndependenceOracle {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, set: u64) -> bool;
}

impl IndependenceOracle for Matroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: u64) -> bool {
        self.member.get(set as usize).copied().unwrap_or(false)
    }
}

impl Matroid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn independent_sets(&self) -> &[u64] {
        &self.independent
    }

    /// `max |I|` over independent `I ⊆ set`.
    pub fn rank(&self, set: u64) -> u32 {
        self.independent
            .iter()
            .filter(|&&i| i & !set == 0)
            .map(|i| i.count_ones())
            .max()
            .unwrap_or(0)
    }
}

/// Checks `∅ ∈ 𝓘`, downward closure (axiom I) and exchange (axiom II).
///
/// Violations carry a witness pair of masks: for axiom I a member and a
/// missing subset of it; for axiom II the smaller set `I` and larger set `J`
/// admitting no exchange element.
pub fn validate_matroid(n: usize, family: &[u64]) -> Result<Matroid> {
    if n > MAX_GROUND {
        return Err(Error::Domain(format!("ground set of size {n} exceeds {MAX_GROUND}")));
    }
    let mut member = vec![false; 1 << n];
    for &s in family {
        if s >> n != 0 {
            return Err(Error::Domain(format!("set {s:#b} is not a subset of a {n}-element ground set")));
        }
        member[s as usize] = true;
    }
    let independent: Vec<u64> = (0..1u64 << n).filter(|&s| member[s as usize]).collect();
    if !member[0] {
        let first = independent.first().copied().unwrap_or(0);
        return Err(Error::Axiom { axiom: 1, first: first as u32, second: 0 });
    }
    for &s in &independent {
        for i in 0..n {
            let sub = s & !(1 << i);
            if sub != s && !member[sub as usize] {
                return Err(Error::Axiom { axiom: 1, first: s as u32, second: sub as u32 });
            }
        }
    }
    for &i in &independent {
        for &j in &independent {
            if i.count_ones() >= j.count_ones() {
                continue;
            }
            let mut extra = j & !i;
            let mut found = false;
            while extra != 0 {
                let z = extra & extra.wrapping_neg();
                if member[(i | z) as usize] {
                    found = true;
                    break;
                }
                extra &= extra - 1;
            }
            if !found {
                return Err(Error::Axiom { axiom: 2, first: i as u32, second: j as u32 });
            }
        }
    }
    Ok(Matroid { n, independent, member })
}

/// `U_{k,n}`: all subsets with at most `k` elements.
pub fn uniform(n: usize, k: usize) -> Result<Matroid> {
    if k > n {
        return Err(Error::Domain(format!("uniform matroid needs k <= n, got k={k}, n={n}")));
    }
    if n > MAX_GROUND {
        return Err(Error::Domain(format!("ground set of size {n} exceeds {MAX_GROUND}")));
    }
    let family: Vec<u64> = (0..1u64 << n).filter(|s| s.count_ones() as usize <= k).collect();
    validate_matroid(n, &family)
}

/// Forests of a simple graph; element `e` is `edges[e]`.
pub fn graphic(nodes: usize, edges: &[(usize, usize)]) -> Result<Matroid> {
    for (e, &(a, b)) in edges.iter().enumerate() {
        if a >= nodes || b >= nodes || a == b {
            return Err(Error::Domain(format!("edge {e} = ({a}, {b}) is not a simple edge on {nodes} nodes")));
        }
        let key = (a.min(b), a.max(b));
        if edges[..e].iter().any(|&(c, d)| (c.min(d), c.max(d)) == key) {
            return Err(Error::Domain(format!("edge {e} = ({a}, {b}) is repeated")));
        }
    }
    let m = edges.len();
    if m > MAX_GROUND {
        return Err(Error::Domain(format!("ground set of size {m} exceeds {MAX_GROUND}")));
    }
    let family: Vec<u64> = (0..1u64 << m).filter(|&s| is_forest(nodes, edges, s)).collect();
    validate_matroid(m, &family)
}

fn is_forest(nodes: usize, edges: &[(usize, usize)], set: u64) -> bool {
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (e, &(a, b)) in edges.iter().enumerate() {
        if set >> e & 1 == 0 {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Max-weight independent set: elements by decreasing weight (ties by index),
/// skipping nonpositive weights, each kept if independence is preserved.
pub fn greedy_optimize<O: IndependenceOracle>(m: &O, weights: &[Rational]) -> Result<(u64, Rational)> {
    if weights.len() != m.ground_size() {
        return Err(Error::Dimension(format!(
            "{} weights for a ground set of size {}",
            weights.len(),
            m.ground_size()
        )));
    }
    let mut order: Vec<usize> = (0..weights.len()).filter(|&i| weights[i].is_positive()).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
    let mut set = 0u64;
    let mut value = Rational::zero();
    for i in order {
        if m.is_independent(set | 1 << i) {
            set |= 1 << i;
            value += &weights[i];
        }
    }
    Ok((set, value))
}

/// `χ(𝓘)` and its rank-inequality description, pruned by LP and checked
/// against the facet description of the convex hull.
pub fn matroid_polytope(m: &Matroid) -> Result<(VertexSet, HPolytope)> {
    let n = m.n;
    if n == 0 {
        return Err(Error::Domain("matroid polytope needs a nonempty ground set".into()));
    }
    let points: Vec<Vec<u8>> = m
        .independent
        .iter()
        .map(|&s| (0..n).map(|i| (s >> i & 1) as u8).collect())
        .collect();
    let x = VertexSet::new(n, points)?;

    let mut rows: Vec<(Vec<i64>, i64)> = (1..1u64 << n)
        .map(|s| ((0..n).map(|i| (s >> i & 1) as i64).collect(), m.rank(s) as i64))
        .collect();
    for i in 0..n {
        let mut a = vec![0i64; n];
        a[i] = -1;
        rows.push((a, 0));
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    // Larger rank sets go first; nonnegativity rows are tried last.
    order.sort_by_key(|&k| match k.checked_sub((1 << n) - 1) {
        None => (0, n - (k + 1).count_ones() as usize),
        Some(i) => (1, i),
    });
    let mut kept = prune_redundant(n, rows, &order);
    canonical_order(&mut kept);
    let (a, b) = kept.into_iter().unzip();
    let p = HPolytope::new(n, a, b, delta_i64(n)?)?;

    let reference = hull(&x)?;
    if !system_contained_in(&p, &reference) || !system_contained_in(&reference, &p) {
        return Err(Error::Internal("pruned rank system differs from the convex hull".into()));
    }
    Ok((x, p))
}
