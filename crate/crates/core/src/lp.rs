//! Exact rational linear programming.
//!
//! Two-phase primal simplex on a dense tableau with Bland's rule. Variables
//! are free unless a constraint of the form `a·x_j >= 0` (a > 0) pins their
//! sign, in which case the row is absorbed into the variable instead of the
//! tableau. Equations stay equations; only `<=`/`>=` rows get slacks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flip(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A conjunction of linear constraints over `num_vars` unrestricted variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    num_vars: usize,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients, system has {} variables",
                coeffs.len(),
                self.num_vars
            )));
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    /// Adds `lo <= x_var <= hi`.
    pub fn bound(&mut self, var: usize, lo: Rational, hi: Rational) {
        let mut e = vec![Rational::zero(); self.num_vars];
        e[var] = crate::rational::int(1);
        self.constraints.push(Constraint {
            coeffs: e.clone(),
            relation: Relation::Ge,
            rhs: lo,
        });
        self.constraints.push(Constraint {
            coeffs: e,
            relation: Relation::Le,
            rhs: hi,
        });
    }

    /// Adds `x_var >= 0`.
    pub fn nonnegative(&mut self, var: usize) {
        let mut e = vec![Rational::zero(); self.num_vars];
        e[var] = crate::rational::int(1);
        self.constraints.push(Constraint {
            coeffs: e,
            relation: Relation::Ge,
            rhs: Rational::zero(),
        });
    }

    /// A copy of the system without constraint `index`.
    pub fn without(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.constraints.remove(index);
        out
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(&dot(&c.coeffs, x), &c.rhs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    pub witness: Option<Vec<Rational>>,
    pub optimum: Option<Rational>,
}

impl LpResult {
    fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            witness: None,
            optimum: None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Feasible
    }
}

/// Decides feasibility exactly, returning a witness when one exists.
pub fn lp_feasible(sys: &LinearSystem) -> LpResult {
    solve(sys, None)
}

/// Optimizes `objective · x` over the system.
pub fn lp_optimize(objective: &[Rational], sys: &LinearSystem, sense: Sense) -> Result<LpResult> {
    if objective.len() != sys.num_vars {
        return Err(Error::Dimension(format!(
            "objective of length {} for {} variables",
            objective.len(),
            sys.num_vars
        )));
    }
    Ok(solve(sys, Some((objective, sense))))
}

/// Maps each original variable onto one (sign-restricted) or two (free) columns.
#[derive(Clone, Copy)]
enum VarColumns {
    NonNeg(usize),
    Free(usize, usize),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of a minimization problem.
    cost: Vec<Rational>,
    /// Negated objective value.
    cost_rhs: Rational,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let support: Vec<usize> = (0..self.rows[r].len())
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        let pivot_row = core::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for &j in &support {
                self.rows[i][j] -= &factor * &pivot_row[j];
            }
            if !pivot_rhs.is_zero() {
                self.rhs[i] -= &factor * &pivot_rhs;
            }
        }
        if !self.cost[c].is_zero() {
            let factor = self.cost[c].clone();
            for &j in &support {
                self.cost[j] -= &factor * &pivot_row[j];
            }
            if !pivot_rhs.is_zero() {
                self.cost_rhs -= &factor * &pivot_rhs;
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Runs Bland-rule simplex over the first `allowed` columns.
    fn run(&mut self, allowed: usize) -> Outcome {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded,
            }
        }
    }

    fn column_values(&self, ncols: usize) -> Vec<Rational> {
        let mut vals = vec![Rational::zero(); ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < ncols {
                vals[b] = self.rhs[i].clone();
            }
        }
        vals
    }
}

fn solve(sys: &LinearSystem, objective: Option<(&[Rational], Sense)>) -> LpResult {
    let n = sys.num_vars;

    // Absorb sign constraints and check constant rows.
    let mut nonneg = vec![false; n];
    let mut kept: Vec<&Constraint> = Vec::new();
    for c in &sys.constraints {
        let mut support = c.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero());
        match (support.next(), support.next()) {
            (None, _) => {
                if !c.relation.holds(&Rational::zero(), &c.rhs) {
                    return LpResult::infeasible();
                }
            }
            (Some((j, a)), None)
                if c.rhs.is_zero()
                    && ((a.is_positive() && c.relation == Relation::Ge)
                        || (a.is_negative() && c.relation == Relation::Le)) =>
            {
                nonneg[j] = true;
            }
            _ => kept.push(c),
        }
    }

    let mut var_cols = Vec::with_capacity(n);
    let mut ncols = 0;
    for &nn in &nonneg {
        if nn {
            var_cols.push(VarColumns::NonNeg(ncols));
            ncols += 1;
        } else {
            var_cols.push(VarColumns::Free(ncols, ncols + 1));
            ncols += 2;
        }
    }
    let structural = ncols;
    let m = kept.len();
    let slack_count = kept.iter().filter(|c| c.relation != Relation::Eq).count();

    // Normalize right-hand sides to be nonnegative.
    let mut rels = Vec::with_capacity(m);
    let mut negate = Vec::with_capacity(m);
    for c in &kept {
        let neg = c.rhs.is_negative();
        negate.push(neg);
        rels.push(if neg { c.relation.flip() } else { c.relation });
    }
    let art_count = rels.iter().filter(|r| **r != Relation::Le).count();
    let total = structural + slack_count + art_count;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_slack = structural;
    let mut next_art = structural + slack_count;
    for (i, c) in kept.iter().enumerate() {
        let mut row = vec![Rational::zero(); total];
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a = if negate[i] { -a } else { a.clone() };
            match var_cols[j] {
                VarColumns::NonNeg(p) => row[p] = a,
                VarColumns::Free(p, q) => {
                    row[q] = -&a;
                    row[p] = a;
                }
            }
        }
        let one = crate::rational::int(1);
        match rels[i] {
            Relation::Le => {
                row[next_slack] = one;
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -one.clone();
                next_slack += 1;
                row[next_art] = one;
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = one;
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
        rhs.push(if negate[i] { -&c.rhs } else { c.rhs.clone() });
    }

    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        cost: vec![Rational::zero(); total],
        cost_rhs: Rational::zero(),
    };
    let first_art = structural + slack_count;

    if art_count > 0 {
        // Phase 1: minimize the sum of artificials.
        for j in first_art..total {
            tab.cost[j] = crate::rational::int(1);
        }
        for i in 0..m {
            if tab.basis[i] >= first_art {
                for j in 0..total {
                    if !tab.rows[i][j].is_zero() {
                        tab.cost[j] -= &tab.rows[i][j];
                    }
                }
                tab.cost_rhs -= &tab.rhs[i];
            }
        }
        tab.run(total);
        if tab.cost_rhs.is_negative() {
            return LpResult::infeasible();
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut redundant = Vec::new();
        for i in 0..m {
            if tab.basis[i] < first_art {
                continue;
            }
            match (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => redundant.push(i),
            }
        }
        for &i in redundant.iter().rev() {
            tab.rows.remove(i);
            tab.rhs.remove(i);
            tab.basis.remove(i);
        }
        for row in tab.rows.iter_mut() {
            row.truncate(first_art);
        }
    }
    let width = first_art;

    let mut optimum = None;
    if let Some((c, sense)) = objective {
        let mut cost = vec![Rational::zero(); width];
        for (j, a) in c.iter().enumerate() {
            let a = match sense {
                Sense::Min => a.clone(),
                Sense::Max => -a,
            };
            match var_cols[j] {
                VarColumns::NonNeg(p) => cost[p] = a,
                VarColumns::Free(p, q) => {
                    cost[q] = -&a;
                    cost[p] = a;
                }
            }
        }
        let mut cost_rhs = Rational::zero();
        for i in 0..tab.rows.len() {
            let cb = cost[tab.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !tab.rows[i][j].is_zero() {
                    cost[j] -= &cb * &tab.rows[i][j];
                }
            }
            cost_rhs -= &cb * &tab.rhs[i];
        }
        tab.cost = cost;
        tab.cost_rhs = cost_rhs;
        if let Outcome::Unbounded = tab.run(width) {
            return LpResult {
                status: LpStatus::Unbounded,
                witness: None,
                optimum: None,
            };
        }
    }

    let cols = tab.column_values(width);
    let witness: Vec<Rational> = var_cols
        .iter()
        .map(|vc| match *vc {
            VarColumns::NonNeg(p) => cols[p].clone(),
            VarColumns::Free(p, q) => &cols[p] - &cols[q],
        })
        .collect();
    debug_assert!(sys.is_satisfied_by(&witness), "simplex witness violates system");
    if let Some((c, _)) = objective {
        optimum = Some(dot(c, &witness));
    }
    LpResult {
        status: LpStatus::Feasible,
        witness: Some(witness),
        optimum,
    }
}
