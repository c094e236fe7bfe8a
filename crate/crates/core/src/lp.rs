//! Exact two-phase simplex over the rationals with Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arith::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

/// `minimize objective·x` subject to the constraints, with `x ≥ 0` except
/// for variables marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub free: Vec<bool>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self { objective: vec![Rat::zero(); num_vars], free: vec![false; num_vars], constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, relation: Relation, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    a: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
    /// first artificial column
    art: usize,
    /// column of each variable's positive part, and negative part if free
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut var_cols = Vec::new();
        let mut next = 0;
        for &f in &lp.free {
            if f {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            } else {
                var_cols.push((next, None));
                next += 1;
            }
        }
        let slack_start = next;
        let slacks = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let art = slack_start + slacks;
        let m = lp.constraints.len();
        let cols = art + m;
        let mut a = Vec::with_capacity(m);
        let mut slack = slack_start;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rat::zero(); cols + 1];
            for (v, coef) in c.coeffs.iter().enumerate() {
                let (p, n) = var_cols[v];
                row[p] = coef.clone();
                if let Some(n) = n {
                    row[n] = -coef.clone();
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = Rat::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[cols] = c.rhs.clone();
            if row[cols].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[art + i] = Rat::one();
            a.push(row);
        }
        Tableau { a, basis: (art..art + m).collect(), cols, art, var_cols }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].recip();
        for x in self.a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` over columns `< limit`; returns false if unbounded.
    fn optimize(&mut self, cost: &[Rat], limit: usize) -> bool {
        loop {
            let reduced = |t: &Tableau, j: usize| -> Rat {
                let mut z = cost[j].clone();
                for (i, &b) in t.basis.iter().enumerate() {
                    if !t.a[i][j].is_zero() && !cost[b].is_zero() {
                        z -= &cost[b] * &t.a[i][j];
                    }
                }
                z
            };
            let entering = (0..limit).filter(|j| !self.basis.contains(j)).find(|&j| reduced(self, j).is_negative());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if self.a[i][c].is_positive() {
                    let ratio = &self.a[i][self.cols] / &self.a[i][c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let total = self.cols;
        let mut phase1 = vec![Rat::zero(); total];
        for c in phase1.iter_mut().skip(self.art) {
            *c = Rat::one();
        }
        self.optimize(&phase1, total);
        let infeasibility: Rat =
            self.basis.iter().enumerate().filter(|&(_, &b)| b >= self.art).map(|(i, _)| self.a[i][total].clone()).sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.art {
                if let Some(c) = (0..self.art).find(|&c| !self.a[i][c].is_zero()) {
                    self.pivot(i, c);
                } else {
                    self.a.remove(i);
                    self.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        let mut cost = vec![Rat::zero(); total];
        for (v, coef) in lp.objective.iter().enumerate() {
            let (p, n) = self.var_cols[v];
            cost[p] = coef.clone();
            if let Some(n) = n {
                cost[n] = -coef.clone();
            }
        }
        if !self.optimize(&cost, self.art) {
            return LpOutcome::Unbounded;
        }
        let mut col_values = vec![Rat::zero(); total];
        for (i, &b) in self.basis.iter().enumerate() {
            col_values[b] = self.a[i][total].clone();
        }
        let x: Vec<Rat> = self
            .var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &col_values[p] - &col_values[n],
                None => col_values[p].clone(),
            })
            .collect();
        let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome::Optimal { x, value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn small_minimization() {
        // min x + y  s.t. x + 2y ≥ 2, 3x + y ≥ 3
        let mut lp = LinearProgram::new(2);
        lp.objective = r(&[1, 1]);
        lp.add(r(&[1, 2]), Relation::Ge, rat(2, 1));
        lp.add(r(&[3, 1]), Relation::Ge, rat(3, 1));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![rat(4, 5), rat(3, 5)]);
                assert_eq!(value, rat(7, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add(r(&[1]), Relation::Le, rat(-1, 1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.objective = r(&[-1]);
        lp.add(r(&[1]), Relation::Ge, rat(1, 1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min y s.t. x = -3, y - x ≥ 0 with x free: y = 0 is optimal
        let mut lp = LinearProgram::new(2);
        lp.free[0] = true;
        lp.objective = r(&[0, 1]);
        lp.add(r(&[1, 0]), Relation::Eq, rat(-3, 1));
        lp.add(r(&[-1, 1]), Relation::Ge, rat(0, 1));
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![rat(-3, 1), rat(0, 1)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.objective = r(&[1, 0]);
        lp.add(r(&[1, 1]), Relation::Eq, rat(2, 1));
        lp.add(r(&[2, 2]), Relation::Eq, rat(4, 1));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(0, 1));
                assert_eq!(x, vec![rat(0, 1), rat(2, 1)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
