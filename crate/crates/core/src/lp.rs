//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Generic over any ordered field; with `BigRational` every pivot is exact
//! and Bland's rule guarantees termination.

use num_traits::Num;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

/// `minimize objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    num_vars: usize,
    objective: Vec<T>,
    constraints: Vec<(Vec<T>, Relation, T)>,
}

impl<T: Clone + Num + PartialOrd> LinearProgram<T> {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, objective: vec![T::zero(); num_vars], constraints: Vec::new() }
    }

    pub fn set_objective(&mut self, objective: Vec<T>) {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> LpOutcome<T> {
        let slack_count = self.constraints.iter().filter(|c| c.1 != Relation::Eq).count();
        let width = self.num_vars + slack_count;
        let mut rows = Vec::with_capacity(self.constraints.len());
        let mut rhs = Vec::with_capacity(self.constraints.len());
        let mut slack = self.num_vars;
        for (coeffs, rel, b) in &self.constraints {
            let mut row = coeffs.clone();
            row.resize(width, T::zero());
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = T::zero() - T::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            rows.push(row);
            rhs.push(b.clone());
        }
        let mut cost = self.objective.clone();
        cost.resize(width, T::zero());
        match standard_form(&rows, &rhs, &cost) {
            LpOutcome::Optimal { mut x, value } => {
                x.truncate(self.num_vars);
                LpOutcome::Optimal { x, value }
            }
            other => other,
        }
    }
}

struct Tableau<T> {
    /// `m` constraint rows of width `cols + 1`; the last entry is the right-hand side.
    rows: Vec<Vec<T>>,
    /// Reduced costs, last entry is minus the objective value.
    cost: Vec<T>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: Clone + Num + PartialOrd> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over the columns allowed by `eligible`.
    /// Returns false when the objective is unbounded below.
    fn optimize(&mut self, eligible: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let Some(enter) = (0..self.cols).find(|&j| eligible(j) && self.cost[j] < T::zero()) else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter] > T::zero() {
                    let ratio = row[self.cols].clone() / row[enter].clone();
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// `minimize cost . x` subject to `rows x = rhs`, `x >= 0`.
pub fn standard_form<T: Clone + Num + PartialOrd>(rows: &[Vec<T>], rhs: &[T], cost: &[T]) -> LpOutcome<T> {
    let m = rows.len();
    let n = cost.len();
    let cols = n + m;
    // phase one: artificial variable per row, rows sign-normalized so rhs >= 0
    let mut t = Tableau { rows: Vec::with_capacity(m), cost: vec![T::zero(); cols + 1], basis: Vec::with_capacity(m), cols };
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        let flip = *b < T::zero();
        let mut r: Vec<T> = row
            .iter()
            .map(|v| if flip { T::zero() - v.clone() } else { v.clone() })
            .collect();
        r.resize(cols + 1, T::zero());
        r[n + i] = T::one();
        r[cols] = if flip { T::zero() - b.clone() } else { b.clone() };
        for (c, v) in t.cost.iter_mut().zip(&r) {
            *c = c.clone() - v.clone();
        }
        t.rows.push(r);
        t.basis.push(n + i);
    }
    for i in 0..m {
        t.cost[n + i] = T::zero();
    }
    t.optimize(&|_| true);
    if t.cost[cols] < T::zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis; rows with no real entry are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    // phase two
    t.cost = cost.to_vec();
    t.cost.resize(cols + 1, T::zero());
    for (r, &b) in t.basis.clone().iter().enumerate() {
        if !t.cost[b].is_zero() {
            let f = t.cost[b].clone();
            for (v, rv) in t.cost.iter_mut().zip(&t.rows[r]) {
                *v = v.clone() - f.clone() * rv.clone();
            }
        }
    }
    if !t.optimize(&|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![T::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        x[b] = t.rows[r][cols].clone();
    }
    let value = T::zero() - t.cost[cols].clone();
    LpOutcome::Optimal { x, value }
}
