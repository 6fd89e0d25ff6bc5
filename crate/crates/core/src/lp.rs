//! Exact rational linear programming via the two-phase simplex method.
//!
//! Minimizes `objective . x` subject to linear constraints and `x >= 0`,
//! entirely in rational arithmetic, so results carry no rounding error.
//! Bland's rule (smallest eligible index enters; ratio ties resolve toward
//! the smallest basic index) guarantees termination; a pivot ceiling turns a
//! would-be runaway into an error instead of a hang.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::value::Rat;

pub const PIVOT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

/// minimize `objective . x` subject to `constraints` and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, solution: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&Rat, &[Rat])> {
        match self {
            LpOutcome::Optimal { value, solution } => Some((value, solution)),
            _ => None,
        }
    }
}

struct Tableau {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    basis: Vec<usize>,
    dropped: Vec<bool>,
    pivots: u64,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > PIVOT_LIMIT {
            return Err(Error::PivotLimitExceeded(PIVOT_LIMIT));
        }
        let p = self.a[r][e].clone();
        debug_assert!(!p.is_zero());
        for v in self.a[r].iter_mut() {
            *v = &*v / &p;
        }
        self.b[r] = &self.b[r] / &p;
        let pivot_row = self.a[r].clone();
        let pivot_rhs = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.dropped[i] {
                continue;
            }
            let f = self.a[i][e].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pr) in self.a[i].iter_mut().zip(pivot_row.iter()) {
                *v = &*v - &(&f * pr);
            }
            self.b[i] = &self.b[i] - &(&f * &pivot_rhs);
        }
        self.basis[r] = e;
        Ok(())
    }

    /// Reduced costs c_j - c_B B^-1 A_j, recomputed from scratch; the extra
    /// multiplications are cheap at these sizes and avoid drift in the
    /// bookkeeping (the entries themselves stay exact either way).
    fn reduced_costs(&self, cost: &[Rat]) -> Vec<Rat> {
        let mut red = cost.to_vec();
        for (i, row) in self.a.iter().enumerate() {
            if self.dropped[i] {
                continue;
            }
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (r, v) in red.iter_mut().zip(row.iter()) {
                *r = &*r - &(cb * v);
            }
        }
        red
    }

    /// Run simplex to optimality over the first `ncols` columns.
    /// Returns false when the objective is unbounded below.
    fn optimize(&mut self, cost: &[Rat], ncols: usize) -> Result<bool> {
        loop {
            let red = self.reduced_costs(cost);
            let Some(e) = (0..ncols).find(|&j| red[j].is_negative()) else {
                return Ok(true);
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for i in 0..self.a.len() {
                if self.dropped[i] || !self.a[i][e].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][e];
                let take = match &best {
                    None => true,
                    Some(r) => {
                        ratio < *r
                            || (ratio == *r
                                && self.basis[i] < self.basis[leave.expect("set with best")])
                    }
                };
                if take {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
            match leave {
                Some(r) => self.pivot(r, e)?,
                None => return Ok(false),
            }
        }
    }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    if lp.objective.len() != lp.num_vars {
        return Err(Error::InvalidInput(format!(
            "objective has {} coefficients for {} variables",
            lp.objective.len(),
            lp.num_vars
        )));
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != lp.num_vars {
            return Err(Error::InvalidInput(format!(
                "constraint {} has {} coefficients for {} variables",
                i + 1,
                c.coeffs.len(),
                lp.num_vars
            )));
        }
    }

    let nv = lp.num_vars;
    let rows = lp.constraints.len();
    let slacks = lp.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
    let art_base = nv + slacks;
    let ncols = art_base + rows;

    let mut a = vec![vec![Rat::zero(); ncols]; rows];
    let mut b = vec![Rat::zero(); rows];
    let mut next_slack = nv;
    for (i, c) in lp.constraints.iter().enumerate() {
        for (j, v) in c.coeffs.iter().enumerate() {
            a[i][j] = v.clone();
        }
        match c.rel {
            Relation::Le => {
                a[i][next_slack] = Rat::one();
                next_slack += 1;
            }
            Relation::Ge => {
                a[i][next_slack] = -Rat::one();
                next_slack += 1;
            }
            Relation::Eq => {}
        }
        b[i] = c.rhs.clone();
        if b[i].is_negative() {
            for v in a[i].iter_mut() {
                *v = -&*v;
            }
            b[i] = -&b[i];
        }
        // Artificial variable on every row gives a trivially feasible start.
        a[i][art_base + i] = Rat::one();
    }

    let mut t = Tableau {
        a,
        b,
        basis: (0..rows).map(|i| art_base + i).collect(),
        dropped: vec![false; rows],
        pivots: 0,
    };

    // Phase 1: minimize the sum of artificials.
    let mut phase1_cost = vec![Rat::zero(); ncols];
    for j in art_base..ncols {
        phase1_cost[j] = Rat::one();
    }
    if !t.optimize(&phase1_cost, ncols)? {
        return Err(Error::Internal("phase 1 objective is bounded by zero".into()));
    }
    let infeasibility: Rat = (0..rows)
        .filter(|&i| t.basis[i] >= art_base)
        .map(|i| t.b[i].clone())
        .sum();
    if !infeasibility.is_zero() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive leftover artificials out of the basis; a row with no eligible
    // pivot is linearly dependent on the others and drops out.
    for i in 0..rows {
        if t.basis[i] < art_base {
            continue;
        }
        debug_assert!(t.b[i].is_zero());
        match (0..art_base).find(|&j| !t.a[i][j].is_zero()) {
            Some(j) => t.pivot(i, j)?,
            None => t.dropped[i] = true,
        }
    }

    // Phase 2: the real objective over structural and slack columns only.
    let mut phase2_cost = vec![Rat::zero(); ncols];
    phase2_cost[..nv].clone_from_slice(&lp.objective);
    if !t.optimize(&phase2_cost, art_base)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut solution = vec![Rat::zero(); nv];
    for i in 0..rows {
        if !t.dropped[i] && t.basis[i] < nv {
            solution[t.basis[i]] = t.b[i].clone();
        }
    }
    let value: Rat = lp.objective.iter().zip(solution.iter()).map(|(c, x)| c * x).sum();
    Ok(LpOutcome::Optimal { value, solution })
}
