//! Dense two-phase primal simplex for equality-form linear programs.
//!
//! Solves `min c·x  s.t.  A x = b, x ≥ 0`. Entering and leaving variables
//! follow Bland's rule, so the method terminates on every input. Callers
//! add their own slack columns for inequalities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest magnitude accepted as a pivot element, and the reduced-cost
/// threshold for optimality.
pub const PIVOT_TOL: f64 = 1e-9;

/// Phase-one objective above which the problem is declared infeasible.
const FEASIBILITY_TOL: f64 = 1e-8;

const RATIO_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    constraints: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, constraints: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        if rhs.len() != constraints.len() {
            return Err(Error::DimensionMismatch {
                expected: constraints.len(),
                found: rhs.len(),
            });
        }
        for row in &constraints {
            if row.len() != objective.len() {
                return Err(Error::DimensionMismatch {
                    expected: objective.len(),
                    found: row.len(),
                });
            }
        }
        Ok(LpProblem {
            objective,
            constraints,
            rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Vec<f64>] {
        &self.constraints
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn solve(&self) -> LpSolution {
        solve(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values; empty unless the status is `Optimal`.
    pub x: Vec<f64>,
    pub objective_value: f64,
    /// Phase-two reduced costs at termination, one per variable.
    pub reduced_costs: Vec<f64>,
}

impl LpSolution {
    fn failed(status: LpStatus) -> Self {
        LpSolution {
            status,
            x: Vec::new(),
            objective_value: f64::NAN,
            reduced_costs: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced costs; the last entry is the negated objective value.
    cost: Vec<f64>,
    basis: Vec<usize>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Bland's rule iterations over columns `0..allowed`.
    fn iterate(&mut self, allowed: usize) -> Outcome {
        let rhs = self.rhs_col();
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j] < -PIVOT_TOL) else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[enter];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = row[rhs] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - RATIO_TIE_TOL
                            || (ratio <= br + RATIO_TIE_TOL && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Outcome::Unbounded,
            }
        }
    }
}

/// Solves `p` to an optimal basic feasible solution, or reports why none
/// exists. Deterministic: the same problem always yields the same vertex.
pub fn solve(p: &LpProblem) -> LpSolution {
    let n = p.num_vars();
    let m = p.num_constraints();
    let width = n + m + 1;

    let mut rows = Vec::with_capacity(m);
    for (i, (a, &b)) in p.constraints.iter().zip(&p.rhs).enumerate() {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width];
        for (dst, src) in row.iter_mut().zip(a) {
            *dst = sign * src;
        }
        row[n + i] = 1.0;
        row[width - 1] = sign * b;
        rows.push(row);
    }

    // phase one: minimize the sum of artificials
    let mut cost = vec![0.0; width];
    for row in &rows {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[width - 1] -= row[width - 1];
    }
    let mut t = Tableau {
        rows,
        cost,
        basis: (n..n + m).collect(),
    };
    // the phase-one objective is bounded below by zero
    let _ = t.iterate(n + m);
    let infeasibility = -t.cost[width - 1];
    let scale = 1.0 + p.rhs.iter().fold(0.0f64, |acc, b| acc.max(b.abs()));
    if infeasibility > FEASIBILITY_TOL * scale {
        return LpSolution::failed(LpStatus::Infeasible);
    }

    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| t.rows[i][j].abs() > PIVOT_TOL) {
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
    let mut cost = vec![0.0; width];
    cost[..n].copy_from_slice(&p.objective);
    for (row, &bj) in t.rows.iter().zip(&t.basis) {
        let cb = p.objective[bj];
        if cb != 0.0 {
            for (v, a) in cost.iter_mut().zip(row) {
                *v -= cb * a;
            }
        }
    }
    for &bj in &t.basis {
        cost[bj] = 0.0;
    }
    t.cost = cost;
    if let Outcome::Unbounded = t.iterate(n) {
        return LpSolution::failed(LpStatus::Unbounded);
    }

    let mut x = vec![0.0; n];
    for (row, &bj) in t.rows.iter().zip(&t.basis) {
        x[bj] = row[width - 1];
    }
    let objective_value = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value,
        reduced_costs: t.cost[..n].to_vec(),
    }
}
