//! Exact two-phase simplex over rationals.
//!
//! Problems are given in standard equality form
//!
//! ```text
//! maximize  c.x   subject to  A x = b,  x >= 0
//! ```
//!
//! Pivoting follows Bland's rule (least-index entering column, least-index
//! leaving basic variable on ratio ties), which terminates without cycling.

use num_traits::{One, Signed, Zero};

use crate::linalg::RatMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs for maximization; last entry is minus the objective.
    objective: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns at or beyond this index may not enter the basis.
    enter_limit: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.objective.len() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for x in self.rows[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[row].clone();
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[col].clone();
            if factor.is_zero() {
                return;
            }
            for (t, p) in target.iter_mut().zip(&pivot_row) {
                *t -= &factor * p;
            }
        };
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i != row {
                eliminate(r);
            }
        }
        eliminate(&mut self.objective);
        self.basis[row] = col;
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let rhs = self.rhs();
        let mut obj: Vec<Rational> = (0..=rhs)
            .map(|j| costs.get(j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        obj[rhs] = Rational::zero();
        for (r, &b) in self.rows.iter().zip(&self.basis) {
            let cb = costs.get(b).cloned().unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(r) {
                *o -= &cb * x;
            }
        }
        self.objective = obj;
    }

    /// Runs Bland's-rule iterations to optimality. Returns false if unbounded.
    fn optimize(&mut self) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(col) = (0..self.enter_limit).find(|&j| self.objective[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[rhs] / &r[col];
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
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn value(&self) -> Rational {
        -self.objective[self.rhs()].clone()
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let rhs = self.rhs();
        let mut x = vec![Rational::zero(); n];
        for (r, &b) in self.rows.iter().zip(&self.basis) {
            if b < n {
                x[b] = r[rhs].clone();
            }
        }
        x
    }
}

/// Phase one: builds a tableau whose basis is feasible for `Ax = b, x >= 0`,
/// with artificial columns removed. `None` when the system is infeasible.
fn phase_one(a: &RatMatrix, b: &[Rational]) -> Option<Tableau> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m, "right-hand side length must match constraint count");
    let width = n + m + 1;
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut r = vec![Rational::zero(); width];
            for (j, x) in r.iter_mut().take(n).enumerate() {
                *x = if flip { -a.get(i, j).clone() } else { a.get(i, j).clone() };
            }
            r[n + i] = Rational::one();
            r[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
            r
        })
        .collect();
    let mut t = Tableau {
        rows,
        objective: vec![Rational::zero(); width],
        basis: (n..n + m).collect(),
        enter_limit: n + m,
    };
    let mut costs = vec![Rational::zero(); n + m];
    for c in costs.iter_mut().skip(n) {
        *c = -Rational::one();
    }
    t.set_costs(&costs);
    let bounded = t.optimize();
    debug_assert!(bounded, "phase one objective is bounded by zero");
    if !t.value().is_zero() {
        return None;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
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
    for r in t.rows.iter_mut() {
        let rhs = r[width - 1].clone();
        r.truncate(n);
        r.push(rhs);
    }
    t.objective = vec![Rational::zero(); n + 1];
    t.enter_limit = n;
    Some(t)
}

/// Some `x >= 0` with `Ax = b`, or `None` if there is none.
pub fn feasible_point(a: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    phase_one(a, b).map(|t| t.solution(a.cols()))
}

/// Maximizes `c.x` over `{x >= 0 : Ax = b}`.
pub fn maximize(a: &RatMatrix, b: &[Rational], c: &[Rational]) -> LpOutcome {
    assert_eq!(c.len(), a.cols(), "objective length must match variable count");
    let Some(mut t) = phase_one(a, b) else {
        return LpOutcome::Infeasible;
    };
    t.set_costs(c);
    if !t.optimize() {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal { x: t.solution(a.cols()), value: t.value() }
}
