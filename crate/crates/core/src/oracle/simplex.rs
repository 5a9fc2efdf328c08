//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Small and slow by design of its callers: the oracle only solves systems
//! with a few dozen rows.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    // reduced costs; last entry is minus the objective value
    costs: Vec<BigRational>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.costs[col].is_zero() {
            let f = self.costs[col].clone();
            for (v, pv) in self.costs.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs to optimality over the allowed columns. Returns false if the
    /// objective is unbounded.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        let rhs = self.rhs();
        loop {
            let entering = (0..rhs).find(|&j| allowed[j] && self.costs[j].is_positive());
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[rhs] / &r[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
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
}

/// Maximizes `c . x` subject to `A x = b`, `x >= 0`.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let rhs = width - 1;

    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "constraint row {i} has wrong length");
        let flip = bi.is_negative();
        let mut t = vec![BigRational::zero(); width];
        for (j, v) in row.iter().enumerate() {
            t[j] = if flip { -v.clone() } else { v.clone() };
        }
        t[n + i] = BigRational::from_integer(1.into());
        t[rhs] = if flip { -bi.clone() } else { bi.clone() };
        rows.push(t);
    }

    // phase 1: maximize minus the sum of artificials
    let mut costs = vec![BigRational::zero(); width];
    for r in &rows {
        for j in (0..n).chain(std::iter::once(rhs)) {
            costs[j] += &r[j];
        }
    }
    let mut tab = Tableau {
        rows,
        basis: (n..n + m).collect(),
        costs,
        width,
    };
    let all = vec![true; rhs];
    tab.optimize(&all);
    if !tab.costs[rhs].is_zero() {
        return LpOutcome::Infeasible;
    }

    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2
    let mut costs = vec![BigRational::zero(); width];
    costs[..n].clone_from_slice(c);
    for (r, &bj) in tab.rows.iter().zip(&tab.basis) {
        let cb = &c[bj];
        if cb.is_zero() {
            continue;
        }
        for j in 0..width {
            if !r[j].is_zero() {
                costs[j] -= cb * &r[j];
            }
        }
    }
    tab.costs = costs;
    let allowed: Vec<bool> = (0..rhs).map(|j| j < n).collect();
    if !tab.optimize(&allowed) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![BigRational::zero(); n];
    for (r, &bj) in tab.rows.iter().zip(&tab.basis) {
        x[bj] = r[rhs].clone();
    }
    let value = -tab.costs[rhs].clone();
    LpOutcome::Optimal { x, value }
}
