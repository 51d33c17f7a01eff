//! Two-phase dense-tableau simplex over exact rationals.
//!
//! Solves `max c.x  s.t.  A x = b, x >= 0`. Pivoting follows Bland's
//! lowest-index rule for both the entering and the leaving variable, which
//! rules out cycling on degenerate vertices.

use num_traits::{Signed, Zero};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { optimum: Rational, solution: Vec<Rational> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// m rows, `width` variable columns plus the right-hand side at the end.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.t[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for v in self.t[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.t[i][j].is_zero() {
                        r -= &cost[b] * &self.t[i][j];
                    }
                }
                r.is_positive()
            });
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][j].is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / &self.t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }
}

pub fn simplex_max(objective: &[Rational], eq_lhs: &Matrix, eq_rhs: &[Rational]) -> Result<LpOutcome> {
    let (m, n) = (eq_lhs.rows(), eq_lhs.cols());
    if objective.len() != n || eq_rhs.len() != m {
        return Err(Error::Dimension(format!(
            "LP with {n} variables and {m} constraints got objective of length {} and rhs of length {}",
            objective.len(),
            eq_rhs.len()
        )));
    }
    let width = n + m;
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let flip = eq_rhs[i].is_negative();
        let mut row = vec![Rational::zero(); width + 1];
        for j in 0..n {
            row[j] = if flip { -&eq_lhs[(i, j)] } else { eq_lhs[(i, j)].clone() };
        }
        row[n + i] = Rational::from_integer(1.into());
        row[width] = eq_rhs[i].abs();
        t.push(row);
    }
    let mut tab = Tableau { t, basis: (n..width).collect(), width };

    // phase 1: drive the artificial variables to zero
    let mut phase1 = vec![Rational::zero(); width];
    for c in phase1.iter_mut().skip(n) {
        *c = Rational::from_integer((-1).into());
    }
    tab.optimize(&phase1, width);
    let residual: Rational = (0..m).filter(|&i| tab.basis[i] >= n).map(|i| tab.rhs(i).clone()).sum();
    if residual.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    // redundant equality
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut cost = objective.to_vec();
    cost.resize(width, Rational::zero());
    if !tab.optimize(&cost, n) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut solution = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        solution[b] = tab.rhs(i).clone();
    }
    let optimum = objective.iter().zip(&solution).map(|(c, x)| c * x).sum();
    Ok(LpOutcome::Optimal { optimum, solution })
}
