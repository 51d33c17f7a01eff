//! Coefficient fit of `Vol(sum lambda_i A_i)` on a positive integer grid.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{BodyTuple, DiscreteSimplex, MultiIndex, VolumePolynomial};
use crate::bodies::{minkowski_sum, volume, Body};
use crate::error::{Error, Result};
use crate::numerics::{solve_linear, Matrix};
use crate::rational::Rational;

/// Rows kept in echelon form so each candidate grid point can be tested for
/// independence without refactoring the whole system.
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn accepts(&mut self, mut row: Vec<Rational>) -> bool {
        for (pivot, basis) in &self.rows {
            if row[*pivot].is_zero() {
                continue;
            }
            let f = &row[*pivot] / &basis[*pivot];
            for (r, b) in row.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *r -= &f * b;
                }
            }
        }
        match row.iter().position(|v| !v.is_zero()) {
            Some(p) => {
                self.rows.push((p, row));
                true
            }
            None => false,
        }
    }
}

/// Points of `{1..=m}^k` with at least one coordinate equal to `m`, in
/// lexicographic order.
fn grid_shell(k: usize, m: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=m).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.retain(|p| p.contains(&m));
    out
}

/// Fits the volume polynomial from exact volumes of `sum lambda_i A_i`.
///
/// Grid points are taken in a fixed order, growing the grid until the fit
/// system has full rank; a tensor grid with `n + 1` values per axis is always
/// unisolvent for degree `n`, so the search stops by then.
pub fn volume_polynomial_interpolated(t: &BodyTuple) -> Result<VolumePolynomial> {
    let (k, n) = (t.len(), t.dim());
    let monomials = DiscreteSimplex::new(k, n).points();
    let weights: Vec<Rational> = monomials.iter().map(|i| Rational::from_integer(i.multinomial())).collect();
    let row_for = |lambda: &[Rational]| -> Vec<Rational> {
        monomials.iter().zip(&weights).map(|(i, w)| w * i.monomial(lambda)).collect()
    };

    let mut echelon = Echelon { rows: Vec::new() };
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    let mut m = 1;
    while chosen.len() < monomials.len() {
        if m > n as i64 + 1 {
            return Err(Error::Singular);
        }
        for p in grid_shell(k, m) {
            let lambda: Vec<Rational> = p.into_iter().map(|v| Rational::from_integer(v.into())).collect();
            if echelon.accepts(row_for(&lambda)) {
                chosen.push(lambda);
                if chosen.len() == monomials.len() {
                    break;
                }
            }
        }
        m += 1;
    }

    let mut system = Vec::with_capacity(chosen.len() * monomials.len());
    let mut rhs = Vec::with_capacity(chosen.len());
    for lambda in &chosen {
        system.extend(row_for(lambda));
        let parts: Vec<(Rational, Body)> = lambda.iter().cloned().zip(t.bodies().iter().cloned()).collect();
        rhs.push(volume(&minkowski_sum(&parts)?)?);
    }
    let a = Matrix::new(chosen.len(), monomials.len(), system)?;
    let coeffs = solve_linear(&a, &rhs)?;
    let map: BTreeMap<MultiIndex, Rational> = monomials.into_iter().zip(coeffs).collect();
    VolumePolynomial::new(k, n, map)
}
