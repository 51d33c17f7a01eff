use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Matrix, SymMatrix};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exact determinant by fraction-free (Bareiss) elimination on rows scaled
/// to integers.
pub fn determinant(m: &Matrix) -> Result<Rational> {
    let n = m.require_square("determinant")?;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(Rational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    let det = if negate { -det } else { det };
    Ok(Rational::new(det, scale))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(a: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].recip();
        for j in c..cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let d = &f * &a[(r, j)];
                a[(i, j)] -= d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Solves the square system `a x = b` exactly.
pub fn solve_linear(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.require_square("solve_linear")?;
    if b.len() != n {
        return Err(Error::Dimension(format!("right-hand side of length {} for {n} unknowns", b.len())));
    }
    match solve_unique(a, b)? {
        Some(x) => Ok(x),
        None => Err(Error::Singular),
    }
}

/// Solves `a x = b` for any shape. Returns `None` unless the system is
/// consistent with a unique solution (full column rank).
pub fn solve_unique(a: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let (rows, cols) = (a.rows(), a.cols());
    if b.len() != rows {
        return Err(Error::Dimension(format!("right-hand side of length {} for {rows} equations", b.len())));
    }
    let mut aug = Matrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, cols)] = b[i].clone();
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) || pivots.len() < cols {
        return Ok(None);
    }
    Ok(Some((0..cols).map(|i| aug[(i, cols)].clone()).collect()))
}

/// Leading-principal-minor test (Sylvester's criterion).
pub fn is_positive_definite(m: &SymMatrix) -> bool {
    let a = m.matrix();
    (1..=m.dim()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        let minor = a.select_rows(&idx).transpose().select_rows(&idx);
        determinant(&minor).map(|d| d.is_positive()).unwrap_or(false)
    })
}
