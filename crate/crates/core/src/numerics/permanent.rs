//! Ryser's inclusion-exclusion permanent with Gray-code subset order.
//!
//! perm(A) = (-1)^n * sum over column subsets S of (-1)^|S| * prod_i sum_{j in S} a_ij
//!
//! Walking subsets in Gray-code order changes one column per step, so each
//! step updates the n row sums in place. Rows are first scaled to integers
//! so the inner loop runs on `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::matrix::Matrix;
use crate::error::Result;
use crate::rational::Rational;

/// Below this size the subset range is walked on one thread.
const PARALLEL_MIN_N: usize = 16;

pub fn permanent(m: &Matrix) -> Result<Rational> {
    let n = m.require_square("permanent")?;
    let chunks = if n >= PARALLEL_MIN_N { rayon::current_num_threads().max(1) * 4 } else { 1 };
    Ok(permanent_chunked(m, n, chunks))
}

pub(crate) fn permanent_chunked(m: &Matrix, n: usize, chunks: usize) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let (rows, scale) = integer_rows(m, n);
    let total: u64 = 1u64 << n;
    let chunks = (chunks as u64).clamp(1, total);
    let step = total.div_ceil(chunks);
    let sum: BigInt = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * step;
            let hi = ((c + 1) * step).min(total);
            ryser_range(&rows, n, lo, hi)
        })
        .reduce(BigInt::zero, |a, b| a + b);
    let signed = if n % 2 == 1 { -sum } else { sum };
    Rational::new(signed, scale)
}

/// Clears denominators row by row; returns the integer rows and the product
/// of the row multipliers.
fn integer_rows(m: &Matrix, n: usize) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..n)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    (rows, scale)
}

fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Signed Ryser sum over Gray-code positions `lo..hi`.
fn ryser_range(rows: &[Vec<BigInt>], n: usize, lo: u64, hi: u64) -> BigInt {
    let mut acc = BigInt::zero();
    if lo >= hi {
        return acc;
    }
    let start = gray(lo);
    let mut sums: Vec<BigInt> = rows
        .iter()
        .map(|r| (0..n).filter(|j| start >> j & 1 == 1).map(|j| &r[j]).sum())
        .collect();
    let add_term = |subset: u64, sums: &[BigInt], acc: &mut BigInt| {
        if subset == 0 || sums.iter().any(Zero::is_zero) {
            return;
        }
        let prod: BigInt = sums.iter().product();
        if subset.count_ones().is_multiple_of(2) {
            *acc += prod;
        } else {
            *acc -= prod;
        }
    };
    add_term(start, &sums, &mut acc);
    for k in lo + 1..hi {
        let j = k.trailing_zeros() as usize;
        let g = gray(k);
        if g >> j & 1 == 1 {
            for (s, r) in sums.iter_mut().zip(rows) {
                *s += &r[j];
            }
        } else {
            for (s, r) in sums.iter_mut().zip(rows) {
                *s -= &r[j];
            }
        }
        add_term(g, &sums, &mut acc);
    }
    acc
}

/// Floating-point Ryser for benchmarks. Never feeds an inequality verdict.
#[cfg(feature = "fast-float")]
pub fn permanent_f64(entries: &[f64], n: usize) -> f64 {
    assert_eq!(entries.len(), n * n, "permanent_f64 needs an n x n matrix");
    if n == 0 {
        return 1.0;
    }
    let mut sums = vec![0.0f64; n];
    let mut acc = 0.0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let sign = if gray(k) >> j & 1 == 1 { 1.0 } else { -1.0 };
        for i in 0..n {
            sums[i] += sign * entries[i * n + j];
        }
        let prod: f64 = sums.iter().product();
        acc += if gray(k).count_ones() % 2 == 0 { prod } else { -prod };
    }
    if n % 2 == 1 {
        -acc
    } else {
        acc
    }
}
