//! Exact arithmetic substrate: matrices, permanents, determinants, linear
//! solving and a small rational LP solver.

mod linalg;
mod matrix;
mod permanent;
mod simplex;

pub use linalg::{determinant, is_positive_definite, rank, solve_linear, solve_unique};
pub use matrix::{Matrix, SymMatrix};
#[cfg(feature = "fast-float")]
pub use permanent::permanent_f64;
pub use permanent::permanent;
pub use simplex::{simplex_max, LpOutcome};

use num_bigint::BigInt;
use num_traits::One;

use crate::rational::Rational;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn factorial_q(n: usize) -> Rational {
    Rational::from_integer(factorial(n))
}
