//! Exact mixed volumes of convex bodies, mixed discriminants of symmetric
//! matrices, and exact checks of the Alexandrov-Fenchel inequality family
//! and of log-concavity of mixed volumes on the discrete simplex.
//!
//! Every quantity that feeds a verdict is an exact [`Rational`].

pub mod bodies;
pub mod error;
pub mod inequalities;
pub mod json;
pub mod mixed;
pub mod numerics;
pub mod rational;
pub mod search;

pub use error::{Error, Result};
pub use rational::Rational;
