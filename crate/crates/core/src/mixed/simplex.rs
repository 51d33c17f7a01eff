use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::factorial;
use crate::rational::Rational;

/// Exponent vector `(i_1, ..., i_k)`; ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `i_1` copies of 0, then `i_2` copies of 1, and so on.
    pub fn expand(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(b, &c)| std::iter::repeat_n(b, c)).collect()
    }

    /// n! / (i_1! ... i_k!)
    pub fn multinomial(&self) -> BigInt {
        self.0.iter().fold(factorial(self.total()), |acc, &i| acc / factorial(i))
    }

    /// `lambda^I`
    pub fn monomial(&self, lambda: &[Rational]) -> Rational {
        self.0.iter().zip(lambda).map(|(&e, l)| l.pow(e as i32)).product()
    }

    /// `self + e_a - e_b` when that stays nonnegative.
    pub fn shifted(&self, a: usize, b: usize) -> Option<MultiIndex> {
        if self.0[b] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[a] += 1;
        v[b] -= 1;
        Some(MultiIndex(v))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All `I` in `Z_{>=0}^k` with `|I| = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscreteSimplex {
    pub k: usize,
    pub n: usize,
}

impl DiscreteSimplex {
    pub fn new(k: usize, n: usize) -> Self {
        DiscreteSimplex { k, n }
    }

    /// C(n + k - 1, k - 1)
    pub fn len(&self) -> usize {
        if self.k == 0 {
            return usize::from(self.n == 0);
        }
        let (top, r) = (self.n + self.k - 1, self.k - 1);
        (1..=r).fold(1usize, |acc, i| acc * (top + 1 - i) / i)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> Vec<MultiIndex> {
        fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == k {
                cur.push(left);
                out.push(MultiIndex(cur.clone()));
                cur.pop();
                return;
            }
            for v in 0..=left {
                cur.push(v);
                go(k, left - v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::with_capacity(self.len());
        if self.k > 0 {
            go(self.k, self.n, &mut Vec::with_capacity(self.k), &mut out);
        }
        out
    }

    pub fn contains(&self, i: &MultiIndex) -> bool {
        i.len() == self.k && i.total() == self.n
    }
}

/// Coefficients `V_I` (or `D_I`) of `sum_I multinomial(n; I) V_I lambda^I`,
/// stored without the multinomial factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumePolynomial {
    simplex: DiscreteSimplex,
    coefficients: BTreeMap<MultiIndex, Rational>,
}

impl VolumePolynomial {
    pub fn new(k: usize, n: usize, coefficients: BTreeMap<MultiIndex, Rational>) -> Result<Self> {
        let simplex = DiscreteSimplex::new(k, n);
        let keys_ok = coefficients.len() == simplex.len() && coefficients.keys().all(|i| simplex.contains(i));
        if !keys_ok {
            return Err(Error::Dimension(format!(
                "coefficient keys do not cover the discrete simplex k={k}, n={n}"
            )));
        }
        Ok(VolumePolynomial { simplex, coefficients })
    }

    pub fn k(&self) -> usize {
        self.simplex.k
    }

    pub fn n(&self) -> usize {
        self.simplex.n
    }

    pub fn simplex(&self) -> DiscreteSimplex {
        self.simplex
    }

    pub fn get(&self, i: &MultiIndex) -> Option<&Rational> {
        self.coefficients.get(i)
    }

    /// Coefficient at `i`; zero outside the simplex.
    pub fn value(&self, i: &MultiIndex) -> Rational {
        self.coefficients.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coefficients.iter()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coefficients.values().all(|v| !v.is_negative())
    }

    /// `sum_I multinomial(n; I) V_I lambda^I`
    pub fn evaluate(&self, lambda: &[Rational]) -> Result<Rational> {
        if lambda.len() != self.k() {
            return Err(Error::Dimension(format!("{} weights for {} bodies", lambda.len(), self.k())));
        }
        Ok(self
            .coefficients
            .iter()
            .map(|(i, v)| Rational::from_integer(i.multinomial()) * v * i.monomial(lambda))
            .sum())
    }

    /// The same polynomial with every coefficient multiplied by `s`.
    pub fn scaled(&self, s: &Rational) -> VolumePolynomial {
        VolumePolynomial {
            simplex: self.simplex,
            coefficients: self.coefficients.iter().map(|(i, v)| (i.clone(), v * s)).collect(),
        }
    }

    pub fn one_everywhere(k: usize, n: usize) -> VolumePolynomial {
        let simplex = DiscreteSimplex::new(k, n);
        VolumePolynomial { simplex, coefficients: simplex.points().into_iter().map(|i| (i, Rational::one())).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn simplex_counts_and_order() {
        assert_eq!(DiscreteSimplex::new(3, 3).len(), 10);
        assert_eq!(DiscreteSimplex::new(4, 4).len(), 35);
        assert_eq!(DiscreteSimplex::new(1, 5).len(), 1);
        let pts = DiscreteSimplex::new(3, 3).points();
        assert_eq!(pts.len(), 10);
        assert_eq!(pts[0], MultiIndex(vec![0, 0, 3]));
        assert_eq!(pts[9], MultiIndex(vec![3, 0, 0]));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for k in 1..5 {
            for n in 0..5 {
                let s = DiscreteSimplex::new(k, n);
                assert_eq!(s.points().len(), s.len());
            }
        }
    }

    #[test]
    fn multinomials_and_expansion() {
        let i = MultiIndex(vec![2, 1, 0]);
        assert_eq!(i.multinomial(), BigInt::from(3));
        assert_eq!(i.expand(), vec![0, 0, 1]);
        assert_eq!(MultiIndex(vec![1, 1, 1]).multinomial(), BigInt::from(6));
        assert_eq!(i.shifted(2, 0), Some(MultiIndex(vec![1, 1, 1])));
        assert_eq!(i.shifted(0, 2), None);
        assert_eq!(i.monomial(&[int(2), int(3), int(5)]), int(12));
    }

    #[test]
    fn polynomial_of_ones_is_power_of_sum() {
        let p = VolumePolynomial::one_everywhere(3, 3);
        // (1 + 2 + 3)^3
        assert_eq!(p.evaluate(&[int(1), int(2), int(3)]).unwrap(), int(216));
        assert!(VolumePolynomial::new(2, 2, BTreeMap::new()).is_err());
    }
}
