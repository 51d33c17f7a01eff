use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mixed::MultiIndex;
use crate::rational::Rational;

/// `log v`, with `log 0 = -inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogValue {
    Finite(Rational),
    NegInfinity,
}

impl LogValue {
    pub fn of(v: &Rational) -> Result<LogValue> {
        if v.is_negative() {
            return Err(Error::Domain(format!("logarithm of negative value {v}")));
        }
        Ok(if v.is_zero() { LogValue::NegInfinity } else { LogValue::Finite(v.clone()) })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LogValue::Finite(_))
    }

    /// Floating-point value, for display only.
    pub fn to_f64(&self) -> f64 {
        match self {
            LogValue::NegInfinity => f64::NEG_INFINITY,
            LogValue::Finite(v) => {
                // log(p/q) = log p - log q, robust to values outside f64 range
                ln_big(v.numer()) - ln_big(v.denom())
            }
        }
    }
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LogValue::NegInfinity, LogValue::NegInfinity) => Ordering::Equal,
            (LogValue::NegInfinity, _) => Ordering::Less,
            (_, LogValue::NegInfinity) => Ordering::Greater,
            (LogValue::Finite(a), LogValue::Finite(b)) => a.cmp(b),
        }
    }
}

/// Exact witness for one concavity comparison at `center`.
///
/// With weights `w_J = p_J / q` over a common denominator `q`, concavity of
/// `log V` at the center demands `V_center^q >= prod_J V_J^(p_J)`. `lhs` and
/// `rhs` are those two powers, so no logarithm is ever evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub center: MultiIndex,
    pub support: Vec<(MultiIndex, Rational)>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub comparison: String,
}

impl Certificate {
    pub fn build(
        center: MultiIndex,
        support: Vec<(MultiIndex, Rational)>,
        value: impl Fn(&MultiIndex) -> Rational,
    ) -> Result<Certificate> {
        check_weights(&center, &support)?;
        let q = common_denominator(&support);
        let qi = exponent(&q)?;
        let vc = value(&center);
        let lhs = vc.pow(qi);
        let mut rhs = Rational::one();
        let mut factors = Vec::with_capacity(support.len());
        for (j, w) in &support {
            let p = exponent(&(w * Rational::from_integer(q.clone())).to_integer())?;
            let vj = value(j);
            rhs *= vj.pow(p);
            factors.push(format!("({vj})^{p}"));
        }
        let op = match lhs.cmp(&rhs) {
            Ordering::Less => "<",
            Ordering::Equal => "=",
            Ordering::Greater => ">",
        };
        let (l, r) = over_common_denominator(&lhs, &rhs);
        let comparison = format!("({vc})^{qi} = {l} {op} {r} = {}", factors.join(" * "));
        Ok(Certificate { center, support, lhs, rhs, comparison })
    }

    /// True when the concavity comparison fails (`lhs < rhs`).
    pub fn is_violation(&self) -> bool {
        self.lhs < self.rhs
    }

    /// Common denominator `q` of the weights.
    pub fn exponent(&self) -> u32 {
        exponent(&common_denominator(&self.support)).map(|e| e as u32).unwrap_or(u32::MAX)
    }

    /// `rhs / lhs`; greater than one iff violated. `None` when `lhs = 0`.
    pub fn ratio(&self) -> Option<Rational> {
        if self.lhs.is_zero() {
            None
        } else {
            Some(&self.rhs / &self.lhs)
        }
    }

    /// Orders certificates by `(rhs / lhs)^(1/q)`, i.e. by the gap
    /// `sum_J w_J log V_J - log V_center`, compared exactly.
    pub fn severity_cmp(&self, other: &Certificate) -> Ordering {
        match (self.ratio(), other.ratio()) {
            (None, None) => Ordering::Equal,
            (None, _) => {
                if self.rhs.is_zero() { Ordering::Less } else { Ordering::Greater }
            }
            (_, None) => {
                if other.rhs.is_zero() { Ordering::Greater } else { Ordering::Less }
            }
            (Some(a), Some(b)) => {
                let (qa, qb) = (self.exponent() as i32, other.exponent() as i32);
                a.pow(qb).cmp(&b.pow(qa))
            }
        }
    }

    /// Recomputes everything from `value` and checks it matches exactly.
    pub fn reverify(&self, value: impl Fn(&MultiIndex) -> Rational) -> bool {
        match Certificate::build(self.center.clone(), self.support.clone(), value) {
            Ok(c) => c == *self,
            Err(_) => false,
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<String> = self.support.iter().map(|(j, w)| format!("{w}*{j}")).collect();
        write!(f, "at {} = {}: {}", self.center, support.join(" + "), self.comparison)
    }
}

/// Both values written over their least common denominator, so the
/// comparison reads off the numerators.
fn over_common_denominator(a: &Rational, b: &Rational) -> (String, String) {
    let d = a.denom().lcm(b.denom());
    if d.is_one() {
        return (a.to_string(), b.to_string());
    }
    let show = |x: &Rational| format!("{}/{d}", x.numer() * (&d / x.denom()));
    (show(a), show(b))
}

fn check_weights(center: &MultiIndex, support: &[(MultiIndex, Rational)]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::Domain("certificate with empty support".into()));
    }
    if support.iter().any(|(j, w)| !w.is_positive() || j.len() != center.len()) {
        return Err(Error::Domain("certificate weights must be positive on points of the same simplex".into()));
    }
    let total: Rational = support.iter().map(|(_, w)| w.clone()).sum();
    if !total.is_one() {
        return Err(Error::Domain(format!("certificate weights sum to {total}")));
    }
    for c in 0..center.len() {
        let coord: Rational = support.iter().map(|(j, w)| w * Rational::from_integer(j.0[c].into())).sum();
        if coord != Rational::from_integer(center.0[c].into()) {
            return Err(Error::Domain(format!("weighted support does not average to {center}")));
        }
    }
    Ok(())
}

fn common_denominator(support: &[(MultiIndex, Rational)]) -> BigInt {
    support.iter().fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()))
}

fn exponent(q: &BigInt) -> Result<i32> {
    q.to_i32().ok_or_else(|| Error::Unsupported(format!("exponent {q} too large")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn idx(v: &[usize]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    fn counterexample_values(i: &MultiIndex) -> Rational {
        match i.0.as_slice() {
            [1, 1, 1] => frac(4, 9),
            [2, 1, 0] => frac(5, 3),
            [0, 2, 1] => frac(5, 9),
            [1, 0, 2] => frac(1, 9),
            _ => int(0),
        }
    }

    fn triple() -> Certificate {
        let w = frac(1, 3);
        Certificate::build(
            idx(&[1, 1, 1]),
            vec![(idx(&[2, 1, 0]), w.clone()), (idx(&[0, 2, 1]), w.clone()), (idx(&[1, 0, 2]), w)],
            counterexample_values,
        )
        .unwrap()
    }

    #[test]
    fn multiplicative_form_of_the_triple() {
        let c = triple();
        assert_eq!(c.lhs, frac(64, 729));
        assert_eq!(c.rhs, frac(75, 729));
        assert_eq!(c.rhs.to_string(), "25/243");
        assert!(c.is_violation());
        assert_eq!(c.ratio(), Some(frac(75, 64)));
        assert_eq!(c.exponent(), 3);
        assert_eq!(c.comparison, "(4/9)^3 = 64/729 < 75/729 = (5/3)^1 * (5/9)^1 * (1/9)^1");
        assert!(c.reverify(counterexample_values));
        assert!(!c.reverify(|i| if i.0 == [1, 1, 1] { frac(1, 2) } else { counterexample_values(i) }));
    }

    #[test]
    fn bad_weights_are_rejected() {
        let half = frac(1, 2);
        assert!(Certificate::build(idx(&[1, 1]), vec![(idx(&[2, 0]), half.clone())], |_| int(1)).is_err());
        assert!(Certificate::build(
            idx(&[1, 1]),
            vec![(idx(&[2, 0]), half.clone()), (idx(&[2, 0]), half)],
            |_| int(1)
        )
        .is_err());
    }

    #[test]
    fn severity_is_normalized_by_exponent() {
        // (5/4)^(1/2) vs (3/2)^(1/3): 25/16 vs 9/4 after raising to the 6th power
        let a = Certificate {
            center: idx(&[1, 1]),
            support: vec![(idx(&[2, 0]), frac(1, 2)), (idx(&[0, 2]), frac(1, 2))],
            lhs: int(4),
            rhs: int(5),
            comparison: String::new(),
        };
        let b = Certificate {
            center: idx(&[1, 1, 1]),
            support: vec![(idx(&[3, 0, 0]), frac(1, 3)), (idx(&[0, 3, 0]), frac(1, 3)), (idx(&[0, 0, 3]), frac(1, 3))],
            lhs: int(2),
            rhs: int(3),
            comparison: String::new(),
        };
        assert_eq!(a.severity_cmp(&b), Ordering::Less);
        assert_eq!(b.severity_cmp(&a), Ordering::Greater);
    }

    #[test]
    fn log_values() {
        assert_eq!(LogValue::of(&int(0)).unwrap(), LogValue::NegInfinity);
        assert!(LogValue::of(&int(-1)).is_err());
        assert!(LogValue::of(&int(2)).unwrap() > LogValue::of(&int(1)).unwrap());
        assert!(LogValue::NegInfinity < LogValue::of(&frac(1, 1000)).unwrap());
        assert!((LogValue::of(&frac(4, 9)).unwrap().to_f64() - (4.0f64 / 9.0).ln()).abs() < 1e-12);
    }
}
