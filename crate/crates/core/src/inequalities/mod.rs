//! Exact checks of the Alexandrov-Fenchel family and of log-concavity of
//! mixed volumes on the discrete simplex.
//!
//! Every comparison is multiplicative: a statement about `log V` with
//! rational weights becomes an equality-free comparison of rational powers.
//! Equality counts as "holds".

mod certificate;
mod envelope;

pub use certificate::{Certificate, LogValue};
pub use envelope::gromov_concavity;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::bodies::{minkowski_sum, volume, Body};
use crate::error::{Error, Result};
use crate::mixed::{mixed_discriminant, mixed_volume, MultiIndex, VolumePolynomial};
use crate::numerics::{factorial_q, is_positive_definite, permanent, Matrix, SymMatrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Vacuous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Vacuous => "vacuous",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a family of exact comparisons.
///
/// `certificates` holds one witness per failed comparison and is nonempty
/// exactly when the verdict is `Fails`. `tightest` is the comparison closest
/// to failing (or the worst failure), kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
    pub checked_count: usize,
    pub tightest: Option<Certificate>,
}

#[derive(Default)]
pub(crate) struct ReportBuilder {
    certificates: Vec<Certificate>,
    checked: usize,
    tightest: Option<Certificate>,
}

impl ReportBuilder {
    pub(crate) fn count(&mut self, n: usize) {
        self.checked += n;
    }

    /// Offers a comparison for `tightest` without counting it.
    pub(crate) fn consider(&mut self, c: &Certificate) {
        let replace = match &self.tightest {
            None => true,
            Some(t) => c.severity_cmp(t) == Ordering::Greater,
        };
        if replace {
            self.tightest = Some(c.clone());
        }
    }

    pub(crate) fn record(&mut self, c: Certificate) {
        self.checked += 1;
        self.consider(&c);
        if c.is_violation() {
            self.certificates.push(c);
        }
    }

    pub(crate) fn push_failure(&mut self, c: Certificate) {
        debug_assert!(c.is_violation());
        self.certificates.push(c);
    }

    pub(crate) fn finish(self, vacuous_when_unchecked: bool) -> Report {
        let verdict = if !self.certificates.is_empty() {
            Verdict::Fails
        } else if self.checked == 0 && vacuous_when_unchecked {
            Verdict::Vacuous
        } else {
            Verdict::Holds
        };
        Report { verdict, certificates: self.certificates, checked_count: self.checked, tightest: self.tightest }
    }
}

impl Report {
    /// Re-derives every certificate from `value`.
    pub fn reverify(&self, value: impl Fn(&MultiIndex) -> Rational) -> bool {
        let certs_ok = self.certificates.iter().all(|c| c.is_violation() && c.reverify(&value));
        let verdict_ok = (self.verdict == Verdict::Fails) == !self.certificates.is_empty();
        certs_ok && verdict_ok
    }
}

fn idx(v: Vec<usize>) -> MultiIndex {
    MultiIndex(v)
}

fn half() -> Rational {
    rational::frac(1, 2)
}

/// `V(A_1, A_2, rest)^2 >= V(A_1, A_1, rest) V(A_2, A_2, rest)` for the
/// given order; multi-indices live in the simplex of the `n` listed bodies.
fn af_check(n: usize, value_of: impl Fn(&[usize]) -> Result<Rational>) -> Result<Report> {
    if n < 2 {
        return Ok(ReportBuilder::default().finish(true));
    }
    let center = idx(vec![1; n]);
    let mut a = center.clone();
    (a.0[0], a.0[1]) = (2, 0);
    let mut b = center.clone();
    (b.0[0], b.0[1]) = (0, 2);
    let mut values = BTreeMap::new();
    for i in [&center, &a, &b] {
        values.insert(i.clone(), value_of(&i.expand())?);
    }
    let cert = Certificate::build(center, vec![(a, half()), (b, half())], |i| values[i].clone())?;
    let mut r = ReportBuilder::default();
    r.record(cert);
    Ok(r.finish(true))
}

/// Alexandrov-Fenchel for mixed volumes; the first two bodies vary.
pub fn af_check_volumes(bodies: &[Body]) -> Result<Report> {
    let n = bodies.len();
    if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
        return Err(Error::Dimension(format!("{n} bodies need ambient dimension {n}, found R^{}", b.dim())));
    }
    af_check(n, |sel| mixed_volume(&sel.iter().map(|&i| bodies[i].clone()).collect::<Vec<_>>()))
}

/// Alexandrov-Fenchel for mixed discriminants of positive-definite matrices.
pub fn af_check_discriminants(matrices: &[SymMatrix]) -> Result<Report> {
    let n = matrices.len();
    if let Some(m) = matrices.iter().find(|m| m.dim() != n) {
        return Err(Error::Dimension(format!("{n} matrices need size {n}, found size {}", m.dim())));
    }
    if let Some(i) = matrices.iter().position(|m| !is_positive_definite(m)) {
        return Err(Error::Precondition(format!("matrix {} is not positive definite", i + 1)));
    }
    af_check(n, |sel| mixed_discriminant(&sel.iter().map(|&i| matrices[i].clone()).collect::<Vec<_>>()))
}

/// Concavity of `log V` along every segment parallel to an edge of the
/// simplex: `V_I^2 >= V_{I + e_a - e_b} V_{I - e_a + e_b}`.
pub fn segment_concavity(vp: &VolumePolynomial) -> Report {
    let k = vp.k();
    let mut r = ReportBuilder::default();
    for (center, _) in vp.iter() {
        for a in 0..k {
            for b in a + 1..k {
                let (Some(up), Some(down)) = (center.shifted(a, b), center.shifted(b, a)) else {
                    continue;
                };
                let cert = Certificate::build(center.clone(), vec![(up, half()), (down, half())], |i| vp.value(i))
                    .expect("midpoint weights are valid");
                r.record(cert);
            }
        }
    }
    r.finish(true)
}

/// `V(A_1, A_2, A_3)^3 >= V(A_1, A_1, A_2) V(A_2, A_2, A_3) V(A_3, A_3, A_1)`.
pub fn gromov_triple_check(bodies: &[Body]) -> Result<Report> {
    if bodies.len() != 3 || bodies.iter().any(|b| b.dim() != 3) {
        return Err(Error::Dimension("the triple check takes three bodies in R^3".into()));
    }
    let center = idx(vec![1, 1, 1]);
    let support = [idx(vec![2, 1, 0]), idx(vec![0, 2, 1]), idx(vec![1, 0, 2])];
    let mut values = BTreeMap::new();
    for i in std::iter::once(&center).chain(&support) {
        let sel: Vec<Body> = i.expand().into_iter().map(|b| bodies[b].clone()).collect();
        values.insert(i.clone(), mixed_volume(&sel)?);
    }
    triple_report(|i| values[i].clone())
}

/// The triple comparison read off a volume polynomial with `k = n = 3`.
pub(crate) fn triple_report(value: impl Fn(&MultiIndex) -> Rational) -> Result<Report> {
    let third = rational::frac(1, 3);
    let support =
        [idx(vec![2, 1, 0]), idx(vec![0, 2, 1]), idx(vec![1, 0, 2])].into_iter().map(|j| (j, third.clone())).collect();
    let cert = Certificate::build(idx(vec![1, 1, 1]), support, value)?;
    let mut r = ReportBuilder::default();
    r.record(cert);
    Ok(r.finish(true))
}

/// Root-form Brunn-Minkowski evaluated to a fixed number of decimals.
/// Diagnostic only; verdicts come from the exact sequence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDiagnostic {
    pub digits: u32,
    /// `Vol(A + B)^(1/n)`, truncated
    pub sum_root: Rational,
    /// `Vol(A)^(1/n) + Vol(B)^(1/n)`, truncated
    pub roots_sum: Rational,
    pub holds: bool,
}

pub const DEFAULT_DIAGNOSTIC_DIGITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiReport {
    pub report: Report,
    /// `V_j = V(A x j, B x (n - j))` for `j = 0..=n`.
    pub sequence: Vec<Rational>,
    pub diagnostic: RootDiagnostic,
}

/// Log-concavity of `j -> V(A, ..., A, B, ..., B)` (j copies of `A`), the
/// exact statement behind Brunn-Minkowski, plus the root form as a
/// non-authoritative decimal diagnostic.
pub fn minkowski_sequence_check(a: &Body, b: &Body, n: usize, digits: u32) -> Result<MinkowskiReport> {
    if a.dim() != n || b.dim() != n {
        return Err(Error::Dimension(format!("bodies in R^{} and R^{} for n = {n}", a.dim(), b.dim())));
    }
    let sequence: Vec<Rational> = (0..=n)
        .map(|j| {
            let mut sel = vec![a.clone(); j];
            sel.extend(std::iter::repeat_n(b.clone(), n - j));
            mixed_volume(&sel)
        })
        .collect::<Result<_>>()?;
    let value = |i: &MultiIndex| sequence[i.0[0]].clone();
    let mut r = ReportBuilder::default();
    for j in 1..n {
        let cert = Certificate::build(
            idx(vec![j, n - j]),
            vec![(idx(vec![j + 1, n - j - 1]), half()), (idx(vec![j - 1, n - j + 1]), half())],
            value,
        )?;
        r.record(cert);
    }
    let one = Rational::from_integer(1.into());
    let sum = minkowski_sum(&[(one.clone(), a.clone()), (one, b.clone())])?;
    let root = |v: &Rational| rational::nth_root_decimal(v, n as u32, digits);
    let sum_root = root(&volume(&sum)?);
    let roots_sum = root(&sequence[n]) + root(&sequence[0]);
    let diagnostic = RootDiagnostic { digits, holds: sum_root >= roots_sum, sum_root, roots_sum };
    Ok(MinkowskiReport { report: r.finish(true), sequence, diagnostic })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VdwOutcome {
    pub permanent: Rational,
    /// `n! / n^n`
    pub bound: Rational,
    pub margin: Rational,
    pub holds: bool,
}

/// Van der Waerden lower bound for the permanent of a doubly stochastic
/// matrix.
pub fn vdw_check(m: &Matrix) -> Result<VdwOutcome> {
    let n = m.require_square("vdw_check")?;
    if let Some(pos) = m.entries().iter().position(Signed::is_negative) {
        return Err(Error::Precondition(format!("negative entry at ({}, {})", pos / n + 1, pos % n + 1)));
    }
    let one = Rational::from_integer(1.into());
    for i in 0..n {
        let s: Rational = m.row(i).iter().cloned().sum();
        if s != one {
            return Err(Error::Precondition(format!("row {} sums to {s}, not 1", i + 1)));
        }
    }
    for j in 0..n {
        let s: Rational = (0..n).map(|i| m[(i, j)].clone()).sum();
        if s != one {
            return Err(Error::Precondition(format!("column {} sums to {s}, not 1", j + 1)));
        }
    }
    let permanent = permanent(m)?;
    let bound = if n == 0 {
        one
    } else {
        factorial_q(n) / Rational::from_integer(n.into()).pow(n as i32)
    };
    let margin = &permanent - &bound;
    Ok(VdwOutcome { holds: !margin.is_negative(), permanent, bound, margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{AxisBox, Zonotope};
    use crate::mixed::tests::{boxes_from, counterexample_sides};
    use crate::mixed::{box_volume_polynomial, volume_polynomial, BodyTuple};
    use crate::rational::{frac, int};

    fn lengths(v: &[i64]) -> Body {
        Body::Box(AxisBox::from_lengths(&v.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap())
    }

    #[test]
    fn af_on_counterexample_bodies() {
        let b = boxes_from(&counterexample_sides());
        let r = af_check_volumes(&b).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let t = r.tightest.unwrap();
        assert_eq!(t.lhs, frac(16, 81));
        assert_eq!(t.rhs, frac(15, 81));
        // equal varying pair: equality
        let same = vec![b[0].clone(), b[0].clone(), b[2].clone()];
        let t = af_check_volumes(&same).unwrap().tightest.unwrap();
        assert_eq!(t.lhs, t.rhs);
    }

    #[test]
    fn af_discriminants() {
        let r = af_check_discriminants(&vec![SymMatrix::identity(3); 3]).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let t = r.tightest.unwrap();
        assert_eq!(t.lhs, t.rhs);
        let bad = vec![SymMatrix::diagonal(&[int(1), int(-1)]), SymMatrix::identity(2)];
        assert!(matches!(af_check_discriminants(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn segment_examples() {
        let t = BodyTuple::new(boxes_from(&counterexample_sides())).unwrap();
        let r = segment_concavity(&volume_polynomial(&t).unwrap());
        assert_eq!(r.verdict, Verdict::Holds);
        // three edge directions over the 10-point simplex
        assert_eq!(r.checked_count, 9);

        let one = box_volume_polynomial(&Matrix::from_rows(vec![vec![int(1), int(2), int(3)]]).unwrap()).unwrap();
        assert_eq!(segment_concavity(&one).verdict, Verdict::Vacuous);

        let sides = Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(2), int(3)]]).unwrap();
        let p = box_volume_polynomial(&sides).unwrap();
        assert_eq!(p.value(&MultiIndex(vec![1, 1])), frac(5, 2));
        let r = segment_concavity(&p);
        assert_eq!(r.verdict, Verdict::Holds);
        let t = r.tightest.unwrap();
        assert_eq!((t.lhs, t.rhs), (frac(25, 4), int(6)));
    }

    #[test]
    fn synthetic_segment_failure_is_certified() {
        let mut p = VolumePolynomial::one_everywhere(2, 2);
        p = VolumePolynomial::new(
            2,
            2,
            p.iter().map(|(i, v)| (i.clone(), if i.0 == [1, 1] { frac(1, 2) } else { v.clone() })).collect(),
        )
        .unwrap();
        let r = segment_concavity(&p);
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.reverify(|i| p.value(i)));
        assert!(!r.reverify(|_| int(1)));
    }

    #[test]
    fn triple_on_counterexample_fails_exactly() {
        let r = gromov_triple_check(&boxes_from(&counterexample_sides())).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let c = &r.certificates[0];
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (frac(64, 729), frac(75, 729)));

        let cube = Body::Box(AxisBox::unit_cube(3));
        let r = gromov_triple_check(&[cube.clone(), cube.clone(), cube]).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let t = r.tightest.unwrap();
        assert_eq!((t.lhs, t.rhs), (int(1), int(1)));
    }

    #[test]
    fn triple_sweep_small_grid_reverifies() {
        // every full-dimensional box triple with sides in {1, 4}
        let vals = [1i64, 4];
        let mut rows = Vec::new();
        for a in vals { for b in vals { for c in vals { rows.push(vec![a, b, c]); } } }
        for r1 in &rows {
            for r2 in &rows {
                for r3 in &rows {
                    let bodies = [lengths(r1), lengths(r2), lengths(r3)];
                    let rep = gromov_triple_check(&bodies).unwrap();
                    let sides = Matrix::from_rows(
                        [r1, r2, r3].iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
                    )
                    .unwrap();
                    let vp = box_volume_polynomial(&sides).unwrap();
                    assert!(rep.reverify(|i| vp.value(i)));
                }
            }
        }
    }

    #[test]
    fn minkowski_sequences() {
        let cube = lengths(&[1, 1, 1]);
        let m = minkowski_sequence_check(&cube, &cube, 3, DEFAULT_DIAGNOSTIC_DIGITS).unwrap();
        assert_eq!(m.report.verdict, Verdict::Holds);
        assert!(m.sequence.iter().all(|v| *v == int(1)));
        assert!(m.diagnostic.holds);

        let big = lengths(&[2, 2, 2]);
        let m = minkowski_sequence_check(&cube, &big, 3, 10).unwrap();
        assert_eq!(m.sequence, vec![int(8), int(4), int(2), int(1)]);
        assert_eq!(m.report.verdict, Verdict::Holds);
        let t = m.report.tightest.unwrap();
        assert_eq!(t.lhs, t.rhs);
        // homothetic: equality in the root form too
        assert_eq!(m.diagnostic.sum_root, int(3));
        assert_eq!(m.diagnostic.roots_sum, int(3));

        let seg = Body::Zonotope(Zonotope::segment(vec![int(1)]).unwrap());
        let m = minkowski_sequence_check(&seg, &seg, 1, 4).unwrap();
        assert_eq!(m.report.verdict, Verdict::Vacuous);
        assert!(minkowski_sequence_check(&cube, &cube, 2, 4).is_err());
    }

    #[test]
    fn van_der_waerden() {
        let flat = Matrix::new(3, 3, vec![frac(1, 3); 9]).unwrap();
        let o = vdw_check(&flat).unwrap();
        assert_eq!(o.permanent, frac(2, 9));
        assert_eq!(o.margin, int(0));
        assert!(o.holds);
        let o = vdw_check(&Matrix::identity(3)).unwrap();
        assert_eq!(o.margin, frac(7, 9));
        let mix = Matrix::identity(3).scale(&frac(1, 2)).add(&flat.scale(&frac(1, 2))).unwrap();
        assert!(vdw_check(&mix).unwrap().margin.is_positive());
        let bad = Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(1), int(0)]]).unwrap();
        match vdw_check(&bad) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("column 1"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
