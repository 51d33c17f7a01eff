//! Mixed volumes and mixed discriminants.
//!
//! `V(A_1, ..., A_n)` is recovered from volumes of partial sums by
//! polarization,
//!
//! ```text
//! V(A_1, ..., A_n) = 1/n! * sum over nonempty S of (-1)^(n - |S|) Vol(sum_{i in S} A_i)
//! ```
//!
//! and likewise for `D(A_1, ..., A_n)` with `det` in place of `Vol`. Two
//! independent routes check it: the permanent identity for boxes and an
//! exact polynomial fit of `Vol(sum lambda_i A_i)` over an integer grid.

mod interpolate;
mod simplex;

pub use interpolate::volume_polynomial_interpolated;
pub use simplex::{DiscreteSimplex, MultiIndex, VolumePolynomial};

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::bodies::{minkowski_sum, volume, Body};
use crate::error::{Error, Result};
use crate::numerics::{determinant, factorial_q, permanent, Matrix, SymMatrix};
use crate::rational::Rational;

/// `k` bodies in a common ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BodyTuple {
    bodies: Vec<Body>,
}

impl BodyTuple {
    pub fn new(bodies: Vec<Body>) -> Result<Self> {
        let Some(first) = bodies.first() else {
            return Err(Error::Dimension("empty body tuple".into()));
        };
        let n = first.dim();
        if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
            return Err(Error::Dimension(format!("body in R^{} mixed with bodies in R^{n}", b.dim())));
        }
        Ok(BodyTuple { bodies })
    }

    pub fn dim(&self) -> usize {
        self.bodies[0].dim()
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    /// Bodies repeated according to `i`.
    pub fn expand(&self, i: &MultiIndex) -> Vec<Body> {
        i.expand().into_iter().map(|b| self.bodies[b].clone()).collect()
    }
}

/// `k` symmetric matrices of a common size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixTuple {
    matrices: Vec<SymMatrix>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<SymMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::Dimension("empty matrix tuple".into()));
        };
        let n = first.dim();
        if let Some(m) = matrices.iter().find(|m| m.dim() != n) {
            return Err(Error::Dimension(format!("{0}x{0} matrix mixed with {n}x{n} matrices", m.dim())));
        }
        Ok(MatrixTuple { matrices })
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[SymMatrix] {
        &self.matrices
    }

    pub fn expand(&self, i: &MultiIndex) -> Vec<SymMatrix> {
        i.expand().into_iter().map(|b| self.matrices[b].clone()).collect()
    }
}

/// Inclusion-exclusion over nonempty subsets of `0..n`; `eval` receives the
/// subset as a bitmask.
fn polarize(n: usize, mut eval: impl FnMut(u64) -> Result<Rational>) -> Result<Rational> {
    let mut total = Rational::zero();
    for mask in 1u64..(1u64 << n) {
        let v = eval(mask)?;
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total / factorial_q(n))
}

fn members(mask: u64, n: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |i| mask >> i & 1 == 1)
}

/// `V(A_1, ..., A_n)` by polarization.
pub fn mixed_volume(bodies: &[Body]) -> Result<Rational> {
    let n = bodies.len();
    if n == 0 {
        return Err(Error::Dimension("mixed volume of zero bodies".into()));
    }
    if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
        return Err(Error::Dimension(format!("{n} bodies need ambient dimension {n}, found a body in R^{}", b.dim())));
    }
    if n > 63 {
        return Err(Error::Unsupported(format!("polarization over {n} bodies")));
    }
    let one = Rational::from_integer(1.into());
    polarize(n, |mask| {
        let parts: Vec<(Rational, Body)> = members(mask, n).map(|i| (one.clone(), bodies[i].clone())).collect();
        volume(&minkowski_sum(&parts)?)
    })
}

/// Row `i` holds the side lengths of box `A_i`; returns `perm(sides) / n!`.
pub fn mixed_volume_boxes(sides: &Matrix) -> Result<Rational> {
    let n = sides.require_square("mixed_volume_boxes")?;
    if sides.entries().iter().any(Signed::is_negative) {
        return Err(Error::Domain("box side lengths must be nonnegative".into()));
    }
    Ok(permanent(sides)? / factorial_q(n))
}

/// Mixed volume of the segments `[0, g_1], ..., [0, g_n]`: `|det| / n!`.
pub fn mixed_volume_segments(generators: &[Vec<Rational>]) -> Result<Rational> {
    let n = generators.len();
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::Dimension(format!("{n} generators need length {n}, found length {}", g.len())));
    }
    let m = Matrix::new(n, n, generators.iter().flatten().cloned().collect())?;
    Ok(determinant(&m)?.abs() / factorial_q(n))
}

/// `D(A_1, ..., A_n)` by polarization.
pub fn mixed_discriminant(matrices: &[SymMatrix]) -> Result<Rational> {
    let n = matrices.len();
    if let Some(m) = matrices.iter().find(|m| m.dim() != n) {
        return Err(Error::Dimension(format!("{n} matrices need size {n}, found size {}", m.dim())));
    }
    if n == 0 {
        return Err(Error::Dimension("mixed discriminant of zero matrices".into()));
    }
    if n > 63 {
        return Err(Error::Unsupported(format!("polarization over {n} matrices")));
    }
    polarize(n, |mask| {
        let mut sum = Matrix::zeros(n, n);
        for i in members(mask, n) {
            sum = sum.add(matrices[i].matrix())?;
        }
        determinant(&sum)
    })
}

fn collect_polynomial(
    k: usize,
    n: usize,
    coefficient: impl Fn(&MultiIndex) -> Result<Rational> + Sync,
) -> Result<VolumePolynomial> {
    let points = DiscreteSimplex::new(k, n).points();
    let values: Vec<Rational> = points.par_iter().map(&coefficient).collect::<Result<_>>()?;
    let map: BTreeMap<MultiIndex, Rational> = points.into_iter().zip(values).collect();
    VolumePolynomial::new(k, n, map)
}

/// Every `V_I`, each as the mixed volume of the expanded multiset.
pub fn volume_polynomial(t: &BodyTuple) -> Result<VolumePolynomial> {
    collect_polynomial(t.len(), t.dim(), |i| mixed_volume(&t.expand(i)))
}

/// Every `D_I`, each as the mixed discriminant of the expanded multiset.
pub fn discriminant_polynomial(t: &MatrixTuple) -> Result<VolumePolynomial> {
    collect_polynomial(t.len(), t.dim(), |i| mixed_discriminant(&t.expand(i)))
}

/// Volume polynomial of boxes `[0, a_i1] x ... x [0, a_in]` through
/// permanents: `V_I = perm(rows expanded by I) / n!`. `sides` is k x n.
pub fn box_volume_polynomial(sides: &Matrix) -> Result<VolumePolynomial> {
    let (k, n) = (sides.rows(), sides.cols());
    if k == 0 || n == 0 {
        return Err(Error::Dimension("box polynomial needs at least one box and one side".into()));
    }
    if sides.entries().iter().any(Signed::is_negative) {
        return Err(Error::Domain("box side lengths must be nonnegative".into()));
    }
    collect_polynomial(k, n, |i| mixed_volume_boxes(&sides.select_rows(&i.expand())))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::bodies::{AxisBox, Zonotope};
    use crate::rational::{frac, int};

    pub(crate) fn counterexample_sides() -> Matrix {
        Matrix::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(1), int(0), int(5)],
            vec![int(0), frac(1, 3), int(1)],
        ])
        .unwrap()
    }

    pub(crate) fn boxes_from(sides: &Matrix) -> Vec<Body> {
        (0..sides.rows()).map(|i| Body::Box(AxisBox::from_lengths(sides.row(i)).unwrap())).collect()
    }

    fn unit(i: usize, n: usize) -> Vec<Rational> {
        (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()
    }

    fn idx(v: &[usize]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn mixed_volume_examples() {
        let cube = Body::Box(AxisBox::unit_cube(3));
        assert_eq!(mixed_volume(&[cube.clone(), cube.clone(), cube]).unwrap(), int(1));
        let bodies = boxes_from(&counterexample_sides());
        assert_eq!(mixed_volume(&bodies).unwrap(), frac(4, 9));
        let segs: Vec<Body> = (0..3).map(|i| Body::Zonotope(Zonotope::segment(unit(i, 3)).unwrap())).collect();
        assert_eq!(mixed_volume(&segs).unwrap(), frac(1, 6));
        assert!(mixed_volume(&bodies[..2]).is_err());
    }

    #[test]
    fn permanent_route_examples() {
        assert_eq!(mixed_volume_boxes(&counterexample_sides()).unwrap(), frac(4, 9));
        let s = counterexample_sides().select_rows(&[0, 0, 1]);
        assert_eq!(mixed_volume_boxes(&s).unwrap(), frac(5, 3));
        assert_eq!(mixed_volume_boxes(&Matrix::identity(3)).unwrap(), frac(1, 6));
        assert!(mixed_volume_boxes(&Matrix::diagonal(&[int(-1), int(1)])).is_err());
        assert!(mixed_volume_boxes(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn segment_route_examples() {
        assert_eq!(mixed_volume_segments(&[unit(0, 3), unit(1, 3), unit(2, 3)]).unwrap(), frac(1, 6));
        assert_eq!(mixed_volume_segments(&[unit(0, 2), unit(0, 2)]).unwrap(), int(0));
        assert_eq!(mixed_volume_segments(&[vec![int(2), int(0)], unit(1, 2)]).unwrap(), int(1));
        assert!(mixed_volume_segments(&[unit(0, 3), unit(1, 3)]).is_err());
    }

    #[test]
    fn polynomial_examples() {
        let a = Body::Box(AxisBox::from_lengths(&[int(2), int(3), frac(1, 2)]).unwrap());
        let p = volume_polynomial(&BodyTuple::new(vec![a]).unwrap()).unwrap();
        assert_eq!(p.iter().collect::<Vec<_>>(), vec![(&idx(&[3]), &int(3))]);

        let t = BodyTuple::new(boxes_from(&counterexample_sides())).unwrap();
        let p = volume_polynomial(&t).unwrap();
        assert_eq!(p.value(&idx(&[1, 1, 1])), frac(4, 9));
        assert_eq!(p.value(&idx(&[2, 1, 0])), frac(5, 3));
        assert_eq!(p.value(&idx(&[0, 2, 1])), frac(5, 9));
        assert_eq!(p.value(&idx(&[1, 0, 2])), frac(1, 9));
        assert_eq!(p, box_volume_polynomial(&counterexample_sides()).unwrap());

        let e: Vec<Body> = (0..2).map(|i| Body::Zonotope(Zonotope::segment(unit(i, 2)).unwrap())).collect();
        let p = volume_polynomial(&BodyTuple::new(e).unwrap()).unwrap();
        assert_eq!(p.value(&idx(&[2, 0])), int(0));
        assert_eq!(p.value(&idx(&[1, 1])), frac(1, 2));
        assert_eq!(p.value(&idx(&[0, 2])), int(0));
    }

    #[test]
    fn discriminant_examples() {
        let ids = vec![SymMatrix::identity(3); 3];
        assert_eq!(mixed_discriminant(&ids).unwrap(), int(1));
        let s = counterexample_sides();
        let diags: Vec<SymMatrix> = (0..3).map(|i| SymMatrix::diagonal(s.row(i))).collect();
        assert_eq!(mixed_discriminant(&diags).unwrap(), frac(4, 9));
        let pair = [SymMatrix::diagonal(&[int(1), int(2)]), SymMatrix::diagonal(&[int(3), int(4)])];
        assert_eq!(mixed_discriminant(&pair).unwrap(), int(5));

        let single = MatrixTuple::new(vec![SymMatrix::diagonal(&[int(2), int(3)])]).unwrap();
        let p = discriminant_polynomial(&single).unwrap();
        assert_eq!(p.value(&idx(&[2])), int(6));

        let t = MatrixTuple::new(diags).unwrap();
        assert_eq!(discriminant_polynomial(&t).unwrap(), box_volume_polynomial(&s).unwrap());

        let ids = MatrixTuple::new(vec![SymMatrix::identity(3); 3]).unwrap();
        assert_eq!(discriminant_polynomial(&ids).unwrap(), VolumePolynomial::one_everywhere(3, 3));
        assert!(mixed_discriminant(&[SymMatrix::identity(2)]).is_err());
    }

    #[test]
    fn indefinite_discriminants_may_be_negative() {
        let t = MatrixTuple::new(vec![SymMatrix::diagonal(&[int(1), int(-1)]), SymMatrix::identity(2)]).unwrap();
        let p = discriminant_polynomial(&t).unwrap();
        assert_eq!(p.value(&idx(&[2, 0])), int(-1));
        assert!(!p.is_nonnegative());
    }
}
