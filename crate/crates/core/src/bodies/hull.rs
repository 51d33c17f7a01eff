//! Exact convex hulls in the plane and in space.
//!
//! The 3D hull is built incrementally: each new point removes the facets it
//! sees and is coned to the horizon. Visibility is decided by the sign of an
//! exact orientation determinant, so there is no epsilon anywhere.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Point3 = [Rational; 3];
pub type Point2 = [Rational; 2];

/// Hull of a finite point set in R^3.
///
/// `facets` index into `points` and are oriented counter-clockwise when seen
/// from outside. When `affine_dim < 3` the hull has no facets.
#[derive(Debug, Clone)]
pub struct Hull3 {
    pub points: Vec<Point3>,
    pub facets: Vec<[usize; 3]>,
    pub affine_dim: usize,
}

impl Hull3 {
    /// Signed-tetrahedron sum over the facets, anchored at the origin.
    pub fn volume(&self) -> Rational {
        let six: Rational = self
            .facets
            .iter()
            .map(|&[a, b, c]| det3(&self.points[a], &self.points[b], &self.points[c]))
            .sum();
        six / Rational::from_integer(6.into())
    }

    /// Points that appear in at least one facet.
    pub fn extreme_points(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.facets.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn sub(a: &Point3, b: &Point3) -> Point3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(u: &Point3, v: &Point3) -> Point3 {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn dot(u: &Point3, v: &Point3) -> Rational {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

fn det3(a: &Point3, b: &Point3, c: &Point3) -> Rational {
    dot(a, &cross(b, c))
}

/// Sign of det[b - a, c - a, d - a]; positive when `d` lies on the side the
/// right-handed normal of (a, b, c) points to.
pub fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> Ordering {
    det3(&sub(b, a), &sub(c, a), &sub(d, a)).cmp(&Rational::zero())
}

fn is_zero_vec(v: &Point3) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn convex_hull_3d(points: &[Point3]) -> Result<Hull3> {
    if points.is_empty() {
        return Err(Error::Domain("convex hull of an empty point set".into()));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let degenerate = |pts: Vec<Point3>, d: usize| Hull3 { points: pts, facets: Vec::new(), affine_dim: d };
    let p0 = 0;
    let Some(p1) = (1..pts.len()).next() else {
        return Ok(degenerate(pts, 0));
    };
    let e1 = sub(&pts[p1], &pts[p0]);
    let Some(p2) = (2..pts.len()).find(|&i| !is_zero_vec(&cross(&e1, &sub(&pts[i], &pts[p0])))) else {
        return Ok(degenerate(pts, 1));
    };
    let Some(p3) = (3..pts.len()).find(|&i| orient3d(&pts[p0], &pts[p1], &pts[p2], &pts[i]) != Ordering::Equal)
    else {
        return Ok(degenerate(pts, 2));
    };

    let tet = [p0, p1, p2, p3];
    let mut facets: Vec<[usize; 3]> = Vec::new();
    for skip in 0..4 {
        let opp = tet[skip];
        let mut f: Vec<usize> = tet.iter().copied().filter(|&v| v != opp).collect();
        if orient3d(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[opp]) == Ordering::Greater {
            f.swap(1, 2);
        }
        facets.push([f[0], f[1], f[2]]);
    }

    for q in 0..pts.len() {
        if tet.contains(&q) {
            continue;
        }
        let visible: Vec<bool> = facets
            .iter()
            .map(|f| orient3d(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[q]) == Ordering::Greater)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges = HashSet::new();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, &v)| v) {
            edges.insert((f[0], f[1]));
            edges.insert((f[1], f[2]));
            edges.insert((f[2], f[0]));
        }
        let mut next: Vec<[usize; 3]> =
            facets.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| *f).collect();
        let mut horizon: Vec<(usize, usize)> =
            edges.iter().copied().filter(|&(a, b)| !edges.contains(&(b, a))).collect();
        horizon.sort_unstable();
        next.extend(horizon.into_iter().map(|(a, b)| [a, b, q]));
        facets = next;
    }
    Ok(Hull3 { points: pts, facets, affine_dim: 3 })
}

fn cross2(o: &Point2, a: &Point2, b: &Point2) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Monotone-chain hull; vertices in counter-clockwise order, collinear
/// points dropped.
pub fn convex_hull_2d(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a counter-clockwise polygon.
pub fn polygon_area(poly: &[Point2]) -> Rational {
    if poly.len() < 3 {
        return Rational::zero();
    }
    let twice: Rational = (0..poly.len())
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % poly.len()]);
            &a[0] * &b[1] - &a[1] * &b[0]
        })
        .sum();
    twice / Rational::from_integer(2.into())
}
