//! Convex bodies: axis-parallel boxes, zonotopes and vertex-set polytopes,
//! with nonnegative Minkowski combinations and exact volume.

mod hull;

pub use hull::{convex_hull_2d, convex_hull_3d, orient3d, polygon_area, Hull3, Point2, Point3};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{determinant, rank, Matrix};
use crate::rational::Rational;

pub type Point = Vec<Rational>;

/// Largest ambient dimension handled through vertex sets and hulls.
pub const MAX_VPOLYTOPE_DIM: usize = 3;

/// Closed interval `[lo, hi]`; `lo == hi` is a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Interval { lo, hi })
    }

    /// `[0, len]`
    pub fn from_length(len: Rational) -> Result<Self> {
        Interval::new(Rational::zero(), len)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    fn scaled(&self, s: &Rational) -> Interval {
        Interval { lo: &self.lo * s, hi: &self.hi * s }
    }
}

/// Product of intervals, possibly with degenerate (point) factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxisBox {
    sides: Vec<Interval>,
}

impl AxisBox {
    pub fn new(sides: Vec<Interval>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::Dimension("a box needs at least one side".into()));
        }
        Ok(AxisBox { sides })
    }

    /// `[0, l_1] x ... x [0, l_n]`
    pub fn from_lengths(lengths: &[Rational]) -> Result<Self> {
        AxisBox::new(lengths.iter().cloned().map(Interval::from_length).collect::<Result<_>>()?)
    }

    pub fn unit_cube(dim: usize) -> Self {
        AxisBox { sides: vec![Interval { lo: Rational::zero(), hi: Rational::one() }; dim] }
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[Interval] {
        &self.sides
    }

    pub fn lengths(&self) -> Vec<Rational> {
        self.sides.iter().map(Interval::length).collect()
    }

    fn corners(&self) -> Vec<Point> {
        let mut out: Vec<Point> = vec![Vec::new()];
        for s in &self.sides {
            let ends: Vec<&Rational> = if s.lo == s.hi { vec![&s.lo] } else { vec![&s.lo, &s.hi] };
            out = out
                .into_iter()
                .flat_map(|p| {
                    ends.iter().map(move |e| {
                        let mut q = p.clone();
                        q.push((*e).clone());
                        q
                    })
                })
                .collect();
        }
        out
    }

    fn as_zonotope(&self) -> Zonotope {
        let n = self.dim();
        let origin = self.sides.iter().map(|s| s.lo.clone()).collect();
        let generators = self
            .sides
            .iter()
            .enumerate()
            .filter(|(_, s)| s.lo != s.hi)
            .map(|(i, s)| {
                let mut g = vec![Rational::zero(); n];
                g[i] = s.length();
                g
            })
            .collect();
        Zonotope { dim: n, origin, generators }
    }
}

/// `origin + [0, g_1] + ... + [0, g_m]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Zonotope {
    dim: usize,
    origin: Point,
    generators: Vec<Point>,
}

impl Zonotope {
    pub fn new(dim: usize, generators: Vec<Point>) -> Result<Self> {
        Zonotope::with_origin(vec![Rational::zero(); dim], generators)
    }

    pub fn with_origin(origin: Point, generators: Vec<Point>) -> Result<Self> {
        let dim = origin.len();
        if dim == 0 {
            return Err(Error::Dimension("a zonotope needs dimension at least 1".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::Dimension(format!("generator of length {} in dimension {dim}", g.len())));
        }
        Ok(Zonotope { dim, origin, generators })
    }

    /// The segment `[0, v]`.
    pub fn segment(v: Point) -> Result<Self> {
        Zonotope::new(v.len(), vec![v])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn origin(&self) -> &[Rational] {
        &self.origin
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    /// Sum over n-subsets of generators of |det|.
    pub fn volume(&self) -> Rational {
        let n = self.dim;
        let gens: Vec<&Point> = self.generators.iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
        let mut total = Rational::zero();
        for_each_subset(gens.len(), n, &mut |idx| {
            let m = Matrix::new(n, n, idx.iter().flat_map(|&i| gens[i].iter().cloned()).collect())
                .expect("generator lengths checked");
            total += determinant(&m).expect("square").abs();
        });
        total
    }

    fn vertices(&self) -> Vec<Point> {
        let mut out = vec![self.origin.clone()];
        for g in self.generators.iter().filter(|g| g.iter().any(|x| !x.is_zero())) {
            let shifted: Vec<Point> = out.iter().map(|p| add(p, g)).collect();
            out.extend(shifted);
            out.sort();
            out.dedup();
        }
        out
    }
}

/// Convex hull of a finite vertex list in dimension at most three. Redundant
/// (non-extreme) points are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Point>,
}

impl VPolytope {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::Domain("a polytope needs at least one vertex".into()));
        };
        let dim = first.len();
        if dim == 0 || dim > MAX_VPOLYTOPE_DIM {
            return Err(Error::Unsupported(format!(
                "vertex polytopes are supported in dimensions 1..={MAX_VPOLYTOPE_DIM}, got {dim}"
            )));
        }
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::Dimension("vertices of mixed length".into()));
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn volume(&self) -> Rational {
        match self.dim {
            1 => {
                let lo = self.vertices.iter().map(|v| &v[0]).min().expect("nonempty");
                let hi = self.vertices.iter().map(|v| &v[0]).max().expect("nonempty");
                hi - lo
            }
            2 => {
                let pts: Vec<Point2> = self.vertices.iter().map(|v| [v[0].clone(), v[1].clone()]).collect();
                polygon_area(&convex_hull_2d(&pts))
            }
            _ => convex_hull_3d(&self.points3()).expect("nonempty").volume(),
        }
    }

    fn points3(&self) -> Vec<Point3> {
        self.vertices.iter().map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Box(AxisBox),
    Zonotope(Zonotope),
    Polytope(VPolytope),
}

impl From<AxisBox> for Body {
    fn from(b: AxisBox) -> Self {
        Body::Box(b)
    }
}

impl From<Zonotope> for Body {
    fn from(z: Zonotope) -> Self {
        Body::Zonotope(z)
    }
}

impl From<VPolytope> for Body {
    fn from(p: VPolytope) -> Self {
        Body::Polytope(p)
    }
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Box(b) => b.dim(),
            Body::Zonotope(z) => z.dim(),
            Body::Polytope(p) => p.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Body::Box(_) => "box",
            Body::Zonotope(_) => "zonotope",
            Body::Polytope(_) => "vpolytope",
        }
    }

    /// A vertex set whose convex hull is the body (may contain extra points).
    pub fn vertex_set(&self) -> Result<Vec<Point>> {
        match self {
            Body::Box(b) => Ok(b.corners()),
            Body::Zonotope(z) => Ok(z.vertices()),
            Body::Polytope(p) => Ok(p.vertices.clone()),
        }
    }
}

fn add(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale_point(p: &[Rational], s: &Rational) -> Point {
    p.iter().map(|x| x * s).collect()
}

/// Calls `f` with each `size`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, size, cur, f);
            cur.pop();
        }
    }
    if size <= n {
        go(0, n, size, &mut Vec::with_capacity(size), f);
    }
}

pub fn scale(b: &Body, lambda: &Rational) -> Result<Body> {
    if lambda.is_negative() {
        return Err(Error::Domain(format!("negative scaling factor {lambda}")));
    }
    Ok(match b {
        Body::Box(bx) => Body::Box(AxisBox { sides: bx.sides.iter().map(|s| s.scaled(lambda)).collect() }),
        Body::Zonotope(z) => Body::Zonotope(Zonotope {
            dim: z.dim,
            origin: scale_point(&z.origin, lambda),
            generators: z.generators.iter().map(|g| scale_point(g, lambda)).collect(),
        }),
        Body::Polytope(p) => Body::Polytope(VPolytope {
            dim: p.dim,
            vertices: p.vertices.iter().map(|v| scale_point(v, lambda)).collect(),
        }),
    })
}

/// `sum_i lambda_i * B_i` for nonnegative `lambda_i`.
///
/// Boxes stay boxes and zonotopes stay zonotopes (a box joins a zonotope sum
/// as its edge generators). Anything involving a vertex polytope goes through
/// pairwise vertex sums, which needs dimension at most three.
pub fn minkowski_sum(parts: &[(Rational, Body)]) -> Result<Body> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::Domain("empty Minkowski sum".into()));
    };
    let n = first.dim();
    if let Some((_, b)) = parts.iter().find(|(_, b)| b.dim() != n) {
        return Err(Error::Dimension(format!("cannot add a body in R^{} to one in R^{n}", b.dim())));
    }
    let scaled: Vec<Body> = parts.iter().map(|(l, b)| scale(b, l)).collect::<Result<_>>()?;

    if scaled.iter().all(|b| matches!(b, Body::Box(_))) {
        let mut sides: Vec<Interval> = vec![Interval { lo: Rational::zero(), hi: Rational::zero() }; n];
        for b in &scaled {
            let Body::Box(bx) = b else { unreachable!() };
            for (acc, s) in sides.iter_mut().zip(&bx.sides) {
                acc.lo += &s.lo;
                acc.hi += &s.hi;
            }
        }
        return Ok(Body::Box(AxisBox { sides }));
    }

    if scaled.iter().all(|b| !matches!(b, Body::Polytope(_))) {
        let mut origin = vec![Rational::zero(); n];
        let mut generators = Vec::new();
        for b in &scaled {
            let z = match b {
                Body::Box(bx) => bx.as_zonotope(),
                Body::Zonotope(z) => z.clone(),
                Body::Polytope(_) => unreachable!(),
            };
            origin = add(&origin, &z.origin);
            generators.extend(z.generators);
        }
        return Ok(Body::Zonotope(Zonotope { dim: n, origin, generators }));
    }

    if n > MAX_VPOLYTOPE_DIM {
        return Err(Error::Unsupported(format!(
            "sums involving vertex polytopes need dimension <= {MAX_VPOLYTOPE_DIM}, got {n}"
        )));
    }
    let mut acc: Vec<Point> = vec![vec![Rational::zero(); n]];
    for b in &scaled {
        let verts = b.vertex_set()?;
        acc = acc.iter().flat_map(|p| verts.iter().map(move |v| add(p, v))).collect();
    }
    Ok(Body::Polytope(VPolytope { dim: n, vertices: acc }))
}

pub fn volume(b: &Body) -> Result<Rational> {
    Ok(match b {
        Body::Box(bx) => bx.sides.iter().map(Interval::length).product(),
        Body::Zonotope(z) => z.volume(),
        Body::Polytope(p) => p.volume(),
    })
}

/// Dimension of the affine hull of the body.
pub fn affine_dimension(b: &Body) -> usize {
    match b {
        Body::Box(bx) => bx.sides.iter().filter(|s| s.lo != s.hi).count(),
        Body::Zonotope(z) => {
            if z.generators.is_empty() {
                0
            } else {
                rank(&Matrix::from_rows(z.generators.clone()).expect("generator lengths checked"))
            }
        }
        Body::Polytope(p) => {
            let base = &p.vertices[0];
            let diffs: Vec<Point> = p.vertices[1..].iter().map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            if diffs.is_empty() {
                0
            } else {
                rank(&Matrix::from_rows(diffs).expect("vertex lengths checked"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    pub(crate) fn bx(sides: &[(Rational, Rational)]) -> Body {
        Body::Box(AxisBox::new(sides.iter().map(|(a, b)| Interval::new(a.clone(), b.clone()).unwrap()).collect()).unwrap())
    }

    fn counterexample() -> [Body; 3] {
        let l = |v: &[Rational]| Body::Box(AxisBox::from_lengths(v).unwrap());
        [
            l(&[int(1), int(1), int(0)]),
            l(&[int(1), int(0), int(5)]),
            l(&[int(0), frac(1, 3), int(1)]),
        ]
    }

    fn unit(i: usize, n: usize) -> Point {
        (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()
    }

    #[test]
    fn scaling() {
        let cube = Body::Box(AxisBox::unit_cube(3));
        assert_eq!(scale(&cube, &int(2)).unwrap(), Body::Box(AxisBox::from_lengths(&vec![int(2); 3]).unwrap()));
        assert_eq!(scale(&cube, &int(1)).unwrap(), cube);
        let r = Body::Box(AxisBox::from_lengths(&[int(1), int(5)]).unwrap());
        assert_eq!(
            scale(&r, &frac(1, 5)).unwrap(),
            Body::Box(AxisBox::from_lengths(&[frac(1, 5), int(1)]).unwrap())
        );
        assert!(scale(&cube, &int(-1)).is_err());
        let zero = scale(&bx(&[(int(1), int(2))]), &int(0)).unwrap();
        assert_eq!(affine_dimension(&zero), 0);
    }

    #[test]
    fn sums() {
        let [a1, a2, a3] = counterexample();
        let s = minkowski_sum(&[(int(1), a1.clone()), (int(1), a2), (int(1), a3)]).unwrap();
        assert_eq!(s, Body::Box(AxisBox::from_lengths(&[int(2), frac(4, 3), int(6)]).unwrap()));
        assert_eq!(volume(&s).unwrap(), int(16));
        assert_eq!(minkowski_sum(&[(int(1), a1.clone())]).unwrap(), a1);

        let e1 = Body::Zonotope(Zonotope::segment(unit(0, 2)).unwrap());
        let e2 = Body::Zonotope(Zonotope::segment(unit(1, 2)).unwrap());
        let Body::Zonotope(z) = minkowski_sum(&[(int(1), e1), (int(1), e2)]).unwrap() else { panic!() };
        assert_eq!(z.generators(), &[unit(0, 2), unit(1, 2)]);

        assert!(minkowski_sum(&[]).is_err());
        let cube = Body::Box(AxisBox::unit_cube(2));
        assert!(minkowski_sum(&[(int(1), cube), (int(1), a1)]).is_err());
    }

    #[test]
    fn polytope_sums_capped_at_three_dimensions() {
        let p = Body::Polytope(VPolytope::new(vec![vec![int(0); 3], unit(0, 3)]).unwrap());
        let c = Body::Box(AxisBox::unit_cube(3));
        let s = minkowski_sum(&[(int(1), p), (int(1), c)]).unwrap();
        assert_eq!(volume(&s).unwrap(), int(2));
        assert!(VPolytope::new(vec![vec![int(0); 4]]).is_err());
        let z4 = Body::Zonotope(Zonotope::segment(unit(0, 4)).unwrap());
        let b4 = Body::Box(AxisBox::unit_cube(4));
        // box + zonotope stays a zonotope in any dimension
        assert_eq!(volume(&minkowski_sum(&[(int(1), z4), (int(1), b4)]).unwrap()).unwrap(), int(2));
    }

    #[test]
    fn volumes() {
        assert_eq!(volume(&Body::Box(AxisBox::unit_cube(3))).unwrap(), int(1));
        let z = Body::Zonotope(Zonotope::new(3, vec![unit(0, 3), unit(1, 3), unit(2, 3)]).unwrap());
        assert_eq!(volume(&z).unwrap(), int(1));
        let [a1, ..] = counterexample();
        assert_eq!(volume(&a1).unwrap(), int(0));
        // hexagon: three generators in the plane
        let hex = Zonotope::new(2, vec![unit(0, 2), unit(1, 2), vec![int(1), int(1)]]).unwrap();
        assert_eq!(hex.volume(), int(3));
        let hex_v = VPolytope::new(hex.vertices()).unwrap();
        assert_eq!(hex_v.volume(), int(3));
        let seg = VPolytope::new(vec![vec![int(3)], vec![int(-1)], vec![int(0)]]).unwrap();
        assert_eq!(seg.volume(), int(4));
    }

    #[test]
    fn affine_dimensions() {
        let [a1, ..] = counterexample();
        assert_eq!(affine_dimension(&a1), 2);
        assert_eq!(affine_dimension(&Body::Polytope(VPolytope::new(vec![vec![int(1), int(2)]]).unwrap())), 0);
        assert_eq!(affine_dimension(&Body::Box(AxisBox::unit_cube(3))), 3);
        let z = Body::Zonotope(Zonotope::new(3, vec![unit(0, 3), vec![int(2), int(0), int(0)]]).unwrap());
        assert_eq!(affine_dimension(&z), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn side() -> impl Strategy<Value = (Rational, Rational)> {
            (-3i64..=3, 0i64..=4, 1i64..=3).prop_map(|(lo, len, q)| (frac(lo, q), frac(lo + len, q)))
        }

        fn boxes(n: usize) -> impl Strategy<Value = Vec<Body>> {
            proptest::collection::vec(proptest::collection::vec(side(), n), 1..4)
                .prop_map(|v| v.iter().map(|s| bx(s)).collect())
        }

        fn lam() -> impl Strategy<Value = Rational> {
            (0i64..=6, 1i64..=3).prop_map(|(p, q)| frac(p, q))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn box_sum_volume_is_product_of_side_sums(bs in boxes(3), ls in proptest::collection::vec(lam(), 3)) {
                let parts: Vec<(Rational, Body)> = ls.iter().cloned().zip(bs.iter().cloned()).collect();
                let direct: Rational = (0..3).map(|c| {
                    parts.iter().map(|(l, b)| {
                        let Body::Box(bx) = b else { unreachable!() };
                        l * bx.sides()[c].length()
                    }).sum::<Rational>()
                }).product();
                prop_assert_eq!(volume(&minkowski_sum(&parts).unwrap()).unwrap(), direct);
                let mut rev = parts.clone();
                rev.reverse();
                prop_assert_eq!(volume(&minkowski_sum(&rev).unwrap()).unwrap(), volume(&minkowski_sum(&parts).unwrap()).unwrap());
            }

            #[test]
            fn volume_is_homogeneous(bs in boxes(3), l in lam()) {
                let b = &bs[0];
                let lhs = volume(&scale(b, &l).unwrap()).unwrap();
                prop_assert_eq!(lhs, l.pow(3) * volume(b).unwrap());
            }

            #[test]
            fn one_body_three_representations(bs in boxes(3)) {
                let b = &bs[0];
                let Body::Box(inner) = b else { unreachable!() };
                let z = Body::Zonotope(inner.as_zonotope());
                let p = Body::Polytope(VPolytope::new(b.vertex_set().unwrap()).unwrap());
                let v = volume(b).unwrap();
                prop_assert_eq!(volume(&z).unwrap(), v.clone());
                prop_assert_eq!(volume(&p).unwrap(), v);
                prop_assert_eq!(affine_dimension(&z), affine_dimension(b));
                prop_assert_eq!(affine_dimension(&p), affine_dimension(b));
            }

            #[test]
            fn zonotope_volume_matches_hull_volume(
                gens in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 0..5)
            ) {
                let gens: Vec<Point> = gens.into_iter().map(|g| g.into_iter().map(int).collect()).collect();
                let z = Zonotope::new(3, gens).unwrap();
                let p = VPolytope::new(z.vertices()).unwrap();
                prop_assert_eq!(z.volume(), p.volume());
            }
        }
    }
}
