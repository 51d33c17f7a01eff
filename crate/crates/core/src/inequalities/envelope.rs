//! Concave-envelope test for `f(I) = log V_I` on the discrete simplex.
//!
//! At a center `I` the envelope value is the maximum of `sum_J w_J f(J)` over
//! weights `w >= 0` on other points with `sum w_J = 1` and `sum w_J J = I`.
//! The objective is linear in `w`, so the maximum sits at a vertex of that
//! weight polytope. Vertices are supported on linearly independent point
//! sets (the points all lie on the hyperplane `|J| = n`, so linear and affine
//! independence coincide), which gives a finite exact search. Each vertex is
//! scored with the multiplicative comparison from [`Certificate`].

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{Certificate, LogValue, Report, ReportBuilder};
use crate::mixed::{MultiIndex, VolumePolynomial};
use crate::numerics::{simplex_max, solve_unique, LpOutcome, Matrix};
use crate::rational::Rational;

struct CenterResult {
    vertices: usize,
    best: Option<Certificate>,
}

fn to_q(v: usize) -> Rational {
    Rational::from_integer(v.into())
}

/// Constraint matrix `[J_1 ... J_m; 1 ... 1]` for the listed points.
fn constraints(points: &[&MultiIndex], k: usize) -> Matrix {
    let mut rows: Vec<Vec<Rational>> = (0..k).map(|c| points.iter().map(|p| to_q(p.0[c])).collect()).collect();
    rows.push(vec![to_q(1); points.len()]);
    Matrix::from_rows(rows).expect("rectangular by construction")
}

fn target(center: &MultiIndex) -> Vec<Rational> {
    center.0.iter().map(|&v| to_q(v)).chain(std::iter::once(to_q(1))).collect()
}

/// Walks linearly independent subsets of `cands` (size at most `k`),
/// calling `visit` on each. Dependent prefixes are pruned.
fn independent_subsets(cands: &[&MultiIndex], k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(
        cands: &[&MultiIndex],
        k: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        basis: &mut Vec<(usize, Vec<Rational>)>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        for i in start..cands.len() {
            let mut row: Vec<Rational> = cands[i].0.iter().map(|&v| to_q(v)).collect();
            for (p, b) in basis.iter() {
                if !row[*p].is_zero() {
                    let f = &row[*p] / &b[*p];
                    for (r, x) in row.iter_mut().zip(b) {
                        *r -= &f * x;
                    }
                }
            }
            let Some(p) = row.iter().position(|v| !v.is_zero()) else {
                continue;
            };
            chosen.push(i);
            basis.push((p, row));
            visit(chosen);
            if chosen.len() < k {
                go(cands, k, i + 1, chosen, basis, visit);
            }
            basis.pop();
            chosen.pop();
        }
    }
    go(cands, k, 0, &mut Vec::new(), &mut Vec::new(), visit);
}

fn test_center(vp: &VolumePolynomial, center: &MultiIndex) -> CenterResult {
    let k = vp.k();
    let none = CenterResult { vertices: 0, best: None };
    // log 0 = -inf: such centers cannot be beaten, such points cannot help
    if !LogValue::of(&vp.value(center)).map(|l| l.is_finite()).unwrap_or(false) {
        return none;
    }
    let cands: Vec<&MultiIndex> = vp
        .iter()
        .filter(|(j, v)| *j != center && v.is_positive())
        .map(|(j, _)| j)
        .collect();
    if cands.is_empty() {
        return none;
    }
    let b = target(center);
    let feasible = simplex_max(&vec![Rational::zero(); cands.len()], &constraints(&cands, k), &b)
        .map(|o| matches!(o, LpOutcome::Optimal { .. }))
        .unwrap_or(false);
    if !feasible {
        return none;
    }

    let mut out = CenterResult { vertices: 0, best: None };
    independent_subsets(&cands, k, &mut |subset| {
        let pts: Vec<&MultiIndex> = subset.iter().map(|&i| cands[i]).collect();
        let Ok(Some(w)) = solve_unique(&constraints(&pts, k), &b) else {
            return;
        };
        if !w.iter().all(Signed::is_positive) {
            return;
        }
        let support = pts.into_iter().cloned().zip(w).collect();
        let cert = Certificate::build(center.clone(), support, |i| vp.value(i)).expect("vertex weights are valid");
        out.vertices += 1;
        let better = match &out.best {
            None => true,
            Some(b) => cert.severity_cmp(b) == Ordering::Greater,
        };
        if better {
            out.best = Some(cert);
        }
    });
    out
}

/// Whether `log V_I` is concave on the whole discrete simplex, i.e. no
/// point lies strictly below the concave envelope of the others.
///
/// For each failing center the certificate is the envelope-maximizing vertex.
pub fn gromov_concavity(vp: &VolumePolynomial) -> Report {
    let centers: Vec<&MultiIndex> = vp.iter().map(|(i, _)| i).collect();
    let results: Vec<CenterResult> = centers.par_iter().map(|c| test_center(vp, c)).collect();
    let mut r = ReportBuilder::default();
    for res in results {
        r.count(res.vertices);
        if let Some(best) = res.best {
            r.consider(&best);
            if best.is_violation() {
                r.push_failure(best);
            }
        }
    }
    r.finish(false)
}
