//! One-sided Hausdorff distance between nested convex bodies.

use super::{ConvexBody, Shape};
use crate::consts::NESTING_TOL;
use crate::error::{Error, Result};
use crate::vector::{self as v, Vector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hausdorff {
    pub h: f64,
    /// Projection of `b` onto the inner body.
    pub a: Vector,
    /// Maximising extreme point of the outer body.
    pub b: Vector,
    /// Number of maximising extreme points within 1e-6 of the maximum.
    pub maximizers: usize,
}

const SAMPLES_2D: usize = 4096;
const SAMPLES_3D: usize = 6000;

/// How far `inner` sticks out of `outer` (non-positive when nested).
pub fn nested_excess(inner: &ConvexBody, outer: &ConvexBody) -> f64 {
    if let Shape::Ball { center, radius } = inner.shape() {
        if let Some(p) = outer.exact_polytope() {
            return p.halfspaces().iter().map(|h| v::dot(&h.normal, center) + radius - h.offset).fold(f64::NEG_INFINITY, f64::max);
        }
        if let Shape::Ball { center: c2, radius: r2 } = outer.shape() {
            return v::dist(center, c2) + radius - r2;
        }
    }
    let res = if inner.dim() == 3 { SAMPLES_3D } else { SAMPLES_2D };
    inner.extreme_points(res).iter().map(|x| outer.excess(x)).fold(f64::NEG_INFINITY, f64::max)
}

/// h(A, B) = max_{y in B} dist(y, A) for A contained in B.
pub fn hausdorff_distance(a: &ConvexBody, b: &ConvexBody) -> Result<Hausdorff> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: a.dim() });
    }
    let scale = b.bounding_radius().max(1.0);
    let excess = nested_excess(a, b);
    if excess > NESTING_TOL * scale {
        return Err(Error::NotNested { excess });
    }
    let inner_poly = match a.shape() {
        Shape::Ball { .. } => None,
        _ => Some(a.approximate_polytope()?),
    };
    let dist = |y: &Vector| {
        let q = match &inner_poly {
            Some(p) => p.project(y),
            None => a.project(y),
        };
        (v::dist(y, &q), q)
    };
    let dim = b.dim();
    let res = if dim == 3 { SAMPLES_3D } else { SAMPLES_2D };
    let mut cands: Vec<(f64, Vector)> = b.extreme_points(res).into_iter().map(|y| (dist(&y).0, y)).collect();
    if let Shape::Ball { center, radius } = b.shape() {
        let spacing = if dim == 2 { 2.0 * std::f64::consts::PI / SAMPLES_2D as f64 } else { (4.0 * std::f64::consts::PI / SAMPLES_3D as f64).sqrt() };
        cands.sort_by(|x, y| y.0.total_cmp(&x.0));
        let seeds: Vec<Vector> = cands.iter().take(12).map(|c| c.1).collect();
        for s in seeds {
            let u0 = v::normalize(&v::sub(&s, center)).unwrap();
            let f = |u: &Vector| dist(&v::axpy(center, *radius, u)).0;
            let u = refine_direction(dim, u0, spacing, &f);
            let y = v::axpy(center, *radius, &u);
            cands.push((dist(&y).0, y));
        }
    }
    let hmax = cands.iter().map(|c| c.0).fold(0.0, f64::max);
    let tie = 1e-9 * scale;
    let best = cands.iter().filter(|c| c.0 >= hmax - tie).min_by(|x, y| v::lex_cmp(&x.1, &y.1, dim)).map(|c| c.1).unwrap();
    let mut near: Vec<Vector> = Vec::new();
    for c in cands.iter().filter(|c| c.0 >= hmax - 1e-6 * scale) {
        if !near.iter().any(|q| v::dist(q, &c.1) < 1e-3 * scale) {
            near.push(c.1);
        }
    }
    let (h, a_pt) = dist(&best);
    Ok(Hausdorff { h, a: a_pt, b: best, maximizers: near.len() })
}

/// Pattern search for a maximiser of f over unit vectors near u0.
fn refine_direction<F: Fn(&Vector) -> f64>(dim: usize, u0: Vector, step0: f64, f: &F) -> Vector {
    let mut u = u0;
    let mut fu = f(&u);
    let mut step = step0;
    while step > 1e-13 {
        let tangents = v::orthonormal_complement(&u, dim);
        let mut improved = false;
        for t in &tangents {
            for sgn in [-1.0, 1.0] {
                let cand = v::normalize(&v::axpy(&u, sgn * step, t)).unwrap();
                let fc = f(&cand);
                if fc > fu {
                    u = cand;
                    fu = fc;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    u
}
