//! Convex bodies and the geometric primitives used by the engines.

mod hausdorff;
mod io;
mod polytope;
mod profile;

pub use hausdorff::{hausdorff_distance, nested_excess, Hausdorff};
pub use io::{BodySpec, HalfSpaceSpec, ShapeSpec};
pub use polytope::{closest_on_segment, hull_2d, polygon_area, Polytope};
pub use profile::{interp, linear_profile_volume, Axial, AxialKind, ProfileBody};

use crate::consts::{unit_ball_volume, MEMBERSHIP_TOL, NESTING_TOL};
use crate::error::{Error, Result};
use crate::vector::{self as v, Vector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Polygon resolution used when a round body has to be cut or projected.
pub const ROUND_RESOLUTION_2D: usize = 1024;
/// Number of sphere samples used for 3D round bodies.
pub const ROUND_RESOLUTION_3D: usize = 1500;

/// The set {x : normal . x <= offset}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vector,
    pub offset: f64,
}

impl HalfSpace {
    /// Normalises `normal` (and rescales `offset` accordingly).
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let n = v::norm(&normal);
        if !(n > 0.0 && n.is_finite() && offset.is_finite()) {
            return Err(Error::InvalidArgument("half-space normal must be non-zero and finite".into()));
        }
        Ok(HalfSpace { normal: v::scale(&normal, 1.0 / n), offset: offset / n })
    }

    pub(crate) fn unchecked(normal: Vector, offset: f64) -> Self {
        HalfSpace { normal, offset }
    }

    /// Smallest dimension whose coordinates carry the normal.
    pub fn dim_hint(&self) -> usize {
        (0..3).rev().find(|&i| self.normal[i] != 0.0).map_or(0, |i| i + 1)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        v::dot(&self.normal, x) <= self.offset + MEMBERSHIP_TOL * self.offset.abs().max(1.0)
    }

    pub fn signed_distance(&self, x: &Vector) -> f64 {
        v::dot(&self.normal, x) - self.offset
    }
}

/// Right circular cone: convex hull of `apex` and the disc of `radius`
/// around `base_center` orthogonal to `axis` (unit, base towards apex).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    pub apex: Vector,
    pub base_center: Vector,
    pub radius: f64,
    pub axis: Vector,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    HPolytope(Arc<Polytope>),
    Ball { center: Vector, radius: f64 },
    Box { min: Vector, max: Vector },
    Cone(Cone),
    Profile(Arc<ProfileBody>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    shape: Shape,
    bbox: (Vector, Vector),
    poly: Option<Arc<Polytope>>,
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn finite(p: &Vector) -> bool {
    p.iter().all(|x| x.is_finite())
}

/// Ensure trailing coordinates beyond `dim` are zero.
fn check_point(dim: usize, p: &Vector) -> Result<()> {
    if !finite(p) || p[dim..].iter().any(|&x| x != 0.0) {
        return Err(Error::InvalidArgument(format!("point {p:?} is not a finite point of R^{dim}")));
    }
    Ok(())
}

impl ConvexBody {
    fn assemble(dim: usize, shape: Shape, poly: Option<Arc<Polytope>>) -> Self {
        let mut b = ConvexBody { dim, shape, bbox: (v::ZERO, v::ZERO), poly };
        let mut lo = v::ZERO;
        let mut hi = v::ZERO;
        for i in 0..dim {
            let mut e = v::ZERO;
            e[i] = 1.0;
            hi[i] = b.support(&e);
            lo[i] = -b.support(&v::scale(&e, -1.0));
        }
        b.bbox = (lo, hi);
        b
    }

    pub fn ball(dim: usize, center: Vector, radius: f64) -> Result<Self> {
        check_dim(dim)?;
        check_point(dim, &center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidBody("ball radius must be positive".into()));
        }
        if dim == 1 {
            let p = Polytope::from_points(1, &[[center[0] - radius, 0.0, 0.0], [center[0] + radius, 0.0, 0.0]])?;
            return Ok(Self::assemble(1, Shape::Ball { center, radius }, Some(Arc::new(p))));
        }
        Ok(Self::assemble(dim, Shape::Ball { center, radius }, None))
    }

    pub fn cuboid(dim: usize, min: Vector, max: Vector) -> Result<Self> {
        check_dim(dim)?;
        check_point(dim, &min)?;
        check_point(dim, &max)?;
        if (0..dim).any(|i| !(max[i] > min[i])) {
            return Err(Error::InvalidBody("box must have max > min in every coordinate".into()));
        }
        let mut pts = Vec::new();
        for mask in 0..(1usize << dim) {
            let mut p = v::ZERO;
            for i in 0..dim {
                p[i] = if mask >> i & 1 == 1 { max[i] } else { min[i] };
            }
            pts.push(p);
        }
        let poly = Polytope::from_points(dim, &pts)?;
        Ok(Self::assemble(dim, Shape::Box { min, max }, Some(Arc::new(poly))))
    }

    pub fn polytope(poly: Polytope) -> Self {
        let dim = poly.dim();
        let p = Arc::new(poly);
        Self::assemble(dim, Shape::HPolytope(p.clone()), Some(p))
    }

    pub fn from_points(dim: usize, pts: &[Vector]) -> Result<Self> {
        check_dim(dim)?;
        for p in pts {
            check_point(dim, p)?;
        }
        Ok(Self::polytope(Polytope::from_points(dim, pts)?))
    }

    pub fn from_halfspaces(dim: usize, hs: &[HalfSpace]) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::polytope(Polytope::from_halfspaces(dim, hs)?))
    }

    pub fn profile(p: ProfileBody) -> Result<Self> {
        check_point(p.dim, &p.anchor)?;
        if !(p.volume() > 0.0) {
            return Err(Error::InvalidBody("profile body has empty interior".into()));
        }
        let dim = p.dim;
        let poly = if dim == 2 { Some(Arc::new(profile_polygon(&p.axial())?)) } else { None };
        Ok(Self::assemble(dim, Shape::Profile(Arc::new(p)), poly))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn bbox(&self) -> (Vector, Vector) {
        self.bbox
    }

    /// Radius of a ball around the origin containing the body.
    pub fn bounding_radius(&self) -> f64 {
        let (lo, hi) = self.bbox;
        let mut far = v::ZERO;
        for i in 0..3 {
            far[i] = lo[i].abs().max(hi[i].abs());
        }
        v::norm(&far)
    }

    /// Centre and radius of a ball containing the body.
    pub fn bounding_ball(&self) -> (Vector, f64) {
        let (lo, hi) = self.bbox;
        let c = v::scale(&v::add(&lo, &hi), 0.5);
        (c, 0.5 * v::dist(&lo, &hi))
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.shape, Shape::Cone(c) if c.radius == 0.0 || c.height == 0.0)
    }

    /// Exact polytope form when the body is polyhedral.
    pub fn exact_polytope(&self) -> Option<&Arc<Polytope>> {
        self.poly.as_ref()
    }

    pub fn axial(&self) -> Option<Axial> {
        match &self.shape {
            Shape::Ball { center, radius } if self.dim >= 2 => {
                let mut axis = v::ZERO;
                axis[self.dim - 1] = 1.0;
                Some(Axial { dim: self.dim, axis, anchor: *center, kind: AxialKind::Round(*radius) })
            }
            Shape::Cone(c) if self.dim >= 2 && c.height > 0.0 => {
                Some(Axial { dim: self.dim, axis: c.axis, anchor: c.base_center, kind: AxialKind::Linear { t: vec![0.0, c.height], r: vec![c.radius, 0.0] } })
            }
            Shape::Profile(p) => Some(p.axial()),
            _ => None,
        }
    }

    /// Axial description with the given axis, when the body is symmetric
    /// about a line parallel to it.
    pub fn axial_along(&self, nu: &Vector) -> Option<Axial> {
        let mut ax = self.axial()?;
        if let AxialKind::Round(_) = ax.kind {
            ax.axis = *nu;
            return Some(ax);
        }
        let c = v::dot(&ax.axis, nu);
        if (c.abs() - 1.0).abs() > 1e-12 {
            return None;
        }
        Some(ax)
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self.contains_point(&v::from_slice(x), MEMBERSHIP_TOL))
    }

    pub fn contains_point(&self, x: &Vector, tol: f64) -> bool {
        self.excess(x) <= tol * self.bounding_radius().max(1.0)
    }

    /// Constraint violation of `x`; non-positive exactly on the body.
    pub fn excess(&self, x: &Vector) -> f64 {
        if let Some(p) = &self.poly {
            return p.excess(x);
        }
        match &self.shape {
            Shape::Ball { center, radius } => v::dist(x, center) - radius,
            Shape::Cone(c) if c.height == 0.0 => {
                let rel = v::sub(x, &c.base_center);
                let t = v::dot(&rel, &c.axis).abs();
                t.max(v::norm(&v::reject(&rel, &c.axis)) - c.radius)
            }
            Shape::Cone(c) if c.radius == 0.0 => {
                let q = closest_on_segment(x, &c.base_center, &c.apex);
                v::dist(x, &q)
            }
            _ => self.axial().map(|a| a.excess(x)).unwrap_or(f64::INFINITY),
        }
    }

    /// Support function h(u) = max_{x in body} x . u.
    pub fn support(&self, u: &Vector) -> f64 {
        if let Some(p) = &self.poly {
            return p.support(u);
        }
        match &self.shape {
            Shape::Ball { center, radius } => v::dot(center, u) + radius * v::norm(u),
            Shape::Cone(c) => {
                let base = v::dot(&c.base_center, u) + c.radius * v::norm(&v::reject(u, &c.axis));
                base.max(v::dot(&c.apex, u))
            }
            Shape::Profile(p) => p.axial().support_value(u),
            _ => unreachable!("polyhedral shapes carry a polytope"),
        }
    }

    /// Interval of x . nu over the body.
    pub fn extent(&self, nu: &Vector) -> (f64, f64) {
        (-self.support(&v::scale(nu, -1.0)), self.support(nu))
    }

    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => unit_ball_volume(self.dim) * radius.powi(self.dim as i32),
            Shape::Box { min, max } => (0..self.dim).map(|i| max[i] - min[i]).product(),
            Shape::HPolytope(p) => p.volume(),
            Shape::Cone(c) => unit_ball_volume(self.dim - 1) / self.dim as f64 * c.height * c.radius.powi(self.dim as i32 - 1),
            Shape::Profile(p) => p.volume(),
        }
    }

    pub fn euclidean_perimeter(&self) -> f64 {
        if self.dim == 1 {
            return 2.0;
        }
        match &self.shape {
            Shape::Ball { radius, .. } => self.dim as f64 * unit_ball_volume(self.dim) * radius.powi(self.dim as i32 - 1),
            Shape::Box { .. } | Shape::HPolytope(_) => self.poly.as_ref().unwrap().surface_measure(),
            Shape::Cone(c) => {
                let slant = c.radius.hypot(c.height);
                if self.dim == 2 {
                    2.0 * c.radius + 2.0 * slant
                } else {
                    PI * c.radius * c.radius + PI * c.radius * slant
                }
            }
            Shape::Profile(p) => {
                let (t, r) = (&p.t_grid, &p.radii);
                let m = t.len();
                let mut s = 0.0;
                for i in 1..m {
                    let slant = (t[i] - t[i - 1]).hypot(r[i] - r[i - 1]);
                    s += if self.dim == 2 { 2.0 * slant } else { PI * (r[i] + r[i - 1]) * slant };
                }
                let caps = if self.dim == 2 { 2.0 * (r[0] + r[m - 1]) } else { PI * (r[0] * r[0] + r[m - 1] * r[m - 1]) };
                s + caps
            }
        }
    }

    /// (n-1)-measure of the section {x . nu = t}.
    pub fn slice(&self, nu: &Vector, t: f64) -> f64 {
        if self.dim == 1 {
            let x = [t * nu[0], 0.0, 0.0];
            return if self.contains_point(&x, MEMBERSHIP_TOL) { 1.0 } else { 0.0 };
        }
        if let Some(p) = &self.poly {
            return p.slice(nu, t);
        }
        if let Shape::Ball { center, radius } = &self.shape {
            let d = t - v::dot(center, nu);
            let q = radius * radius - d * d;
            return if q > 0.0 { unit_ball_volume(self.dim - 1) * q.powf((self.dim as f64 - 1.0) / 2.0) } else { 0.0 };
        }
        if self.is_degenerate() {
            return 0.0;
        }
        if let Some(ax) = self.axial_along(nu) {
            let sign = v::dot(&ax.axis, nu).signum();
            let tau = sign * t - v::dot(&ax.anchor, &ax.axis);
            return ax.section(tau);
        }
        match self.approximate_polytope() {
            Ok(p) => p.slice(nu, t),
            Err(_) => 0.0,
        }
    }

    /// Parameter interval of the line p + lambda d (|d| = 1) inside the body.
    pub fn chord(&self, p: &Vector, d: &Vector) -> Option<(f64, f64)> {
        if let Some(poly) = &self.poly {
            return poly.chord(p, d);
        }
        match &self.shape {
            Shape::Cone(c) if c.height == 0.0 || c.radius == 0.0 => None,
            _ => self.axial().and_then(|a| a.chord(p, d)),
        }
    }

    /// Exact polytope for polyhedral shapes, inscribed approximation for
    /// round ones.
    pub fn approximate_polytope(&self) -> Result<Arc<Polytope>> {
        if let Some(p) = &self.poly {
            return Ok(p.clone());
        }
        let pts = self.extreme_points(if self.dim == 2 { ROUND_RESOLUTION_2D } else { ROUND_RESOLUTION_3D });
        Ok(Arc::new(Polytope::from_points(self.dim, &pts)?))
    }

    /// Points whose convex hull is the body (polyhedral) or a dense sample
    /// of its extreme points (round shapes).
    pub fn extreme_points(&self, res: usize) -> Vec<Vector> {
        if let Some(p) = &self.poly {
            return p.vertices().to_vec();
        }
        match &self.shape {
            Shape::Ball { center, radius } => sphere_points(self.dim, res).iter().map(|u| v::axpy(center, *radius, u)).collect(),
            Shape::Cone(c) => {
                let mut pts = vec![c.apex];
                pts.extend(ring(self.dim, &c.base_center, &c.axis, c.radius, circle_count(self.dim, res)));
                pts
            }
            Shape::Profile(p) => {
                let ax = p.axial();
                let stride = (p.t_grid.len() / 96).max(1);
                let mut idx: Vec<usize> = (0..p.t_grid.len()).step_by(stride).collect();
                if *idx.last().unwrap() != p.t_grid.len() - 1 {
                    idx.push(p.t_grid.len() - 1);
                }
                let per = circle_count(self.dim, res / idx.len().max(1) * 4).max(24);
                let mut pts = Vec::new();
                for i in idx {
                    let c = v::axpy(&ax.anchor, p.t_grid[i], &ax.axis);
                    pts.extend(ring(self.dim, &c, &ax.axis, p.radii[i], per));
                }
                pts
            }
            _ => unreachable!(),
        }
    }

    /// Closest point of the body to `y`.
    pub fn project(&self, y: &Vector) -> Vector {
        if let Shape::Ball { center, radius } = &self.shape {
            let d = v::sub(y, center);
            let n = v::norm(&d);
            return if n <= *radius * (1.0 + MEMBERSHIP_TOL) { *y } else { v::axpy(center, radius / n, &d) };
        }
        if let Shape::Cone(c) = &self.shape {
            if c.radius == 0.0 {
                return closest_on_segment(y, &c.base_center, &c.apex);
            }
        }
        match self.approximate_polytope() {
            Ok(p) => p.project(y),
            Err(_) => *y,
        }
    }

    pub fn translated(&self, t: &Vector) -> Result<Self> {
        let sh = |p: &Vector| v::add(p, t);
        match &self.shape {
            Shape::Ball { center, radius } => Self::ball(self.dim, sh(center), *radius),
            Shape::Box { min, max } => Self::cuboid(self.dim, sh(min), sh(max)),
            Shape::HPolytope(p) => Ok(Self::polytope(p.map_points(sh)?)),
            Shape::Cone(c) => build_cone(self.dim, sh(&c.apex), sh(&c.base_center), c.radius, c.axis),
            Shape::Profile(p) => {
                let mut q = (**p).clone();
                q.anchor = sh(&q.anchor);
                Self::profile(q)
            }
        }
    }

    /// Image under x -> k x (k > 0).
    pub fn scaled(&self, k: f64) -> Result<Self> {
        let sc = |p: &Vector| v::scale(p, k);
        match &self.shape {
            Shape::Ball { center, radius } => Self::ball(self.dim, sc(center), radius * k),
            Shape::Box { min, max } => Self::cuboid(self.dim, sc(min), sc(max)),
            Shape::HPolytope(p) => Ok(Self::polytope(p.map_points(sc)?)),
            Shape::Cone(c) => build_cone(self.dim, sc(&c.apex), sc(&c.base_center), c.radius * k, c.axis),
            Shape::Profile(p) => {
                let mut q = (**p).clone();
                q.anchor = sc(&q.anchor);
                q.t_grid.iter_mut().for_each(|t| *t *= k);
                q.radii.iter_mut().for_each(|r| *r *= k);
                Self::profile(q)
            }
        }
    }
}

fn circle_count(dim: usize, res: usize) -> usize {
    if dim == 2 {
        2
    } else {
        ((res as f64).sqrt() as usize * 4).max(64)
    }
}

/// Boundary points of the (n-1)-disc of radius r around c orthogonal to axis.
fn ring(dim: usize, c: &Vector, axis: &Vector, r: f64, count: usize) -> Vec<Vector> {
    let basis = v::orthonormal_complement(axis, dim);
    if dim == 2 {
        return vec![v::axpy(c, r, &basis[0]), v::axpy(c, -r, &basis[0])];
    }
    (0..count)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / count as f64;
            v::axpy(&v::axpy(c, r * a.cos(), &basis[0]), r * a.sin(), &basis[1])
        })
        .collect()
}

/// Evenly spread unit vectors: a regular polygon in 2D and a Fibonacci
/// lattice in 3D.
pub fn sphere_points(dim: usize, res: usize) -> Vec<Vector> {
    match dim {
        1 => vec![[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
        2 => (0..res)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / res as f64;
                [a.cos(), a.sin(), 0.0]
            })
            .collect(),
        _ => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..res)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / res as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    [r * a.cos(), r * a.sin(), z]
                })
                .collect()
        }
    }
}

fn profile_polygon(ax: &Axial) -> Result<Polytope> {
    let AxialKind::Linear { t, r } = &ax.kind else {
        return Err(Error::InvalidBody("round profile has no exact polygon".into()));
    };
    let perp = [-ax.axis[1], ax.axis[0], 0.0];
    let mut pts = Vec::with_capacity(2 * t.len());
    for (ti, ri) in t.iter().zip(r) {
        let c = v::axpy(&ax.anchor, *ti, &ax.axis);
        pts.push(v::axpy(&c, *ri, &perp));
        pts.push(v::axpy(&c, -*ri, &perp));
    }
    Polytope::from_points(2, &pts)
}

/// Right circular cone with apex `apex` over the disc of radius
/// `base_radius` around `base_center` orthogonal to `axis`.
pub fn build_cone(dim: usize, apex: Vector, base_center: Vector, base_radius: f64, axis: Vector) -> Result<ConvexBody> {
    check_dim(dim)?;
    check_point(dim, &apex)?;
    check_point(dim, &base_center)?;
    if !(base_radius >= 0.0 && base_radius.is_finite()) {
        return Err(Error::InvalidBody("cone radius must be non-negative".into()));
    }
    let mut axis = v::normalize(&axis).ok_or_else(|| Error::Misaligned("zero axis".into()))?;
    let d = v::sub(&apex, &base_center);
    let h = v::norm(&d);
    if h > 0.0 {
        let off = v::norm(&v::reject(&d, &axis));
        if off > 1e-9 * h.max(1.0) {
            return Err(Error::Misaligned(format!("apex is off the axis by {off:.3e}")));
        }
        if v::dot(&d, &axis) < 0.0 {
            axis = v::scale(&axis, -1.0);
        }
    }
    let cone = Cone { apex, base_center, radius: base_radius, axis, height: h };
    let poly = if h > 0.0 && base_radius > 0.0 {
        match dim {
            1 => Some(Arc::new(Polytope::from_points(1, &[apex, base_center])?)),
            2 => {
                let mut pts = vec![apex];
                pts.extend(ring(2, &base_center, &axis, base_radius, 2));
                Some(Arc::new(Polytope::from_points(2, &pts)?))
            }
            _ => None,
        }
    } else if dim == 1 && h > 0.0 {
        Some(Arc::new(Polytope::from_points(1, &[apex, base_center])?))
    } else {
        None
    };
    Ok(ConvexBody::assemble(dim, Shape::Cone(cone), poly))
}

/// The body intersected with a half-space, in polytope form (the body
/// itself when the half-space does not cut it).
pub fn intersect_halfspace(body: &ConvexBody, hs: &HalfSpace) -> Result<ConvexBody> {
    if hs.dim_hint() > body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: hs.dim_hint() });
    }
    let scale = body.bounding_radius().max(1.0);
    if body.support(&hs.normal) <= hs.offset + MEMBERSHIP_TOL * scale {
        return Ok(body.clone());
    }
    if -body.support(&v::scale(&hs.normal, -1.0)) >= hs.offset - NESTING_TOL * scale {
        return Err(Error::EmptyIntersection);
    }
    let poly = body.approximate_polytope()?;
    match poly.clip(hs)? {
        Some(p) => Ok(ConvexBody::polytope(p)),
        None => Err(Error::EmptyIntersection),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexBody {
        ConvexBody::cuboid(2, v::ZERO, [1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let b = ConvexBody::ball(2, v::ZERO, 1.0).unwrap();
        assert!(b.contains(&[0.0, 0.0]).unwrap());
        assert!(!b.contains(&[2.0, 0.0]).unwrap());
        assert!(unit_square().contains(&[0.5, 1.0]).unwrap());
        assert!(b.contains(&[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn volumes_and_perimeters() {
        let cube = ConvexBody::cuboid(3, v::ZERO, [1.0; 3]).unwrap();
        assert!((cube.volume() - 1.0).abs() < 1e-15);
        let tri = build_cone(2, [0.0, 1.0, 0.0], v::ZERO, 1.0, [0.0, 1.0, 0.0]).unwrap();
        assert!((tri.volume() - 1.0).abs() < 1e-15);
        assert!((tri.exact_polytope().unwrap().volume() - 1.0).abs() < 1e-14);
        assert!((ConvexBody::ball(2, v::ZERO, 1.0).unwrap().volume() - PI).abs() < 1e-15);
        assert!((unit_square().euclidean_perimeter() - 4.0).abs() < 1e-15);
        let seg = ConvexBody::cuboid(1, [0.3, 0.0, 0.0], [2.0, 0.0, 0.0]).unwrap();
        assert_eq!(seg.euclidean_perimeter(), 2.0);
        assert!((ConvexBody::ball(3, v::ZERO, 1.0).unwrap().euclidean_perimeter() - 4.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn cone_construction() {
        let c = build_cone(2, [0.0, 2.0, 0.0], v::ZERO, 1.0, [0.0, 1.0, 0.0]).unwrap();
        assert!((c.volume() - 2.0).abs() < 1e-15);
        let mut vs = c.exact_polytope().unwrap().vertices().to_vec();
        vs.sort_by(|a, b| v::lex_cmp(a, b, 2));
        assert_eq!(vs, vec![[-1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [1.0, 0.0, 0.0]]);
        let seg = build_cone(3, [0.0, 0.0, 1.5], v::ZERO, 0.0, [0.0, 0.0, 1.0]).unwrap();
        assert_eq!(seg.volume(), 0.0);
        assert!(build_cone(2, [1.0, 1.0, 0.0], v::ZERO, 1.0, [0.0, 1.0, 0.0]).is_err());
        let c3 = build_cone(3, [0.0, 0.0, 3.0], v::ZERO, 1.0, [0.0, 0.0, -1.0]).unwrap();
        assert!((c3.volume() - PI).abs() < 1e-14);
        assert!(c3.contains(&[0.0, 0.0, 2.9]).unwrap());
        assert!(!c3.contains(&[0.5, 0.0, 2.0]).unwrap());
    }

    #[test]
    fn slices() {
        assert!((unit_square().slice(&[0.0, 1.0, 0.0], 0.5) - 1.0).abs() < 1e-15);
        let b = ConvexBody::ball(3, v::ZERO, 1.0).unwrap();
        assert!((b.slice(&[0.0, 0.0, 1.0], 0.0) - PI).abs() < 1e-15);
        assert_eq!(b.slice(&[0.0, 0.0, 1.0], 2.0), 0.0);
        let c3 = build_cone(3, [0.0, 0.0, 2.0], v::ZERO, 1.0, [0.0, 0.0, 1.0]).unwrap();
        assert!((c3.slice(&[0.0, 0.0, -1.0], -1.0) - PI * 0.25).abs() < 1e-14);
    }

    #[test]
    fn halfspace_cuts() {
        let hs = HalfSpace::new([1.0, 0.0, 0.0], 0.5).unwrap();
        let cut = intersect_halfspace(&unit_square(), &hs).unwrap();
        assert!((cut.volume() - 0.5).abs() < 1e-15);
        let ball = ConvexBody::ball(2, v::ZERO, 1.0).unwrap();
        let same = intersect_halfspace(&ball, &HalfSpace::new([1.0, 0.0, 0.0], 1.0).unwrap()).unwrap();
        assert_eq!(same, ball);
        assert_eq!(intersect_halfspace(&ball, &HalfSpace::new([1.0, 0.0, 0.0], -1.5).unwrap()), Err(Error::EmptyIntersection));
        let half = intersect_halfspace(&ball, &HalfSpace::new([1.0, 0.0, 0.0], 0.0).unwrap()).unwrap();
        assert!((half.volume() - PI / 2.0).abs() < 1e-4);
    }

    #[test]
    fn chords_agree_across_representations() {
        let c = build_cone(2, [0.0, 1.0, 0.0], v::ZERO, 1.0, [0.0, 1.0, 0.0]).unwrap();
        let p = ProfileBody::new(2, [0.0, 1.0, 0.0], v::ZERO, vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        let pb = ConvexBody::profile(p).unwrap();
        let d = v::normalize(&[1.0, 0.3, 0.0]).unwrap();
        let a = c.chord(&[-2.0, 0.2, 0.0], &d).unwrap();
        let b = pb.chord(&[-2.0, 0.2, 0.0], &d).unwrap();
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    }
}
