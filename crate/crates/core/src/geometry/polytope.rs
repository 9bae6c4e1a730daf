//! Convex polytopes in half-space form with cached vertices and facets.

use super::HalfSpace;
use crate::consts::{MEMBERSHIP_TOL, NESTING_TOL};
use crate::error::{Error, Result};
use crate::vector::{self as v, Vector};

/// A bounded convex polytope in R^n, n in {1, 2, 3}.
///
/// Vertices of a polygon are stored counter-clockwise and `halfspaces[i]`
/// supports the edge `vertices[i] -> vertices[i+1]`. In 3D every facet is a
/// vertex loop, counter-clockwise seen from outside, supported by
/// `halfspaces[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<Vector>,
    facets: Vec<Vec<usize>>,
}

fn scale_of(points: &[Vector]) -> f64 {
    points.iter().map(v::norm).fold(0.0, f64::max).max(1.0)
}

fn dedup_points(points: &[Vector], tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| v::dist(p, q) <= tol) {
            out.push(*p);
        }
    }
    out
}

/// Counter-clockwise convex hull of planar points (collinear points dropped).
pub fn hull_2d(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = points.to_vec();
    pts.sort_by(|a, b| v::lex_cmp(a, b, 2));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= 1e-14 && (a[1] - b[1]).abs() <= 1e-14);
    if pts.len() < 3 {
        return pts;
    }
    let scale = scale_of(&pts);
    let eps = 1e-13 * scale * scale;
    let cross = |o: &Vector, a: &Vector, b: &Vector| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Vector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Vector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Triangular faces (outward oriented) of the 3D convex hull, by the
/// incremental algorithm. Returns indices into the deduplicated point list.
fn hull_3d_triangles(pts: &[Vector]) -> Result<Vec<[usize; 3]>> {
    let n = pts.len();
    if n < 4 {
        return Err(Error::InvalidBody("fewer than four distinct points in 3D".into()));
    }
    let scale = scale_of(pts);
    let eps = 1e-11 * scale;
    // initial tetrahedron
    let i0 = 0;
    let i1 = (0..n).max_by(|&a, &b| v::dist(&pts[a], &pts[i0]).total_cmp(&v::dist(&pts[b], &pts[i0]))).unwrap();
    let d01 = v::sub(&pts[i1], &pts[i0]);
    let line_dist = |k: usize| v::norm(&v::cross(&d01, &v::sub(&pts[k], &pts[i0]))) / v::norm(&d01).max(1e-300);
    let i2 = (0..n).max_by(|&a, &b| line_dist(a).total_cmp(&line_dist(b))).unwrap();
    if line_dist(i2) <= eps {
        return Err(Error::InvalidBody("points are collinear".into()));
    }
    let nrm = v::normalize(&v::cross(&d01, &v::sub(&pts[i2], &pts[i0]))).unwrap();
    let plane_dist = |k: usize| v::dot(&nrm, &v::sub(&pts[k], &pts[i0]));
    let i3 = (0..n).max_by(|&a, &b| plane_dist(a).abs().total_cmp(&plane_dist(b).abs())).unwrap();
    if plane_dist(i3).abs() <= eps {
        return Err(Error::InvalidBody("points are coplanar: empty interior".into()));
    }
    let mut faces: Vec<[usize; 3]> = if plane_dist(i3) < 0.0 {
        vec![[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]]
    } else {
        vec![[i0, i2, i1], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    };
    let face_normal = |f: &[usize; 3]| {
        let c = v::cross(&v::sub(&pts[f[1]], &pts[f[0]]), &v::sub(&pts[f[2]], &pts[f[0]]));
        v::normalize(&c).unwrap_or(v::ZERO)
    };
    for (k, p) in pts.iter().enumerate() {
        if k == i0 || k == i1 || k == i2 || k == i3 {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| v::dot(&face_normal(f), &v::sub(p, &pts[f[0]])) > eps).collect();
        if !visible.iter().any(|&b| b) {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (f, vis) in faces.iter().zip(&visible) {
            if *vis {
                edges.push((f[0], f[1]));
                edges.push((f[1], f[2]));
                edges.push((f[2], f[0]));
            }
        }
        let horizon: Vec<(usize, usize)> = edges.iter().filter(|(a, b)| !edges.contains(&(*b, *a))).copied().collect();
        let mut next: Vec<[usize; 3]> = faces.iter().zip(&visible).filter(|(_, vis)| !**vis).map(|(f, _)| *f).collect();
        for (a, b) in horizon {
            next.push([a, b, k]);
        }
        faces = next;
    }
    Ok(faces)
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Facet vertex loops (3D) or edges as index pairs (2D).
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Convex hull of a point cloud.
    pub fn from_points(dim: usize, points: &[Vector]) -> Result<Self> {
        let scale = scale_of(points);
        match dim {
            1 => {
                let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                if !(hi - lo > 1e-14 * scale) {
                    return Err(Error::InvalidBody("segment has zero length".into()));
                }
                Ok(Polytope {
                    dim,
                    halfspaces: vec![HalfSpace::unchecked([-1.0, 0.0, 0.0], -lo), HalfSpace::unchecked([1.0, 0.0, 0.0], hi)],
                    vertices: vec![[lo, 0.0, 0.0], [hi, 0.0, 0.0]],
                    facets: vec![vec![0], vec![1]],
                })
            }
            2 => {
                let hull = hull_2d(points);
                if hull.len() < 3 {
                    return Err(Error::InvalidBody("polygon has empty interior".into()));
                }
                let m = hull.len();
                let mut halfspaces = Vec::with_capacity(m);
                let mut facets = Vec::with_capacity(m);
                for i in 0..m {
                    let a = hull[i];
                    let b = hull[(i + 1) % m];
                    let n = v::normalize(&[b[1] - a[1], a[0] - b[0], 0.0]).ok_or_else(|| Error::InvalidBody("degenerate edge".into()))?;
                    halfspaces.push(HalfSpace::unchecked(n, v::dot(&n, &a)));
                    facets.push(vec![i, (i + 1) % m]);
                }
                let area = polygon_area(&hull);
                if !(area > 1e-14 * scale * scale) {
                    return Err(Error::InvalidBody("polygon has empty interior".into()));
                }
                Ok(Polytope { dim, halfspaces, vertices: hull, facets })
            }
            3 => {
                let pts = dedup_points(points, 1e-12 * scale);
                let tris = hull_3d_triangles(&pts)?;
                let mut planes: Vec<(Vector, f64)> = Vec::new();
                for t in &tris {
                    let c = v::cross(&v::sub(&pts[t[1]], &pts[t[0]]), &v::sub(&pts[t[2]], &pts[t[0]]));
                    let Some(n) = v::normalize(&c) else { continue };
                    let off = v::dot(&n, &pts[t[0]]);
                    if !planes.iter().any(|(m, o)| v::dist(m, &n) < 1e-9 && (o - off).abs() < 1e-9 * scale) {
                        planes.push((n, off));
                    }
                }
                let used: Vec<usize> = {
                    let mut u: Vec<usize> = tris.iter().flatten().copied().collect();
                    u.sort_unstable();
                    u.dedup();
                    u
                };
                let vertices: Vec<Vector> = used.iter().map(|&i| pts[i]).collect();
                let mut halfspaces = Vec::new();
                let mut facets = Vec::new();
                for (n, off) in planes {
                    let on: Vec<usize> = (0..vertices.len()).filter(|&i| (v::dot(&n, &vertices[i]) - off).abs() <= 1e-9 * scale).collect();
                    if on.len() < 3 {
                        continue;
                    }
                    let loop_ = order_facet(&vertices, &on, &n);
                    if loop_.len() < 3 {
                        continue;
                    }
                    halfspaces.push(HalfSpace::unchecked(n, off));
                    facets.push(loop_);
                }
                let p = Polytope { dim, halfspaces, vertices, facets };
                if !(p.volume() > 1e-14 * scale.powi(3)) {
                    return Err(Error::InvalidBody("polytope has empty interior".into()));
                }
                Ok(p)
            }
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    /// Polytope described by half-spaces; vertices are enumerated from all
    /// n-tuples of bounding hyperplanes. Fails when the region is empty,
    /// lower-dimensional or unbounded.
    pub fn from_halfspaces(dim: usize, hs: &[HalfSpace]) -> Result<Self> {
        if hs.iter().any(|h| h.dim_hint() > dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: 3 });
        }
        let scale = hs.iter().map(|h| h.offset.abs()).fold(1.0, f64::max);
        let feasible = |x: &Vector| hs.iter().all(|h| v::dot(&h.normal, x) <= h.offset + 1e-9 * scale);
        let mut pts = Vec::new();
        match dim {
            1 => {
                for h in hs {
                    if h.normal[0].abs() > 0.5 {
                        let x = [h.offset / h.normal[0], 0.0, 0.0];
                        if feasible(&x) {
                            pts.push(x);
                        }
                    }
                }
            }
            2 => {
                for i in 0..hs.len() {
                    for j in i + 1..hs.len() {
                        let (a, b) = (&hs[i], &hs[j]);
                        let det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
                        if det.abs() < 1e-12 {
                            continue;
                        }
                        let x = [(a.offset * b.normal[1] - b.offset * a.normal[1]) / det, (a.normal[0] * b.offset - b.normal[0] * a.offset) / det, 0.0];
                        if feasible(&x) {
                            pts.push(x);
                        }
                    }
                }
            }
            3 => {
                for i in 0..hs.len() {
                    for j in i + 1..hs.len() {
                        for k in j + 1..hs.len() {
                            let (a, b, c) = (&hs[i].normal, &hs[j].normal, &hs[k].normal);
                            let bc = v::cross(b, c);
                            let det = v::dot(a, &bc);
                            if det.abs() < 1e-12 {
                                continue;
                            }
                            let ca = v::cross(c, a);
                            let ab = v::cross(a, b);
                            let x =
                                v::scale(&v::add(&v::add(&v::scale(&bc, hs[i].offset), &v::scale(&ca, hs[j].offset)), &v::scale(&ab, hs[k].offset)), 1.0 / det);
                            if feasible(&x) {
                                pts.push(x);
                            }
                        }
                    }
                }
            }
            d => return Err(Error::UnsupportedDimension(d)),
        }
        if pts.is_empty() {
            return Err(Error::InvalidBody("half-spaces have empty or unbounded intersection".into()));
        }
        let p = Polytope::from_points(dim, &pts)?;
        // boundedness: every hull facet must be one of the given constraints
        let pscale = scale_of(p.vertices());
        for f in &p.halfspaces {
            let matched = hs.iter().any(|h| v::dist(&h.normal, &f.normal) < 1e-7 && (h.offset - f.offset).abs() < 1e-7 * pscale);
            if !matched {
                return Err(Error::InvalidBody("half-space intersection is unbounded".into()));
            }
        }
        Ok(p)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| v::dot(&h.normal, x) <= h.offset + tol)
    }

    pub fn volume(&self) -> f64 {
        match self.dim {
            1 => self.vertices[1][0] - self.vertices[0][0],
            2 => polygon_area(&self.vertices),
            _ => {
                let c = self.centroid_of_vertices();
                let mut vol = 0.0;
                for (f, h) in self.facets.iter().zip(&self.halfspaces) {
                    let area = facet_area(&self.vertices, f, &h.normal);
                    vol += area * (h.offset - v::dot(&h.normal, &c)) / 3.0;
                }
                vol
            }
        }
    }

    pub fn surface_measure(&self) -> f64 {
        match self.dim {
            1 => 2.0,
            2 => {
                let m = self.vertices.len();
                (0..m).map(|i| v::dist(&self.vertices[i], &self.vertices[(i + 1) % m])).sum()
            }
            _ => self.facets.iter().zip(&self.halfspaces).map(|(f, h)| facet_area(&self.vertices, f, &h.normal)).sum(),
        }
    }

    pub fn centroid_of_vertices(&self) -> Vector {
        let k = 1.0 / self.vertices.len() as f64;
        self.vertices.iter().fold(v::ZERO, |acc, p| v::axpy(&acc, k, p))
    }

    /// Edges as vertex-index pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.dim {
            1 => vec![(0, 1)],
            2 => (0..self.vertices.len()).map(|i| (i, (i + 1) % self.vertices.len())).collect(),
            _ => {
                let mut e = Vec::new();
                for f in &self.facets {
                    for i in 0..f.len() {
                        let (a, b) = (f[i], f[(i + 1) % f.len()]);
                        let key = (a.min(b), a.max(b));
                        if !e.contains(&key) {
                            e.push(key);
                        }
                    }
                }
                e
            }
        }
    }

    /// Parameter interval of the line p + lambda d inside the polytope.
    pub fn chord(&self, p: &Vector, d: &Vector) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for h in &self.halfspaces {
            let ad = v::dot(&h.normal, d);
            let slack = h.offset - v::dot(&h.normal, p);
            if ad.abs() < 1e-300 {
                if slack < 0.0 {
                    return None;
                }
            } else if ad > 0.0 {
                hi = hi.min(slack / ad);
            } else {
                lo = lo.max(slack / ad);
            }
            if lo > hi {
                return None;
            }
        }
        if lo <= hi && lo.is_finite() && hi.is_finite() {
            Some((lo, hi))
        } else {
            None
        }
    }

    /// Intersection with a half-space; `None` when nothing of positive
    /// measure survives.
    pub fn clip(&self, hs: &HalfSpace) -> Result<Option<Polytope>> {
        let side = |x: &Vector| v::dot(&hs.normal, x) - hs.offset;
        let scale = scale_of(&self.vertices);
        let mut pts: Vec<Vector> = self.vertices.iter().filter(|x| side(x) <= 1e-12 * scale).copied().collect();
        for (i, j) in self.edges() {
            let (a, b) = (self.vertices[i], self.vertices[j]);
            let (sa, sb) = (side(&a), side(&b));
            if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
                let t = sa / (sa - sb);
                pts.push(v::axpy(&a, t, &v::sub(&b, &a)));
            }
        }
        if pts.len() <= self.dim {
            return Ok(None);
        }
        match Polytope::from_points(self.dim, &pts) {
            Ok(p) if p.volume() > 1e-12 * self.volume() => Ok(Some(p)),
            Ok(_) | Err(Error::InvalidBody(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// (n-1)-measure of the section {x . nu = t}.
    pub fn slice(&self, nu: &Vector, t: f64) -> f64 {
        let scale = scale_of(&self.vertices);
        match self.dim {
            1 => {
                let x = [t * nu[0], 0.0, 0.0];
                if self.contains(&x, MEMBERSHIP_TOL * scale) {
                    1.0
                } else {
                    0.0
                }
            }
            2 => {
                let p = v::scale(nu, t);
                let d = [-nu[1], nu[0], 0.0];
                self.chord(&p, &d).map_or(0.0, |(a, b)| (b - a).max(0.0))
            }
            _ => {
                let side = |x: &Vector| v::dot(nu, x) - t;
                let mut pts: Vec<Vector> = self.vertices.iter().filter(|x| side(x).abs() <= 1e-13 * scale).copied().collect();
                for (i, j) in self.edges() {
                    let (a, b) = (self.vertices[i], self.vertices[j]);
                    let (sa, sb) = (side(&a), side(&b));
                    if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
                        let s = sa / (sa - sb);
                        pts.push(v::axpy(&a, s, &v::sub(&b, &a)));
                    }
                }
                if pts.len() < 3 {
                    return 0.0;
                }
                let basis = v::orthonormal_complement(nu, 3);
                let planar: Vec<Vector> = pts.iter().map(|x| [v::dot(x, &basis[0]), v::dot(x, &basis[1]), 0.0]).collect();
                let h = hull_2d(&planar);
                if h.len() < 3 {
                    0.0
                } else {
                    polygon_area(&h)
                }
            }
        }
    }

    /// Closest point of the polytope to `y`.
    pub fn project(&self, y: &Vector) -> Vector {
        let scale = scale_of(&self.vertices);
        if self.contains(y, MEMBERSHIP_TOL * scale) {
            return *y;
        }
        match self.dim {
            1 => [y[0].clamp(self.vertices[0][0], self.vertices[1][0]), 0.0, 0.0],
            2 => {
                let m = self.vertices.len();
                let mut best = self.vertices[0];
                let mut bd = f64::INFINITY;
                for i in 0..m {
                    let q = closest_on_segment(y, &self.vertices[i], &self.vertices[(i + 1) % m]);
                    let d = v::dist(&q, y);
                    if d < bd {
                        bd = d;
                        best = q;
                    }
                }
                best
            }
            _ => {
                let mut best = self.vertices[0];
                let mut bd = f64::INFINITY;
                for (f, h) in self.facets.iter().zip(&self.halfspaces) {
                    let q = v::axpy(y, -(v::dot(&h.normal, y) - h.offset), &h.normal);
                    let inside = (0..f.len()).all(|i| {
                        let a = self.vertices[f[i]];
                        let b = self.vertices[f[(i + 1) % f.len()]];
                        v::dot(&v::cross(&v::sub(&b, &a), &v::sub(&q, &a)), &h.normal) >= -1e-14 * scale * scale
                    });
                    let cands: Vec<Vector> = if inside {
                        vec![q]
                    } else {
                        (0..f.len()).map(|i| closest_on_segment(y, &self.vertices[f[i]], &self.vertices[f[(i + 1) % f.len()]])).collect()
                    };
                    for c in cands {
                        let d = v::dist(&c, y);
                        if d < bd {
                            bd = d;
                            best = c;
                        }
                    }
                }
                best
            }
        }
    }

    pub fn support(&self, u: &Vector) -> f64 {
        self.vertices.iter().map(|x| v::dot(x, u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map_points<F: Fn(&Vector) -> Vector>(&self, f: F) -> Result<Polytope> {
        let pts: Vec<Vector> = self.vertices.iter().map(f).collect();
        Polytope::from_points(self.dim, &pts)
    }

    /// Largest constraint violation of `x` (non-positive when inside).
    pub fn excess(&self, x: &Vector) -> f64 {
        self.halfspaces.iter().map(|h| v::dot(&h.normal, x) - h.offset).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Check the structural invariants: vertices satisfy every constraint
    /// and every constraint is attained by some vertex.
    pub fn validate(&self) -> Result<()> {
        let scale = scale_of(&self.vertices);
        for x in &self.vertices {
            if self.excess(x) > NESTING_TOL * scale {
                return Err(Error::InvalidBody("vertex violates a constraint".into()));
            }
        }
        for h in &self.halfspaces {
            if (self.support(&h.normal) - h.offset).abs() > NESTING_TOL * scale {
                return Err(Error::InvalidBody("half-space is not supporting".into()));
            }
        }
        Ok(())
    }
}

pub fn polygon_area(vs: &[Vector]) -> f64 {
    let m = vs.len();
    let mut a = 0.0;
    for i in 0..m {
        let (p, q) = (vs[i], vs[(i + 1) % m]);
        a += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * a
}

fn facet_area(vs: &[Vector], loop_: &[usize], normal: &Vector) -> f64 {
    let mut acc = v::ZERO;
    for i in 0..loop_.len() {
        let a = vs[loop_[i]];
        let b = vs[loop_[(i + 1) % loop_.len()]];
        acc = v::add(&acc, &v::cross(&a, &b));
    }
    0.5 * v::dot(&acc, normal).abs()
}

fn order_facet(vs: &[Vector], on: &[usize], n: &Vector) -> Vec<usize> {
    let basis = v::orthonormal_complement(n, 3);
    let planar: Vec<Vector> = on.iter().map(|&i| [v::dot(&vs[i], &basis[0]), v::dot(&vs[i], &basis[1]), 0.0]).collect();
    let hull = hull_2d(&planar);
    // orientation: basis[0] x basis[1] = n, so CCW in the plane is CCW from outside
    hull.iter().filter_map(|h| planar.iter().position(|p| (p[0] - h[0]).abs() < 1e-15 && (p[1] - h[1]).abs() < 1e-15).map(|k| on[k])).collect()
}

pub fn closest_on_segment(y: &Vector, a: &Vector, b: &Vector) -> Vector {
    let ab = v::sub(b, a);
    let l2 = v::dot(&ab, &ab);
    if l2 == 0.0 {
        return *a;
    }
    let t = (v::dot(&v::sub(y, a), &ab) / l2).clamp(0.0, 1.0);
    v::axpy(a, t, &ab)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> Polytope {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        Polytope::from_points(3, &pts).unwrap()
    }

    #[test]
    fn cube_hull_has_six_square_facets() {
        let c = cube();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        assert!(c.facets().iter().all(|f| f.len() == 4));
        assert!((c.volume() - 1.0).abs() < 1e-12);
        assert!((c.surface_measure() - 6.0).abs() < 1e-12);
        c.validate().unwrap();
    }

    #[test]
    fn interior_points_do_not_change_the_hull() {
        let mut pts: Vec<Vector> = (0..8).map(|i| [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]).collect();
        pts.push([0.5, 0.5, 0.5]);
        pts.push([0.5, 0.5, 1.0]);
        let c = Polytope::from_points(3, &pts).unwrap();
        assert_eq!(c.vertices().len(), 8);
    }

    #[test]
    fn halfspace_enumeration_recovers_the_square() {
        let hs = vec![
            HalfSpace::new([1.0, 0.0, 0.0], 1.0).unwrap(),
            HalfSpace::new([-1.0, 0.0, 0.0], 0.0).unwrap(),
            HalfSpace::new([0.0, 1.0, 0.0], 1.0).unwrap(),
            HalfSpace::new([0.0, -1.0, 0.0], 0.0).unwrap(),
            HalfSpace::new([1.0, 1.0, 0.0], 5.0).unwrap(),
        ];
        let p = Polytope::from_halfspaces(2, &hs).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!((p.volume() - 1.0).abs() < 1e-14);
        let unbounded = &hs[..3];
        assert!(Polytope::from_halfspaces(2, unbounded).is_err());
    }

    #[test]
    fn cube_slices_and_clipping() {
        let c = cube();
        assert!((c.slice(&[0.0, 0.0, 1.0], 0.3) - 1.0).abs() < 1e-12);
        let d = v::normalize(&[1.0, 1.0, 1.0]).unwrap();
        // hexagonal mid-section of the unit cube has area 3*sqrt(3)/4
        let mid = c.slice(&d, 3f64.sqrt() / 2.0);
        assert!((mid - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-12, "{mid}");
        let half = c.clip(&HalfSpace::new([1.0, 0.0, 0.0], 0.25).unwrap()).unwrap().unwrap();
        assert!((half.volume() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn projection_onto_square() {
        let sq = Polytope::from_points(2, &[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(sq.project(&[2.0, 2.0, 0.0]), [1.0, 1.0, 0.0]);
        assert_eq!(sq.project(&[0.5, 3.0, 0.0]), [0.5, 1.0, 0.0]);
        let c = cube();
        let q = c.project(&[0.5, 0.5, 3.0]);
        assert!(v::dist(&q, &[0.5, 0.5, 1.0]) < 1e-14);
        let q = c.project(&[2.0, 2.0, 2.0]);
        assert!(v::dist(&q, &[1.0, 1.0, 1.0]) < 1e-14);
    }
}
