//! Axially symmetric bodies: discs of radius R(t) stacked along an axis.

use crate::consts::unit_ball_volume;
use crate::error::{Error, Result};
use crate::vector::{self as v, Vector};
use serde::{Deserialize, Serialize};

/// Axially symmetric convex body with a piecewise-linear concave radius
/// profile. The point anchor + t axis is the centre of the disc at height t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileBody {
    pub dim: usize,
    pub axis: Vector,
    pub anchor: Vector,
    pub t_grid: Vec<f64>,
    pub radii: Vec<f64>,
}

impl ProfileBody {
    pub fn new(dim: usize, axis: Vector, anchor: Vector, t_grid: Vec<f64>, radii: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let axis = v::normalize(&axis).ok_or_else(|| Error::InvalidBody("zero profile axis".into()))?;
        if t_grid.len() != radii.len() || t_grid.len() < 2 {
            return Err(Error::InvalidBody("t_grid and radii must have equal length >= 2".into()));
        }
        if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidBody("t_grid must be strictly increasing".into()));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::InvalidBody("radii must be finite and non-negative".into()));
        }
        let p = ProfileBody { dim, axis, anchor, t_grid, radii };
        let defect = p.concavity_defect();
        if defect > 1e-9 * p.max_radius().max(1.0) {
            return Err(Error::InvalidBody(format!("profile is not concave (defect {defect:.3e})")));
        }
        Ok(p)
    }

    /// Largest positive second difference, measured on the local grid
    /// spacing.
    pub fn concavity_defect(&self) -> f64 {
        let (t, r) = (&self.t_grid, &self.radii);
        let mut worst: f64 = 0.0;
        for i in 1..t.len().saturating_sub(1) {
            let s0 = (r[i] - r[i - 1]) / (t[i] - t[i - 1]);
            let s1 = (r[i + 1] - r[i]) / (t[i + 1] - t[i]);
            let h = (t[i] - t[i - 1]).min(t[i + 1] - t[i]);
            worst = worst.max((s1 - s0) * h);
        }
        worst
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    pub fn extent(&self) -> f64 {
        self.t_grid[self.t_grid.len() - 1] - self.t_grid[0]
    }

    pub fn radius(&self, t: f64) -> f64 {
        interp(&self.t_grid, &self.radii, t)
    }

    pub fn volume(&self) -> f64 {
        linear_profile_volume(self.dim, &self.t_grid, &self.radii)
    }

    pub fn axial(&self) -> Axial {
        Axial { dim: self.dim, axis: self.axis, anchor: self.anchor, kind: AxialKind::Linear { t: self.t_grid.clone(), r: self.radii.clone() } }
    }
}

/// Linear interpolation, zero outside the grid.
pub fn interp(t: &[f64], r: &[f64], x: f64) -> f64 {
    let m = t.len();
    if !(x >= t[0] && x <= t[m - 1]) {
        return 0.0;
    }
    let k = t.partition_point(|&s| s <= x).clamp(1, m - 1);
    let (t0, t1) = (t[k - 1], t[k]);
    let w = (x - t0) / (t1 - t0);
    r[k - 1] + w * (r[k] - r[k - 1])
}

pub fn linear_profile_volume(dim: usize, t: &[f64], r: &[f64]) -> f64 {
    let w = unit_ball_volume(dim - 1);
    let mut s = 0.0;
    for i in 1..t.len() {
        let h = t[i] - t[i - 1];
        let (a, b) = (r[i - 1], r[i]);
        s += match dim {
            2 => 0.5 * h * (a + b),
            _ => h * (a * a + a * b + b * b) / 3.0,
        };
    }
    w * s
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxialKind {
    /// Ball of the given radius centred at the anchor.
    Round(f64),
    /// Piecewise-linear radius on a node grid.
    Linear { t: Vec<f64>, r: Vec<f64> },
}

/// Axial description of a rotationally symmetric body.
#[derive(Debug, Clone, PartialEq)]
pub struct Axial {
    pub dim: usize,
    pub axis: Vector,
    pub anchor: Vector,
    pub kind: AxialKind,
}

impl Axial {
    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            AxialKind::Round(rho) => (-rho, *rho),
            AxialKind::Linear { t, .. } => (t[0], t[t.len() - 1]),
        }
    }

    pub fn radius(&self, tau: f64) -> f64 {
        match &self.kind {
            AxialKind::Round(rho) => {
                let q = rho * rho - tau * tau;
                if q > 0.0 {
                    q.sqrt()
                } else {
                    0.0
                }
            }
            AxialKind::Linear { t, r } => interp(t, r, tau),
        }
    }

    pub fn max_radius(&self) -> f64 {
        match &self.kind {
            AxialKind::Round(rho) => *rho,
            AxialKind::Linear { r, .. } => r.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Kinks of the profile including the support ends, with collinear
    /// nodes merged.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            AxialKind::Round(rho) => vec![-rho, *rho],
            AxialKind::Linear { t, r } => {
                let scale = self.max_radius().max(1e-300);
                let mut out = vec![t[0]];
                for i in 1..t.len() - 1 {
                    let s0 = (r[i] - r[i - 1]) / (t[i] - t[i - 1]);
                    let s1 = (r[i + 1] - r[i]) / (t[i + 1] - t[i]);
                    let h = (t[i] - t[i - 1]).min(t[i + 1] - t[i]);
                    if ((s1 - s0) * h).abs() > 1e-12 * scale {
                        out.push(t[i]);
                    }
                }
                out.push(t[t.len() - 1]);
                out
            }
        }
    }

    /// True when R vanishes like a square root at the ends.
    pub fn round_ends(&self) -> bool {
        matches!(self.kind, AxialKind::Round(_))
    }

    pub fn volume(&self) -> f64 {
        match &self.kind {
            AxialKind::Round(rho) => unit_ball_volume(self.dim) * rho.powi(self.dim as i32),
            AxialKind::Linear { t, r } => linear_profile_volume(self.dim, t, r),
        }
    }

    pub fn section(&self, tau: f64) -> f64 {
        unit_ball_volume(self.dim - 1) * self.radius(tau).powi(self.dim as i32 - 1)
    }

    /// Axial coordinate and transverse distance of a point.
    pub fn coords(&self, x: &Vector) -> (f64, f64) {
        let rel = v::sub(x, &self.anchor);
        let tau = v::dot(&rel, &self.axis);
        (tau, v::norm(&v::reject(&rel, &self.axis)))
    }

    pub fn excess(&self, x: &Vector) -> f64 {
        let (tau, rho) = self.coords(x);
        let (a, b) = self.support();
        let out = (a - tau).max(tau - b);
        if out > 0.0 {
            out.max(rho - self.max_radius())
        } else {
            rho - self.radius(tau)
        }
    }

    pub fn support_value(&self, u: &Vector) -> f64 {
        let ua = v::dot(u, &self.axis);
        let ur = v::norm(&v::reject(u, &self.axis));
        let base = v::dot(&self.anchor, u);
        match &self.kind {
            AxialKind::Round(rho) => base + rho * v::norm(u),
            AxialKind::Linear { t, r } => base + t.iter().zip(r).map(|(ti, ri)| ti * ua + ri * ur).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Parameter interval of the line p + lambda d (|d| = 1) inside the body.
    pub fn chord(&self, p: &Vector, d: &Vector) -> Option<(f64, f64)> {
        let rel = v::sub(p, &self.anchor);
        if let AxialKind::Round(rho) = self.kind {
            let b = v::dot(&rel, d);
            let c = v::dot(&rel, &rel) - rho * rho;
            let disc = b * b - c;
            if disc <= 0.0 {
                return None;
            }
            let s = disc.sqrt();
            return Some((-b - s, -b + s));
        }
        let tau0 = v::dot(&rel, &self.axis);
        let a = v::dot(d, &self.axis);
        let q0 = v::reject(&rel, &self.axis);
        let q1 = v::reject(d, &self.axis);
        let (t0, t1) = self.support();
        let (lo, hi) = if a.abs() > 1e-14 {
            let (x, y) = ((t0 - tau0) / a, (t1 - tau0) / a);
            (x.min(y), x.max(y))
        } else if tau0 >= t0 && tau0 <= t1 {
            let l = v::norm(&q0) + self.max_radius() + 1.0;
            (-l, l)
        } else {
            return None;
        };
        let f = |lam: f64| v::norm(&v::axpy(&q0, lam, &q1)) - self.radius(tau0 + lam * a);
        let (lstar, fstar) = golden_min(&f, lo, hi);
        if !(fstar < 0.0) {
            return None;
        }
        let left = if f(lo) <= 0.0 { lo } else { bisect(&f, lo, lstar) };
        let right = if f(hi) <= 0.0 { hi } else { bisect(&f, lstar, hi) };
        Some((left, right))
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if b - a <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Root of f between a and b where the signs of f(a), f(b) differ.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let fa_neg = f(a) <= 0.0;
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        if (f(m) <= 0.0) == fa_neg {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn profile_volumes() {
        let cyl = ProfileBody::new(3, [0.0, 0.0, 1.0], v::ZERO, vec![0.0, 2.0], vec![0.5, 0.5]).unwrap();
        assert!((cyl.volume() - PI * 0.25 * 2.0).abs() < 1e-14);
        let cone = ProfileBody::new(3, [0.0, 0.0, 1.0], v::ZERO, vec![0.0, 0.3, 1.0], vec![2.0, 1.4, 0.0]).unwrap();
        assert!((cone.volume() - PI / 3.0 * 4.0).abs() < 1e-13);
        let cone2 = ProfileBody::new(2, [0.0, 1.0, 0.0], v::ZERO, vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        assert!((cone2.volume() - 1.0).abs() < 1e-15);
        let empty = ProfileBody::new(2, [0.0, 1.0, 0.0], v::ZERO, vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(empty.volume(), 0.0);
        assert!(ProfileBody::new(2, [0.0, 1.0, 0.0], v::ZERO, vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn chords_through_cone_and_ball() {
        let cone = ProfileBody::new(3, [0.0, 0.0, 1.0], v::ZERO, vec![0.0, 1.0], vec![1.0, 0.0]).unwrap().axial();
        let (a, b) = cone.chord(&[0.0, 0.0, -1.0], &[0.0, 0.0, 1.0]).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
        let (a, b) = cone.chord(&[-2.0, 0.0, 0.5], &[1.0, 0.0, 0.0]).unwrap();
        assert!((a - 1.5).abs() < 1e-12 && (b - 2.5).abs() < 1e-12, "{a} {b}");
        assert!(cone.chord(&[-2.0, 0.0, 1.5], &[1.0, 0.0, 0.0]).is_none());
        let ball = Axial { dim: 3, axis: [0.0, 0.0, 1.0], anchor: v::ZERO, kind: AxialKind::Round(1.0) };
        let (a, b) = ball.chord(&[0.0, 0.6, -5.0], &[0.0, 0.0, 1.0]).unwrap();
        assert!((b - a - 1.6).abs() < 1e-12);
    }

    #[test]
    fn breakpoints_merge_collinear_nodes() {
        let p = ProfileBody::new(2, [1.0, 0.0, 0.0], v::ZERO, vec![0.0, 0.5, 1.0, 2.0], vec![1.0, 0.75, 0.5, 0.0]).unwrap();
        assert_eq!(p.axial().breakpoints(), vec![0.0, 2.0]);
    }
}
