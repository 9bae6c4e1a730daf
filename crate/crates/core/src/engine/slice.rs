//! Slice reduction for axially symmetric bodies and fractional kernels.
//!
//! A body is a stack of discs of radius R(t) orthogonal to the axis. With
//! M(d) the transverse mass and D(p, q, d) the interaction of a disc of
//! radius p with the complement of a coaxial disc of radius q at axial
//! distance d,
//!
//!   P(E) = int_S A(R) [Mt(t - t0) + Mt(t1 - t)] dt
//!        + int_0^|S| int [D(R(t), R(t+d), d) + D(R(t+d), R(t), d)] dt dd
//!
//! where Mt(d) = int_d^inf M. All quadratures run on graded composite rules
//! in local offsets from the singular ends, and the reported error is the
//! difference to a refined rule.

use super::{AccuracySpec, Estimate, Method};
use crate::consts::unit_ball_volume;
use crate::error::{Error, Result};
use crate::geometry::{Axial, AxialKind, ConvexBody};
use crate::kernels::{beta_ns, Kernel};
use crate::quad::{graded_rule, Grading};
use crate::vector::{self as v, Vector};
use statrs::function::beta::{beta, beta_reg};
use std::f64::consts::PI;

/// Profile in a fixed axial frame.
#[derive(Debug, Clone)]
struct Prof {
    t0: f64,
    t1: f64,
    round: Option<f64>,
    t: Vec<f64>,
    r: Vec<f64>,
    breaks: Vec<f64>,
}

impl Prof {
    /// The axial profile of `ax`, seen in the frame t' = off + sign * t.
    fn new(ax: &Axial, off: f64, sign: f64) -> Self {
        match &ax.kind {
            AxialKind::Round(rho) => Prof { t0: off - rho, t1: off + rho, round: Some(*rho), t: vec![], r: vec![], breaks: vec![off - rho, off + rho] },
            AxialKind::Linear { t, r } => {
                let mut tt: Vec<f64> = t.iter().map(|x| off + sign * x).collect();
                let mut rr = r.clone();
                let mut br: Vec<f64> = ax.breakpoints().iter().map(|x| off + sign * x).collect();
                if sign < 0.0 {
                    tt.reverse();
                    rr.reverse();
                    br.reverse();
                }
                Prof { t0: tt[0], t1: tt[tt.len() - 1], round: None, t: tt, r: rr, breaks: br }
            }
        }
    }

    /// Whether R vanishes at the lower and upper end.
    fn closed_ends(&self) -> (bool, bool) {
        if self.round.is_some() {
            return (true, true);
        }
        let m = self.r.len();
        (self.r[0] <= 0.0, self.r[m - 1] <= 0.0)
    }

    /// R at t, given accurate d0 = t - t0 and d1 = t1 - t.
    fn radius(&self, t: f64, d0: f64, d1: f64) -> f64 {
        if d0 < 0.0 || d1 < 0.0 {
            return 0.0;
        }
        if self.round.is_some() {
            return (d0 * d1).sqrt();
        }
        let (ts, r) = (&self.t, &self.r);
        let m = ts.len();
        if ts[1] - ts[0] >= d0 {
            return r[0] + (r[1] - r[0]) * (d0 / (ts[1] - ts[0])).min(1.0);
        }
        if ts[m - 1] - ts[m - 2] >= d1 {
            return r[m - 1] + (r[m - 2] - r[m - 1]) * (d1 / (ts[m - 1] - ts[m - 2])).min(1.0);
        }
        crate::geometry::interp(ts, r, t.clamp(ts[0], ts[m - 1]))
    }
}

/// Fractional kernel constants.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frac {
    n: usize,
    s: f64,
    beta: f64,
    /// B((1+s)/2, 1/2)
    b2: f64,
}

impl Frac {
    fn new(n: usize, s: f64) -> Self {
        Frac { n, s, beta: beta_ns(n, s), b2: beta(0.5 * (1.0 + s), 0.5) }
    }

    fn area(&self, r: f64) -> f64 {
        unit_ball_volume(self.n - 1) * r.powi(self.n as i32 - 1)
    }

    /// int_d^inf M = beta d^{-s} / s
    fn mass_tail(&self, d: f64) -> f64 {
        self.beta * d.powf(-self.s) / self.s
    }

    // ---- n = 2: k(u, d) = (u^2 + d^2)^{-(2+s)/2}

    /// int_c^inf k(u, d) du
    fn tail(&self, c: f64, d: f64) -> f64 {
        let a = 0.5 * (1.0 + self.s);
        let q = c / d;
        0.5 * d.powf(-1.0 - self.s) * self.b2 * beta_reg(a, 0.5, 1.0 / (1.0 + q * q))
    }

    /// int_0^c k(u, d) du for c >= 0
    fn k1(&self, c: f64, d: f64) -> f64 {
        if c <= 0.0 {
            return 0.0;
        }
        let a = 0.5 * (1.0 + self.s);
        let q = c / d;
        0.5 * d.powf(-1.0 - self.s) * self.b2 * beta_reg(0.5, a, q * q / (1.0 + q * q))
    }

    /// int_0^c u k(u, d) du
    fn u1(&self, c: f64, d: f64) -> f64 {
        let q = c / d;
        -d.powf(-self.s) * (-0.5 * self.s * (q * q).ln_1p()).exp_m1() / self.s
    }

    /// int_0^c K1 = c K1(c) - U(c), even in c
    fn k2(&self, c: f64, d: f64) -> f64 {
        let c = c.abs();
        c * self.k1(c, d) - self.u1(c, d)
    }

    /// int_0^c tail = c tail(c) + U(c)
    fn q(&self, c: f64, d: f64) -> f64 {
        c * self.tail(c, d) + self.u1(c, d)
    }

    // ---- n = 3: k(u, d) = (u^2 + d^2)^{-(3+s)/2}

    fn k3(&self, u: f64, d: f64) -> f64 {
        (u * u + d * d).powf(-0.5 * (3.0 + self.s))
    }

    /// int_a^b u k(u, d) du, b may be infinite
    fn j(&self, a: f64, b: f64, d: f64) -> f64 {
        let p = 0.5 * (1.0 + self.s);
        let base = (a * a + d * d).powf(-p);
        if b.is_infinite() {
            return base / (1.0 + self.s);
        }
        let rel = (b * b - a * a) / (a * a + d * d);
        -base * (-p * rel.ln_1p()).exp_m1() / (1.0 + self.s)
    }

    /// int_a^b f over a range graded from a at scale d
    fn radial_quad<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64, d: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut pts = vec![a];
        let mut step = d;
        while a + step < b {
            pts.push(a + step);
            step *= 4.0;
        }
        pts.push(b);
        let g = Grading::new(8, 8);
        let last = pts.len() - 2;
        let mut total = 0.0;
        for (i, w) in pts.windows(2).enumerate() {
            for (x, wt) in graded_rule(w[0], w[1], i == 0, i == last, &g) {
                total += wt * f(x);
            }
        }
        total
    }

    /// D(p, q, d) + D(q, p, d)
    fn dsym(&self, p: f64, q: f64, d: f64) -> f64 {
        let dl = (p - q).abs();
        if self.n == 2 {
            return 4.0 * (self.q(p + q, d) + self.k2(dl, d));
        }
        let (p2, q2) = (p * p, q * q);
        let mid = self.radial_quad(|u| self.k3(u, d) * (PI * (p2 + q2) - 2.0 * lens(u, p, q)) * u, dl, p + q, d);
        2.0 * PI * (PI * (p2 - q2).abs() * self.j(0.0, dl, d) + mid + PI * (p2 + q2) * self.j(p + q, f64::INFINITY, d))
    }

    /// I(p, q, d): interaction of coaxial discs.
    pub(crate) fn disc_pair(&self, p: f64, q: f64, d: f64) -> f64 {
        let dl = (p - q).abs();
        if self.n == 2 {
            return 2.0 * (self.k2(p + q, d) - self.k2(dl, d));
        }
        let m = p.min(q);
        let mid = self.radial_quad(|u| self.k3(u, d) * lens(u, p, q) * u, dl, p + q, d);
        2.0 * PI * (PI * m * m * self.j(0.0, dl, d) + mid)
    }

    /// W(R, rho, d) = int_{D_R} k(|y - p|, d) dy with |p| = rho.
    pub(crate) fn disc_potential(&self, big: f64, rho: f64, d: f64) -> f64 {
        if self.n == 2 {
            let odd = |c: f64| if c >= 0.0 { self.k1(c, d) } else { -self.k1(-c, d) };
            return odd(big - rho) + odd(big + rho);
        }
        if rho <= 0.0 {
            return 2.0 * PI * self.j(0.0, big, d);
        }
        let inner = 2.0 * PI * self.j(0.0, (big - rho).max(0.0), d);
        let arc = |u: f64| {
            let c = ((u * u + rho * rho - big * big) / (2.0 * u * rho)).clamp(-1.0, 1.0);
            self.k3(u, d) * 2.0 * u * c.acos()
        };
        inner + self.radial_quad(arc, (big - rho).abs(), big + rho, d)
    }
}

/// Area of the intersection of discs of radii a and b at centre distance u.
fn lens(u: f64, a: f64, b: f64) -> f64 {
    let m = a.min(b);
    if u <= (a - b).abs() {
        return PI * m * m;
    }
    if u >= a + b {
        return 0.0;
    }
    let ca = ((u * u + a * a - b * b) / (2.0 * u * a)).clamp(-1.0, 1.0);
    let cb = ((u * u + b * b - a * a) / (2.0 * u * b)).clamp(-1.0, 1.0);
    let k = ((-u + a + b) * (u + a - b) * (u - a + b) * (u + a + b)).max(0.0);
    a * a * ca.acos() + b * b * cb.acos() - 0.5 * k.sqrt()
}

/// int_a^b f(t, t - a, b - t), graded towards the chosen ends in local offsets.
fn integrate<F: FnMut(f64, f64, f64) -> f64>(a: f64, b: f64, ga: bool, gb: bool, g: &Grading, f: &mut F) -> f64 {
    let len = b - a;
    if !(len > 0.0) {
        return 0.0;
    }
    let mut total = 0.0;
    match (ga, gb) {
        (false, false) => {
            for (x, w) in graded_rule(0.0, len, false, false, g) {
                total += w * f(a + x, x, len - x);
            }
        }
        (true, false) => {
            for (x, w) in graded_rule(0.0, len, true, false, g) {
                total += w * f(a + x, x, len - x);
            }
        }
        (false, true) => {
            for (x, w) in graded_rule(0.0, len, true, false, g) {
                total += w * f(b - x, len - x, x);
            }
        }
        (true, true) => {
            let half = 0.5 * len;
            for (x, w) in graded_rule(0.0, half, true, false, g) {
                total += w * f(a + x, x, len - x);
                total += w * f(b - x, len - x, x);
            }
        }
    }
    total
}

fn sorted_points(mut p: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    p.retain(|x| *x > lo && *x < hi);
    p.push(lo);
    p.push(hi);
    p.sort_by(f64::total_cmp);
    let tol = 1e-13 * (hi - lo).abs().max(1e-300);
    p.dedup_by(|a, b| (*a - *b).abs() <= tol);
    p
}

const MAX_DIFF_BREAKS: usize = 24;

fn differences(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.len() > MAX_DIFF_BREAKS || b.len() > MAX_DIFF_BREAKS {
        return vec![];
    }
    a.iter().flat_map(|x| b.iter().map(move |y| y - x)).collect()
}

pub(crate) fn frac_of(kernel: &Kernel, n: usize) -> Option<Frac> {
    kernel.fractional_order().filter(|_| n == 2 || n == 3).map(|s| Frac::new(n, s))
}

pub fn supports(kernel: &Kernel, e: &ConvexBody) -> bool {
    frac_of(kernel, e.dim()).is_some() && !e.is_degenerate() && e.axial().is_some()
}

/// Common frame for two coaxial bodies: profiles of both, E first along the axis.
fn coaxial(e: &ConvexBody, f: &ConvexBody) -> Option<(Prof, Prof)> {
    let (ae, af) = (e.axial()?, f.axial()?);
    let axis = match (&ae.kind, &af.kind) {
        (AxialKind::Round(_), AxialKind::Round(_)) => v::normalize(&v::sub(&af.anchor, &ae.anchor))?,
        (AxialKind::Round(_), _) => af.axis,
        _ => ae.axis,
    };
    let ae = e.axial_along(&axis)?;
    let af = f.axial_along(&axis)?;
    let rel = v::sub(&af.anchor, &ae.anchor);
    let scale = e.bounding_ball().1 + f.bounding_ball().1;
    if v::norm(&v::reject(&rel, &axis)) > 1e-12 * scale {
        return None;
    }
    let se = v::dot(&ae.axis, &axis).signum();
    let sf = v::dot(&af.axis, &axis).signum();
    let pe = Prof::new(&ae, 0.0, se);
    let pf = Prof::new(&af, v::dot(&rel, &axis), sf);
    let tol = 1e-12 * scale;
    if pe.t1 <= pf.t0 + tol {
        Some((pe, pf))
    } else if pf.t1 <= pe.t0 + tol {
        Some((pf, pe))
    } else {
        None
    }
}

pub fn supports_pair(kernel: &Kernel, e: &ConvexBody, f: &ConvexBody) -> bool {
    supports(kernel, e) && supports(kernel, f) && coaxial(e, f).is_some()
}

fn setup(kernel: &Kernel, e: &ConvexBody) -> Result<(Frac, Axial)> {
    let fr = frac_of(kernel, e.dim()).ok_or_else(|| Error::Unsupported("slice backend needs a fractional kernel in two or three dimensions".into()))?;
    let ax = e.axial().ok_or_else(|| Error::Unsupported("slice backend needs an axially symmetric body".into()))?;
    Ok((fr, ax))
}

/// Runs `q` on a base and refined grading until the difference meets the target.
fn refine<F: Fn(&Grading) -> f64>(q: F, spec: &AccuracySpec) -> Result<Estimate> {
    let mut g = Grading::default();
    let mut a = q(&g);
    for _ in 0..3 {
        let gr = g.refined();
        let b = q(&gr);
        let err = (a - b).abs() + 1e-13 * b.abs();
        if !b.is_finite() {
            return Err(Error::DivergentKernel("slice quadrature produced a non-finite value".into()));
        }
        if err <= spec.target(b) {
            return Ok(Estimate { value: b, error: err, method: Method::Slice, seed: None, nodes: (gr.levels * gr.order) as u64 });
        }
        g = gr;
        a = b;
    }
    let err = spec.target(a) * 2.0;
    Err(Error::BudgetExceeded { requested: spec.target(a), achieved: err, samples: 0 })
}

fn perimeter_q(fr: &Frac, p: &Prof, g: &Grading) -> f64 {
    let (t0, t1) = (p.t0, p.t1);
    let len = t1 - t0;
    let round = p.round.is_some();
    let (zl, zr) = p.closed_ends();
    let pts = sorted_points(p.breaks.clone(), t0, t1);
    // pairs with one point outside the axial support
    let mut first = 0.0;
    for (i, w) in pts.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let last = i + 2 == pts.len();
        first += integrate(a, b, i == 0, last, g, &mut |t, xa, xb| {
            let d0 = if i == 0 { xa } else { t - t0 };
            let d1 = if last { xb } else { t1 - t };
            fr.area(p.radius(t, d0, d1)) * (fr.mass_tail(d0) + fr.mass_tail(d1))
        });
    }
    // pairs of slices inside the support
    let dpts = sorted_points(differences(&p.breaks, &p.breaks).into_iter().filter(|d| *d > 0.0).collect(), 0.0, len);
    let mut second = 0.0;
    for (i, w) in dpts.windows(2).enumerate() {
        let lastd = i + 2 == dpts.len();
        second += integrate(w[0], w[1], i == 0, round && lastd, g, &mut |delta, _, _| {
            let hi = t1 - delta;
            let mut cuts: Vec<f64> = p.breaks.clone();
            cuts.extend(p.breaks.iter().map(|b| b - delta));
            if round {
                cuts.push(0.5 * (t0 + t1) - 0.5 * delta);
            }
            let ipts = sorted_points(cuts, t0, hi);
            let mut s = 0.0;
            for (j, u) in ipts.windows(2).enumerate() {
                let lastj = j + 2 == ipts.len();
                s += integrate(u[0], u[1], zl && j == 0, zr && lastj, g, &mut |t, xa, xb| {
                    let d0 = if j == 0 { xa } else { t - t0 };
                    let e1 = if lastj { xb } else { hi - t };
                    let r1 = p.radius(t, d0, e1 + delta);
                    let r2 = p.radius(t + delta, d0 + delta, e1);
                    fr.dsym(r1, r2, delta)
                });
            }
            s
        });
    }
    first + second
}

pub fn perimeter(kernel: &Kernel, e: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    let (fr, ax) = setup(kernel, e)?;
    let p = Prof::new(&ax, 0.0, 1.0);
    refine(|g| perimeter_q(&fr, &p, g), spec)
}

fn interaction_q(fr: &Frac, pe: &Prof, pf: &Prof, g: &Grading) -> f64 {
    let (a, b, c, d) = (pe.t0, pe.t1, pf.t0, pf.t1);
    let gap = (c - b).max(0.0);
    let round = pe.round.is_some() || pf.round.is_some();
    let mut cand = differences(&pe.breaks, &pf.breaks);
    cand.extend([c - a, d - b]);
    let dpts = sorted_points(cand, gap, d - a);
    let mut total = 0.0;
    for (i, w) in dpts.windows(2).enumerate() {
        let lastd = i + 2 == dpts.len();
        total += integrate(w[0], w[1], i == 0 && gap <= 0.0, round && lastd, g, &mut |delta, _, _| {
            let (lo, hi) = (a.max(c - delta), b.min(d - delta));
            if hi <= lo {
                return 0.0;
            }
            let mut cuts = pe.breaks.clone();
            cuts.extend(pf.breaks.iter().map(|x| x - delta));
            let ipts = sorted_points(cuts, lo, hi);
            let mut s = 0.0;
            for (j, u) in ipts.windows(2).enumerate() {
                let (first, last) = (j == 0, j + 2 == ipts.len());
                s += integrate(u[0], u[1], round || first, round || last, g, &mut |t, _, _| {
                    let r1 = pe.radius(t, t - a, b - t);
                    let tf = t + delta;
                    let r2 = pf.radius(tf, tf - c, d - tf);
                    if r1 <= 0.0 || r2 <= 0.0 {
                        0.0
                    } else {
                        fr.disc_pair(r1, r2, delta)
                    }
                });
            }
            s
        });
    }
    total
}

pub fn interaction(kernel: &Kernel, e: &ConvexBody, f: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    let (fr, _) = setup(kernel, e)?;
    setup(kernel, f)?;
    let (pe, pf) = coaxial(e, f).ok_or_else(|| Error::Unsupported("slice interaction needs coaxial bodies with disjoint axial supports".into()))?;
    refine(|g| interaction_q(&fr, &pe, &pf, g), spec)
}

pub fn potential(kernel: &Kernel, c: &ConvexBody, x: &Vector, spec: &AccuracySpec) -> Result<Estimate> {
    let (fr, ax) = setup(kernel, c)?;
    if c.excess(x) <= 0.0 {
        return Err(Error::SingularEvaluation("the kernel is not integrable at a point of the body".into()));
    }
    let p = Prof::new(&ax, 0.0, 1.0);
    let (tx, rho) = ax.coords(x);
    let round = p.round.is_some();
    let q = |g: &Grading| {
        let mut cuts = p.breaks.clone();
        cuts.push(tx);
        let pts = sorted_points(cuts, p.t0, p.t1);
        let mut s = 0.0;
        for (i, w) in pts.windows(2).enumerate() {
            let last = i + 2 == pts.len();
            let near_a = (w[0] - tx).abs() <= 1e-15 * (1.0 + tx.abs());
            let near_b = (w[1] - tx).abs() <= 1e-15 * (1.0 + tx.abs());
            s += integrate(w[0], w[1], near_a || (round && i == 0), near_b || (round && last), g, &mut |t, xa, xb| {
                let d0 = if i == 0 { xa } else { t - p.t0 };
                let d1 = if last { xb } else { p.t1 - t };
                let dist = if near_a {
                    xa
                } else if near_b {
                    xb
                } else {
                    (t - tx).abs()
                };
                let big = p.radius(t, d0, d1);
                if big <= 0.0 {
                    return 0.0;
                }
                fr.disc_potential(big, rho, dist)
            });
        }
        s
    };
    refine(q, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive;

    #[test]
    fn two_dimensional_disc_terms_match_quadrature() {
        let fr = Frac::new(2, 0.4);
        let (p, q, d) = (0.7, 0.3, 0.2);
        let k = |u: f64| (u * u + d * d).powf(-1.2);
        // I = int_{-p}^{p} int_{-q}^{q} k(x - y)
        let i = adaptive(|x| adaptive(|y| k(x - y), -q, q, 1e-14, 1e-12, 400).value, -p, p, 1e-13, 1e-11, 400).value;
        assert!((fr.disc_pair(p, q, d) - i).abs() < 1e-9 * i);
        let total = 2.0 * p * fr.beta * d.powf(-1.4);
        let sym = fr.dsym(p, q, d);
        let other = 2.0 * q * fr.beta * d.powf(-1.4);
        assert!((sym - (total + other - 2.0 * i)).abs() < 1e-9 * sym, "{sym}");
        let w = adaptive(|y| k(y - 0.5), -p, p, 1e-14, 1e-12, 400).value;
        assert!((fr.disc_potential(p, 0.5, d) - w).abs() < 1e-10 * w);
    }

    #[test]
    fn three_dimensional_disc_terms_match_polar_quadrature() {
        let fr = Frac::new(3, 0.5);
        let (p, q, d) = (0.6, 0.4, 0.3);
        // I = int_{D_p} int_{D_q} k via the distance density of one disc around a point
        let w = |rho: f64| fr.disc_potential(q, rho, d);
        let i = adaptive(|r| 2.0 * PI * r * w(r), 0.0, p, 1e-13, 1e-10, 400).value;
        assert!((fr.disc_pair(p, q, d) - i).abs() < 1e-8 * i, "{} {i}", fr.disc_pair(p, q, d));
        let m = fr.beta * d.powf(-1.5);
        let sym = fr.dsym(p, q, d);
        let expect = PI * (p * p + q * q) * m - 2.0 * i;
        assert!((sym - expect).abs() < 1e-8 * sym, "{sym} {expect}");
    }

    #[test]
    fn disc_of_radius_one_in_the_plane() {
        // the slice value is stable under refinement and scales like r^{2-s}
        let k = Kernel::fractional(2, 0.5).unwrap();
        let spec = AccuracySpec::default().with_rel_tol(1e-8);
        let p1 = perimeter(&k, &ConvexBody::ball(2, [0.0; 3], 1.0).unwrap(), &spec).unwrap();
        let p2 = perimeter(&k, &ConvexBody::ball(2, [0.3, 0.1, 0.0], 2.0).unwrap(), &spec).unwrap();
        assert!((p2.value / p1.value - 2f64.powf(1.5)).abs() < 1e-7, "{p1:?} {p2:?}");
    }

    #[test]
    fn triangle_matches_the_chord_backend() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        let spec = AccuracySpec::default().with_rel_tol(1e-7);
        let cone = crate::geometry::build_cone(2, [0.0, 2.0, 0.0], [0.0; 3], 1.0, [0.0, 1.0, 0.0]).unwrap();
        let s = perimeter(&k, &cone, &spec).unwrap();
        let c = super::super::chord::perimeter(&k, &cone, &spec).unwrap();
        assert!((s.value - c.value).abs() < 1e-6 * c.value, "{s:?} {c:?}");
    }

    #[test]
    fn stacked_triangles_interaction_matches_chord() {
        let k = Kernel::fractional(2, 0.3).unwrap();
        let spec = AccuracySpec::default().with_rel_tol(1e-7);
        let lower = crate::geometry::build_cone(2, [0.0, -1.0, 0.0], [0.0; 3], 1.0, [0.0, -1.0, 0.0]).unwrap();
        let upper = crate::geometry::build_cone(2, [0.0, 1.5, 0.0], [0.0; 3], 1.0, [0.0, 1.0, 0.0]).unwrap();
        let s = interaction(&k, &lower, &upper, &spec).unwrap();
        let c = super::super::chord::interaction(&k, &lower, &upper, &spec).unwrap();
        assert!((s.value - c.value).abs() < 1e-6 * c.value, "{s:?} {c:?}");
    }

    #[test]
    fn ball_in_space_agrees_with_lines() {
        let k = Kernel::fractional(3, 0.5).unwrap();
        let b = ConvexBody::ball(3, [0.0; 3], 1.0).unwrap();
        let s = perimeter(&k, &b, &AccuracySpec::default().with_rel_tol(1e-6)).unwrap();
        let m = super::super::montecarlo::perimeter(&k, &b, &AccuracySpec::default().with_rel_tol(2e-3)).unwrap();
        assert!((s.value - m.value).abs() < 4.0 * m.error, "{s:?} {m:?}");
    }

    #[test]
    fn axis_potential_against_lines() {
        let k = Kernel::fractional(3, 0.5).unwrap();
        let cone = crate::geometry::build_cone(3, [0.0, 0.0, 1.0], [0.0; 3], 1.0, [0.0, 0.0, 1.0]).unwrap();
        let x = [0.0, 0.0, -0.5];
        let s = potential(&k, &cone, &x, &AccuracySpec::default().with_rel_tol(1e-7)).unwrap();
        let m = super::super::montecarlo::potential(&k, &cone, &x, &AccuracySpec::default().with_rel_tol(2e-3)).unwrap();
        assert!((s.value - m.value).abs() < 4.0 * m.error, "{s:?} {m:?}");
    }
}
