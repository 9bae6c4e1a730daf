//! Maximal interaction of a profile body with the cone over its base.
//!
//! Profiles live on `[0, d_max]` below the plane through `anchor` with
//! normal `axis`; the cone sits on the other side.  The objective
//! `L(F, C) = int_0^d Phi(t, R(t)) dt` is tabulated once per problem, where
//! `Phi(t, R)` is the interaction of a disc of radius R at depth t with the
//! cone.  Iterates are slopes of R, kept non-increasing and below the
//! envelope slope r/h, with the volume restored after every step.

use crate::consts::{unit_ball_volume, unit_sphere_area};
use crate::engine::slice::{frac_of, Frac};
use crate::engine::{self, AccuracySpec, Backend, Estimate};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, ProfileBody};
use crate::kernels::Kernel;
use crate::quad::{gauss_legendre, graded_rule, Grading};
use crate::vector::{self as v, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_NODES: usize = 128;
pub const STARTS: usize = 8;
const WINDOW: usize = 10;
const REL_CHANGE: f64 = 1e-6;
const MAX_ITER: usize = 600;

#[derive(Debug, Clone)]
pub struct ProfileProblem {
    pub kernel: Kernel,
    pub r: f64,
    pub h: f64,
    pub w: f64,
    pub nodes: usize,
    /// Unit normal of the plane, pointing into the cone.
    pub axis: Vector,
    /// Centre of the shared base.
    pub anchor: Vector,
    pub seed: u64,
    pub max_iter: usize,
    /// Optional extra start, e.g. a symmetrized slab.
    pub warm_start: Option<ProfileBody>,
}

impl ProfileProblem {
    pub fn new(kernel: &Kernel, r: f64, h: f64, w: f64) -> Result<Self> {
        let n = kernel.dim();
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        for (name, x) in [("r", r), ("h", h), ("w", w)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {x}")));
            }
        }
        let mut axis = v::ZERO;
        axis[n - 1] = 1.0;
        Ok(ProfileProblem { kernel: kernel.clone(), r, h, w, nodes: DEFAULT_NODES, axis, anchor: v::ZERO, seed: 0x0b7, max_iter: MAX_ITER, warm_start: None })
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_frame(mut self, axis: Vector, anchor: Vector) -> Self {
        self.axis = v::normalize(&axis).unwrap_or(self.axis);
        self.anchor = anchor;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_warm_start(mut self, p: ProfileBody) -> Self {
        self.warm_start = Some(p);
        self
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    /// Largest axial extent of a member of the family.
    pub fn d_max(&self) -> f64 {
        let n = self.dim();
        n as f64 * self.w * self.r.powi(1 - n as i32) / unit_ball_volume(n - 1)
    }

    fn envelope_slope(&self) -> f64 {
        self.r / self.h
    }

    /// Volume of {R <= (r/h) t + r, 0 <= t <= d_max}.
    pub fn envelope_volume(&self) -> f64 {
        let d = self.d_max();
        crate::geometry::linear_profile_volume(self.dim(), &[0.0, d], &[self.r, self.r + self.envelope_slope() * d])
    }

    pub fn cone(&self) -> Result<ProfileBody> {
        ProfileBody::new(self.dim(), self.axis, self.anchor, vec![0.0, self.h], vec![self.r, 0.0])
    }

    fn grid(&self) -> Vec<f64> {
        let d = self.d_max();
        (0..=self.nodes).map(|k| if k == self.nodes { d } else { d * k as f64 / self.nodes as f64 }).collect()
    }

    /// Profile body with node radii `radii` on the problem grid, cut where
    /// R first reaches zero.
    pub fn body(&self, radii: &[f64]) -> Result<ProfileBody> {
        let t = self.grid();
        let (mut ts, mut rs) = (vec![t[0]], vec![radii[0]]);
        for k in 1..t.len() {
            if radii[k] <= 0.0 {
                let (a, b) = (radii[k - 1], radii[k]);
                let x = t[k - 1] + (t[k] - t[k - 1]) * a / (a - b);
                if x > ts[ts.len() - 1] {
                    ts.push(x);
                    rs.push(0.0);
                } else {
                    let last = rs.len() - 1;
                    rs[last] = 0.0;
                }
                break;
            }
            ts.push(t[k]);
            rs.push(radii[k]);
        }
        ProfileBody::new(self.dim(), v::scale(&self.axis, -1.0), self.anchor, ts, rs)
    }
}

/// One line of the solver trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub start: usize,
    pub iteration: usize,
    pub objective: f64,
    pub volume_residual: f64,
    pub concavity_residual: f64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Engine value of L(M, C).
    pub m: Estimate,
    /// Tabulated objective at M.
    pub objective: f64,
    pub profile: ProfileBody,
    /// Node radii of M on the problem grid (may be negative past the support).
    pub radii: Vec<f64>,
    pub start: usize,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRow>,
}

/// Hermite table of Phi(t, .) on one row.
struct Row {
    rho: Vec<f64>,
    phi: Vec<f64>,
    dphi: Vec<f64>,
}

impl Row {
    fn eval(&self, x: f64) -> (f64, f64) {
        let m = self.rho.len();
        let x = x.clamp(0.0, self.rho[m - 1]);
        let k = self.rho.partition_point(|&p| p <= x).clamp(1, m - 1);
        let (x0, x1) = (self.rho[k - 1], self.rho[k]);
        let hh = x1 - x0;
        let u = (x - x0) / hh;
        let (p0, p1, d0, d1) = (self.phi[k - 1], self.phi[k], self.dphi[k - 1] * hh, self.dphi[k] * hh);
        let (u2, u3) = (u * u, u * u * u);
        let val = (2.0 * u3 - 3.0 * u2 + 1.0) * p0 + (u3 - 2.0 * u2 + u) * d0 + (-2.0 * u3 + 3.0 * u2) * p1 + (u3 - u2) * d1;
        let der = ((6.0 * u2 - 6.0 * u) * p0 + (3.0 * u2 - 4.0 * u + 1.0) * d0 + (-6.0 * u2 + 6.0 * u) * p1 + (3.0 * u2 - 2.0 * u) * d1) / hh;
        (val, der)
    }
}

/// Tabulated objective on the quadrature points of one grid.
struct Table {
    /// (interval, local offset, weight) per quadrature point
    points: Vec<(usize, f64, f64)>,
    rows: Vec<Row>,
    step: f64,
}

fn tau_rule(t: f64, h: f64, star: Option<f64>) -> Vec<(f64, f64)> {
    let mut pts = vec![0.0, h];
    let mut s = t;
    while s < h {
        pts.push(s);
        s *= 4.0;
    }
    if let Some(ts) = star {
        let scale = t + ts;
        for f in [-1.0, -0.25, 0.0, 0.25, 1.0] {
            pts.push(ts + f * scale);
        }
    }
    pts.retain(|x| *x >= 0.0 && *x <= h);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * h);
    let gl = gauss_legendre(6);
    let mut rule = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (c, hw) = (0.5 * (a + b), 0.5 * (b - a));
        for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
            rule.push((c + hw * x, hw * wt));
        }
    }
    rule
}

impl Table {
    fn build(fr: &Frac, p: &ProfileProblem) -> Table {
        let n = p.dim();
        let (r, h) = (p.r, p.h);
        let step = p.d_max() / p.nodes as f64;
        let mut points = Vec::new();
        for (x, w) in graded_rule(0.0, step, true, false, &Grading::new(10, 4)) {
            points.push((0, x, w));
        }
        let gl = gauss_legendre(2);
        for k in 1..p.nodes {
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                points.push((k, 0.5 * step * (1.0 + x), 0.5 * step * w));
            }
        }
        let sphere = unit_sphere_area(n - 1);
        let rows = points
            .par_iter()
            .map(|&(k, x, _)| {
                let t = k as f64 * step + x;
                let top = r + r / h * t;
                let mut rho: Vec<f64> = (0..=16).map(|j| top * j as f64 / 16.0).collect();
                let mut s = 0.25 * t;
                while s < top {
                    rho.push(r - s);
                    rho.push(r + s);
                    s *= 2.0;
                }
                rho.push(r);
                rho.retain(|x| *x >= 0.0 && *x <= top);
                rho.sort_by(f64::total_cmp);
                rho.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * top);
                let mut phi = Vec::with_capacity(rho.len());
                let mut dphi = Vec::with_capacity(rho.len());
                for &q in &rho {
                    if q <= 0.0 {
                        phi.push(0.0);
                        dphi.push(0.0);
                        continue;
                    }
                    let star = if q < r { Some(h * (1.0 - q / r)) } else { None };
                    let (mut a, mut b) = (0.0, 0.0);
                    for (tau, wt) in tau_rule(t, h, star) {
                        let c = r * (1.0 - tau / h);
                        if c <= 0.0 {
                            continue;
                        }
                        a += wt * fr.disc_pair(q, c, t + tau);
                        b += wt * fr.disc_potential(c, q, t + tau);
                    }
                    phi.push(a);
                    dphi.push(sphere * q.powi(n as i32 - 2) * b);
                }
                Row { rho, phi, dphi }
            })
            .collect();
        Table { points, rows, step }
    }

    /// Objective and its gradient with respect to the node radii.
    fn eval(&self, radii: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let mut total = 0.0;
        let mut g = grad;
        if let Some(gr) = g.as_deref_mut() {
            gr.iter_mut().for_each(|x| *x = 0.0);
        }
        for (row, &(k, x, w)) in self.rows.iter().zip(&self.points) {
            let u = x / self.step;
            let rr = radii[k] + (radii[k + 1] - radii[k]) * u;
            if rr <= 0.0 {
                continue;
            }
            let (val, der) = row.eval(rr);
            total += w * val;
            if let Some(gr) = g.as_deref_mut() {
                gr[k] += w * der * (1.0 - u);
                gr[k + 1] += w * der * u;
            }
        }
        total
    }
}

/// Slope-space state with the pinned base radius.
struct Space {
    r: f64,
    step: f64,
    n: usize,
    hi: f64,
    lo: f64,
    w: f64,
}

impl Space {
    fn radii(&self, sig: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(sig.len() + 1);
        out.push(self.r);
        let mut acc = self.r;
        for s in sig {
            acc += s * self.step;
            out.push(acc);
        }
        out
    }

    fn volume_and_grad(&self, radii: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let omega = unit_ball_volume(self.n - 1);
        let mut g = grad;
        if let Some(gr) = g.as_deref_mut() {
            gr.iter_mut().for_each(|x| *x = 0.0);
        }
        let mut v = 0.0;
        for k in 0..radii.len() - 1 {
            let (a, b) = (radii[k], radii[k + 1]);
            if a <= 0.0 && b <= 0.0 {
                continue;
            }
            let (len, a2, b2) = if a >= 0.0 && b >= 0.0 {
                (self.step, a, b)
            } else if a > 0.0 {
                (self.step * a / (a - b), a, 0.0)
            } else {
                (self.step * b / (b - a), 0.0, b)
            };
            match self.n {
                2 => {
                    v += 0.5 * len * (a2 + b2);
                    if let Some(gr) = g.as_deref_mut() {
                        gr[k] += 0.5 * len;
                        gr[k + 1] += 0.5 * len;
                    }
                }
                _ => {
                    v += len * (a2 * a2 + a2 * b2 + b2 * b2) / 3.0;
                    if let Some(gr) = g.as_deref_mut() {
                        gr[k] += len * (2.0 * a2 + b2) / 3.0;
                        gr[k + 1] += len * (a2 + 2.0 * b2) / 3.0;
                    }
                }
            }
        }
        if let Some(gr) = g {
            gr.iter_mut().for_each(|x| *x *= omega);
        }
        omega * v
    }

    /// Chain rule from node radii to slopes.
    fn to_slopes(&self, g_r: &[f64]) -> Vec<f64> {
        let m = g_r.len() - 1;
        let mut out = vec![0.0; m];
        let mut acc = 0.0;
        for i in (0..m).rev() {
            acc += g_r[i + 1];
            out[i] = acc * self.step;
        }
        out
    }

    /// Non-increasing slopes within [lo, hi].
    fn project(&self, sig: &[f64]) -> Vec<f64> {
        let mut blocks: Vec<(f64, usize)> = Vec::new();
        for &s in sig {
            blocks.push((s, 1));
            while blocks.len() > 1 {
                let k = blocks.len();
                let (a, b) = (blocks[k - 2], blocks[k - 1]);
                if b.0 / b.1 as f64 > a.0 / a.1 as f64 {
                    blocks.pop();
                    blocks[k - 2] = (a.0 + b.0, a.1 + b.1);
                } else {
                    break;
                }
            }
        }
        let mut out = Vec::with_capacity(sig.len());
        for (sum, c) in blocks {
            let m = (sum / c as f64).clamp(self.lo, self.hi);
            out.extend(std::iter::repeat_n(m, c));
        }
        out
    }

    fn volume_of(&self, sig: &[f64]) -> f64 {
        self.volume_and_grad(&self.radii(sig), None)
    }

    /// Feasible point nearest to `sig` along the volume gradient.
    fn restore(&self, sig: &[f64]) -> Vec<f64> {
        let base = self.project(sig);
        let radii = self.radii(&base);
        let mut gv = vec![0.0; radii.len()];
        let v0 = self.volume_and_grad(&radii, Some(&mut gv));
        let mut dir = self.to_slopes(&gv);
        let norm2: f64 = dir.iter().map(|x| x * x).sum();
        if !(norm2 > 0.0) {
            dir = vec![1.0; base.len()];
        }
        let norm2: f64 = dir.iter().map(|x| x * x).sum();
        let at = |lam: f64| -> Vec<f64> { self.project(&base.iter().zip(&dir).map(|(s, d)| s + lam * d).collect::<Vec<_>>()) };
        if (v0 - self.w).abs() <= 1e-13 * self.w {
            return base;
        }
        let mut lam = (self.w - v0) / norm2.sqrt() / norm2.sqrt().max(1e-300);
        let (mut a, mut b) = (0.0, 0.0);
        let mut found = false;
        for _ in 0..200 {
            let val = self.volume_of(&at(lam));
            if (val - self.w) * (v0 - self.w) <= 0.0 {
                b = lam;
                found = true;
                break;
            }
            a = lam;
            lam *= 2.0;
        }
        if !found {
            return at(a);
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid == a || mid == b {
                break;
            }
            let val = self.volume_of(&at(mid));
            if (val - self.w) * (v0 - self.w) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
            if (val - self.w).abs() <= 1e-13 * self.w {
                return at(mid);
            }
        }
        at(b)
    }

    fn concavity_residual(&self, sig: &[f64]) -> f64 {
        sig.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold((sig[0] - self.hi).max(0.0), f64::max)
    }
}

struct Run {
    sig: Vec<f64>,
    objective: f64,
    iterations: usize,
    converged: bool,
    trace: Vec<TraceRow>,
}

fn ascend(table: &Table, sp: &Space, start: usize, sig0: Vec<f64>, max_iter: usize) -> Run {
    let mut sig = sp.restore(&sig0);
    let mut radii = sp.radii(&sig);
    let mut g_r = vec![0.0; radii.len()];
    let mut obj = table.eval(&radii, Some(&mut g_r));
    let mut history = vec![obj];
    let mut trace = Vec::new();
    let scale = sp.hi.abs() + sp.r / (sp.step * sig.len() as f64);
    let mut alpha = f64::NAN;
    let mut converged = false;
    let mut it = 0;
    while it < max_iter {
        it += 1;
        let g = sp.to_slopes(&g_r);
        let gmax = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !(gmax > 0.0) {
            converged = true;
            break;
        }
        if alpha.is_nan() {
            alpha = 0.1 * scale / gmax;
        }
        let trial: Vec<f64> = sig.iter().zip(&g).map(|(s, d)| s + alpha * d).collect();
        let cand = sp.restore(&trial);
        let cr = sp.radii(&cand);
        let mut cg = vec![0.0; cr.len()];
        let cobj = table.eval(&cr, Some(&mut cg));
        if cobj > obj {
            sig = cand;
            radii = cr;
            g_r = cg;
            obj = cobj;
            alpha *= 1.5;
        } else {
            alpha *= 0.5;
        }
        history.push(obj);
        trace.push(TraceRow {
            start,
            iteration: it,
            objective: obj,
            volume_residual: (sp.volume_and_grad(&radii, None) - sp.w) / sp.w,
            concavity_residual: sp.concavity_residual(&sig),
        });
        if history.len() > WINDOW {
            let old = history[history.len() - 1 - WINDOW];
            if (obj - old).abs() <= REL_CHANGE * obj.abs() {
                converged = true;
                break;
            }
        }
        if alpha * gmax < 1e-15 * scale {
            converged = true;
            break;
        }
    }
    Run { sig, objective: obj, iterations: it, converged, trace }
}

fn starts(p: &ProfileProblem, sp: &Space) -> Vec<Vec<f64>> {
    let m = p.nodes;
    let d = p.d_max();
    let mut out = vec![vec![0.0; m], vec![-p.r / d; m], vec![sp.hi; m], (0..m).map(|i| sp.hi - 2.0 * sp.hi * i as f64 / m as f64).collect()];
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    while out.len() < STARTS {
        let mut s: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0 * p.r / d..sp.hi)).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        out.push(s);
    }
    if let Some(ws) = &p.warm_start {
        let t = p.grid();
        let end = ws.extent() + ws.t_grid[0];
        let mut radii: Vec<f64> = t.iter().map(|&x| ws.radius(ws.t_grid[0] + x)).collect();
        radii[0] = p.r;
        let mut sig: Vec<f64> = radii.windows(2).map(|w| (w[1] - w[0]) / sp.step).collect();
        let past = t.iter().position(|&x| ws.t_grid[0] + x > end).unwrap_or(m);
        let tail = if past > 0 && past <= m { sig[past - 1].min(-p.r / d) } else { -p.r / d };
        for s in sig.iter_mut().skip(past) {
            *s = tail;
        }
        out.push(sig);
    }
    out
}

pub fn solve_max(p: &ProfileProblem, spec: &AccuracySpec) -> Result<Solution> {
    let n = p.dim();
    let fr = frac_of(&p.kernel, n).ok_or_else(|| Error::Unsupported("the profile optimizer needs a fractional kernel in two or three dimensions".into()))?;
    if p.nodes < 8 {
        return Err(Error::InvalidArgument(format!("optimizer needs at least 8 nodes, got {}", p.nodes)));
    }
    let cap = p.envelope_volume();
    if p.w > cap {
        return Err(Error::Infeasible { w: p.w, cap });
    }
    let table = Table::build(&fr, p);
    let d = p.d_max();
    let sp = Space { r: p.r, step: d / p.nodes as f64, n, hi: p.r / p.h, lo: -1e3 * (p.r / p.h + p.r / d), w: p.w };
    let runs: Vec<Run> = starts(p, &sp).into_par_iter().enumerate().map(|(i, s)| ascend(&table, &sp, i, s, p.max_iter)).collect();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.objective > runs[best].objective {
            best = i;
        }
    }
    let run = &runs[best];
    let radii = sp.radii(&run.sig);
    let profile = p.body(&radii)?;
    let converged = run.converged;
    if !converged {
        log::warn!("profile optimizer stopped after {} iterations without converging", run.iterations);
    }
    let cone = ConvexBody::profile(p.cone()?)?;
    let body = ConvexBody::profile(profile.clone())?;
    let m = engine::interaction(&p.kernel, &body, &cone, &spec.with_backend(Backend::Slice))?;
    Ok(Solution {
        m,
        objective: run.objective,
        profile,
        radii,
        start: best,
        iterations: run.iterations,
        converged,
        trace: runs.iter().flat_map(|r| r.trace.iter().cloned()).collect(),
    })
}

/// f = P(C) - 2 m together with its ingredients.
#[derive(Debug, Clone)]
pub struct FValue {
    pub f: Estimate,
    pub cone_perimeter: Estimate,
    pub solution: Option<Solution>,
    /// The raw value was negative and has been set to zero.
    pub clamped: bool,
    /// The raw value was below minus three standard errors.
    pub suspicious: bool,
}

/// f for the cone with height h over a base of (n-1)-measure `area_base`.
pub fn f_value(kernel: &Kernel, h: f64, area_base: f64, w: f64, spec: &AccuracySpec) -> Result<FValue> {
    let n = kernel.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let r = (area_base / unit_ball_volume(n - 1)).powf(1.0 / (n as f64 - 1.0));
    if !(r > 0.0) || !(h > 0.0) {
        return Ok(FValue {
            f: Estimate::exact(0.0, engine::Method::Closedform),
            cone_perimeter: Estimate::exact(0.0, engine::Method::Closedform),
            solution: None,
            clamped: false,
            suspicious: false,
        });
    }
    f_value_for(&ProfileProblem::new(kernel, r, h, w)?, spec)
}

pub fn f_value_for(p: &ProfileProblem, spec: &AccuracySpec) -> Result<FValue> {
    let sol = solve_max(p, spec)?;
    let cone = ConvexBody::profile(p.cone()?)?;
    let pc = engine::perimeter(&p.kernel, &cone, &spec.with_backend(Backend::Slice))?;
    let raw = pc.minus(&sol.m.scaled(2.0));
    let clamped = raw.value < 0.0;
    let suspicious = raw.value < -3.0 * raw.error;
    let f = Estimate { value: raw.value.max(0.0), ..raw };
    Ok(FValue { f, cone_perimeter: pc, solution: Some(sol), clamped, suspicious })
}

/// Best member of the frustum family (base r, top radius R1, height fixed by
/// the volume), scanned on `points` top radii and refined around the best.
pub fn trapezoid_search(p: &ProfileProblem, points: usize, spec: &AccuracySpec) -> Result<(Estimate, ProfileBody)> {
    let n = p.dim();
    let (r, k) = (p.r, p.r / p.h);
    let height = |top: f64| -> f64 {
        let unit = crate::geometry::linear_profile_volume(n, &[0.0, 1.0], &[r, top]);
        p.w / unit
    };
    let feasible = |top: f64| top <= r + k * height(top) * (1.0 + 1e-12);
    let mut hi = r;
    while feasible(hi * 2.0) {
        hi *= 2.0;
    }
    let mut lo = hi;
    hi *= 2.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let top_max = lo;
    let cone = ConvexBody::profile(p.cone()?)?;
    let spec = spec.with_backend(Backend::Slice);
    let eval = |top: f64| -> Result<(Estimate, ProfileBody)> {
        let d = height(top);
        let body = ProfileBody::new(n, v::scale(&p.axis, -1.0), p.anchor, vec![0.0, d], vec![r, top])?;
        let e = engine::interaction(&p.kernel, &ConvexBody::profile(body.clone())?, &cone, &spec)?;
        Ok((e, body))
    };
    let tops: Vec<f64> = (0..points.max(2)).map(|i| top_max * i as f64 / (points.max(2) - 1) as f64).collect();
    let mut best: Option<(f64, Estimate, ProfileBody)> = None;
    for &top in &tops {
        let (e, b) = eval(top)?;
        if best.as_ref().is_none_or(|x| e.value > x.1.value) {
            best = Some((top, e, b));
        }
    }
    let (mut top, mut e, mut b) = best.unwrap();
    let mut width = top_max / (points.max(2) - 1) as f64;
    for _ in 0..4 {
        width *= 0.5;
        for cand in [top - width, top + width] {
            if cand < 0.0 || cand > top_max {
                continue;
            }
            let (ce, cb) = eval(cand)?;
            if ce.value > e.value {
                top = cand;
                e = ce;
                b = cb;
            }
        }
    }
    Ok((e, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(nodes: usize) -> ProfileProblem {
        let k = Kernel::fractional(2, 0.5).unwrap();
        ProfileProblem::new(&k, 1.0, 1.0, 1.0).unwrap().with_nodes(nodes)
    }

    #[test]
    fn table_matches_engine_on_a_frustum() {
        let p = problem(32);
        let fr = frac_of(&p.kernel, 2).unwrap();
        let table = Table::build(&fr, &p);
        let d = p.d_max();
        let t = p.grid();
        let radii: Vec<f64> = t.iter().map(|x| 1.0 + 0.3 * x - 0.5 * x * x / d).collect();
        let radii: Vec<f64> = radii.iter().map(|x| x.max(0.05)).collect();
        let body = ProfileBody::new(2, [0.0, -1.0, 0.0], v::ZERO, t.clone(), radii.clone()).unwrap();
        let cone = ConvexBody::profile(p.cone().unwrap()).unwrap();
        let e = engine::interaction(&p.kernel, &ConvexBody::profile(body).unwrap(), &cone, &AccuracySpec::default().with_rel_tol(1e-6)).unwrap();
        let q = table.eval(&radii, None);
        assert!((q / e.value - 1.0).abs() < 2e-3, "{q} {}", e.value);
    }

    #[test]
    fn gradient_matches_differences() {
        let p = problem(16);
        let fr = frac_of(&p.kernel, 2).unwrap();
        let table = Table::build(&fr, &p);
        let radii: Vec<f64> = p.grid().iter().map(|x| 1.0 + 0.2 * x - 0.3 * x * x).collect();
        let mut g = vec![0.0; radii.len()];
        table.eval(&radii, Some(&mut g));
        for k in [3, 8, 12] {
            let e = 1e-4;
            let mut a = radii.clone();
            a[k] += e;
            let mut b = radii.clone();
            b[k] -= e;
            let fd = (table.eval(&a, None) - table.eval(&b, None)) / (2.0 * e);
            assert!(g[k] >= -1e-9);
            assert!((fd - g[k]).abs() <= 1e-3 * g[k].abs().max(1e-6), "{k}: {fd} {}", g[k]);
        }
    }

    #[test]
    fn restore_hits_the_volume_and_keeps_concavity() {
        let p = problem(32);
        let d = p.d_max();
        let sp = Space { r: 1.0, step: d / 32.0, n: 2, hi: 1.0, lo: -1e3, w: 1.0 };
        let sig = sp.restore(&[0.7, -0.2, 2.0, 0.1].repeat(8));
        assert!((sp.volume_of(&sig) - 1.0).abs() < 1e-8);
        assert!(sp.concavity_residual(&sig) == 0.0);
    }

    #[test]
    fn envelope_region_always_holds_the_budget() {
        let k = Kernel::fractional(3, 0.3).unwrap();
        for w in [1e-3, 0.5, 7.0] {
            let p = ProfileProblem::new(&k, 0.7, 2.0, w).unwrap();
            assert!(p.envelope_volume() > w);
        }
    }

    #[test]
    fn degenerate_cone_gives_zero() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        assert_eq!(f_value(&k, 0.0, 2.0, 1.0, &AccuracySpec::default()).unwrap().f.value, 0.0);
        assert_eq!(f_value(&k, 1.0, 0.0, 1.0, &AccuracySpec::default()).unwrap().f.value, 0.0);
    }
}
