//! Property suites behind `selftest` and the acceptance tests.
//!
//! Every criterion reduces its cases to one worst-case figure that passes
//! when it is at most the criterion's threshold.  Statistical checks report
//! the worst z-score, i.e. violation divided by the combined error.

use crate::bounds::{self, BoundKind, PipelineOptions};
use crate::engine::{self, AccuracySpec, Backend, Estimate};
use crate::error::Result;
use crate::geometry::{intersect_halfspace, ConvexBody, HalfSpace, ProfileBody};
use crate::kernels::Kernel;
use crate::optimizer::{self, ProfileProblem};
use crate::oracle::{self, Grid, VoxelSet};
use crate::report;
use crate::symmetry;
use crate::vector::{self as v, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

pub const Z_MAX: f64 = 3.0;
pub const ONED_REL: f64 = 1e-9;
pub const ONED_QUAD_REL: f64 = 1e-6;
pub const ONED_SECONDS: f64 = 1.0;
pub const SYM_VOLUME_REL: f64 = 1e-3;
pub const TRAPEZOID_SLACK: f64 = 0.01;
pub const MESH_REL: f64 = 0.02;
pub const ORACLE_REL: f64 = 0.10;
pub const ORACLE_RES: usize = 64;
pub const MINIMALITY_SLACK: f64 = 0.02;
/// Floor on the error of deterministic values when forming z-scores.
pub const SIGMA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Fast,
    Full,
}

impl Scale {
    fn count(self, full: usize) -> usize {
        match self {
            Scale::Full => full,
            Scale::Fast => full.div_ceil(5).max(2),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    pub worst: f64,
    pub threshold: f64,
    pub seconds: f64,
    pub detail: String,
}

pub const NAMES: [&str; 11] = [
    "one-dimensional closed form",
    "segment deficits and equality case",
    "scaling law",
    "monotonicity",
    "intersection stability",
    "Schwartz symmetrization",
    "interpolation bound",
    "quantitative bounds",
    "optimizer soundness",
    "oracle cross-validation",
    "determinism",
];

/// Worst-case tracker for one criterion.
struct Tally {
    cases: usize,
    failures: usize,
    worst: f64,
    threshold: f64,
    notes: Vec<String>,
}

impl Tally {
    fn new(threshold: f64) -> Self {
        Tally { cases: 0, failures: 0, worst: f64::NEG_INFINITY, threshold, notes: Vec::new() }
    }

    fn add(&mut self, metric: f64, label: impl FnOnce() -> String) {
        self.cases += 1;
        let bad = !(metric <= self.threshold);
        if bad {
            self.failures += 1;
            if self.notes.len() < 5 {
                self.notes.push(format!("{} ({metric:.3e})", label()));
            }
        }
        if metric.is_nan() || metric > self.worst {
            self.worst = metric;
        }
    }

    fn error(&mut self, what: String) {
        self.cases += 1;
        self.failures += 1;
        self.worst = f64::INFINITY;
        if self.notes.len() < 5 {
            self.notes.push(what);
        }
    }

    fn finish(self, id: u8, start: Instant, extra: &str) -> CriterionResult {
        let mut detail = self.notes.join("; ");
        if !extra.is_empty() {
            if !detail.is_empty() {
                detail.push_str("; ");
            }
            detail.push_str(extra);
        }
        CriterionResult {
            id,
            name: NAMES[id as usize - 1].into(),
            passed: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            worst: self.worst,
            threshold: self.threshold,
            seconds: start.elapsed().as_secs_f64(),
            detail,
        }
    }
}

/// How far `lhs <= rhs` is violated, in combined standard errors.
pub fn z_excess(lhs: f64, rhs: f64, sigma: f64, scale: f64) -> f64 {
    let s = sigma.max(SIGMA_FLOOR * scale.abs().max(1.0));
    (lhs - rhs) / s
}

fn sig(es: &[&Estimate]) -> f64 {
    es.iter().map(|e| e.error * e.error).sum::<f64>().sqrt()
}

// ---- random instances

pub fn random_polygon(rng: &mut ChaCha8Rng, center: Vector, radius: f64) -> ConvexBody {
    loop {
        let k = rng.random_range(3..9);
        let pts: Vec<Vector> = (0..k)
            .map(|_| {
                let t = rng.random_range(0.0..2.0 * PI);
                let r = radius * rng.random_range(0.3f64..1.0).sqrt();
                [center[0] + r * t.cos(), center[1] + r * t.sin(), 0.0]
            })
            .collect();
        if let Ok(b) = ConvexBody::from_points(2, &pts) {
            if b.volume() > 0.15 * radius * radius {
                return b;
            }
        }
    }
}

pub fn random_polytope3(rng: &mut ChaCha8Rng, radius: f64) -> ConvexBody {
    loop {
        let k = rng.random_range(5..12);
        let pts: Vec<Vector> =
            (0..k).map(|_| [rng.random_range(-radius..radius), rng.random_range(-radius..radius), rng.random_range(-radius..radius)]).collect();
        if let Ok(b) = ConvexBody::from_points(3, &pts) {
            if b.volume() > 0.1 * radius.powi(3) {
                return b;
            }
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    loop {
        let mut u = v::ZERO;
        for x in u.iter_mut().take(n) {
            *x = rng.random_range(-1.0..1.0);
        }
        if let Some(u) = v::normalize(&u) {
            if v::norm(&u) > 0.0 {
                return u;
            }
        }
    }
}

/// A inside B: a shrunken copy about an interior point, sometimes cut by a plane.
pub fn random_nested(rng: &mut ChaCha8Rng, n: usize) -> (ConvexBody, ConvexBody) {
    loop {
        let b = if n == 2 { random_polygon(rng, v::ZERO, 1.0) } else { random_polytope3(rng, 1.0) };
        let verts = b.exact_polytope().unwrap().vertices().to_vec();
        let mut c = v::ZERO;
        let mut wsum = 0.0;
        for p in &verts {
            let w: f64 = rng.random_range(0.1..1.0);
            c = v::axpy(&c, w, p);
            wsum += w;
        }
        let c = v::scale(&c, 1.0 / wsum);
        let lam = rng.random_range(0.4..0.95);
        let a = match b.translated(&v::scale(&c, -1.0)).and_then(|x| x.scaled(lam)).and_then(|x| x.translated(&c)) {
            Ok(a) => a,
            Err(_) => continue,
        };
        let a = if rng.random_bool(0.5) {
            let u = random_unit(rng, n);
            let off = v::dot(&u, &c) + rng.random_range(0.0..0.3);
            match intersect_halfspace(&a, &HalfSpace { normal: u, offset: off }) {
                Ok(x) if x.volume() > 0.05 * b.volume() => x,
                _ => continue,
            }
        } else {
            a
        };
        return (a, b);
    }
}

fn intersect(e: &ConvexBody, c: &ConvexBody) -> Result<ConvexBody> {
    let mut out = e.clone();
    for hs in c.exact_polytope().expect("polytope").halfspaces() {
        out = intersect_halfspace(&out, hs)?;
    }
    Ok(out)
}

fn spec(rel: f64, seed: u64) -> AccuracySpec {
    AccuracySpec { rel_tol: rel, abs_floor: 1e-9, max_samples: 1 << 26, seed, backend: Backend::Auto }
}

fn seg(a: f64, b: f64) -> Result<ConvexBody> {
    ConvexBody::cuboid(1, [a, 0.0, 0.0], [b, 0.0, 0.0])
}

// ---- criteria

fn c1(_scale: Scale, _seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new(ONED_REL);
    for i in 1..=9 {
        let s = i as f64 / 10.0;
        let k = Kernel::fractional(1, s).unwrap();
        let exact = 2.0 / (s * (1.0 - s));
        match engine::perimeter(&k, &seg(0.0, 1.0).unwrap(), &AccuracySpec::default()) {
            Ok(p) => t.add((p.value / exact - 1.0).abs(), || format!("s = {s}")),
            Err(e) => t.error(format!("s = {s}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut quad = Tally::new(ONED_QUAD_REL);
    for i in 1..=9 {
        let s = i as f64 / 10.0;
        let exact = 2.0 / (s * (1.0 - s));
        let run = || -> Result<f64> {
            let k = Kernel::radial(1, move |r| r.powf(-1.0 - s), "power")?;
            Ok(engine::perimeter(&k, &seg(0.0, 1.0)?, &AccuracySpec::default())?.value)
        };
        match run() {
            Ok(q) => quad.add((q / exact - 1.0).abs(), || format!("quadrature s = {s}")),
            Err(e) => quad.error(format!("quadrature s = {s}: {e}")),
        }
    }
    let extra = format!("runtime {secs:.3} s, worst quadrature error {:.2e}", quad.worst);
    t.cases += quad.cases;
    t.failures += quad.failures;
    t.notes.extend(quad.notes);
    let mut r = t.finish(1, start, &extra);
    if secs >= ONED_SECONDS {
        r.passed = false;
    }
    r
}

fn c2(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
    let mut t = Tally::new(ONED_REL);
    for i in 0..scale.count(50) {
        let s: f64 = rng.random_range(0.05..0.95);
        let la: f64 = rng.random_range(0.1..3.0);
        let lb = la + rng.random_range(0.0..3.0);
        let k = Kernel::fractional(1, s).unwrap();
        let off = rng.random_range(0.0..lb - la);
        let (a, b) = (seg(off, off + la).unwrap(), seg(0.0, lb).unwrap());
        let exact = 2.0 / (s * (1.0 - s)) * (lb.powf(1.0 - s) - la.powf(1.0 - s));
        match bounds::check_monotonicity(&k, &a, &b, &AccuracySpec::default()) {
            Ok((d, _)) => t.add((d.value - exact).abs() / exact.abs().max(1.0), || format!("pair {i}")),
            Err(e) => t.error(format!("pair {i}: {e}")),
        }
        let psi = move |x: f64| x.powf(1.0 - s);
        match bounds::bound_prop16(&k, &psi, la, lb) {
            Ok(p) => t.add((p.lhs + p.bound - p.rhs).abs() / p.rhs.abs().max(1.0), || format!("equality {i}")),
            Err(e) => t.error(format!("equality {i}: {e}")),
        }
    }
    t.finish(2, start, "")
}

fn c3(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
    let k = Kernel::fractional(2, 0.5).unwrap();
    let sp = spec(1e-6, seed);
    let mut t = Tally::new(Z_MAX);
    for i in 0..scale.count(20) {
        let e = random_polygon(&mut rng, v::ZERO, 1.0);
        let run = || -> Result<Vec<f64>> {
            let p = engine::perimeter(&k, &e, &sp)?;
            let mut out = Vec::new();
            for lam in [0.5, 2.0] {
                let q = engine::perimeter(&k, &e.scaled(lam)?, &sp)?;
                let pred = p.scaled(lam.powf(1.5));
                let z = (q.value - pred.value).abs() / sig(&[&q, &pred]).max(SIGMA_FLOOR * q.value);
                out.push(z);
            }
            Ok(out)
        };
        match run() {
            Ok(zs) => zs.into_iter().for_each(|z| t.add(z, || format!("polygon {i}"))),
            Err(e) => t.error(format!("polygon {i}: {e}")),
        }
    }
    t.finish(3, start, "")
}

fn c4(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
    let mut t = Tally::new(Z_MAX);
    let ss = [0.3, 0.5, 0.7];
    for (n, count, rel) in [(2, scale.count(100), 1e-6), (3, scale.count(30), 0.05)] {
        for i in 0..count {
            let s = ss[i % 3];
            let k = Kernel::fractional(n, s).unwrap();
            let (a, b) = random_nested(&mut rng, n);
            let mut sp = spec(rel, seed.wrapping_add(i as u64));
            if n == 3 {
                sp.abs_floor = 0.02;
            }
            match bounds::check_monotonicity(&k, &a, &b, &sp) {
                Ok((d, _)) => t.add(z_excess(0.0, d.value, d.error, d.value), || format!("n = {n} pair {i}")),
                Err(e) => t.error(format!("n = {n} pair {i}: {e}")),
            }
        }
    }
    t.finish(4, start, "")
}

fn c5(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
    let k = Kernel::fractional(2, 0.5).unwrap();
    let sp = spec(1e-6, seed);
    let mut t = Tally::new(Z_MAX);
    let mut i = 0;
    while t.cases < scale.count(30) {
        i += 1;
        let e = random_polygon(&mut rng, v::ZERO, 1.0);
        let cc = [rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7), 0.0];
        let c = random_polygon(&mut rng, cc, 1.0);
        let Ok(ec) = intersect(&e, &c) else { continue };
        if ec.volume() < 1e-3 {
            continue;
        }
        let run = || -> Result<f64> {
            let p = engine::perimeter(&k, &e, &sp)?;
            let q = engine::perimeter(&k, &ec, &sp)?;
            Ok(z_excess(q.value, p.value, sig(&[&p, &q]), p.value))
        };
        match run() {
            Ok(z) => t.add(z, || format!("pair {i}")),
            Err(err) => t.error(format!("pair {i}: {err}")),
        }
    }
    t.finish(5, start, "")
}

pub const SYM_NODES: usize = 512;

fn c6(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
    let k = Kernel::fractional(2, 0.5).unwrap();
    let sp = spec(1e-3, seed);
    let nu = [0.0, 1.0, 0.0];
    let mut ineq = Tally::new(Z_MAX);
    let mut vol = Tally::new(SYM_VOLUME_REL);
    for i in 0..scale.count(30) {
        let e = random_polygon(&mut rng, v::ZERO, 1.0);
        let fc = [rng.random_range(-0.5..0.5), 0.0, 0.0];
        let f = random_polygon(&mut rng, fc, 0.8);
        let e = e.translated(&[0.0, -v::dot(&nu, &[0.0, e.bbox().1[1], 0.0]) - 0.05, 0.0]).unwrap();
        let f = f.translated(&[0.0, -f.bbox().0[1] + 0.05, 0.0]).unwrap();
        let run = |ineq: &mut Tally, vol: &mut Tally| -> Result<()> {
            let es = symmetry::symmetrize(&e, &nu, SYM_NODES)?;
            let fs = symmetry::symmetrize(&f, &nu, SYM_NODES)?;
            vol.add((es.volume() / e.volume() - 1.0).abs(), || format!("volume {i}"));
            vol.add((fs.volume() / f.volume() - 1.0).abs(), || format!("volume {i}"));
            let (esb, fsb) = (ConvexBody::profile(es)?, ConvexBody::profile(fs)?);
            let p = engine::perimeter(&k, &e, &sp)?;
            let ps = engine::perimeter(&k, &esb, &sp)?;
            ineq.add(z_excess(ps.value, p.value, sig(&[&p, &ps]), p.value), || format!("perimeter {i}"));
            let l = engine::interaction(&k, &e, &f, &sp)?;
            let ls = engine::interaction(&k, &esb, &fsb, &sp)?;
            ineq.add(z_excess(l.value, ls.value, sig(&[&l, &ls]), ls.value), || format!("interaction {i}"));
            Ok(())
        };
        if let Err(err) = run(&mut ineq, &mut vol) {
            ineq.error(format!("instance {i}: {err}"));
        }
    }
    let (vw, vt) = (vol.worst, vol.failures);
    ineq.cases += vol.cases;
    ineq.failures += vt;
    ineq.notes.extend(vol.notes);
    ineq.finish(6, start, &format!("worst volume error {vw:.2e}"))
}

fn c7(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
    let sp = spec(1e-6, seed);
    let mut t = Tally::new(Z_MAX);
    for i in 0..scale.count(100) {
        let s = [0.3, 0.5, 0.7][i % 3];
        let k = Kernel::fractional(2, s).unwrap();
        let rad = rng.random_range(0.2..3.0);
        let e = random_polygon(&mut rng, v::ZERO, rad);
        match engine::perimeter(&k, &e, &sp) {
            Ok(p) => {
                let generic = (0.5 * e.euclidean_perimeter()).max(e.volume()) * k.sigma();
                let sform = bounds::interpolation_sform(s, &e);
                t.add(z_excess(p.value, generic, p.error, p.value), || format!("generic {i}"));
                t.add(z_excess(p.value, sform, p.error, p.value), || format!("fractional {i}"));
            }
            Err(err) => t.error(format!("polygon {i}: {err}")),
        }
    }
    t.finish(7, start, "")
}

fn c8(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 8);
    let k = Kernel::fractional(2, 0.5).unwrap();
    let opts = PipelineOptions { spec: spec(1e-6, seed), ..Default::default() };
    let mut t = Tally::new(Z_MAX);
    let mut positive = [0usize; 3];
    let mut i = 0;
    while t.cases < 5 * scale.count(30) {
        i += 1;
        let (a, b) = random_nested(&mut rng, 2);
        let run = |t: &mut Tally, positive: &mut [usize; 3]| -> Result<()> {
            let r14 = bounds::deficit_report(&k, &a, &b, BoundKind::Cor14, &opts)?;
            let r15 = bounds::deficit_report(&k, &a, &b, BoundKind::Cor15, &opts)?;
            let ro = bounds::deficit_report(&k, &a, &b, BoundKind::Thm13Optimized, &opts)?;
            for (j, r) in [&r15, &r14, &ro].into_iter().enumerate() {
                if r.bound_value > 0.0 {
                    positive[j] += 1;
                }
                let s = (r.lhs.error.powi(2) + r.rhs.error.powi(2) + r.bound_error.powi(2)).sqrt();
                t.add(z_excess(r.lhs.value + r.bound_value, r.rhs.value, s, r.rhs.value), || format!("pair {i} {:?}", r.bound_kind));
            }
            t.add(z_excess(r15.bound_value, r14.bound_value, r14.bound_error, r14.rhs.value), || format!("pair {i} cor15 > cor14"));
            let s = r14.bound_error.hypot(ro.bound_error);
            t.add(z_excess(r14.bound_value, ro.bound_value, s, r14.rhs.value), || format!("pair {i} cor14 > optimized"));
            Ok(())
        };
        if let Err(err) = run(&mut t, &mut positive) {
            t.error(format!("pair {i}: {err}"));
        }
    }
    let extra = format!("{} pairs; positive bounds cor15/cor14/optimized: {}/{}/{}", i, positive[0], positive[1], positive[2]);
    t.finish(8, start, &extra)
}

/// (r, h, w) instances for the optimizer checks.
pub const OPT_CASES: [(f64, f64, f64); 5] = [(1.0, 1.0, 1.0), (1.0, 0.5, 0.6), (0.5, 1.5, 1.0), (1.0, 2.0, 2.5), (0.8, 0.3, 0.4)];

/// Union of M and the cone as one profile along the cone axis.
pub fn witness_union(m: &ProfileBody, cone: &ProfileBody) -> Result<ProfileBody> {
    let mut t: Vec<f64> = m.t_grid.iter().rev().map(|x| -x).collect();
    let mut r: Vec<f64> = m.radii.iter().rev().copied().collect();
    t.pop();
    r.pop();
    t.extend(cone.t_grid.iter());
    r.extend(cone.radii.iter());
    ProfileBody::new(cone.dim, cone.axis, cone.anchor, t, r)
}

fn c9(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let k = Kernel::fractional(2, 0.5).unwrap();
    let sp = spec(1e-6, seed);
    let mut z = Tally::new(Z_MAX);
    let mut rel = Tally::new(0.0);
    let cases = match scale {
        Scale::Full => &OPT_CASES[..],
        Scale::Fast => &OPT_CASES[..2],
    };
    for (i, &(r, h, w)) in cases.iter().enumerate() {
        let run = |z: &mut Tally, rel: &mut Tally| -> Result<()> {
            let p = ProfileProblem::new(&k, r, h, w)?.with_seed(seed);
            let f = optimizer::f_value_for(&p, &sp)?;
            let sol = f.solution.as_ref().expect("solution");
            let fine = optimizer::solve_max(&p.clone().with_nodes(256), &sp)?;
            rel.add((sol.m.value / fine.m.value - 1.0).abs() - MESH_REL, || format!("case {i} mesh"));
            let (trap, _) = optimizer::trapezoid_search(&p, 16, &spec(1e-5, seed))?;
            rel.add((1.0 - TRAPEZOID_SLACK) * trap.value - sol.m.value, || format!("case {i} trapezoid"));
            let pc = f.cone_perimeter;
            z.add(z_excess(sol.m.value, pc.value, sig(&[&sol.m, &pc]), pc.value), || format!("case {i} m > P(C)"));
            let raw = pc.minus(&sol.m.scaled(2.0));
            z.add(z_excess(0.0, raw.value, raw.error, pc.value), || format!("case {i} f < 0"));
            let cone = p.cone()?;
            let union = ConvexBody::profile(witness_union(&sol.profile, &cone)?)?;
            let pu = engine::perimeter(&k, &union, &sp)?;
            let pm = engine::perimeter(&k, &ConvexBody::profile(sol.profile.clone())?, &sp)?;
            let gap = (pu.value - pm.value - raw.value).abs();
            z.add(gap / sig(&[&pu, &pm, &raw]).max(SIGMA_FLOOR * pu.value), || format!("case {i} witness"));
            Ok(())
        };
        if let Err(err) = run(&mut z, &mut rel) {
            z.error(format!("case {i}: {err}"));
        }
    }
    let rel_worst = rel.worst;
    let rel_fail = rel.failures;
    let extra = format!("worst mesh/trapezoid margin {rel_worst:.3e}");
    z.cases += rel.cases;
    z.failures += rel_fail;
    z.notes.extend(rel.notes);
    z.finish(9, start, &extra)
}

fn c10(scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 10);
    let k = Kernel::fractional(2, 0.5).unwrap();
    let sp = spec(1e-6, seed);
    let mut cross = Tally::new(ORACLE_REL);
    for i in 0..scale.count(10) {
        let e = random_polygon(&mut rng, v::ZERO, 1.0);
        let run = || -> Result<f64> {
            let o = oracle::perimeter_estimate(&k, &e, ORACLE_RES)?;
            let p = engine::perimeter(&k, &e, &sp)?;
            Ok((o.value / p.value - 1.0).abs())
        };
        match run() {
            Ok(x) => cross.add(x, || format!("polygon {i}")),
            Err(err) => cross.error(format!("polygon {i}: {err}")),
        }
    }
    let mut minimal = Tally::new(MINIMALITY_SLACK);
    let mut run = |minimal: &mut Tally| -> Result<()> {
        let ball = ConvexBody::ball(2, v::ZERO, 1.0)?;
        let grid = Grid::new(2, [-1.5, -1.5, 0.0], 3.0 / 24.0, [24, 24, 1])?;
        let hs = HalfSpace::new([0.0, 1.0, 0.0], 0.0)?;
        let base = VoxelSet::from_halfspace(&hs, &grid);
        let ph = oracle::relative_perimeter_in_body(&k, &base, &ball)?.value;
        for j in 0..scale.count(50) {
            let comp = competitor(&mut rng, &base, &ball, j);
            let pe = oracle::relative_perimeter_in_body(&k, &comp, &ball)?.value;
            minimal.add((ph - pe) / pe, || format!("competitor {j}"));
        }
        Ok(())
    };
    if let Err(err) = run(&mut minimal) {
        minimal.error(format!("minimality: {err}"));
    }
    let extra = format!("worst oracle gap {:.3}, worst minimality deficit {:.3}", cross.worst, minimal.worst);
    let mw = minimal.worst;
    cross.cases += minimal.cases;
    cross.failures += minimal.failures;
    cross.notes.extend(minimal.notes);
    let mut r = cross.finish(10, start, &extra);
    r.worst = r.worst.max(mw);
    r
}

/// The half-space modified inside the ball: a tilted cut, a bump, a dent,
/// or scattered flipped cells.
fn competitor(rng: &mut ChaCha8Rng, base: &VoxelSet, ball: &ConvexBody, j: usize) -> VoxelSet {
    let mut out = base.clone();
    let g = base.grid;
    let inside = |x: &Vector| ball.contains_point(x, 0.0);
    match j % 4 {
        0 => {
            let u = v::normalize(&[rng.random_range(-0.5..0.5), 1.0, 0.0]).unwrap();
            let off = rng.random_range(-0.3..0.3);
            for i in 0..g.len() {
                let x = g.center(i);
                if inside(&x) {
                    out.cells[i] = v::dot(&u, &x) <= off;
                }
            }
        }
        1 | 2 => {
            let c = [rng.random_range(-0.5..0.5), rng.random_range(-0.3..0.3), 0.0];
            let rad = rng.random_range(0.1..0.4);
            for i in 0..g.len() {
                let x = g.center(i);
                if inside(&x) && v::dist(&x, &c) <= rad {
                    out.cells[i] = j % 4 == 1;
                }
            }
        }
        _ => {
            for i in 0..g.len() {
                let x = g.center(i);
                if inside(&x) && x[1].abs() < 0.3 && rng.random_bool(0.1) {
                    out.cells[i] = !out.cells[i];
                }
            }
        }
    }
    out
}

fn c11(_scale: Scale, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 11);
    let e3 = random_polytope3(&mut rng, 1.0);
    let (a, b) = random_nested(&mut rng, 2);
    let k3 = Kernel::fractional(3, 0.5).unwrap();
    let k2 = Kernel::fractional(2, 0.5).unwrap();
    let job = || -> Result<String> {
        let p = engine::perimeter(&k3, &e3, &spec(2e-2, seed))?;
        let d = engine::deficit(&k2, &a, &b, &spec(2e-2, seed).with_backend(Backend::Montecarlo))?;
        let r = bounds::deficit_report(&k2, &a, &b, BoundKind::Cor14, &PipelineOptions { spec: spec(1e-6, seed), ..Default::default() })?;
        Ok(format!("{}\n{}\n{}", report::to_json(&p)?, report::to_json(&d)?, report::to_json(&r)?))
    };
    let mut outputs = Vec::new();
    for workers in [1usize, 4, 8, 1] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build();
        match pool {
            Ok(pool) => match pool.install(job) {
                Ok(s) => outputs.push((workers, s)),
                Err(err) => t.error(format!("{workers} workers: {err}")),
            },
            Err(err) => t.error(format!("pool: {err}")),
        }
    }
    if let Some((_, first)) = outputs.first() {
        for (w, o) in &outputs[1..] {
            t.add(if o == first { 0.0 } else { 1.0 }, || format!("{w} workers differ"));
        }
    }
    t.finish(11, start, "")
}

pub fn run_criterion(id: u8, scale: Scale, seed: u64) -> CriterionResult {
    match id {
        1 => c1(scale, seed),
        2 => c2(scale, seed),
        3 => c3(scale, seed),
        4 => c4(scale, seed),
        5 => c5(scale, seed),
        6 => c6(scale, seed),
        7 => c7(scale, seed),
        8 => c8(scale, seed),
        9 => c9(scale, seed),
        10 => c10(scale, seed),
        11 => c11(scale, seed),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_all(scale: Scale, seed: u64) -> Vec<CriterionResult> {
    (1..=11).map(|i| run_criterion(i, scale, seed)).collect()
}

pub fn summary_line(r: &CriterionResult) -> String {
    format!(
        "criterion {:>2} {:<36} {} cases={} failures={} worst={:.3e} threshold={:.1e} time={:.1}s{}",
        r.id,
        r.name,
        if r.passed { "PASS" } else { "FAIL" },
        r.cases,
        r.failures,
        r.worst,
        r.threshold,
        r.seconds,
        if r.detail.is_empty() { String::new() } else { format!(" [{}]", r.detail) }
    )
}
