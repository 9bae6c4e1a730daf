//! Monotonicity checks and quantitative lower bounds on perimeter deficits.

use crate::consts::{unit_ball_volume, NESTING_TOL};
use crate::engine::{self, AccuracySpec, Estimate, Method};
use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, intersect_halfspace, nested_excess, BodySpec, ConvexBody, HalfSpace, ProfileBody};
use crate::kernels::Kernel;
use crate::optimizer::{self, FValue, ProfileProblem};
use crate::symmetry;
use crate::vector::{self as v, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// P_K(B) - P_K(A) and whether it clears -3 sigma.
pub fn check_monotonicity(kernel: &Kernel, a: &ConvexBody, b: &ConvexBody, spec: &AccuracySpec) -> Result<(Estimate, bool)> {
    ensure_nested(a, b)?;
    let d = engine::deficit(kernel, a, b, spec)?;
    let pass = d.value >= -3.0 * d.error;
    Ok((d, pass))
}

fn ensure_nested(a: &ConvexBody, b: &ConvexBody) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: a.dim() });
    }
    let excess = nested_excess(a, b);
    if excess > NESTING_TOL * b.bounding_radius().max(1.0) {
        return Err(Error::NotNested { excess });
    }
    Ok(())
}

/// The geometric data behind the cone bounds.
#[derive(Debug, Clone)]
pub struct Construction {
    pub h: f64,
    pub a: Vector,
    pub b: Vector,
    /// Unit vector from a towards b.
    pub nu: Vector,
    pub halfspace: HalfSpace,
    /// B intersected with the half-space.
    pub slab: ConvexBody,
    pub w: f64,
    pub area_base: f64,
    pub r: f64,
    pub perim_slab: f64,
    /// Cone over the disc of radius r at a with apex at height h.
    pub cone: Option<ProfileBody>,
    pub unique: bool,
    pub degenerate: bool,
}

pub fn thm13_construct(a: &ConvexBody, b: &ConvexBody, nu: Option<Vector>) -> Result<Construction> {
    let n = b.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let hd = hausdorff_distance(a, b)?;
    let scale = b.bounding_radius().max(1.0);
    let degenerate_report = |unique: bool| Construction {
        h: 0.0,
        a: hd.a,
        b: hd.b,
        nu: nu.unwrap_or([0.0, 0.0, 0.0]),
        halfspace: HalfSpace { normal: [0.0; 3], offset: 0.0 },
        slab: b.clone(),
        w: b.volume(),
        area_base: 0.0,
        r: 0.0,
        perim_slab: b.euclidean_perimeter(),
        cone: None,
        unique,
        degenerate: true,
    };
    if hd.h <= 1e-12 * scale {
        return Ok(degenerate_report(hd.maximizers <= 1));
    }
    let dir = v::scale(&v::sub(&hd.b, &hd.a), 1.0 / hd.h);
    let nu = match nu {
        None => dir,
        Some(u) => {
            let u = v::normalize(&u).ok_or_else(|| Error::InvalidArgument("zero direction".into()))?;
            let diff = v::sub(&hd.b, &hd.a);
            let defect = v::norm(&v::reject(&diff, &u));
            if defect > 1e-9 * hd.h {
                return Err(Error::MisalignedNu { defect: defect / hd.h });
            }
            if v::dot(&u, &dir) < 0.0 {
                v::scale(&u, -1.0)
            } else {
                u
            }
        }
    };
    let offset = v::dot(&nu, &hd.a);
    let halfspace = HalfSpace { normal: nu, offset };
    if a.support(&nu) > offset + NESTING_TOL * scale {
        return Err(Error::NotNested { excess: a.support(&nu) - offset });
    }
    let slab = intersect_halfspace(b, &halfspace)?;
    let area_base = b.slice(&nu, offset);
    let r = (area_base / unit_ball_volume(n - 1)).powf(1.0 / (n as f64 - 1.0));
    let cone = if r > 0.0 { Some(ProfileBody::new(n, nu, hd.a, vec![0.0, hd.h], vec![r, 0.0])?) } else { None };
    Ok(Construction {
        h: hd.h,
        a: hd.a,
        b: hd.b,
        nu,
        halfspace,
        w: slab.volume(),
        perim_slab: slab.euclidean_perimeter(),
        slab,
        area_base,
        r,
        cone,
        unique: hd.maximizers <= 1,
        degenerate: false,
    })
}

impl Construction {
    /// Schwartz symmetral of the slab about the axis through a, growing
    /// away from the cone.
    pub fn symmetral(&self, nodes: usize) -> Result<ProfileBody> {
        let s = symmetry::symmetrize_from(&self.slab, &self.nu, nodes, self.halfspace.offset, -1.0)?;
        let p = s.profile;
        ProfileBody::new(p.dim, p.axis, self.a, p.t_grid, p.radii)
    }

    fn cone_body(&self) -> Option<ConvexBody> {
        self.cone.clone().and_then(|c| ConvexBody::profile(c).ok())
    }
}

fn zero() -> Estimate {
    Estimate::exact(0.0, Method::Closedform)
}

fn positive_part(e: Estimate) -> Estimate {
    if e.value <= 0.0 {
        Estimate { value: 0.0, error: 0.0, ..e }
    } else {
        e
    }
}

/// (P_phi(cone) - sigma max{P(B n H)/2, |B n H|})^+
pub fn bound_cor14(kernel: &Kernel, c: &Construction, spec: &AccuracySpec) -> Result<Estimate> {
    if !kernel.is_radial() {
        return Err(Error::Unsupported("this bound needs a radial kernel".into()));
    }
    let Some(cone) = c.cone_body() else { return Ok(zero()) };
    let pc = engine::perimeter(kernel, &cone, spec)?;
    let sub = kernel.sigma() * (0.5 * c.perim_slab).max(c.w);
    Ok(positive_part(Estimate { value: pc.value - sub, ..pc }))
}

/// c^iso (omega_{n-1}/n h r^{n-1})^{1-s/n} - 2^{2-s} n omega_n/(s(1-s)) P(B n H)^s |B n H|^{1-s}, positive part.
pub fn bound_cor15(s: f64, c: &Construction, c_iso: f64) -> f64 {
    if c.degenerate || c.r <= 0.0 {
        return 0.0;
    }
    let n = c.halfspace_dim();
    let nf = n as f64;
    let cone_vol = unit_ball_volume(n - 1) / nf * c.h * c.r.powi(n as i32 - 1);
    let first = c_iso * cone_vol.powf(1.0 - s / nf);
    let second = 2f64.powf(2.0 - s) * nf * unit_ball_volume(n) / (s * (1.0 - s)) * c.perim_slab.powf(s) * c.w.powf(1.0 - s);
    (first - second).max(0.0)
}

impl Construction {
    fn halfspace_dim(&self) -> usize {
        self.slab.dim()
    }
}

/// f for the construction, with the symmetrized slab as an extra start.
pub fn bound_thm13(kernel: &Kernel, c: &Construction, nodes: usize, spec: &AccuracySpec) -> Result<FValue> {
    if c.degenerate || c.r <= 0.0 {
        return optimizer::f_value(kernel, 0.0, 0.0, c.w.max(f64::MIN_POSITIVE), spec);
    }
    let mut p = ProfileProblem::new(kernel, c.r, c.h, c.w)?.with_nodes(nodes).with_frame(c.nu, c.a);
    if let Ok(sym) = c.symmetral(512) {
        p = p.with_warm_start(sym);
    }
    optimizer::f_value_for(&p, spec)
}

static ISO: OnceLock<Mutex<HashMap<(usize, u64), f64>>> = OnceLock::new();

/// P_s(B_1) / |B_1|^{(n-s)/n}, computed once per process.
pub fn c_iso(n: usize, s: f64) -> Result<f64> {
    let memo = ISO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(x) = memo.lock().unwrap().get(&(n, s.to_bits())) {
        return Ok(*x);
    }
    let x = compute_c_iso(n, s, 1e-6)?;
    memo.lock().unwrap().insert((n, s.to_bits()), x);
    Ok(x)
}

pub fn compute_c_iso(n: usize, s: f64, rel_tol: f64) -> Result<f64> {
    let k = Kernel::fractional(n, s)?;
    let ball = if n == 1 { ConvexBody::cuboid(1, [-1.0, 0.0, 0.0], [1.0, 0.0, 0.0])? } else { ConvexBody::ball(n, v::ZERO, 1.0)? };
    let p = engine::perimeter(&k, &ball, &AccuracySpec::default().with_rel_tol(rel_tol))?;
    Ok(p.value / unit_ball_volume(n).powf((n as f64 - s) / n as f64))
}

/// Upper bound on P_K(E) by perimeter and volume.
pub fn interpolation_bound(kernel: &Kernel, e: &ConvexBody) -> f64 {
    let per = e.euclidean_perimeter();
    let vol = e.volume();
    let generic = (0.5 * per).max(vol) * kernel.sigma();
    match kernel.fractional_order() {
        Some(s) => generic.min(interpolation_sform(s, e)),
        None => generic,
    }
}

/// 2^{1-s} n omega_n / (s(1-s)) P(E)^s |E|^{1-s}
pub fn interpolation_sform(s: f64, e: &ConvexBody) -> f64 {
    let n = e.dim();
    2f64.powf(1.0 - s) * n as f64 * unit_ball_volume(n) / (s * (1.0 - s)) * e.euclidean_perimeter().powf(s) * e.volume().powf(1.0 - s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop16 {
    pub bound: f64,
    pub c_phi: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

pub const LOG_GRID: usize = 1000;
pub const CONDITION_PAIRS: usize = 20;

/// Sampled check of R^2 phi(Rt) - r^2 phi(rt) >= (psi(R) - psi(r)) phi(t).
pub fn check_two_decreasing(kernel: &Kernel, psi: &dyn Fn(f64) -> f64, seed: u64) -> Result<()> {
    let phi = |x: f64| kernel.phi(x).unwrap_or(f64::NAN);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CONDITION_PAIRS {
        let x: f64 = rng.random_range(-2.0..2.0);
        let y: f64 = rng.random_range(-2.0..2.0);
        let (r, big_r) = (10f64.powf(x.min(y)), 10f64.powf(x.max(y)));
        let rhs = psi(big_r) - psi(r);
        for i in 0..LOG_GRID {
            let t = 10f64.powf(-6.0 + 12.0 * i as f64 / (LOG_GRID - 1) as f64);
            let ratio = (big_r * big_r * phi(big_r * t) - r * r * phi(r * t)) / phi(t);
            let margin = ratio - rhs;
            if !(margin >= -1e-9 * rhs.abs().max(1.0)) {
                return Err(Error::ConditionViolated { r, big_r, t, margin });
            }
        }
    }
    Ok(())
}

fn segment(len: f64) -> Result<ConvexBody> {
    ConvexBody::cuboid(1, v::ZERO, [len, 0.0, 0.0])
}

/// c_phi (psi(|B|) - psi(|A|)) for segments of lengths a_len <= b_len.
pub fn bound_prop16(kernel: &Kernel, psi: &dyn Fn(f64) -> f64, a_len: f64, b_len: f64) -> Result<Prop16> {
    if kernel.dim() != 1 {
        return Err(Error::UnsupportedDimension(kernel.dim()));
    }
    if !(a_len > 0.0 && a_len <= b_len) {
        return Err(Error::NotNested { excess: a_len - b_len });
    }
    check_two_decreasing(kernel, psi, 16)?;
    let spec = AccuracySpec::default();
    let c_phi = engine::perimeter(kernel, &segment(1.0)?, &spec)?.value;
    let bound = c_phi * (psi(b_len) - psi(a_len));
    let lhs = engine::perimeter(kernel, &segment(a_len)?, &spec)?.value;
    let rhs = engine::perimeter(kernel, &segment(b_len)?, &spec)?.value;
    let satisfied = lhs + bound <= rhs + 1e-9 * rhs.abs().max(1.0);
    Ok(Prop16 { bound, c_phi, lhs, rhs, satisfied })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Cor14,
    Cor15,
    Thm13Optimized,
    Prop16,
}

impl std::str::FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cor14" => Ok(BoundKind::Cor14),
            "cor15" => Ok(BoundKind::Cor15),
            "thm13_optimized" | "thm13-optimized" | "optimized" => Ok(BoundKind::Thm13Optimized),
            "prop16" => Ok(BoundKind::Prop16),
            other => Err(Error::InvalidArgument(format!("unknown bound kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub rel_tol: f64,
    pub optimizer_nodes: Option<usize>,
    pub c_iso: Option<f64>,
    pub unique_maximizer: bool,
    pub degenerate: bool,
    pub clamped: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeficitReport {
    pub h: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    #[serde(rename = "H")]
    pub halfspace: HalfSpace,
    pub r: f64,
    pub w: f64,
    pub area_base: f64,
    pub perim_slab: f64,
    pub cone: Option<BodySpec>,
    pub bound_value: f64,
    pub bound_error: f64,
    pub bound_kind: BoundKind,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub satisfied: bool,
    /// rhs - lhs - bound in units of the combined error (infinite when exact).
    pub slack_sigma: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub spec: AccuracySpec,
    pub nu: Option<Vector>,
    pub nodes: usize,
    /// Overrides the in-process c^iso.
    pub c_iso: Option<f64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { spec: AccuracySpec::default(), nu: None, nodes: optimizer::DEFAULT_NODES, c_iso: None }
    }
}

/// Full pipeline: construction, bound, and the check P(A) + bound <= P(B) + 3 sigma.
pub fn deficit_report(kernel: &Kernel, a: &ConvexBody, b: &ConvexBody, kind: BoundKind, opts: &PipelineOptions) -> Result<DeficitReport> {
    ensure_nested(a, b)?;
    let n = b.dim();
    let spec = opts.spec;
    if n == 1 || kind == BoundKind::Prop16 {
        return prop16_report(kernel, a, b, &spec);
    }
    let nu = match (opts.nu, kernel.nu()) {
        (Some(u), _) => Some(u),
        (None, Some(u)) => Some(u),
        _ => None,
    };
    let c = thm13_construct(a, b, nu)?;
    let mut clamped = false;
    let mut iso = None;
    let mut nodes = None;
    let bound = match kind {
        BoundKind::Cor14 => bound_cor14(kernel, &c, &spec)?,
        BoundKind::Cor15 => {
            let s = kernel.fractional_order().ok_or_else(|| Error::Unsupported("this bound needs a fractional kernel".into()))?;
            let ci = match opts.c_iso {
                Some(x) => x,
                None => c_iso(n, s)?,
            };
            iso = Some(ci);
            Estimate::exact(bound_cor15(s, &c, ci), Method::Closedform)
        }
        BoundKind::Thm13Optimized => {
            nodes = Some(opts.nodes);
            let f = bound_thm13(kernel, &c, opts.nodes, &spec)?;
            clamped = f.clamped;
            f.f
        }
        BoundKind::Prop16 => unreachable!(),
    };
    let lhs = engine::perimeter(kernel, a, &spec)?;
    let rhs = engine::perimeter(kernel, b, &spec)?;
    Ok(assemble(&c, kind, bound, lhs, rhs, spec.seed, iso, nodes, clamped))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    c: &Construction,
    kind: BoundKind,
    bound: Estimate,
    lhs: Estimate,
    rhs: Estimate,
    seed: u64,
    iso: Option<f64>,
    nodes: Option<usize>,
    clamped: bool,
) -> DeficitReport {
    let n = c.slab.dim();
    let sigma = (lhs.error.powi(2) + rhs.error.powi(2) + bound.error.powi(2)).sqrt();
    let gap = rhs.value - lhs.value - bound.value;
    let tiny = 1e-12 * rhs.value.abs().max(1.0);
    DeficitReport {
        h: c.h,
        a: c.a[..n].to_vec(),
        b: c.b[..n].to_vec(),
        halfspace: c.halfspace,
        r: c.r,
        w: c.w,
        area_base: c.area_base,
        perim_slab: c.perim_slab,
        cone: c.cone_body().map(|x| BodySpec::describe(&x)),
        bound_value: bound.value,
        bound_error: bound.error,
        bound_kind: kind,
        lhs,
        rhs,
        satisfied: gap >= -3.0 * sigma - tiny,
        slack_sigma: if sigma > 0.0 {
            gap / sigma
        } else if gap >= -tiny {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        },
        provenance: Provenance { seed, rel_tol: 0.0, optimizer_nodes: nodes, c_iso: iso, unique_maximizer: c.unique, degenerate: c.degenerate, clamped },
    }
}

fn prop16_report(kernel: &Kernel, a: &ConvexBody, b: &ConvexBody, spec: &AccuracySpec) -> Result<DeficitReport> {
    if b.dim() != 1 {
        return Err(Error::Unsupported("the segment bound is one-dimensional".into()));
    }
    let s = kernel.fractional_order().ok_or_else(|| Error::Unsupported("the segment bound needs psi; only the fractional default is built in".into()))?;
    let (la, lb) = (a.volume(), b.volume());
    let psi = move |x: f64| x.powf(1.0 - s);
    let p = bound_prop16(kernel, &psi, la, lb)?;
    let (alo, ahi) = a.bbox();
    let (blo, bhi) = b.bbox();
    let h = (alo[0] - blo[0]).max(bhi[0] - ahi[0]).max(0.0);
    let c = Construction {
        h,
        a: v::ZERO,
        b: v::ZERO,
        nu: [1.0, 0.0, 0.0],
        halfspace: HalfSpace { normal: [1.0, 0.0, 0.0], offset: 0.0 },
        slab: b.clone(),
        w: lb,
        area_base: 1.0,
        r: 0.0,
        perim_slab: 2.0,
        cone: None,
        unique: true,
        degenerate: h == 0.0,
    };
    let lhs = Estimate::exact(p.lhs, Method::Closedform);
    let rhs = Estimate::exact(p.rhs, Method::Closedform);
    let mut rep = assemble(&c, BoundKind::Prop16, Estimate::exact(p.bound, Method::Closedform), lhs, rhs, spec.seed, None, None, false);
    rep.satisfied = p.satisfied;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: f64, b: f64) -> ConvexBody {
        ConvexBody::cuboid(1, [a, 0.0, 0.0], [b, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn one_dimensional_deficit_is_exact() {
        let k = Kernel::fractional(1, 0.5).unwrap();
        let (d, pass) = check_monotonicity(&k, &seg(0.0, 1.0), &seg(0.0, 2.0), &AccuracySpec::default()).unwrap();
        assert!(pass);
        assert!((d.value - 8.0 * (2f64.sqrt() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn segment_bound_is_an_equality_for_the_fractional_psi() {
        let s = 0.5;
        let k = Kernel::fractional(1, s).unwrap();
        let p = bound_prop16(&k, &|x: f64| x.powf(1.0 - s), 1.0, 2.0).unwrap();
        assert!((p.bound - 8.0 * (2f64.sqrt() - 1.0)).abs() < 1e-9);
        assert!((p.lhs + p.bound - p.rhs).abs() < 1e-9);
        assert!(p.satisfied);
        assert_eq!(bound_prop16(&k, &|_| 0.0, 1.0, 2.0).unwrap().bound, 0.0);
        assert_eq!(bound_prop16(&k, &|x: f64| x.sqrt(), 1.5, 1.5).unwrap().bound, 0.0);
    }

    #[test]
    fn condition_violation_is_reported() {
        let k = Kernel::fractional(1, 0.5).unwrap();
        let err = bound_prop16(&k, &|x: f64| 3.0 * x, 1.0, 2.0).unwrap_err();
        assert!(matches!(err, Error::ConditionViolated { .. }));
    }

    #[test]
    fn interpolation_examples() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        let sq = ConvexBody::cuboid(2, v::ZERO, [1.0, 1.0, 0.0]).unwrap();
        let b = interpolation_sform(0.5, &sq);
        assert!((b - 16.0 * 2f64.sqrt() * std::f64::consts::PI).abs() < 1e-9 * b);
        assert!(interpolation_bound(&k, &sq) <= b);
        assert!((interpolation_sform(0.5, &seg(0.0, 1.0)) - 16.0).abs() < 1e-12);
        let big = sq.scaled(3.0).unwrap();
        assert!((interpolation_sform(0.5, &big) / b - 3f64.powf(1.5)).abs() < 1e-9);
    }

    #[test]
    fn hull_of_ball_and_point() {
        let ball = ConvexBody::ball(2, v::ZERO, 1.0).unwrap();
        let m = 2048;
        let grow = 1.0 / (std::f64::consts::PI / m as f64).cos();
        let mut pts: Vec<Vector> = ball.extreme_points(m).iter().map(|p| v::scale(p, grow)).collect();
        pts.push([2.0, 0.0, 0.0]);
        let b = ConvexBody::from_points(2, &pts).unwrap();
        let c = thm13_construct(&ball, &b, None).unwrap();
        assert!((c.h - 1.0).abs() < 1e-6);
        assert!((c.b[0] - 2.0).abs() < 1e-12 && (c.a[0] - 1.0).abs() < 1e-6);
        assert!((c.nu[0] - 1.0).abs() < 1e-6 && (c.halfspace.offset - 1.0).abs() < 1e-6);
    }

    #[test]
    fn equal_bodies_are_degenerate() {
        let sq = ConvexBody::cuboid(2, v::ZERO, [1.0, 1.0, 0.0]).unwrap();
        let c = thm13_construct(&sq, &sq, None).unwrap();
        assert!(c.degenerate && c.cone.is_none());
        assert_eq!(bound_cor15(0.5, &c, 10.0), 0.0);
        let k = Kernel::fractional(2, 0.5).unwrap();
        assert_eq!(bound_cor14(&k, &c, &AccuracySpec::default()).unwrap().value, 0.0);
    }

    #[test]
    fn triangle_slab_recovers_the_base() {
        let b = ConvexBody::from_points(2, &[[-0.7, 0.0, 0.0], [0.7, 0.0, 0.0], [0.0, 1.5, 0.0]]).unwrap();
        let a = crate::geometry::intersect_halfspace(&b, &HalfSpace::new([0.0, 1.0, 0.0], 1e-3).unwrap()).unwrap();
        let c = thm13_construct(&a, &b, None).unwrap();
        assert!((c.r - 0.7 * (1.0 - 1e-3 / 1.5)).abs() < 1e-9, "{}", c.r);
    }

    #[test]
    fn misaligned_direction_is_rejected() {
        let sq = ConvexBody::cuboid(2, v::ZERO, [2.0, 1.0, 0.0]).unwrap();
        let half = ConvexBody::cuboid(2, v::ZERO, [1.0, 1.0, 0.0]).unwrap();
        let err = thm13_construct(&half, &sq, Some([0.0, 1.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::MisalignedNu { .. }));
    }

    #[test]
    fn square_pipeline_bounds() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        let sq = ConvexBody::cuboid(2, v::ZERO, [2.0, 2.0, 0.0]).unwrap();
        let half = ConvexBody::cuboid(2, v::ZERO, [1.0, 2.0, 0.0]).unwrap();
        let opts = PipelineOptions { spec: AccuracySpec::default().with_rel_tol(1e-6), ..Default::default() };
        let r14 = deficit_report(&k, &half, &sq, BoundKind::Cor14, &opts).unwrap();
        assert!(r14.bound_value >= 0.0 && r14.satisfied);
        let r15 = deficit_report(&k, &half, &sq, BoundKind::Cor15, &PipelineOptions { c_iso: Some(20.0), ..opts.clone() }).unwrap();
        assert!(r15.bound_value <= r14.bound_value + 3.0 * r14.bound_error);
    }
}
