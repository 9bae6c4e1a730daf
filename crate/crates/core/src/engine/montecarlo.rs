//! Stratified Monte-Carlo over lines and directions.
//!
//! Lines are drawn as a uniform direction theta and a uniform offset z in
//! the disc of radius R orthogonal to theta around a ball containing the
//! relevant sets. Every per-line quantity is exact (chord primitives), so
//! the only randomness is in the choice of line.
//!
//! Sample j of stratum h reads its uniforms from a ChaCha8 stream selected
//! by h, positioned at j. Strata are summed independently and reduced in
//! stratum order, which makes results independent of the worker count.

use super::lines::{pair, relative_line, Interval};
use super::{AccuracySpec, Estimate, Method, RelSet};
use crate::consts::{unit_ball_volume, unit_sphere_area};
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::kernels::Kernel;
use crate::vector::{self as v, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

const WORDS_PER_SAMPLE: u128 = 8;
const START: u64 = 4;

#[derive(Clone, Copy, Default)]
struct Acc {
    n: u64,
    sum: f64,
    sq: f64,
}

/// Stratified sampler over [0,1]^4 with `k` cells along each of the first
/// `strat` coordinates.
struct Sampler {
    seed: u64,
    k: usize,
    strat: usize,
}

impl Sampler {
    fn strata(&self) -> usize {
        self.k.pow(self.strat as u32)
    }

    fn point(&self, h: usize, j: u64) -> [f64; 4] {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(h as u64);
        rng.set_word_pos(j as u128 * WORDS_PER_SAMPLE);
        let mut u: [f64; 4] = [rng.random(), rng.random(), rng.random(), rng.random()];
        let mut idx = h;
        for d in u.iter_mut().take(self.strat) {
            let cell = idx % self.k;
            idx /= self.k;
            *d = (cell as f64 + *d) / self.k as f64;
        }
        u
    }

    /// Mean of `measure * f(u)` over [0,1]^4 to the requested accuracy.
    fn run<F>(&self, measure: f64, f: F, spec: &AccuracySpec) -> Result<Estimate>
    where
        F: Fn(&[f64; 4]) -> Result<f64> + Sync,
    {
        let kk = self.strata();
        let mut acc = vec![Acc::default(); kk];
        let mut m = START;
        let mut done = 0u64;
        loop {
            let fresh: Vec<Result<Acc>> = (0..kk)
                .into_par_iter()
                .map(|h| {
                    let mut a = Acc::default();
                    for j in done..m {
                        let y = f(&self.point(h, j))?;
                        a.n += 1;
                        a.sum += y;
                        a.sq += y * y;
                    }
                    Ok(a)
                })
                .collect();
            for (a, r) in acc.iter_mut().zip(fresh) {
                let r = r?;
                a.n += r.n;
                a.sum += r.sum;
                a.sq += r.sq;
            }
            done = m;
            let w = measure / kk as f64;
            let mut mean = 0.0;
            let mut var = 0.0;
            for a in &acc {
                let n = a.n as f64;
                let mu = a.sum / n;
                let s2 = ((a.sq - n * mu * mu) / (n - 1.0)).max(0.0);
                mean += w * mu;
                var += w * w * s2 / n;
            }
            let se = var.sqrt();
            let total = done * kk as u64;
            if !mean.is_finite() {
                return Err(Error::DivergentKernel("sampled integrand is not finite".into()));
            }
            if se <= spec.target(mean) {
                return Ok(Estimate { value: mean, error: se, method: Method::Montecarlo, seed: Some(spec.seed), nodes: total });
            }
            if 2 * total > spec.max_samples {
                return Err(Error::BudgetExceeded { requested: spec.target(mean), achieved: se, samples: total });
            }
            m *= 2;
        }
    }
}

fn strata_k(n: usize) -> (usize, usize) {
    match n {
        2 => (16, 2),
        3 => (8, 3),
        _ => (1, 0),
    }
}

/// A line through the ball (c, r) from uniforms; returns (point, direction).
fn line(n: usize, c: &Vector, r: f64, u: &[f64; 4]) -> (Vector, Vector) {
    match n {
        2 => {
            let a = PI * 2.0 * u[0];
            let d = [a.cos(), a.sin(), 0.0];
            let e = [-d[1], d[0], 0.0];
            (v::axpy(c, r * (2.0 * u[1] - 1.0), &e), d)
        }
        _ => {
            let ct = 2.0 * u[0] - 1.0;
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            let ph = 2.0 * PI * u[1];
            let d = [st * ph.cos(), st * ph.sin(), ct];
            let basis = v::orthonormal_complement(&d, 3);
            let rho = r * u[2].sqrt();
            let psi = 2.0 * PI * u[3];
            let off = v::add(&v::scale(&basis[0], rho * psi.cos()), &v::scale(&basis[1], rho * psi.sin()));
            (v::add(c, &off), d)
        }
    }
}

/// Measure of the line space through a ball of radius r.
fn line_measure(n: usize, r: f64) -> f64 {
    unit_sphere_area(n) * unit_ball_volume(n - 1) * r.powi(n as i32 - 1)
}

fn check_dim(e: &ConvexBody) -> Result<usize> {
    match e.dim() {
        2 | 3 => Ok(e.dim()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn chord(b: &ConvexBody, p: &Vector, d: &Vector) -> Option<Interval> {
    b.chord(p, d).map(|(lo, hi)| Interval::new(lo, hi)).filter(|i| !i.is_empty())
}

fn sampler(n: usize, spec: &AccuracySpec) -> Sampler {
    let (k, strat) = strata_k(n);
    Sampler { seed: spec.seed, k, strat }
}

/// Smallest ball containing both balls.
fn enclosing(a: (Vector, f64), b: (Vector, f64)) -> (Vector, f64) {
    let d = v::dist(&a.0, &b.0);
    if d + b.1 <= a.1 {
        return a;
    }
    if d + a.1 <= b.1 {
        return b;
    }
    let r = 0.5 * (d + a.1 + b.1);
    let dir = v::scale(&v::sub(&b.0, &a.0), 1.0 / d);
    (v::axpy(&a.0, r - a.1, &dir), r)
}

pub fn perimeter(kernel: &Kernel, e: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    let n = check_dim(e)?;
    let (c, r) = e.bounding_ball();
    let f = |u: &[f64; 4]| {
        let (p, d) = line(n, &c, r, u);
        Ok(chord(e, &p, &d).map_or(0.0, |i| kernel.chord_g(i.len(), &d)))
    };
    sampler(n, spec).run(line_measure(n, r), f, spec)
}

pub fn interaction(kernel: &Kernel, e: &ConvexBody, f: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    let n = check_dim(e)?;
    let (be, bf) = (e.bounding_ball(), f.bounding_ball());
    let (c, r) = if be.1 <= bf.1 { be } else { bf };
    let g = |u: &[f64; 4]| {
        let (p, d) = line(n, &c, r, u);
        let (Some(i), Some(j)) = (chord(e, &p, &d), chord(f, &p, &d)) else { return Ok(0.0) };
        pair(kernel, &d, &i, &j).map(|x| 0.5 * x).ok_or_else(|| Error::DivergentKernel("bodies overlap on a set of positive measure".into()))
    };
    sampler(n, spec).run(line_measure(n, r), g, spec)
}

/// P(B) - P(A) with shared lines; every sample is non-negative when A is inside B.
pub fn deficit(kernel: &Kernel, a: &ConvexBody, b: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    let n = check_dim(b)?;
    let (c, r) = enclosing(a.bounding_ball(), b.bounding_ball());
    let g = |u: &[f64; 4]| {
        let (p, d) = line(n, &c, r, u);
        let lb = chord(b, &p, &d).map_or(0.0, |i| kernel.chord_g(i.len(), &d));
        let la = chord(a, &p, &d).map_or(0.0, |i| kernel.chord_g(i.len(), &d));
        Ok(lb - la)
    };
    sampler(n, spec).run(line_measure(n, r), g, spec)
}

pub fn relative_perimeter(kernel: &Kernel, e: &RelSet, a: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    let n = check_dim(a)?;
    let (c, r) = a.bounding_ball();
    let g = |u: &[f64; 4]| {
        let (p, d) = line(n, &c, r, u);
        let ia = chord(a, &p, &d);
        let ie = match e {
            RelSet::Body(b) => chord(b, &p, &d),
            RelSet::HalfSpace(hs) => {
                // normal . (p + t d) <= offset
                let nd = v::dot(&hs.normal, &d);
                let q = hs.offset - v::dot(&hs.normal, &p);
                if nd > 0.0 {
                    Some(Interval::new(f64::NEG_INFINITY, q / nd))
                } else if nd < 0.0 {
                    Some(Interval::new(q / nd, f64::INFINITY))
                } else if q >= 0.0 {
                    Some(Interval::new(f64::NEG_INFINITY, f64::INFINITY))
                } else {
                    None
                }
            }
            RelSet::Voxels(_) => return Err(Error::Unsupported("voxel sets are evaluated by the oracle".into())),
        };
        Ok(relative_line(kernel, &d, ie, ia))
    };
    sampler(n, spec).run(line_measure(n, r), g, spec)
}

/// g_C(x) = int over directions of T(entry) - T(exit) along rays from x.
pub fn potential(kernel: &Kernel, c: &ConvexBody, x: &Vector, spec: &AccuracySpec) -> Result<Estimate> {
    let n = check_dim(c)?;
    let (center, r) = c.bounding_ball();
    let to = v::sub(&center, x);
    let dist = v::norm(&to);
    // directions confined to the cap seen from x, or the whole sphere
    let (axis, cos_a) = if dist > r * (1.0 + 1e-12) { (v::scale(&to, 1.0 / dist), (1.0 - (r / dist).powi(2)).sqrt()) } else { ([0.0, 0.0, 1.0], -1.0) };
    let inside = c.excess(x) <= 0.0;
    if inside && kernel.radial_tail(0.0, &axis).is_infinite() {
        return Err(Error::SingularEvaluation("the kernel is not integrable at a point of the body".into()));
    }
    let (measure, basis) = match n {
        2 => (2.0 * cos_a.acos(), vec![[-axis[1], axis[0], 0.0]]),
        _ => (2.0 * PI * (1.0 - cos_a), v::orthonormal_complement(&axis, 3)),
    };
    let g = |u: &[f64; 4]| {
        let d = match n {
            2 => {
                let a = (2.0 * u[0] - 1.0) * cos_a.acos();
                v::add(&v::scale(&axis, a.cos()), &v::scale(&basis[0], a.sin()))
            }
            _ => {
                let ct = 1.0 - u[0] * (1.0 - cos_a);
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                let ph = 2.0 * PI * u[1];
                let w = v::add(&v::scale(&basis[0], st * ph.cos()), &v::scale(&basis[1], st * ph.sin()));
                v::add(&v::scale(&axis, ct), &w)
            }
        };
        Ok(match chord(c, x, &d) {
            Some(i) if i.hi > 0.0 => {
                let t_in = kernel.radial_tail(i.lo.max(0.0), &d);
                t_in - kernel.radial_tail(i.hi, &d)
            }
            _ => 0.0,
        })
    };
    let (k, strat) = if n == 2 { (64, 1) } else { (16, 2) };
    Sampler { seed: spec.seed, k, strat }.run(measure, g, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: f64, a: f64) -> ConvexBody {
        ConvexBody::cuboid(2, [x0, 0.0, 0.0], [x0 + a, a, 0.0]).unwrap()
    }

    #[test]
    fn agrees_with_the_chord_backend() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        let spec = AccuracySpec::default().with_rel_tol(2e-3);
        let mc = perimeter(&k, &square(0.0, 1.0), &spec).unwrap();
        let ch = super::super::chord::perimeter(&k, &square(0.0, 1.0), &spec).unwrap();
        assert!((mc.value - ch.value).abs() < 4.0 * mc.error, "{mc:?} {ch:?}");
        let i = interaction(&k, &square(0.0, 1.0), &square(1.5, 1.0), &spec).unwrap();
        let j = super::super::chord::interaction(&k, &square(0.0, 1.0), &square(1.5, 1.0), &spec).unwrap();
        assert!((i.value - j.value).abs() < 4.0 * i.error, "{i:?} {j:?}");
    }

    #[test]
    fn deterministic_for_a_seed() {
        let k = Kernel::fractional(3, 0.5).unwrap();
        let b = ConvexBody::ball(3, [0.1, 0.0, 0.0], 1.0).unwrap();
        let spec = AccuracySpec::default().with_rel_tol(1e-2);
        let a = perimeter(&k, &b, &spec).unwrap();
        let c = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| perimeter(&k, &b, &spec).unwrap());
        assert_eq!(a.value.to_bits(), c.value.to_bits());
        let other = perimeter(&k, &b, &spec.with_seed(7)).unwrap();
        assert_ne!(a.value.to_bits(), other.value.to_bits());
    }

    #[test]
    fn ball_perimeter_scaling() {
        // P_s(B_r) = r^{n-s} P_s(B_1)
        let k = Kernel::fractional(3, 0.3).unwrap();
        let spec = AccuracySpec::default().with_rel_tol(3e-3);
        let p1 = perimeter(&k, &ConvexBody::ball(3, [0.0; 3], 1.0).unwrap(), &spec).unwrap();
        let p2 = perimeter(&k, &ConvexBody::ball(3, [0.0; 3], 2.0).unwrap(), &spec).unwrap();
        let ratio = p2.value / p1.value;
        let expect = 2f64.powf(2.7);
        assert!((ratio - expect).abs() < 4.0 * expect * (p1.error / p1.value).hypot(p2.error / p2.value));
    }

    #[test]
    fn far_field_potential() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        let c = square(0.0, 1.0);
        let x = [1000.5, 0.5, 0.0];
        let g = potential(&k, &c, &x, &AccuracySpec::default()).unwrap();
        let approx = 1000f64.powf(-2.5);
        assert!((g.value / approx - 1.0).abs() < 0.01, "{g:?}");
        assert!(potential(&k, &c, &[0.5, 0.5, 0.0], &AccuracySpec::default()).is_err());
    }

    #[test]
    fn halfspace_relative_perimeter_is_flat_disc_term() {
        // lines crossing the plane: P(H; B_R) is finite and positive
        let k = Kernel::fractional(2, 0.5).unwrap();
        let hs = crate::geometry::HalfSpace::new([1.0, 0.0, 0.0], 0.0).unwrap();
        let a = ConvexBody::ball(2, [0.0; 3], 1.0).unwrap();
        let p = relative_perimeter(&k, &RelSet::HalfSpace(hs), &a, &AccuracySpec::default().with_rel_tol(1e-2)).unwrap();
        assert!(p.value > 0.0 && p.value.is_finite());
    }
}
