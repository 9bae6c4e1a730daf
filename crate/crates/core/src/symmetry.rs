//! Schwartz symmetrization onto profile bodies.

use crate::consts::unit_ball_volume;
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
pub use crate::geometry::ProfileBody;
use crate::vector::{self as v, Vector};

pub const MIN_NODES: usize = 16;

/// Output of [`symmetrize_with_report`].
#[derive(Debug, Clone)]
pub struct Symmetrized {
    pub profile: ProfileBody,
    /// Largest change made by the concave regression pass.
    pub adjustment: f64,
}

pub fn symmetrize(body: &ConvexBody, nu: &Vector, nodes: usize) -> Result<ProfileBody> {
    symmetrize_with_report(body, nu, nodes).map(|s| s.profile)
}

/// Symmetrize with the t = 0 plane at `start` (an axial coordinate x . nu)
/// and t increasing along `dir` = +1 or -1 times nu.
pub fn symmetrize_from(body: &ConvexBody, nu: &Vector, nodes: usize, start: f64, dir: f64) -> Result<Symmetrized> {
    let n = body.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if nodes < MIN_NODES {
        return Err(Error::InvalidArgument(format!("symmetrization needs at least {MIN_NODES} nodes, got {nodes}")));
    }
    let nu = v::normalize(nu).ok_or_else(|| Error::InvalidArgument("zero symmetrization axis".into()))?;
    let axis = v::scale(&nu, dir.signum());
    let (lo, hi) = body.extent(&nu);
    let (t_a, t_b) = if dir > 0.0 { (lo - start, hi - start) } else { (start - hi, start - lo) };
    let w = unit_ball_volume(n - 1);
    let m = nodes - 1;
    let step = (t_b - t_a) / m as f64;
    let t_grid: Vec<f64> = (0..nodes).map(|i| if i == m { t_b } else { t_a + step * i as f64 }).collect();
    let raw: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            let x = start + dir.signum() * t;
            let a = body.slice(&nu, x).max(0.0) / w;
            if n == 2 {
                a
            } else {
                a.sqrt()
            }
        })
        .collect();
    let radii = concave_fit(&t_grid, &raw);
    let adjustment = raw.iter().zip(&radii).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let scale = radii.iter().copied().fold(0.0, f64::max);
    if adjustment > 1e-3 * scale {
        log::warn!("concave regression moved a radius by {adjustment:.3e} (max radius {scale:.3e})");
    }
    let profile = ProfileBody::new(n, axis, v::scale(&nu, start), t_grid, radii)?;
    Ok(Symmetrized { profile, adjustment })
}

pub fn symmetrize_with_report(body: &ConvexBody, nu: &Vector, nodes: usize) -> Result<Symmetrized> {
    let nu = v::normalize(nu).ok_or_else(|| Error::InvalidArgument("zero symmetrization axis".into()))?;
    let (lo, _) = body.extent(&nu);
    symmetrize_from(body, &nu, nodes, lo, 1.0)
}

pub fn profile_volume(p: &ProfileBody) -> f64 {
    p.volume()
}

pub fn profile_extent(p: &ProfileBody) -> f64 {
    p.extent()
}

/// Closest concave sequence, by pooling adjacent slope violators and
/// re-levelling to the original mean.
fn concave_fit(t: &[f64], r: &[f64]) -> Vec<f64> {
    let scale = r.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if defect(t, r) <= 1e-12 * scale {
        return r.to_vec();
    }
    // blocks of (slope sum weighted by width, width, count)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::new();
    for i in 1..t.len() {
        let h = t[i] - t[i - 1];
        blocks.push((r[i] - r[i - 1], h, 1));
        while blocks.len() > 1 {
            let k = blocks.len();
            let (a, b) = (blocks[k - 2], blocks[k - 1]);
            if b.0 / b.1 > a.0 / a.1 {
                blocks.pop();
                blocks[k - 2] = (a.0 + b.0, a.1 + b.1, a.2 + b.2);
            } else {
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(t.len());
    out.push(r[0]);
    let mut i = 1;
    for (rise, width, count) in blocks {
        let slope = rise / width;
        for _ in 0..count {
            let prev = out[i - 1];
            out.push(prev + slope * (t[i] - t[i - 1]));
            i += 1;
        }
    }
    let shift = r.iter().zip(&out).map(|(a, b)| a - b).sum::<f64>() / r.len() as f64;
    let low = out.iter().map(|x| x + shift).fold(f64::INFINITY, f64::min);
    let shift = if low < 0.0 { shift - low } else { shift };
    out.iter().map(|x| x + shift).collect()
}

fn defect(t: &[f64], r: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 1..t.len().saturating_sub(1) {
        let s0 = (r[i] - r[i - 1]) / (t[i] - t[i - 1]);
        let s1 = (r[i + 1] - r[i]) / (t[i + 1] - t[i]);
        worst = worst.max((s1 - s0) * (t[i] - t[i - 1]).min(t[i + 1] - t[i]));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::HalfSpace;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn polygon(seed: u64, k: usize) -> ConvexBody {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Vector> = (0..k).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 0.0]).collect();
        ConvexBody::from_points(2, &pts).unwrap()
    }

    #[test]
    fn ball_is_its_own_symmetral() {
        let b = ConvexBody::ball(3, [0.0; 3], 1.0).unwrap();
        let nu = v::normalize(&[1.0, 2.0, -0.5]).unwrap();
        let p = symmetrize(&b, &nu, 64).unwrap();
        for (t, r) in p.t_grid.iter().zip(&p.radii) {
            let tau = t - 1.0;
            assert!((r - (1.0 - tau * tau).max(0.0).sqrt()).abs() < 1e-6);
        }
    }

    #[test]
    fn box_has_constant_profile() {
        let b = ConvexBody::cuboid(2, [0.0; 3], [3.0, 2.0, 0.0]).unwrap();
        let p = symmetrize(&b, &[0.0, 1.0, 0.0], 32).unwrap();
        assert!((p.extent() - 2.0).abs() < 1e-12);
        assert!(p.radii.iter().all(|r| (r - 1.5).abs() < 1e-12), "{:?}", p.radii);
    }

    #[test]
    fn polygon_volume_at_512_nodes() {
        for seed in 0..5 {
            let e = polygon(seed, 7);
            let p = symmetrize(&e, &[0.6, 0.8, 0.0], 512).unwrap();
            assert!((p.volume() / e.volume() - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn idempotent() {
        let e = polygon(11, 9);
        let p = symmetrize(&e, &[1.0, 0.0, 0.0], 128).unwrap();
        let q = symmetrize(&ConvexBody::profile(p.clone()).unwrap(), &[1.0, 0.0, 0.0], 128).unwrap();
        for (a, b) in p.radii.iter().zip(&q.radii) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn half_space_is_preserved() {
        let e = polygon(3, 6);
        let h = HalfSpace::new([0.0, 1.0, 0.0], 0.2).unwrap();
        let e = crate::geometry::intersect_halfspace(&e, &h).unwrap();
        let p = symmetrize(&e, &[0.0, 1.0, 0.0], 64).unwrap();
        let top = v::dot(&p.anchor, &p.axis) + p.t_grid[p.t_grid.len() - 1];
        assert!(top <= 0.2 + 1e-12);
    }

    #[test]
    fn regression_repairs_noise() {
        let t: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let r: Vec<f64> = t.iter().enumerate().map(|(i, x)| x * (1.0 - x) + if i == 7 { 1e-3 } else { 0.0 }).collect();
        let f = concave_fit(&t, &r);
        assert!(defect(&t, &f) <= 1e-12);
        assert!(r.iter().zip(&f).all(|(a, b)| (a - b).abs() < 2e-3));
    }

    #[test]
    fn rejects_coarse_grids() {
        assert!(symmetrize(&polygon(1, 5), &[1.0, 0.0, 0.0], 8).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn volume_is_preserved(seed in 0u64..10_000, axis in 0usize..3) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Vector> = (0..8).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
            let e = ConvexBody::from_points(3, &pts).unwrap();
            let mut nu = [0.0; 3];
            nu[axis] = 1.0;
            let p = symmetrize(&e, &nu, 256).unwrap();
            prop_assert!((p.volume() / e.volume() - 1.0).abs() < 1e-3);
        }
    }
}
