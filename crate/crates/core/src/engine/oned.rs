//! Segments on the line.

use super::lines::{pair, Interval};
use super::{Estimate, Method};
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::kernels::{Kernel, KernelForm};
use crate::quad::{adaptive_points, adaptive_semi_infinite};

const E1: [f64; 3] = [1.0, 0.0, 0.0];

fn segment(b: &ConvexBody) -> Interval {
    let (lo, hi) = b.bbox();
    Interval::new(lo[0], hi[0])
}

fn breaks(kernel: &Kernel) -> Vec<f64> {
    match kernel.form() {
        KernelForm::Radial { breaks, .. } => breaks.clone(),
        _ => Vec::new(),
    }
}

fn phi1(kernel: &Kernel, r: f64) -> f64 {
    kernel.k_nu(0.0, r)
}

fn split_points(lo: f64, hi: f64, br: &[f64]) -> Vec<f64> {
    let mut p = vec![lo];
    p.extend(br.iter().copied().filter(|b| *b > lo && *b < hi));
    p.push(hi);
    p
}

/// G(l) = int_0^l r phi(r) dr + l int_l^inf phi(r) dr by adaptive quadrature.
pub fn chord_g_direct(kernel: &Kernel, l: f64) -> (f64, f64) {
    if let Some(s) = kernel.fractional_order() {
        return (l.powf(1.0 - s) / (s * (1.0 - s)), 0.0);
    }
    let br = breaks(kernel);
    let mut f = |r: f64| r * phi1(kernel, r);
    let a = adaptive_points(&mut f, &split_points(0.0, l, &br), 1e-300, 1e-13, 4000);
    let last = br.iter().copied().filter(|b| *b > l).fold(l, f64::max);
    let mut g = |r: f64| phi1(kernel, r);
    let mid = adaptive_points(&mut g, &split_points(l, last, &br), 1e-300, 1e-13, 4000);
    let tail = adaptive_semi_infinite(|r| phi1(kernel, r), last, 1e-300, 1e-13, 4000);
    (a.value + l * (mid.value + tail.value), a.error + l * (mid.error + tail.error))
}

/// F(u) = int_0^u (u - r) phi(r) dr, finite when phi is integrable at 0.
fn second_primitive(kernel: &Kernel, u: f64) -> Result<(f64, f64)> {
    let u = u.abs();
    if u == 0.0 {
        return Ok((0.0, 0.0));
    }
    if kernel.fractional_order().is_some() {
        return Err(Error::DivergentKernel("overlapping segments have infinite interaction".into()));
    }
    let mut f = |r: f64| (u - r) * phi1(kernel, r);
    let q = adaptive_points(&mut f, &split_points(0.0, u, &breaks(kernel)), 1e-300, 1e-12, 4000);
    if !q.value.is_finite() || q.error > 1e-6 * q.value.abs().max(1e-300) {
        return Err(Error::DivergentKernel("kernel is not integrable at the origin".into()));
    }
    Ok((q.value, q.error))
}

/// P((a, b)) = 2 G(b - a).
pub fn perimeter(kernel: &Kernel, e: &ConvexBody) -> Result<Estimate> {
    let seg = segment(e);
    let (g, err) = chord_g_direct(kernel, seg.len());
    let method = if kernel.fractional_order().is_some() { Method::Closedform } else { Method::Slice };
    Ok(Estimate { value: 2.0 * g, error: 2.0 * err + 4.0 * f64::EPSILON * g, method, seed: None, nodes: 0 })
}

pub fn interaction(kernel: &Kernel, e: &ConvexBody, f: &ConvexBody) -> Result<Estimate> {
    let (i, j) = (segment(e), segment(f));
    let method = if kernel.fractional_order().is_some() { Method::Closedform } else { Method::Slice };
    if kernel.fractional_order().is_some() {
        if let Some(v) = pair(kernel, &E1, &i, &j) {
            return Ok(Estimate { value: v, error: 16.0 * f64::EPSILON * v.abs(), method, seed: None, nodes: 0 });
        }
    }
    let (a, b, c, d) = (i.lo, i.hi, j.lo, j.hi);
    let mut value = 0.0;
    let mut error = 0.0;
    for (u, sign) in [(d - a, 1.0), (d - b, -1.0), (c - a, -1.0), (c - b, 1.0)] {
        let (x, e) = second_primitive(kernel, u)?;
        value += sign * x;
        error += e;
    }
    Ok(Estimate { value, error, method, seed: None, nodes: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{apply, graded_rule, Grading};

    fn seg(a: f64, b: f64) -> ConvexBody {
        ConvexBody::cuboid(1, [a, 0.0, 0.0], [b, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn unit_segment_closed_form() {
        for i in 1..10 {
            let s = i as f64 / 10.0;
            let k = Kernel::fractional(1, s).unwrap();
            let p = perimeter(&k, &seg(0.0, 1.0)).unwrap().value;
            assert!((p - 2.0 / (s * (1.0 - s))).abs() < 1e-12 * p);
        }
        let k = Kernel::fractional(1, 0.5).unwrap();
        let p = perimeter(&k, &seg(0.0, 2.0)).unwrap().value;
        assert!((p - 8.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn double_integral_oracle() {
        // int_0^1 [x^{-s} + (1-x)^{-s}] / s dx on a graded rule
        let s = 0.35;
        let r = graded_rule(0.0, 0.5, true, false, &Grading::new(24, 16));
        let half = apply(&r, |x| (x.powf(-s) + (1.0 - x).powf(-s)) / s);
        let k = Kernel::fractional(1, s).unwrap();
        let p = perimeter(&k, &seg(0.0, 1.0)).unwrap().value;
        assert!((2.0 * half - p).abs() < 1e-9 * p);
    }

    #[test]
    fn generic_radial_matches_fractional() {
        let s = 0.5;
        let g = Kernel::radial(1, move |r| r.powf(-1.0 - s), "power").unwrap();
        let p = perimeter(&g, &seg(0.0, 1.0)).unwrap();
        assert!((p.value - 8.0).abs() < 1e-8, "{p:?}");
    }

    #[test]
    fn integrable_kernels_allow_overlap() {
        let k = Kernel::radial_with_breaks(1, std::sync::Arc::new(|r| if r <= 1.0 { 1.0 } else { 0.0 }), vec![1.0], None, "box").unwrap();
        // |{(x, y) in (0,1)^2 : |x - y| <= 1}| = 1
        let v = interaction(&k, &seg(0.0, 1.0), &seg(0.0, 1.0)).unwrap();
        assert!((v.value - 1.0).abs() < 1e-10);
        let fr = Kernel::fractional(1, 0.5).unwrap();
        assert!(interaction(&fr, &seg(0.0, 1.0), &seg(0.5, 2.0)).is_err());
        let far = interaction(&fr, &seg(0.0, 1.0), &seg(3.0, 4.0)).unwrap().value;
        let direct = crate::quad::gl(0.0, 1.0, 20, |x| crate::quad::gl(3.0, 4.0, 20, |y| (y - x).powf(-1.5)));
        assert!((far - direct).abs() < 1e-12);
    }
}
