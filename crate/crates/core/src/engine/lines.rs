//! One-dimensional interval arithmetic along lines.
//!
//! On a line with direction theta the interaction of two disjoint
//! intervals I = [a, b] and F = [c, d] with b <= c is
//! J = G(d-b) - G(d-a) - G(c-b) + G(c-a), where G is the kernel's chord
//! primitive along theta. Half-lines are allowed on the far side.

use crate::kernels::Kernel;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let i = Interval::new(self.lo.max(o.lo), self.hi.min(o.hi));
        (!i.is_empty()).then_some(i)
    }

    /// self minus o: at most two pieces.
    pub fn minus(&self, o: &Interval) -> Vec<Interval> {
        let mut out = Vec::with_capacity(2);
        if o.is_empty() || o.hi <= self.lo || o.lo >= self.hi {
            out.push(*self);
            return out;
        }
        if o.lo > self.lo {
            out.push(Interval::new(self.lo, o.lo));
        }
        if o.hi < self.hi {
            out.push(Interval::new(o.hi, self.hi));
        }
        out
    }
}

/// Interaction along a line of two intervals with disjoint interiors.
/// Returns `None` when they overlap on a set of positive length.
pub fn pair(kernel: &Kernel, theta: &Vector, i: &Interval, f: &Interval) -> Option<f64> {
    let (first, second) = if i.hi <= f.lo {
        (i, f)
    } else if f.hi <= i.lo {
        (f, i)
    } else {
        return None;
    };
    let g = |x: f64| kernel.chord_g(x, theta);
    let (a, b, c, d) = (first.lo, first.hi, second.lo, second.hi);
    let mut s = 0.0;
    if d.is_finite() {
        s += g(d - b);
        if a.is_finite() {
            s -= g(d - a);
        }
    }
    s -= g(c - b);
    if a.is_finite() {
        s += g(c - a);
    }
    Some(s)
}

/// Contribution of one line to the relative perimeter P(E; A):
/// half of L(E cap A, E^c) + L(E \ A, E^c cap A) restricted to the line.
pub fn relative_line(kernel: &Kernel, theta: &Vector, e: Option<Interval>, a: Option<Interval>) -> f64 {
    let Some(a) = a else { return 0.0 };
    let whole = Interval::new(f64::NEG_INFINITY, f64::INFINITY);
    let (inside, outside): (Vec<Interval>, Vec<Interval>) = match e {
        Some(e) => (vec![e], whole.minus(&e)),
        None => (vec![], vec![whole]),
    };
    let mut s = 0.0;
    for u in inside.iter().filter_map(|u| u.intersect(&a)) {
        for w in &outside {
            s += pair(kernel, theta, &u, w).unwrap_or(0.0);
        }
    }
    for u in inside.iter().flat_map(|u| u.minus(&a)) {
        for w in outside.iter().filter_map(|w| w.intersect(&a)) {
            s += pair(kernel, theta, &u, &w).unwrap_or(0.0);
        }
    }
    0.5 * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chord_identity_for_a_segment() {
        let k = Kernel::fractional(1, 0.5).unwrap();
        let th = [1.0, 0.0, 0.0];
        let e = Interval::new(0.0, 1.0);
        let left = pair(&k, &th, &e, &Interval::new(f64::NEG_INFINITY, 0.0)).unwrap();
        let right = pair(&k, &th, &e, &Interval::new(1.0, f64::INFINITY)).unwrap();
        assert!((left + right - 8.0).abs() < 1e-14);
        assert!(pair(&k, &th, &e, &Interval::new(0.5, 2.0)).is_none());
    }

    #[test]
    fn relative_line_with_covering_window_is_the_full_perimeter_term() {
        let k = Kernel::fractional(1, 0.3).unwrap();
        let th = [1.0, 0.0, 0.0];
        let e = Interval::new(0.0, 1.0);
        let big = Interval::new(-1e9, 1e9);
        let full = relative_line(&k, &th, Some(e), Some(big));
        assert!((full - k.chord_g(1.0, &th)).abs() < 1e-14 * full);
        // window disjoint from E sees only E-to-window pairs
        let w = Interval::new(2.0, 3.0);
        let l = relative_line(&k, &th, Some(e), Some(w));
        assert!((l - 0.5 * pair(&k, &th, &e, &w).unwrap()).abs() < 1e-15);
    }
}
