//! Evaluation of interactions, perimeters and potentials.

pub mod chord;
pub mod lines;
pub mod montecarlo;
pub mod oned;
pub mod slice;

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, HalfSpace};
use crate::kernels::Kernel;
use crate::oracle::VoxelSet;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Slice,
    Montecarlo,
    Oracle,
    Closedform,
    Chord,
}

/// A value with an uncertainty: a standard error for Monte-Carlo
/// estimates, an error bound for deterministic ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub method: Method,
    pub seed: Option<u64>,
    pub nodes: u64,
}

impl Estimate {
    pub fn exact(value: f64, method: Method) -> Self {
        Estimate { value, error: 0.0, method, seed: None, nodes: 0 }
    }

    /// Combined uncertainty of two independent estimates.
    pub fn combined(&self, o: &Estimate) -> f64 {
        self.error.hypot(o.error)
    }

    /// self - o with independent errors.
    pub fn minus(&self, o: &Estimate) -> Estimate {
        Estimate { value: self.value - o.value, error: self.combined(o), method: self.method, seed: self.seed, nodes: self.nodes + o.nodes }
    }

    pub fn scaled(&self, k: f64) -> Estimate {
        Estimate { value: self.value * k, error: self.error * k.abs(), ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Auto,
    Oned,
    Chord,
    Slice,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracySpec {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_samples: u64,
    pub seed: u64,
    pub backend: Backend,
}

impl Default for AccuracySpec {
    fn default() -> Self {
        AccuracySpec { rel_tol: 1e-3, abs_floor: 1e-9, max_samples: 100_000_000, seed: 0x5eed, backend: Backend::Auto }
    }
}

impl AccuracySpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_backend(mut self, b: Backend) -> Self {
        self.backend = b;
        self
    }

    pub fn with_rel_tol(mut self, t: f64) -> Self {
        self.rel_tol = t;
        self
    }

    pub fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_floor)
    }
}

fn same_dim(kernel: &Kernel, b: &ConvexBody) -> Result<()> {
    if kernel.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: kernel.dim(), got: b.dim() });
    }
    Ok(())
}

/// Backend chosen by `Auto` for a perimeter evaluation.
pub fn perimeter_backend(kernel: &Kernel, e: &ConvexBody) -> Backend {
    if e.dim() == 1 {
        Backend::Oned
    } else if slice::supports(kernel, e) {
        Backend::Slice
    } else if e.dim() == 2 && e.exact_polytope().is_some() {
        Backend::Chord
    } else {
        Backend::Montecarlo
    }
}

/// P_K(E) = L_K(E, E^c).
pub fn perimeter(kernel: &Kernel, e: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    same_dim(kernel, e)?;
    if e.is_degenerate() {
        return Ok(Estimate::exact(0.0, Method::Closedform));
    }
    let backend = match spec.backend {
        Backend::Auto => perimeter_backend(kernel, e),
        b => b,
    };
    match backend {
        Backend::Oned => oned::perimeter(kernel, e),
        Backend::Slice => slice::perimeter(kernel, e, spec),
        Backend::Chord => chord::perimeter(kernel, e, spec),
        _ => montecarlo::perimeter(kernel, e, spec),
    }
}

/// L_K(E, F) = int_E int_F K(x - y) dx dy.
pub fn interaction(kernel: &Kernel, e: &ConvexBody, f: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    same_dim(kernel, e)?;
    same_dim(kernel, f)?;
    if e.is_degenerate() || f.is_degenerate() {
        return Ok(Estimate::exact(0.0, Method::Closedform));
    }
    // a fixed order of the arguments makes the result symmetric bit for bit
    let (e, f) = if canonical_order(e, f) { (e, f) } else { (f, e) };
    let backend = match spec.backend {
        Backend::Auto => {
            if e.dim() == 1 {
                Backend::Oned
            } else if slice::supports_pair(kernel, e, f) {
                Backend::Slice
            } else if e.dim() == 2 && e.exact_polytope().is_some() && f.exact_polytope().is_some() {
                Backend::Chord
            } else {
                Backend::Montecarlo
            }
        }
        b => b,
    };
    match backend {
        Backend::Oned => oned::interaction(kernel, e, f),
        Backend::Slice => slice::interaction(kernel, e, f, spec),
        Backend::Chord => chord::interaction(kernel, e, f, spec),
        _ => montecarlo::interaction(kernel, e, f, spec),
    }
}

fn canonical_order(e: &ConvexBody, f: &ConvexBody) -> bool {
    let key = |b: &ConvexBody| {
        let (lo, hi) = b.bbox();
        [lo[0], lo[1], lo[2], hi[0], hi[1], hi[2], b.volume()]
    };
    let (a, b) = (key(e), key(f));
    for i in 0..a.len() {
        match a[i].total_cmp(&b[i]) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            _ => {}
        }
    }
    true
}

/// Deficit P_K(B) - P_K(A) for A inside B, estimated with shared samples.
pub fn deficit(kernel: &Kernel, a: &ConvexBody, b: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    same_dim(kernel, a)?;
    same_dim(kernel, b)?;
    let backend = match spec.backend {
        Backend::Auto => {
            let (pa, pb) = (perimeter_backend(kernel, a), perimeter_backend(kernel, b));
            if pa == pb && pa != Backend::Montecarlo {
                pa
            } else {
                Backend::Montecarlo
            }
        }
        x => x,
    };
    if backend == Backend::Montecarlo {
        return montecarlo::deficit(kernel, a, b, spec);
    }
    let s = spec.with_backend(backend);
    let pb = perimeter(kernel, b, &s)?;
    let pa = perimeter(kernel, a, &s)?;
    Ok(pb.minus(&pa))
}

/// The set whose relative perimeter is measured.
#[derive(Debug, Clone)]
pub enum RelSet {
    Body(ConvexBody),
    HalfSpace(HalfSpace),
    Voxels(VoxelSet),
}

/// P_K(E; A): pairs with at least one point in A.
pub fn relative_perimeter(kernel: &Kernel, e: &RelSet, a: &ConvexBody, spec: &AccuracySpec) -> Result<Estimate> {
    same_dim(kernel, a)?;
    match e {
        RelSet::Voxels(vs) => crate::oracle::relative_perimeter_in_body(kernel, vs, a),
        _ => montecarlo::relative_perimeter(kernel, e, a, spec),
    }
}

/// g_C(x) = int_C K(x - y) dy.
pub fn potential(kernel: &Kernel, c: &ConvexBody, x: &Vector, spec: &AccuracySpec) -> Result<Estimate> {
    same_dim(kernel, c)?;
    if c.is_degenerate() {
        return Ok(Estimate::exact(0.0, Method::Closedform));
    }
    let backend = match spec.backend {
        Backend::Auto if slice::supports(kernel, c) => Backend::Slice,
        Backend::Auto => Backend::Montecarlo,
        b => b,
    };
    match backend {
        Backend::Slice => slice::potential(kernel, c, x, spec),
        _ => montecarlo::potential(kernel, c, x, spec),
    }
}
