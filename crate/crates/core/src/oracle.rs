//! Brute-force voxel evaluation of interactions and perimeters.
//!
//! Cell pairs at offset k contribute W(k) = int_{cell} int_{cell + k h} K.
//! For |k|_inf <= 2 the cell integral is computed by a Duffy-type rule
//! around the singular corner; farther pairs use the midpoint rule. The
//! region outside the grid is either empty or filled by a half-space and
//! its pull on each cell is integrated along rays.

use crate::engine::{Estimate, Method};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, HalfSpace};
use crate::kernels::Kernel;
use crate::quad::{gl_interval, graded_rule, CompensatedSum, Grading};
use crate::vector::Vector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

pub const MAX_CELLS: usize = 1 << 24;
const NEAR: i64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dim: usize,
    pub origin: Vector,
    pub h: f64,
    pub shape: [usize; 3],
}

impl Grid {
    pub fn new(dim: usize, origin: Vector, h: f64, shape: [usize; 3]) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(h > 0.0) {
            return Err(Error::InvalidArgument("cell size must be positive".into()));
        }
        let mut shape = shape;
        for s in shape.iter_mut().skip(dim) {
            *s = 1;
        }
        if shape[..dim].contains(&0) || shape.iter().product::<usize>() > MAX_CELLS {
            return Err(Error::InvalidArgument(format!("grid shape {shape:?} is empty or too large")));
        }
        Ok(Grid { dim, origin, h, shape })
    }

    /// The box [lo, hi] with `res` cells across its widest side, padded by one cell.
    pub fn around(dim: usize, lo: &Vector, hi: &Vector, res: usize) -> Result<Self> {
        if !(4..=64).contains(&res) {
            return Err(Error::InvalidArgument(format!("resolution {res} outside [4, 64]")));
        }
        let width = (0..dim).map(|i| hi[i] - lo[i]).fold(0.0, f64::max);
        let h = width / res as f64;
        let mut origin = [0.0; 3];
        let mut shape = [1; 3];
        for i in 0..dim {
            let cells = ((hi[i] - lo[i]) / h - 1e-9).ceil().max(1.0) as usize;
            origin[i] = lo[i] - h;
            shape[i] = cells + 2;
        }
        Grid::new(dim, origin, h, shape)
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, c: [usize; 3]) -> usize {
        (c[2] * self.shape[1] + c[1]) * self.shape[0] + c[0]
    }

    pub fn coords(&self, i: usize) -> [usize; 3] {
        let x = i % self.shape[0];
        let y = (i / self.shape[0]) % self.shape[1];
        let z = i / (self.shape[0] * self.shape[1]);
        [x, y, z]
    }

    pub fn center(&self, i: usize) -> Vector {
        let c = self.coords(i);
        let mut p = [0.0; 3];
        for d in 0..self.dim {
            p[d] = self.origin[d] + (c[d] as f64 + 0.5) * self.h;
        }
        p
    }

    fn upper(&self) -> Vector {
        let mut u = [0.0; 3];
        for (d, x) in u.iter_mut().enumerate().take(self.dim) {
            *x = self.origin[d] + self.shape[d] as f64 * self.h;
        }
        u
    }
}

/// What fills space outside the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Exterior {
    #[default]
    Empty,
    HalfSpace {
        normal: Vector,
        offset: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoxelSet {
    pub grid: Grid,
    pub cells: Vec<bool>,
    pub exterior: Exterior,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VoxelJson {
    grid: Grid,
    exterior: Exterior,
    /// Alternating run lengths, starting with an empty run.
    runs: Vec<usize>,
}

impl VoxelSet {
    pub fn empty(grid: Grid) -> Self {
        VoxelSet { cells: vec![false; grid.len()], grid, exterior: Exterior::Empty }
    }

    pub fn from_body(body: &ConvexBody, grid: &Grid) -> Result<Self> {
        if body.dim() != grid.dim {
            return Err(Error::DimensionMismatch { expected: grid.dim, got: body.dim() });
        }
        let cells = (0..grid.len()).into_par_iter().map(|i| body.contains_point(&grid.center(i), 0.0)).collect();
        Ok(VoxelSet { grid: *grid, cells, exterior: Exterior::Empty })
    }

    pub fn from_halfspace(hs: &HalfSpace, grid: &Grid) -> Self {
        let cells = (0..grid.len()).map(|i| hs.contains(&grid.center(i))).collect();
        VoxelSet { grid: *grid, cells, exterior: Exterior::HalfSpace { normal: hs.normal, offset: hs.offset } }
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn volume(&self) -> f64 {
        self.count() as f64 * self.grid.h.powi(self.grid.dim as i32)
    }

    pub fn intersect(&self, o: &VoxelSet) -> Result<VoxelSet> {
        self.same_grid(o)?;
        let cells = self.cells.iter().zip(&o.cells).map(|(a, b)| *a && *b).collect();
        Ok(VoxelSet { grid: self.grid, cells, exterior: Exterior::Empty })
    }

    fn same_grid(&self, o: &VoxelSet) -> Result<()> {
        if self.grid != o.grid {
            return Err(Error::InvalidArgument("voxel sets live on different grids".into()));
        }
        Ok(())
    }

    fn exterior_contains(&self, y: &Vector) -> bool {
        match self.exterior {
            Exterior::Empty => false,
            Exterior::HalfSpace { normal, offset } => crate::vector::dot(&normal, y) <= offset,
        }
    }

    pub fn to_json(&self) -> String {
        let mut runs = Vec::new();
        let mut cur = false;
        let mut n = 0;
        for &c in &self.cells {
            if c != cur {
                runs.push(n);
                cur = c;
                n = 0;
            }
            n += 1;
        }
        runs.push(n);
        serde_json::to_string(&VoxelJson { grid: self.grid, exterior: self.exterior, runs }).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: VoxelJson = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        let grid = Grid::new(j.grid.dim, j.grid.origin, j.grid.h, j.grid.shape)?;
        let mut cells = Vec::with_capacity(grid.len());
        let mut cur = false;
        for r in j.runs {
            cells.extend(std::iter::repeat_n(cur, r));
            cur = !cur;
        }
        if cells.len() != grid.len() {
            return Err(Error::Format(format!("runs cover {} cells, grid has {}", cells.len(), grid.len())));
        }
        Ok(VoxelSet { grid, cells, exterior: j.exterior })
    }
}

pub fn voxelize(body: &ConvexBody, resolution: usize) -> Result<VoxelSet> {
    let (lo, hi) = body.bbox();
    let grid = Grid::around(body.dim(), &lo, &hi, resolution)?;
    VoxelSet::from_body(body, &grid)
}

/// int_{[-1,1]^n} prod(1 - |u_i|) f(u + k) du, exact cell-pair integral in cell units.
fn cell_pair(n: usize, k: [i64; 3], f: &(dyn Fn(&Vector) -> f64 + Sync)) -> f64 {
    let gl = gl_interval(0.0, 1.0, 12);
    let graded = graded_rule(0.0, 1.0, true, false, &Grading::new(16, 10));
    let mut total = 0.0;
    for signs in 0..(1usize << n) {
        let sigma: Vec<f64> = (0..n).map(|i| if signs >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
        // the corner of [0,1]^n (in |u| coordinates) where u + k vanishes, if any
        let mut star = vec![0.0; n];
        let mut singular = true;
        for i in 0..n {
            let ki = k[i] as f64;
            if k[i] == 0 {
                star[i] = 0.0;
            } else if k[i].abs() == 1 && sigma[i] * ki < 0.0 {
                star[i] = 1.0;
            } else {
                singular = false;
            }
        }
        // v[i] in [0,1] with om[i] = 1 - v[i] supplied exactly
        let eval = |v: &[f64], om: &[f64]| {
            let mut w = 1.0;
            let mut x = [0.0; 3];
            for i in 0..n {
                w *= om[i];
                x[i] = if star[i] == 1.0 { -sigma[i] * om[i] } else { sigma[i] * v[i] + k[i] as f64 };
            }
            w * f(&x)
        };
        if !singular {
            let mut idx = vec![0usize; n];
            loop {
                let mut v = [0.0; 3];
                let mut om = [0.0; 3];
                let mut w = 1.0;
                for i in 0..n {
                    v[i] = gl[idx[i]].0;
                    om[i] = 1.0 - v[i];
                    w *= gl[idx[i]].1;
                }
                total += w * eval(&v[..n], &om[..n]);
                let mut d = 0;
                while d < n {
                    idx[d] += 1;
                    if idx[d] < gl.len() {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
                if d == n {
                    break;
                }
            }
            continue;
        }
        // Duffy: split the cube into n pyramids around the corner
        for j in 0..n {
            let others = n - 1;
            let mut idx = vec![0usize; others];
            loop {
                let mut wq = 1.0;
                let mut wv = [0.0; 3];
                for (m, &ii) in idx.iter().enumerate() {
                    wv[m] = gl[ii].0;
                    wq *= gl[ii].1;
                }
                for &(t, wt) in &graded {
                    let mut v = [0.0; 3];
                    let mut om = [0.0; 3];
                    let mut m = 0;
                    for i in 0..n {
                        let r = if i == j {
                            t
                        } else {
                            m += 1;
                            t * wv[m - 1]
                        };
                        if star[i] == 1.0 {
                            v[i] = 1.0 - r;
                            om[i] = r;
                        } else {
                            v[i] = r;
                            om[i] = 1.0 - r;
                        }
                    }
                    total += wq * wt * t.powi(others as i32) * eval(&v[..n], &om[..n]);
                }
                let mut d = 0;
                while d < others {
                    idx[d] += 1;
                    if idx[d] < gl.len() {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
                if d >= others {
                    break;
                }
            }
        }
    }
    total
}

type NearKey = (usize, u64, [i64; 3]);

fn fractional_near(n: usize, s: f64, k: [i64; 3]) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<NearKey, f64>>> = OnceLock::new();
    let mut key = k;
    for v in key.iter_mut() {
        *v = v.abs();
    }
    key[..n].sort_unstable();
    let id = (n, s.to_bits(), key);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&id) {
        return *v;
    }
    let v = if key == [0, 0, 0] { f64::INFINITY } else { cell_pair(n, key, &|x: &Vector| crate::vector::norm(x).powf(-(n as f64) - s)) };
    cache.lock().unwrap().insert(id, v);
    v
}

/// W(k) for offsets in [-(N-1), N-1]^n.
struct Weights {
    n: usize,
    span: [usize; 3],
    w: Vec<f64>,
}

impl Weights {
    fn build(kernel: &Kernel, grid: &Grid) -> Self {
        let n = grid.dim;
        let h = grid.h;
        let mut span = [1; 3];
        for (s, g) in span.iter_mut().zip(&grid.shape).take(n) {
            *s = 2 * g - 1;
        }
        let total: usize = span.iter().product();
        let w = (0..total)
            .into_par_iter()
            .map(|i| {
                let mut k = [0i64; 3];
                let mut r = i;
                for d in 0..3 {
                    k[d] = (r % span[d]) as i64 - (span[d] as i64 - 1) / 2;
                    r /= span[d];
                }
                let near = k.iter().all(|v| v.abs() <= NEAR);
                let hn = h.powi(n as i32);
                if near {
                    if let Some(s) = kernel.fractional_order() {
                        return fractional_near(n, s, k) * h.powf(n as f64 - s);
                    }
                    hn * hn * cell_pair(n, k, &|x: &Vector| kernel.eval(&crate::vector::scale(x, h)))
                } else {
                    let x = [k[0] as f64 * h, k[1] as f64 * h, k[2] as f64 * h];
                    hn * hn * kernel.eval(&x)
                }
            })
            .collect();
        Weights { n, span, w }
    }

    fn at(&self, a: [usize; 3], b: [usize; 3]) -> f64 {
        let mut i = 0;
        let mut stride = 1;
        for d in 0..self.n {
            let half = (self.span[d] - 1) / 2;
            i += (b[d] + half - a[d]) * stride;
            stride *= self.span[d];
        }
        self.w[i]
    }
}

/// Sum of W over pairs (p, q) with p in `ps`, q in `qs`, in a fixed order.
fn pair_sum(grid: &Grid, w: &Weights, ps: &[usize], qs: &[usize]) -> f64 {
    let qc: Vec<[usize; 3]> = qs.iter().map(|&q| grid.coords(q)).collect();
    let rows: Vec<f64> = ps
        .par_iter()
        .map(|&p| {
            let pc = grid.coords(p);
            let mut acc = CompensatedSum::default();
            for q in &qc {
                acc.add(w.at(pc, *q));
            }
            acc.value()
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for r in rows {
        acc.add(r);
    }
    acc.value()
}

fn directions(n: usize) -> Vec<(Vector, f64)> {
    match n {
        1 => vec![([1.0, 0.0, 0.0], 1.0), ([-1.0, 0.0, 0.0], 1.0)],
        2 => {
            let m = 720;
            (0..m)
                .map(|j| {
                    let a = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    ([a.cos(), a.sin(), 0.0], 2.0 * PI / m as f64)
                })
                .collect()
        }
        _ => {
            let mu = gl_interval(-1.0, 1.0, 48);
            let m = 96;
            let mut out = Vec::with_capacity(mu.len() * m);
            for &(c, wc) in &mu {
                let sn = (1.0 - c * c).sqrt();
                for j in 0..m {
                    let a = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    out.push(([sn * a.cos(), sn * a.sin(), c], wc * 2.0 * PI / m as f64));
                }
            }
            out
        }
    }
}

/// h^n times the mass of K(x - .) over the part of the exterior that is
/// occupied (`occupied`) or free.
fn exterior_pull(kernel: &Kernel, vs: &VoxelSet, dirs: &[(Vector, f64)], x: &Vector, occupied: bool) -> f64 {
    let g = &vs.grid;
    let n = g.dim;
    let up = g.upper();
    let mut total = 0.0;
    for (th, wt) in dirs {
        let mut rho = f64::INFINITY;
        for d in 0..n {
            if th[d] > 0.0 {
                rho = rho.min((up[d] - x[d]) / th[d]);
            } else if th[d] < 0.0 {
                rho = rho.min((g.origin[d] - x[d]) / th[d]);
            }
        }
        let tail = |u: f64| if u.is_finite() { kernel.radial_tail(u, th) } else { 0.0 };
        let full = tail(rho);
        let occ = match vs.exterior {
            Exterior::Empty => 0.0,
            Exterior::HalfSpace { normal, offset } => {
                let c = crate::vector::dot(&normal, th);
                let q = offset - crate::vector::dot(&normal, x);
                let (lo, hi) = if c > 0.0 {
                    (rho, (q / c).max(rho))
                } else if c < 0.0 {
                    ((q / c).max(rho), f64::INFINITY)
                } else if q >= 0.0 {
                    (rho, f64::INFINITY)
                } else {
                    (rho, rho)
                };
                if hi > lo {
                    tail(lo) - tail(hi)
                } else {
                    0.0
                }
            }
        };
        total += wt * if occupied { occ } else { full - occ };
    }
    total * g.h.powi(n as i32)
}

fn exterior_sum(kernel: &Kernel, vs: &VoxelSet, cells: &[usize], occupied: bool) -> f64 {
    let dirs = directions(vs.grid.dim);
    let parts: Vec<f64> = cells.par_iter().map(|&i| exterior_pull(kernel, vs, &dirs, &vs.grid.center(i), occupied)).collect();
    let mut acc = CompensatedSum::default();
    for p in parts {
        acc.add(p);
    }
    acc.value()
}

fn oracle_estimate(v: f64, nodes: usize) -> Estimate {
    Estimate { value: v, error: 0.0, method: Method::Oracle, seed: None, nodes: nodes as u64 }
}

fn check_kernel(kernel: &Kernel, g: &Grid) -> Result<()> {
    if kernel.dim() != g.dim {
        return Err(Error::DimensionMismatch { expected: g.dim, got: kernel.dim() });
    }
    Ok(())
}

/// Sum over cell pairs of W; overlapping cells give an infinite value for
/// singular kernels.
pub fn brute_interaction(kernel: &Kernel, p: &VoxelSet, q: &VoxelSet) -> Result<f64> {
    check_kernel(kernel, &p.grid)?;
    p.same_grid(q)?;
    let ps: Vec<usize> = (0..p.cells.len()).filter(|&i| p.cells[i]).collect();
    let qs: Vec<usize> = (0..q.cells.len()).filter(|&i| q.cells[i]).collect();
    if ps.is_empty() || qs.is_empty() {
        return Ok(0.0);
    }
    let w = Weights::build(kernel, &p.grid);
    Ok(pair_sum(&p.grid, &w, &ps, &qs))
}

/// P_K(E) for a voxel set with an empty exterior.
pub fn brute_perimeter(kernel: &Kernel, e: &VoxelSet) -> Result<f64> {
    check_kernel(kernel, &e.grid)?;
    if e.exterior != Exterior::Empty {
        return Err(Error::InvalidArgument("a voxel set with a filled exterior has infinite perimeter".into()));
    }
    let inside: Vec<usize> = (0..e.cells.len()).filter(|&i| e.cells[i]).collect();
    let outside: Vec<usize> = (0..e.cells.len()).filter(|&i| !e.cells[i]).collect();
    if inside.is_empty() {
        return Ok(0.0);
    }
    let w = Weights::build(kernel, &e.grid);
    Ok(pair_sum(&e.grid, &w, &inside, &outside) + exterior_sum(kernel, e, &inside, false))
}

/// P_K(E; A): pairs (x in E, y not in E) with x or y in A.
pub fn brute_relative_perimeter(kernel: &Kernel, e: &VoxelSet, a: &VoxelSet) -> Result<f64> {
    check_kernel(kernel, &e.grid)?;
    e.same_grid(a)?;
    let idx = |f: &dyn Fn(usize) -> bool| -> Vec<usize> { (0..e.cells.len()).filter(|&i| f(i)).collect() };
    let e_in_a = idx(&|i| e.cells[i] && a.cells[i]);
    let e_out_a = idx(&|i| e.cells[i] && !a.cells[i]);
    let c_in_a = idx(&|i| !e.cells[i] && a.cells[i]);
    let c_all = idx(&|i| !e.cells[i]);
    if e_in_a.is_empty() && c_in_a.is_empty() {
        return Ok(0.0);
    }
    let w = Weights::build(kernel, &e.grid);
    let inner = pair_sum(&e.grid, &w, &e_in_a, &c_all) + pair_sum(&e.grid, &w, &e_out_a, &c_in_a);
    Ok(inner + exterior_sum(kernel, e, &e_in_a, false) + exterior_sum(kernel, e, &c_in_a, true))
}

/// P_K(E; A) with A a convex body rasterised on the grid of E.
pub fn relative_perimeter_in_body(kernel: &Kernel, e: &VoxelSet, a: &ConvexBody) -> Result<Estimate> {
    let av = VoxelSet::from_body(a, &e.grid)?;
    let v = brute_relative_perimeter(kernel, e, &av)?;
    Ok(oracle_estimate(v, e.grid.len()))
}

/// Perimeter of a voxelised convex body as an estimate.
pub fn perimeter_estimate(kernel: &Kernel, body: &ConvexBody, resolution: usize) -> Result<Estimate> {
    let vs = voxelize(body, resolution)?;
    Ok(oracle_estimate(brute_perimeter(kernel, &vs)?, vs.grid.len()))
}

impl VoxelSet {
    /// Whether the point y (anywhere in space) belongs to the set.
    pub fn contains(&self, y: &Vector) -> bool {
        let g = &self.grid;
        let mut c = [0usize; 3];
        for d in 0..g.dim {
            let f = ((y[d] - g.origin[d]) / g.h).floor();
            if f < 0.0 || f >= g.shape[d] as f64 {
                return self.exterior_contains(y);
            }
            c[d] = f as usize;
        }
        self.cells[g.index(c)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: f64, b: f64) -> ConvexBody {
        ConvexBody::cuboid(1, [a, 0.0, 0.0], [b, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn aligned_box_has_exact_volume() {
        let b = ConvexBody::cuboid(2, [0.0, 0.0, 0.0], [2.0, 1.0, 0.0]).unwrap();
        let v = voxelize(&b, 16).unwrap();
        assert_eq!(v.volume(), 2.0);
        assert!(voxelize(&b, 2).is_err());
        let ball = ConvexBody::ball(2, [0.0; 3], 1.0).unwrap();
        assert!((voxelize(&ball, 64).unwrap().volume() / PI - 1.0).abs() < 0.05);
    }

    #[test]
    fn near_field_constant_matches_one_dimensional_closed_form() {
        // int_0^1 int_1^2 |x-y|^{-1-s} = (2 - 2^{1-s}) / (s (1-s))
        let s = 0.5;
        let c = fractional_near(1, s, [1, 0, 0]);
        let exact = (2.0 - 2f64.powf(1.0 - s)) / (s * (1.0 - s));
        assert!((c - exact).abs() < 1e-8 * exact, "{c} {exact}");
        let c2 = fractional_near(1, s, [2, 0, 0]);
        let exact2 = (2f64.powf(1.0 - s) * 2.0 - 1.0 - 3f64.powf(1.0 - s)) / (s * (1.0 - s));
        assert!((c2 - exact2).abs() < 1e-8 * exact2.abs(), "{c2} {exact2}");
        assert!(fractional_near(2, s, [0, 0, 0]).is_infinite());
    }

    #[test]
    fn segment_perimeter_within_ten_percent() {
        let k = Kernel::fractional(1, 0.5).unwrap();
        let p = perimeter_estimate(&k, &seg(0.0, 1.0), 64).unwrap().value;
        assert!((p / 8.0 - 1.0).abs() < 0.1, "{p}");
    }

    #[test]
    fn empty_and_full_sets() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        let g = Grid::new(2, [0.0; 3], 0.25, [8, 8, 1]).unwrap();
        let e = VoxelSet::empty(g);
        assert_eq!(brute_interaction(&k, &e, &e).unwrap(), 0.0);
        let mut full = e.clone();
        full.cells.iter_mut().for_each(|c| *c = true);
        full.exterior = Exterior::HalfSpace { normal: [1.0, 0.0, 0.0], offset: 1e30 };
        let a = VoxelSet::from_body(&ConvexBody::ball(2, [1.0, 1.0, 0.0], 0.5).unwrap(), &g).unwrap();
        assert!(brute_relative_perimeter(&k, &full, &a).unwrap().abs() < 1e-9);
        assert_eq!(brute_relative_perimeter(&k, &e, &VoxelSet::empty(g)).unwrap(), 0.0);
    }

    #[test]
    fn rle_round_trip() {
        let b = ConvexBody::ball(2, [0.0; 3], 1.0).unwrap();
        let v = voxelize(&b, 12).unwrap();
        let back = VoxelSet::from_json(&v.to_json()).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn far_cells_use_the_midpoint_rule() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        let g = Grid::new(2, [0.0; 3], 1.0, [8, 1, 1]).unwrap();
        let mut p = VoxelSet::empty(g);
        let mut q = VoxelSet::empty(g);
        p.cells[0] = true;
        q.cells[7] = true;
        let v = brute_interaction(&k, &p, &q).unwrap();
        assert!((v - 7f64.powf(-2.5)).abs() < 1e-15);
    }
}
