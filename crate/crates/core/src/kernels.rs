//! Kernels and kernel-derived constants.
//!
//! Besides K itself the engines use the radial primitives
//! T(u) = int_u^inf phi(r) r^{n-1} dr and G(l) = int_0^l T(u) du, which turn
//! the double integral over a pair of sets into integrals of chord lengths.

use crate::consts::unit_sphere_area;
use crate::error::{Error, Result};
use crate::quad::{adaptive, adaptive_points, adaptive_semi_infinite, gl};
use crate::vector::{self as v, Vector};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type NuFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Magnitude above which an integrability constant is treated as divergent.
pub const SIGMA_CAP: f64 = 1e12;
/// Points per axis of the sampled monotonicity check.
pub const VALIDATION_POINTS: usize = 1000;

#[derive(Clone)]
pub enum KernelForm {
    /// K(x) = |x|^{-n-s}
    Fractional { s: f64 },
    /// K(x) = phi(|x|)
    Radial { phi: RadialFn, breaks: Vec<f64>, table: Option<Vec<[f64; 2]>>, label: String },
    /// K(x) = k(|x - (x.nu) nu|, |x.nu|)
    NuSymmetric { nu: Vector, k: NuFn, label: String },
}

#[derive(Clone)]
pub struct Kernel {
    dim: usize,
    form: KernelForm,
    sigma: f64,
    tables: Arc<OnceLock<Tables>>,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel({}, n={}, sigma={})", self.label(), self.dim, self.sigma)
    }
}

enum Tables {
    Radial(ChordTable),
    /// One table per polar angle from nu, uniform on [0, pi/2].
    Angular(Vec<ChordTable>),
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

fn log_grid(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(move |i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
}

impl Kernel {
    pub fn fractional(n: usize, s: f64) -> Result<Self> {
        check_dim(n)?;
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidKernel(format!("fractional order s = {s} must lie in (0, 1)")));
        }
        Ok(Kernel { dim: n, form: KernelForm::Fractional { s }, sigma: unit_sphere_area(n) / (s * (1.0 - s)), tables: Arc::new(OnceLock::new()) })
    }

    pub fn radial<F>(n: usize, phi: F, label: &str) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::radial_with_breaks(n, Arc::new(phi), Vec::new(), None, label)
    }

    /// Radial kernel whose profile may jump or kink at `breaks`.
    pub fn radial_with_breaks(n: usize, phi: RadialFn, breaks: Vec<f64>, table: Option<Vec<[f64; 2]>>, label: &str) -> Result<Self> {
        check_dim(n)?;
        let mut prev = f64::INFINITY;
        for r in log_grid(1e-4, 1e4, VALIDATION_POINTS) {
            let p = phi(r);
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidKernel(format!("phi({r:.3e}) = {p} is not finite and non-negative")));
            }
            if p > prev + 1e-12 * prev.max(1.0) {
                return Err(Error::InvalidKernel(format!("phi is not decreasing near r = {r:.3e}")));
            }
            prev = p;
        }
        let mut bp: Vec<f64> = breaks.into_iter().filter(|b| *b > 0.0 && b.is_finite()).collect();
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        let sigma = radial_sigma(n, &*phi, &bp)?;
        Ok(Kernel { dim: n, form: KernelForm::Radial { phi, breaks: bp, table, label: label.to_string() }, sigma, tables: Arc::new(OnceLock::new()) })
    }

    /// Tabulated radial kernel, interpolated log-linearly between the
    /// nodes, constant below the first node and zero beyond the last.
    pub fn tabulated(n: usize, table: Vec<[f64; 2]>) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::InvalidKernel("table needs at least two rows".into()));
        }
        if table.windows(2).any(|w| w[1][0] < w[0][0]) || table.iter().any(|r| !(r[0] >= 0.0 && r[1] >= 0.0 && r[0].is_finite() && r[1].is_finite())) {
            return Err(Error::InvalidKernel("table radii must be non-decreasing and values non-negative".into()));
        }
        let t = table.clone();
        let phi = move |r: f64| table_eval(&t, r);
        let breaks = table.iter().map(|r| r[0]).collect();
        Self::radial_with_breaks(n, Arc::new(phi), breaks, Some(table), "tabulated")
    }

    pub fn nu_symmetric<F>(n: usize, nu: Vector, k: F, label: &str) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        check_dim(n)?;
        let nu = v::normalize(&nu).ok_or_else(|| Error::InvalidKernel("zero axis".into()))?;
        if nu[n..].iter().any(|&x| x != 0.0) {
            return Err(Error::DimensionMismatch { expected: n, got: 3 });
        }
        let rs: Vec<f64> = log_grid(1e-4, 1e4, VALIDATION_POINTS).collect();
        let ts: Vec<f64> = log_grid(1e-4, 1e4, VALIDATION_POINTS / 10).collect();
        for &t in &ts {
            let mut prev = f64::INFINITY;
            for &r in &rs {
                let p = k(r, t);
                if !(p.is_finite() && p >= 0.0) {
                    return Err(Error::InvalidKernel(format!("k({r:.3e},{t:.3e}) = {p} is not finite and non-negative")));
                }
                if p > prev + 1e-12 * prev.max(1.0) {
                    return Err(Error::InvalidKernel(format!("k(., t) is not decreasing at r = {r:.3e}, t = {t:.3e}")));
                }
                prev = p;
            }
        }
        let k: NuFn = Arc::new(k);
        let sigma = nu_sigma(n, &*k)?;
        Ok(Kernel { dim: n, form: KernelForm::NuSymmetric { nu, k, label: label.to_string() }, sigma, tables: Arc::new(OnceLock::new()) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &KernelForm {
        &self.form
    }

    /// sigma = int min(1, |x|) K(x) dx
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn fractional_order(&self) -> Option<f64> {
        match self.form {
            KernelForm::Fractional { s } => Some(s),
            _ => None,
        }
    }

    pub fn nu(&self) -> Option<Vector> {
        match &self.form {
            KernelForm::NuSymmetric { nu, .. } => Some(*nu),
            _ => None,
        }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self.form, KernelForm::NuSymmetric { .. })
    }

    pub fn label(&self) -> String {
        match &self.form {
            KernelForm::Fractional { s } => format!("fractional(s={s})"),
            KernelForm::Radial { label, .. } => format!("radial({label})"),
            KernelForm::NuSymmetric { label, .. } => format!("nu-symmetric({label})"),
        }
    }

    /// phi(r) for radial kernels.
    pub fn phi(&self, r: f64) -> Option<f64> {
        match &self.form {
            KernelForm::Fractional { s } => Some(r.powf(-(self.dim as f64) - s)),
            KernelForm::Radial { phi, .. } => Some(phi(r)),
            KernelForm::NuSymmetric { k, .. } if self.dim == 1 => Some(k(0.0, r)),
            _ => None,
        }
    }

    /// k(r, t): the kernel at transverse distance r and axial distance t.
    pub fn k_nu(&self, r: f64, t: f64) -> f64 {
        match &self.form {
            KernelForm::NuSymmetric { k, .. } => k(r, t.abs()),
            _ => self.phi(r.hypot(t)).unwrap(),
        }
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        match &self.form {
            KernelForm::NuSymmetric { nu, k, .. } => {
                let t = v::dot(x, nu);
                k(v::norm(&v::reject(x, nu)), t.abs())
            }
            _ => self.phi(v::norm(x)).unwrap(),
        }
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| match &self.form {
            KernelForm::Fractional { .. } => Tables::Radial(ChordTable { x: vec![], g: vec![], t: vec![], dg: vec![], dt: vec![] }),
            KernelForm::Radial { phi, breaks, .. } => {
                let phi = phi.clone();
                Tables::Radial(ChordTable::build(self.dim, &move |r| phi(r), breaks))
            }
            KernelForm::NuSymmetric { k, .. } => {
                let n = self.dim;
                let tabs = (0..=ANGLES)
                    .map(|i| {
                        let a = 0.5 * PI * i as f64 / ANGLES as f64;
                        let (sa, ca) = a.sin_cos();
                        let k = k.clone();
                        ChordTable::build(n, &move |r| k(r * sa, r * ca), &[])
                    })
                    .collect();
                Tables::Angular(tabs)
            }
        })
    }

    /// T(u) along the direction theta (unit).
    pub fn radial_tail(&self, u: f64, theta: &Vector) -> f64 {
        if let KernelForm::Fractional { s } = self.form {
            return u.powf(-s) / s;
        }
        match self.tables() {
            Tables::Radial(t) => t.tail(u),
            Tables::Angular(ts) => angular(ts, self.nu().unwrap(), theta, |t| t.tail(u)),
        }
    }

    /// G(l) along the direction theta (unit).
    pub fn chord_g(&self, l: f64, theta: &Vector) -> f64 {
        if l <= 0.0 {
            return 0.0;
        }
        if let KernelForm::Fractional { s } = self.form {
            return l.powf(1.0 - s) / (s * (1.0 - s));
        }
        match self.tables() {
            Tables::Radial(t) => t.g(l),
            Tables::Angular(ts) => angular(ts, self.nu().unwrap(), theta, |t| t.g(l)),
        }
    }

    /// M(tau) = int over the hyperplane orthogonal to nu of k(|z|, tau) dz.
    pub fn transverse_mass(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!("transverse mass needs tau > 0, got {tau}")));
        }
        if let KernelForm::Fractional { s } = self.form {
            return Ok(beta_ns(self.dim, s) * tau.powf(-1.0 - s));
        }
        if self.dim == 1 {
            return Ok(self.k_nu(0.0, tau));
        }
        let n = self.dim;
        let f = |rho: f64| self.k_nu(rho, tau) * if n == 3 { rho } else { 1.0 };
        let area = unit_sphere_area(n - 1);
        let q = adaptive_semi_infinite(f, 0.0, 1e-300, 1e-10, 2000);
        let m = area * q.value;
        if !m.is_finite() || m > SIGMA_CAP {
            return Err(Error::DivergentKernel(format!("transverse mass at tau = {tau} diverges")));
        }
        Ok(m)
    }
}

/// beta_{n,s} = int_{R^{n-1}} (1 + |u|^2)^{-(n+s)/2} du.
pub fn beta_ns(n: usize, s: f64) -> f64 {
    match n {
        1 => 1.0,
        2 => beta(0.5 * (1.0 + s), 0.5),
        3 => 2.0 * PI / (1.0 + s),
        _ => {
            let m = (n - 1) as f64;
            unit_sphere_area(n - 1) * 0.5 * beta(0.5 * m, 0.5 * (1.0 + s))
        }
    }
}

const ANGLES: usize = 32;

fn angular<F: Fn(&ChordTable) -> f64>(ts: &[ChordTable], nu: Vector, theta: &Vector, f: F) -> f64 {
    let c = v::dot(theta, &nu).abs().min(1.0);
    let a = c.acos() / (0.5 * PI) * ANGLES as f64;
    let i = (a.floor() as usize).min(ANGLES - 1);
    let w = a - i as f64;
    let (p, q) = (f(&ts[i]), f(&ts[i + 1]));
    if p > 0.0 && q > 0.0 {
        (p.ln() * (1.0 - w) + q.ln() * w).exp()
    } else {
        p * (1.0 - w) + q * w
    }
}

fn table_eval(t: &[[f64; 2]], r: f64) -> f64 {
    if r < t[0][0] {
        return t[0][1];
    }
    let m = t.len();
    if r > t[m - 1][0] {
        return 0.0;
    }
    let k = t.partition_point(|row| row[0] <= r).clamp(1, m - 1);
    let (a, b) = (t[k - 1], t[k]);
    if b[0] == a[0] {
        return b[1];
    }
    let w = (r - a[0]) / (b[0] - a[0]);
    if a[0] > 0.0 && a[1] > 0.0 && b[1] > 0.0 {
        let lw = (r / a[0]).ln() / (b[0] / a[0]).ln();
        (a[1].ln() * (1.0 - lw) + b[1].ln() * lw).exp()
    } else {
        a[1] + w * (b[1] - a[1])
    }
}

fn radial_sigma(n: usize, phi: &dyn Fn(f64) -> f64, breaks: &[f64]) -> Result<f64> {
    let mut inner: Vec<f64> = vec![0.0];
    inner.extend(breaks.iter().copied().filter(|b| *b < 1.0));
    inner.push(1.0);
    let mut f = |r: f64| r.powi(n as i32) * phi(r);
    let near = adaptive_points(&mut f, &inner, 1e-300, 1e-11, 4000);
    let mut outer: Vec<f64> = vec![1.0];
    outer.extend(breaks.iter().copied().filter(|b| *b > 1.0));
    let last = *outer.last().unwrap();
    let mut g = |r: f64| r.powi(n as i32 - 1) * phi(r);
    let mid = adaptive_points(&mut g, &outer, 1e-300, 1e-11, 4000);
    let tail = adaptive_semi_infinite(|r| r.powi(n as i32 - 1) * phi(r), last, 1e-300, 1e-11, 4000);
    let total = unit_sphere_area(n) * (near.value + mid.value + tail.value);
    let err = unit_sphere_area(n) * (near.error + mid.error + tail.error);
    if !total.is_finite() || total > SIGMA_CAP || err > 1e-6 * total.max(1e-300) {
        return Err(Error::DivergentKernel(format!("sigma quadrature does not converge (value {total:.3e}, error {err:.3e})")));
    }
    Ok(total)
}

fn nu_sigma(n: usize, k: &dyn Fn(f64, f64) -> f64) -> Result<f64> {
    let radial = |sa: f64, ca: f64| -> Result<f64> {
        let f = |r: f64| r.min(1.0) * k(r * sa, r * ca) * r.powi(n as i32 - 1);
        let a = adaptive(f, 0.0, 1.0, 1e-300, 1e-10, 2000);
        let b = adaptive_semi_infinite(f, 1.0, 1e-300, 1e-10, 2000);
        let v = a.value + b.value;
        if !v.is_finite() || v > SIGMA_CAP || a.error + b.error > 1e-5 * v.max(1e-300) {
            return Err(Error::DivergentKernel("sigma quadrature does not converge".into()));
        }
        Ok(v)
    };
    let total = match n {
        1 => 2.0 * radial(0.0, 1.0)?,
        _ => {
            let mut err = None;
            let val = gl(0.0, 0.5 * PI, 64, |a| {
                let (sa, ca) = a.sin_cos();
                match radial(sa, ca) {
                    Ok(x) => x * if n == 3 { 2.0 * PI * sa } else { 1.0 },
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            if n == 3 {
                2.0 * val
            } else {
                4.0 * val
            }
        }
    };
    if total > SIGMA_CAP {
        return Err(Error::DivergentKernel(format!("sigma = {total:.3e} exceeds the cap")));
    }
    Ok(total)
}

/// Tabulated T and G on a logarithmic grid with cubic Hermite
/// interpolation in log-log coordinates (derivatives are known exactly).
struct ChordTable {
    x: Vec<f64>,
    g: Vec<f64>,
    t: Vec<f64>,
    dg: Vec<f64>,
    dt: Vec<f64>,
}

const TABLE_LO: f64 = 1e-8;
const TABLE_HI: f64 = 1e8;
const PER_DECADE: usize = 40;

impl ChordTable {
    fn build(n: usize, phi: &dyn Fn(f64) -> f64, breaks: &[f64]) -> Self {
        let decades = (TABLE_HI / TABLE_LO).log10().round() as usize;
        let mut l: Vec<f64> = log_grid(TABLE_LO, TABLE_HI, decades * PER_DECADE + 1).collect();
        l.extend(breaks.iter().copied().filter(|b| *b > TABLE_LO && *b < TABLE_HI));
        l.sort_by(f64::total_cmp);
        l.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * *b);
        let m = l.len();
        let w = |r: f64| r.powi(n as i32 - 1) * phi(r);
        // A(l) = int_0^l r^n phi
        let mut a = vec![0.0; m];
        a[0] = adaptive(|r| r * w(r), 0.0, l[0], 1e-300, 1e-12, 500).value;
        for i in 1..m {
            a[i] = a[i - 1] + adaptive(|r| r * w(r), l[i - 1], l[i], 1e-300, 1e-12, 500).value;
        }
        let mut t = vec![0.0; m];
        t[m - 1] = adaptive_semi_infinite(w, l[m - 1], 1e-300, 1e-12, 500).value;
        for i in (0..m - 1).rev() {
            t[i] = t[i + 1] + adaptive(w, l[i], l[i + 1], 1e-300, 1e-12, 500).value;
        }
        let g: Vec<f64> = (0..m).map(|i| a[i] + l[i] * t[i]).collect();
        // one-sided limits at jumps of phi are not needed: T and G are continuous
        let dt: Vec<f64> = (0..m).map(|i| -w(l[i] * (1.0 + 1e-14))).collect();
        ChordTable { x: l.iter().map(|v| v.ln()).collect(), dg: t.clone(), g, t, dt }
    }

    fn locate(&self, lx: f64) -> Option<usize> {
        let m = self.x.len();
        if lx < self.x[0] || lx > self.x[m - 1] {
            return None;
        }
        Some(self.x.partition_point(|&v| v <= lx).clamp(1, m - 1) - 1)
    }

    fn hermite(&self, y: &[f64], dy: &[f64], l: f64) -> f64 {
        let lx = l.ln();
        let m = self.x.len();
        let Some(i) = self.locate(lx) else {
            // power-law extrapolation from the nearest end
            let j = if lx < self.x[0] { 0 } else { m - 1 };
            if y[j] <= 0.0 {
                return if j == 0 { y[0] } else { 0.0 };
            }
            let p = dy[j] * self.x[j].exp() / y[j];
            return y[j] * ((lx - self.x[j]) * p).exp();
        };
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let u = (lx - x0) / h;
        let (l0, l1) = (x0.exp(), x1.exp());
        let (h00, h10, h01, h11) = ((1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u), u * (1.0 - u) * (1.0 - u), u * u * (3.0 - 2.0 * u), u * u * (u - 1.0));
        if y[i] > 0.0 && y[i + 1] > 0.0 {
            let (p0, p1) = (y[i].ln(), y[i + 1].ln());
            let (s0, s1) = (dy[i] * l0 / y[i], dy[i + 1] * l1 / y[i + 1]);
            (h00 * p0 + h10 * h * s0 + h01 * p1 + h11 * h * s1).exp()
        } else {
            // linear in l where the value vanishes
            let w = (l - l0) / (l1 - l0);
            y[i] * (1.0 - w) + y[i + 1] * w
        }
    }

    fn g(&self, l: f64) -> f64 {
        self.hermite(&self.g, &self.dg, l)
    }

    fn tail(&self, u: f64) -> f64 {
        self.hermite(&self.t, &self.dt, u)
    }
}

/// JSON kernel description; the dimension comes from the context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum KernelSpec {
    Fractional { s: f64 },
    Radial { table: Vec<[f64; 2]> },
}

impl KernelSpec {
    pub fn build(&self, n: usize) -> Result<Kernel> {
        match self {
            KernelSpec::Fractional { s } => Kernel::fractional(n, *s),
            KernelSpec::Radial { table } => Kernel::tabulated(n, table.clone()),
        }
    }

    pub fn describe(k: &Kernel) -> Option<KernelSpec> {
        match k.form() {
            KernelForm::Fractional { s } => Some(KernelSpec::Fractional { s: *s }),
            KernelForm::Radial { table: Some(t), .. } => Some(KernelSpec::Radial { table: t.clone() }),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractional_sigma_closed_forms() {
        let k = Kernel::fractional(2, 0.5).unwrap();
        assert!((k.sigma() - 8.0 * PI).abs() < 1e-12);
        assert!((Kernel::fractional(1, 0.5).unwrap().sigma() - 8.0).abs() < 1e-14);
        assert!(Kernel::fractional(2, 1.2).is_err());
        assert!(Kernel::fractional(2, 0.999).unwrap().sigma().is_finite());
    }

    #[test]
    fn sigma_matches_radial_quadrature_oracle() {
        for n in 1..=3 {
            for s in [0.2, 0.5, 0.8] {
                let frac = Kernel::fractional(n, s).unwrap();
                let generic = Kernel::radial(n, move |r| r.powf(-(n as f64) - s), "power").unwrap();
                assert!((frac.sigma() - generic.sigma()).abs() < 1e-8 * frac.sigma(), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn truncated_kernel_sigma() {
        let k = Kernel::radial_with_breaks(2, Arc::new(|r| if r <= 1.0 { 1.0 } else { 0.0 }), vec![1.0], None, "indicator").unwrap();
        assert!((k.sigma() - 2.0 * PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn increasing_kernel_is_rejected() {
        assert!(Kernel::radial(2, |r| r.min(1.0), "up").is_err());
        assert!(Kernel::nu_symmetric(2, [0.0, 1.0, 0.0], |r, _t| r.min(1.0), "up").is_err());
    }

    #[test]
    fn transverse_mass_against_quadrature() {
        for s in [0.3, 0.5, 0.7] {
            let k = Kernel::fractional(2, s).unwrap();
            let q = adaptive_semi_infinite(|u| (1.0 + u * u).powf(-(2.0 + s) / 2.0), 0.0, 1e-300, 1e-13, 2000).value * 2.0;
            assert!((k.transverse_mass(1.0).unwrap() - q).abs() < 1e-10 * q);
            let k3 = Kernel::fractional(3, s).unwrap();
            let q3 = 2.0 * PI * adaptive_semi_infinite(|u| u * (1.0 + u * u).powf(-(3.0 + s) / 2.0), 0.0, 1e-300, 1e-13, 2000).value;
            assert!((k3.transverse_mass(1.0).unwrap() - q3).abs() < 1e-10 * q3);
            let ratio = k.transverse_mass(2.0).unwrap() / k.transverse_mass(1.0).unwrap();
            assert!((ratio - 2f64.powf(-1.0 - s)).abs() < 1e-14);
        }
        let r = Kernel::radial(1, |r| (-r).exp(), "exp").unwrap();
        assert!((r.transverse_mass(0.7).unwrap() - (-0.7f64).exp()).abs() < 1e-15);
        let g = Kernel::radial(2, |r| (-r * r).exp(), "gauss").unwrap();
        let m = g.transverse_mass(0.5).unwrap();
        assert!((m - PI.sqrt() * (-0.25f64).exp()).abs() < 1e-9);
        assert!(g.transverse_mass(0.0).is_err());
    }

    #[test]
    fn chord_tables_reproduce_the_power_law() {
        let s = 0.4;
        let generic = Kernel::radial(3, move |r| r.powf(-3.0 - s), "power").unwrap();
        let frac = Kernel::fractional(3, s).unwrap();
        let e = [1.0, 0.0, 0.0];
        for l in [1e-3, 0.37, 1.0, 5.5, 200.0] {
            let (a, b) = (generic.chord_g(l, &e), frac.chord_g(l, &e));
            assert!((a - b).abs() < 1e-7 * b, "l={l}: {a} vs {b}");
            let (a, b) = (generic.radial_tail(l, &e), frac.radial_tail(l, &e));
            assert!((a - b).abs() < 1e-7 * b, "l={l}: {a} vs {b}");
        }
    }

    #[test]
    fn tabulated_kernels_interpolate_log_linearly() {
        let k = Kernel::tabulated(2, vec![[0.5, 4.0], [2.0, 1.0], [3.0, 0.0]]).unwrap();
        assert!((k.phi(1.0).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(k.phi(0.1).unwrap(), 4.0);
        assert_eq!(k.phi(4.0).unwrap(), 0.0);
        let spec: KernelSpec = serde_json::from_str(r#"{"type":"radial","table":[[0.5,4],[2,1],[3,0]]}"#).unwrap();
        assert_eq!(spec.build(2).unwrap().sigma(), k.sigma());
    }

    #[test]
    fn nu_symmetric_radial_special_case() {
        let s = 0.5;
        let k = Kernel::nu_symmetric(2, [0.0, 1.0, 0.0], move |r, t| (r * r + t * t).powf(-(2.0 + s) / 2.0), "frac").unwrap();
        assert!((k.sigma() - 8.0 * PI).abs() < 1e-6 * 8.0 * PI);
        let frac = Kernel::fractional(2, s).unwrap();
        let th = v::normalize(&[0.3, 0.8, 0.0]).unwrap();
        assert!((k.chord_g(0.8, &th) - frac.chord_g(0.8, &th)).abs() < 1e-6 * frac.chord_g(0.8, &th));
    }
}
