//! Quadrature building blocks: Gauss-Legendre rules, geometrically graded
//! composite rules for endpoint singularities, and adaptive Gauss-Kronrod.

use std::sync::OnceLock;

/// Nodes and weights of a Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

const MAX_ORDER: usize = 128;

static RULES: OnceLock<Vec<OnceLock<GaussRule>>> = OnceLock::new();

fn compute_rule(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

/// Gauss-Legendre rule of order `n` (1..=128), cached.
pub fn gauss_legendre(n: usize) -> &'static GaussRule {
    assert!((1..=MAX_ORDER).contains(&n), "Gauss-Legendre order out of range");
    let table = RULES.get_or_init(|| (0..=MAX_ORDER).map(|_| OnceLock::new()).collect());
    table[n].get_or_init(|| compute_rule(n))
}

/// A list of (node, weight) pairs.
pub type Rule = Vec<(f64, f64)>;

/// Gauss-Legendre rule of order `n` mapped to [a, b].
pub fn gl_interval(a: f64, b: f64, n: usize) -> Rule {
    let g = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    g.nodes.iter().zip(&g.weights).map(|(x, w)| (c + h * x, h * w)).collect()
}

/// Integrate `f` over [a, b] with a single Gauss-Legendre panel.
pub fn gl<F: FnMut(f64) -> f64>(a: f64, b: f64, n: usize, mut f: F) -> f64 {
    let g = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let mut s = 0.0;
    for (x, w) in g.nodes.iter().zip(&g.weights) {
        s += w * f(c + h * x);
    }
    s * h
}

/// Parameters of a geometrically graded composite rule.
#[derive(Debug, Clone, Copy)]
pub struct Grading {
    /// Number of geometric layers towards a graded endpoint.
    pub levels: usize,
    /// Ratio between successive layers.
    pub ratio: f64,
    /// Gauss order per panel.
    pub order: usize,
    /// Number of uniform panels in the ungraded bulk.
    pub bulk_panels: usize,
}

impl Grading {
    pub const fn new(levels: usize, order: usize) -> Self {
        Grading { levels, ratio: 0.2, order, bulk_panels: 1 }
    }

    /// A finer variant used for error estimation.
    pub fn refined(&self) -> Self {
        Grading {
            levels: self.levels + self.levels / 2 + 2,
            ratio: self.ratio,
            order: (self.order + self.order / 2).min(MAX_ORDER),
            bulk_panels: self.bulk_panels * 2,
        }
    }
}

impl Default for Grading {
    fn default() -> Self {
        Grading::new(14, 10)
    }
}

fn push_panels(rule: &mut Rule, a: f64, b: f64, panels: usize, order: usize) {
    let h = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + h * i as f64;
        rule.extend(gl_interval(lo, lo + h, order));
    }
}

/// Composite rule on [a, b] graded geometrically towards the endpoints
/// selected by `left` and `right`. Handles integrable power singularities.
pub fn graded_rule(a: f64, b: f64, left: bool, right: bool, g: &Grading) -> Rule {
    let mut rule = Rule::new();
    if b <= a {
        return rule;
    }
    let (lo, hi) = match (left, right) {
        (false, false) => {
            push_panels(&mut rule, a, b, g.bulk_panels, g.order);
            return rule;
        }
        (true, false) => (a, b),
        (false, true) => (a, b),
        (true, true) => (a, 0.5 * (a + b)),
    };
    let graded_half = |rule: &mut Rule, from: f64, to: f64| {
        // panels shrinking towards `from`
        let len = to - from;
        let mut edges = vec![0.0];
        for k in (0..g.levels).rev() {
            edges.push(g.ratio.powi(k as i32 + 1));
        }
        edges.push(1.0);
        for w in edges.windows(2) {
            let (x0, x1) = (from + len * w[0], from + len * w[1]);
            if w[1] == 1.0 {
                let (p, q) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
                push_panels(rule, p, q, g.bulk_panels, g.order);
            } else if w[0] == 0.0 {
                // innermost panel: x = from + (x1 - from) u^10 removes power singularities
                let gr = gauss_legendre(g.order);
                let span = x1 - from;
                for (u, wt) in gr.nodes.iter().zip(&gr.weights) {
                    let u = 0.5 * (u + 1.0);
                    let u9 = u.powi(9);
                    rule.push((from + span * u9 * u, 0.5 * wt * 10.0 * u9 * span.abs()));
                }
            } else {
                let (p, q) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
                rule.extend(gl_interval(p, q, g.order));
            }
        }
    };
    match (left, right) {
        (true, false) => graded_half(&mut rule, lo, hi),
        (false, true) => graded_half(&mut rule, hi, lo),
        _ => {
            graded_half(&mut rule, a, 0.5 * (a + b));
            graded_half(&mut rule, b, 0.5 * (a + b));
        }
    }
    rule
}

/// Apply a rule to a function.
pub fn apply<F: FnMut(f64) -> f64>(rule: &Rule, mut f: F) -> f64 {
    rule.iter().map(|&(x, w)| w * f(x)).sum()
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] =
    [0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975, 0.417959183673469387755102040816327];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        rk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            rg += WG[j / 2] * (f1 + f2);
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over [a, b].
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> QuadResult {
    adaptive_points(&mut f, &[a, b], abs_tol, rel_tol, max_intervals)
}

/// Adaptive integration with user-supplied breakpoints.
pub fn adaptive_points<F: FnMut(f64) -> f64>(f: &mut F, points: &[f64], abs_tol: f64, rel_tol: f64, max_intervals: usize) -> QuadResult {
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (v, e) = gk15(f, w[0], w[1]);
            intervals.push((w[0], w[1], v, e));
        }
    }
    let mut evals = 15 * intervals.len();
    loop {
        let total: f64 = intervals.iter().map(|x| x.2).sum();
        let err: f64 = intervals.iter().map(|x| x.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || intervals.len() >= max_intervals {
            return QuadResult { value: total, error: err, evaluations: evals };
        }
        let (idx, _) = intervals.iter().enumerate().max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal)).expect("non-empty");
        let (a, b, _, _) = intervals[idx];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            // interval cannot be split further
            return QuadResult { value: total, error: err, evaluations: evals };
        }
        intervals.swap_remove(idx);
        let (v1, e1) = gk15(f, a, m);
        let (v2, e2) = gk15(f, m, b);
        evals += 30;
        intervals.push((a, m, v1, e1));
        intervals.push((m, b, v2, e2));
    }
}

/// Adaptive integration over [a, inf): dyadic blocks [c 2^k, c 2^{k+1}]
/// until the blocks decay, with a geometric estimate of the remainder.
pub fn adaptive_semi_infinite<F: FnMut(f64) -> f64>(mut f: F, a: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> QuadResult {
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut start = a;
    if a <= 0.0 {
        let head = adaptive_points(&mut f, &[a, 1.0], abs_tol, rel_tol, max_intervals);
        value += head.value;
        error += head.error;
        evaluations += head.evaluations;
        start = 1.0;
    }
    let mut prev: Option<f64> = None;
    let mut zeros = 0;
    for k in 0..1000 {
        let lo = start * 2f64.powi(k);
        let r = adaptive_points(&mut f, &[lo, 2.0 * lo], abs_tol, rel_tol, max_intervals);
        value += r.value;
        error += r.error;
        evaluations += r.evaluations;
        if r.value == 0.0 {
            zeros += 1;
            if zeros >= 3 {
                break;
            }
            continue;
        }
        zeros = 0;
        if let Some(p) = prev {
            let q = r.value / p;
            if q > 0.0 && q < 1.0 {
                let tail = r.value * q / (1.0 - q);
                if tail.abs() <= abs_tol.max(0.1 * rel_tol * value.abs()) {
                    value += tail;
                    error += 0.5 * tail.abs();
                    break;
                }
            }
        }
        prev = Some(r.value);
    }
    QuadResult { value, error, evaluations }
}

/// Kahan-Babuska (Neumaier) compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 64] {
            let deg = 2 * n - 1;
            let v = gl(-1.0, 2.0, n, |x| x.powi(deg as i32));
            let exact = (2f64.powi(deg as i32 + 1) - (-1f64).powi(deg as i32 + 1)) / (deg as f64 + 1.0);
            assert!((v - exact).abs() < 1e-11 * exact.abs().max(1.0), "n={n}: {v} vs {exact}");
        }
    }

    #[test]
    fn graded_rule_handles_endpoint_power_singularity() {
        for s in [0.1, 0.5, 0.9] {
            let r = graded_rule(0.0, 1.0, true, false, &Grading::new(20, 12));
            let v = apply(&r, |x| x.powf(-s) * (1.0 + x).exp());
            let exact = crate::quad::adaptive(|u: f64| (1.0 + u.powf(1.0 / (1.0 - s))).exp() / (1.0 - s), 0.0, 1.0, 1e-14, 1e-14, 500).value;
            assert!((v - exact).abs() < 1e-9 * exact, "s={s}: {v} vs {exact}");
        }
        let r = graded_rule(0.0, 1.0, true, true, &Grading::new(20, 12));
        let v = apply(&r, |x| x.powf(-0.3) + (1.0 - x).max(0.0).powf(0.5));
        assert!((v - 1.0 / 0.7 - 2.0 / 3.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn adaptive_gauss_kronrod_matches_closed_forms() {
        let r = adaptive(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12, 1e-12, 200);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-10);
        let r = adaptive_semi_infinite(|x| (-x).exp(), 0.0, 1e-12, 1e-12, 200);
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }
}
