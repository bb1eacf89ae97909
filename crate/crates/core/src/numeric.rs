//! Small numerical building blocks shared by the physics modules: bracketing
//! root finders, Gauss–Legendre rules and quadrature for integrands with
//! square-root behaviour at turning points.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Bisection on a sign change of `f` in `[a, b]`.
///
/// Stops when the bracket is narrower than `tol` or when the midpoint can no
/// longer be distinguished from an endpoint in floating point, so `tol = 0.0`
/// refines to full precision.
pub fn bisect<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { a: lo, b: hi });
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max<F>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = 0.5 * (math::sqrt(5.0) - 1.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Geometric grid of `n` points spanning `[lo, hi]`, both ends included.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo && n >= 2);
    let ratio = math::ln(hi / lo) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo * math::exp(ratio * i as f64)
            }
        })
        .collect()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on the Legendre
    /// polynomial, starting from the Chebyshev-like asymptotic guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F>(&self, f: &mut F, a: f64, b: f64) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Composite rule over `panels` equal sub-intervals.
    pub fn composite<F>(&self, f: &mut F, a: f64, b: f64, panels: usize) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + width * k as f64;
                let hi = if k + 1 == panels { b } else { lo + width };
                self.integrate(f, lo, hi)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// How each end of an integration interval behaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    /// The integrand is smooth at this end.
    Regular,
    /// The integrand behaves like `sqrt(|x - x_t|)` or `1/sqrt(|x - x_t|)`
    /// (a classical turning point); the end is regularised by `x = x_t ± s²`.
    TurningPoint,
}

/// Quadrature for integrands with square-root behaviour at turning points.
///
/// Near a turning-point end the substitution `x = x_t ± s²` makes both
/// `sqrt(x - x_t)` and `1/sqrt(x - x_t)` smooth in `s`; each half of the
/// interval is then integrated with a composite Gauss–Legendre rule, doubling
/// the panel count until two successive estimates agree to `rel_tol`.
#[derive(Debug, Clone)]
pub struct TurningPointQuadrature {
    rule: GaussLegendre,
    rel_tol: f64,
    max_panels: usize,
}

impl Default for TurningPointQuadrature {
    fn default() -> Self {
        Self::new(64, 1e-11)
    }
}

impl TurningPointQuadrature {
    pub fn new(order: usize, rel_tol: f64) -> Self {
        Self {
            rule: GaussLegendre::new(order),
            rel_tol,
            max_panels: 512,
        }
    }

    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64, ends: (Endpoint, Endpoint)) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        if b <= a {
            return 0.0;
        }
        let mut coarse = self.estimate(&mut f, a, b, ends, 1);
        let mut panels = 2;
        loop {
            let fine = self.estimate(&mut f, a, b, ends, panels);
            let scale = fine.abs().max(1e-300);
            if (fine - coarse).abs() <= self.rel_tol * scale || panels >= self.max_panels {
                return fine;
            }
            coarse = fine;
            panels *= 2;
        }
    }

    fn estimate<F>(
        &self,
        f: &mut F,
        a: f64,
        b: f64,
        ends: (Endpoint, Endpoint),
        panels: usize,
    ) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let mid = 0.5 * (a + b);
        let left = match ends.0 {
            Endpoint::Regular => self.rule.composite(f, a, mid, panels),
            Endpoint::TurningPoint => {
                let mut g = |s: f64| 2.0 * s * f(a + s * s);
                self.rule
                    .composite(&mut g, 0.0, math::sqrt(mid - a), panels)
            }
        };
        let right = match ends.1 {
            Endpoint::Regular => self.rule.composite(f, mid, b, panels),
            Endpoint::TurningPoint => {
                let mut g = |s: f64| 2.0 * s * f(b - s * s);
                self.rule
                    .composite(&mut g, 0.0, math::sqrt(b - mid), panels)
            }
        };
        left + right
    }
}

/// Trapezoid rule over tabulated `(x, y)` samples.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Ordinary least-squares line `y = intercept + slope * x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    let slope = sxy / sxx;
    (mean_y - slope * mean_x, slope)
}
