//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for the
//! eigenvalues and inverse iteration for the eigenvectors.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::math;

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// One eigenpair with its unit-norm vector and the residual `‖Tv - λv‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    /// `false` when inverse iteration stopped on the sweep limit.
    pub converged: bool,
}

const MAX_SWEEPS: usize = 50;

impl SymTridiagonal {
    /// # Panics
    /// If `off.len() + 1 != diag.len()` or the matrix is empty.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty matrix");
        assert_eq!(
            off.len() + 1,
            diag.len(),
            "off-diagonal length must be n - 1"
        );
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `T v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * v[i];
            if i > 0 {
                s += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * v[i + 1];
            }
            out[i] = s;
        }
        out
    }

    /// Interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * self.norm().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0.. {
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
            if i + 1 == self.len() {
                break;
            }
            let e = self.off[i];
            q = self.diag[i + 1] - x - e * e / q;
        }
        count
    }

    /// Eigenvalues with indices in `range` (ascending order, zero-based),
    /// each bisected to full double precision.
    pub fn eigenvalues(&self, range: Range<usize>) -> Vec<f64> {
        let n = self.len();
        let range = range.start.min(n)..range.end.min(n);
        let mut out = Vec::with_capacity(range.len());
        if range.is_empty() {
            return out;
        }
        let (lo, hi) = self.gershgorin();
        let pad = 1e-12 * (hi - lo).max(1.0);
        let lo = lo - pad;
        let hi = hi + pad;
        self.split(lo, hi, 0, n, &range, &mut out);
        out
    }

    /// All eigenvalues below `x`.
    pub fn eigenvalues_below(&self, x: f64) -> Vec<f64> {
        self.eigenvalues(0..self.sturm_count(x))
    }

    fn split(
        &self,
        lo: f64,
        hi: f64,
        nlo: usize,
        nhi: usize,
        want: &Range<usize>,
        out: &mut Vec<f64>,
    ) {
        // Eigenvalues with index in nlo..nhi lie in [lo, hi).
        if nhi <= want.start || nlo >= want.end || nlo == nhi {
            return;
        }
        let mid = 0.5 * (lo + hi);
        let converged =
            mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs());
        if converged {
            for k in nlo..nhi {
                if want.contains(&k) {
                    out.push(mid);
                }
            }
            return;
        }
        if nhi - nlo == 1 {
            out.push(self.bisect_single(lo, hi, nlo));
            return;
        }
        let nmid = self.sturm_count(mid);
        self.split(lo, mid, nlo, nmid, want, out);
        self.split(mid, hi, nmid, nhi, want, out);
    }

    fn bisect_single(&self, mut lo: f64, mut hi: f64, index: usize) -> f64 {
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Eigenpairs for the indices in `range`, in ascending order.
    pub fn eigenpairs(&self, range: Range<usize>) -> Vec<Eigenpair> {
        let mut out = Vec::new();
        self.for_each_eigenpair(range, |_, pair| out.push(pair.clone()));
        out
    }

    /// Streams eigenpairs in ascending order without keeping them all in
    /// memory. Vectors of nearly degenerate eigenvalues are orthogonalised
    /// against each other.
    pub fn for_each_eigenpair<F>(&self, range: Range<usize>, mut visit: F)
    where
        F: FnMut(usize, &Eigenpair),
    {
        let start = range.start;
        let values = self.eigenvalues(range);
        let tnorm = self.norm();
        let cluster_gap = 1e-7 * tnorm;
        let mut cluster: Vec<Eigenpair> = Vec::new();
        for (j, &value) in values.iter().enumerate() {
            if let Some(last) = cluster.last() {
                if value - last.value > cluster_gap {
                    cluster.clear();
                }
            }
            let pair = self.inverse_iteration(value, start + j, &cluster, tnorm);
            visit(start + j, &pair);
            cluster.push(pair);
        }
    }

    fn inverse_iteration(
        &self,
        value: f64,
        index: usize,
        cluster: &[Eigenpair],
        tnorm: f64,
    ) -> Eigenpair {
        let n = self.len();
        if n == 1 {
            return Eigenpair {
                value,
                vector: vec![1.0],
                residual: (self.diag[0] - value).abs(),
                converged: true,
            };
        }
        let lu = ShiftedLu::new(self, value, tnorm);
        let mut x = start_vector(n, index);
        let tol = 1e-10 * tnorm.max(1.0);
        let mut residual = f64::INFINITY;
        let mut converged = false;
        for sweep in 0..MAX_SWEEPS {
            lu.solve(&mut x);
            for c in cluster {
                let d = dot(&x, &c.vector);
                for (xi, ci) in x.iter_mut().zip(&c.vector) {
                    *xi -= d * ci;
                }
            }
            normalise(&mut x);
            residual = self.residual(&x, value);
            if sweep >= 1 && residual <= tol {
                converged = true;
                break;
            }
        }
        // Fix the overall sign so results are reproducible: first
        // significant component positive.
        let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-3 * big) {
            if *first < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
        }
        Eigenpair {
            value,
            vector: x,
            residual,
            converged,
        }
    }

    fn residual(&self, x: &[f64], value: f64) -> f64 {
        let tx = self.apply(x);
        let s: f64 = tx
            .iter()
            .zip(x)
            .map(|(a, b)| (a - value * b) * (a - value * b))
            .sum();
        math::sqrt(s)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalise(x: &mut [f64]) {
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if big == 0.0 || !big.is_finite() {
        return;
    }
    x.iter_mut().for_each(|v| *v /= big);
    let norm = math::sqrt(dot(x, x));
    x.iter_mut().for_each(|v| *v /= norm);
}

/// Deterministic pseudo-random start vector (xorshift).
fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    let mut s: u64 = 0x9E37_79B9_7F4A_7C15 ^ (seed as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

/// LU factorisation with partial pivoting of `T - σI`.
struct ShiftedLu {
    d: Vec<f64>,
    dl: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swap: Vec<bool>,
}

impl ShiftedLu {
    fn new(t: &SymTridiagonal, sigma: f64, tnorm: f64) -> Self {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - sigma).collect();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swap = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swap[i] = true;
            }
        }
        let tiny = f64::EPSILON * tnorm.max(f64::MIN_POSITIVE);
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            d,
            dl,
            du,
            du2,
            swap,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swap[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        // Keep the iterate finite even for an exactly singular shift.
        if b.iter().any(|v| !v.is_finite()) {
            for v in b.iter_mut() {
                if !v.is_finite() {
                    *v = if v.is_sign_negative() { -1.0 } else { 1.0 };
                } else {
                    *v = 0.0;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::{PI, SQRT_2};

    #[test]
    fn three_by_three() {
        let t = SymTridiagonal::new(vec![2.0; 3], vec![-1.0; 2]);
        let ev = t.eigenvalues(0..3);
        assert_relative_eq!(ev[0], 2.0 - SQRT_2, epsilon = 1e-12);
        assert_relative_eq!(ev[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(ev[2], 2.0 + SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn laplacian_spectrum_and_vectors() {
        let n = 200;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]);
        let pairs = t.eigenpairs(0..n);
        for (k, p) in pairs.iter().enumerate() {
            let exact = 2.0 - 2.0 * (PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((p.value - exact).abs() < 1e-12, "{k}");
            assert!(p.converged);
            assert!(p.residual < 1e-10);
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max(dot(&pairs[i].vector, &pairs[j].vector).abs());
            }
            assert_relative_eq!(
                dot(&pairs[i].vector, &pairs[i].vector),
                1.0,
                epsilon = 1e-12
            );
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn sturm_count_matches_returned_values() {
        let n = 300;
        let diag: Vec<f64> = (0..n).map(|i| ((i * 7919) % 101) as f64 * 0.1).collect();
        let off: Vec<f64> = (0..n - 1)
            .map(|i| 0.3 + ((i * 31) % 17) as f64 * 0.01)
            .collect();
        let t = SymTridiagonal::new(diag, off);
        for x in [-1.0, 0.5, 3.0, 5.0, 9.9, 20.0] {
            let below = t.eigenvalues_below(x);
            assert_eq!(below.len(), t.sturm_count(x));
            assert!(below.iter().all(|&v| v < x));
        }
        let all = t.eigenvalues(0..n);
        assert!(all.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn degenerate_blocks() {
        // Two decoupled identical blocks give exact double eigenvalues.
        let t = SymTridiagonal::new(vec![2.0; 6], vec![-1.0, -1.0, 0.0, -1.0, -1.0]);
        let pairs = t.eigenpairs(0..6);
        for i in 0..6 {
            for j in 0..i {
                assert!(dot(&pairs[i].vector, &pairs[j].vector).abs() < 1e-10);
            }
        }
        assert_relative_eq!(pairs[0].value, pairs[1].value, epsilon = 1e-14);
    }

    #[test]
    fn single_element() {
        let t = SymTridiagonal::new(vec![3.5], vec![]);
        let p = t.eigenpairs(0..1);
        assert_eq!(p[0].value, 3.5);
        assert_eq!(p[0].vector, vec![1.0]);
    }
}
