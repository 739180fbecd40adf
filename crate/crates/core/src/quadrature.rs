//! Gauss–Legendre panels, geometric grading and periodic angular grids.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{cos, KahanSum, KahanSumC, PI, TAU};

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from Chebyshev-like starting
    /// guesses; weights from `2 / ((1 - x²) P_n'(x)²)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        // ascending order
        nodes.reverse();
        weights.reverse();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(node, weight)` pairs mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mut acc = KahanSum::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(w * f(x));
        }
        acc.value()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        let mut acc = KahanSumC::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(f(x) * w);
        }
        acc.value()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
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

/// Panel edges on `[lo, hi]` whose widths grow geometrically by `ratio`
/// away from `lo`, starting with a panel of width `lo * (ratio - 1)`
/// (or `first` when `lo == 0`).
pub fn graded_edges(lo: f64, hi: f64, ratio: f64, first: f64) -> Vec<f64> {
    assert!(hi > lo && ratio > 1.0);
    let mut edges = alloc::vec![lo];
    let mut width = if lo > 0.0 { lo * (ratio - 1.0) } else { first };
    let mut x = lo;
    loop {
        let next = x + width;
        if next >= hi * (1.0 - 1e-12) {
            edges.push(hi);
            break;
        }
        edges.push(next);
        x = next;
        width *= ratio;
    }
    edges
}

/// Like [`graded_edges`] but panel widths stop growing at `max_width`, so a
/// smooth but localised integrand keeps enough nodes far from `lo`.
pub fn graded_capped_edges(lo: f64, hi: f64, ratio: f64, first: f64, max_width: f64) -> Vec<f64> {
    assert!(hi > lo && ratio > 1.0 && max_width > 0.0);
    let mut edges = alloc::vec![lo];
    let mut width = (if lo > 0.0 { lo * (ratio - 1.0) } else { first }).min(max_width);
    let mut x = lo;
    loop {
        let next = x + width;
        // fold a sliver into the final panel
        if next >= hi - 0.25 * width {
            edges.push(hi);
            break;
        }
        edges.push(next);
        x = next;
        width = (width * ratio).min(max_width);
    }
    edges
}

/// Integrates over consecutive panels, summing in panel order.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    edges: &[f64],
    mut f: F,
) -> f64 {
    let mut acc = KahanSum::new();
    for w in edges.windows(2) {
        acc.add(rule.integrate(w[0], w[1], &mut f));
    }
    acc.value()
}

/// Uniform periodic nodes `θ_k = 2πk/n` with weight `2π/n`; exact for
/// trigonometric polynomials of degree `< n`.
pub fn angular_nodes(n: usize) -> impl Iterator<Item = (f64, f64)> {
    let w = TAU / n as f64;
    (0..n).map(move |k| (w * k as f64, w))
}
