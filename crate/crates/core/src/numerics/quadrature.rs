//! Gauss rules on [-1, 1] and a few integration helpers built on them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `[a, b]` by the affine map of the rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        (
            self.nodes.iter().map(|&x| mid + half * x).collect(),
            self.weights.iter().map(|&w| half * w).collect(),
        )
    }
}

/// Legendre `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The n-point Gauss-Legendre rule on [-1, 1].
///
/// # Panics
/// If `n == 0`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton.
        let theta = PI * (4 * i + 3) as f64 / (4 * n + 2) as f64;
        let nf = n as f64;
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    QuadratureRule { nodes, weights }
}

/// `∫_a^b f(x) sqrt((x-a)(b-x)) dx` by n-point Gauss-Chebyshev of the second
/// kind, exact when `f` is a polynomial of degree < 2n.
pub fn integrate_sqrt_weight<F: FnMut(f64) -> f64>(a: f64, b: f64, n: usize, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for k in 1..=n {
        let th = k as f64 * PI / (n + 1) as f64;
        let s = th.sin();
        acc += s * s * f(mid + half * th.cos());
    }
    acc * PI / (n + 1) as f64 * half * half
}

/// Adaptive Gauss-Legendre (15 vs 30 point panels, bisection) on `[a, b]`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(a: f64, b: f64, tol: f64, f: F) -> f64 {
    let lo = gauss_legendre(15);
    let hi = gauss_legendre(30);
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    while let Some((x0, x1, depth)) = stack.pop() {
        let c = lo.integrate(x0, x1, &f);
        let f_ = hi.integrate(x0, x1, &f);
        let scale = (b - a).abs().max(f64::MIN_POSITIVE);
        if (c - f_).abs() <= tol * (x1 - x0).abs() / scale || depth >= 40 {
            total += f_;
        } else {
            let m = 0.5 * (x0 + x1);
            stack.push((m, x1, depth + 1));
            stack.push((x0, m, depth + 1));
        }
    }
    total
}
