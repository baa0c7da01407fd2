//! The double-scaling limit curve near a singular critical point.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equilibrium::SpectralCurveG0;
use crate::numerics::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaledCurveSpec {
    pub m: u32,
    pub b: f64,
    pub epsilon: f64,
    pub gamma: Complex64,
}

impl RescaledCurveSpec {
    pub fn new(m: u32, b: f64, epsilon: f64) -> Self {
        RescaledCurveSpec {
            m,
            b,
            epsilon,
            gamma: gamma(m, b, epsilon),
        }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// The root `γ = |r|^{1/2m} e^{iπ/2m}` of `γ^{2m} = r`,
/// `r = −(m!)² 2^{2m+1} / (b²(1 − ε²)(2m)!)`.
pub fn gamma(m: u32, b: f64, epsilon: f64) -> Complex64 {
    let r = factorial(m).powi(2) * 2f64.powi(2 * m as i32 + 1) / (b * b * (1.0 - epsilon * epsilon) * factorial(2 * m));
    Complex64::from_polar(r.powf(1.0 / (2.0 * f64::from(m))), PI / (2.0 * f64::from(m)))
}

/// `ξ^{2m−1} + Σ_{n=1}^{m−1} (2n)!/(n!² 2^{2n}) γ^{2n} ξ^{2m−1−2n}`.
fn bracket(m: u32, g: Complex64) -> Polynomial {
    let deg = 2 * m as usize - 1;
    let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
    c[deg] = Complex64::new(1.0, 0.0);
    for n in 1..m {
        let w = factorial(2 * n) / (factorial(n).powi(2) * 2f64.powi(2 * n as i32));
        c[deg - 2 * n as usize] = w * g.powu(2 * n);
    }
    Polynomial::new(c)
}

/// `ξ(z) = (γ/2)(z + 1/z)`, `y = bπ sqrt(1 − ε²) sqrt(γ² − ξ²) · bracket(ξ)`
/// with `sqrt(γ² − ξ²) = (γ/2i)(z − 1/z)`.
pub fn rescaled_curve(spec: &RescaledCurveSpec) -> SpectralCurveG0 {
    let k = spec.b * PI * (1.0 - spec.epsilon * spec.epsilon).sqrt();
    // from_polynomial uses y = −(1/2) P(ξ) (γ/2)(z − 1/z), so P = 2ik · bracket
    let p = bracket(spec.m, spec.gamma).scale(Complex64::new(0.0, 2.0 * k));
    SpectralCurveG0::from_polynomial(Complex64::new(0.0, 0.0), spec.gamma, &p)
}

/// Closed-form two-point resolvent of the rescaled curve,
/// `(1/(4(ξ1 − ξ2)²)) (−2 + sqrt(r) + sqrt(1/r))` with
/// `r = (γ + ξ1)(γ − ξ2)/((γ − ξ1)(γ + ξ2))`, principal square roots.
pub fn w20_xi(gamma: Complex64, xi1: Complex64, xi2: Complex64) -> Complex64 {
    let r = (gamma + xi1) * (gamma - xi2) / ((gamma - xi1) * (gamma + xi2));
    let d = xi1 - xi2;
    (-2.0 + r.sqrt() + (1.0 / r).sqrt()) / (4.0 * d * d)
}
