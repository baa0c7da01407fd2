//! Universal laws: sine and Airy kernels, their Fredholm determinants, the
//! Gaudin spacing law, Tracy–Widom, and the two-point cluster functions.

mod painleve;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::numerics::{airy_ai, gauss_legendre, NumericsError};
use crate::numerics::quadrature::integrate_adaptive;

pub use painleve::{painleve_ii_hm, painleve_v_sigma, tw_cdf_painleve, HM_MIN, HM_START, SIGMA_X0};

/// `Ai(x)² < AIRY_TAIL` marks where the Airy interval is cut off.
pub const AIRY_TAIL: f64 = 1e-18;
/// Largest admissible Airy truncation point.
pub const AIRY_TRUNCATION_MAX: f64 = 200.0;
/// Quadrature order used by the law helpers.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelsError {
    #[error("invalid gap problem: {0}")]
    InvalidProblem(String),
    #[error("Airy tail does not fall below threshold before x = {0}")]
    TruncationFailure(f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Sine,
    Airy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapProblem {
    pub kind: KernelKind,
    pub interval: [f64; 2],
    pub lambda: f64,
    pub order: usize,
}

impl GapProblem {
    pub fn sine(lo: f64, hi: f64, order: usize) -> Self {
        GapProblem {
            kind: KernelKind::Sine,
            interval: [lo, hi],
            lambda: 1.0,
            order,
        }
    }

    /// `[s, +∞)` for the Airy kernel.
    pub fn airy(s: f64, order: usize) -> Self {
        GapProblem {
            kind: KernelKind::Airy,
            interval: [s, f64::INFINITY],
            lambda: 1.0,
            order,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn validate(&self) -> Result<(), KernelsError> {
        let [lo, hi] = self.interval;
        if lo.is_nan() || hi.is_nan() || lo > hi || lo.is_infinite() {
            return Err(KernelsError::InvalidProblem(format!("interval [{lo}, {hi}]")));
        }
        if hi.is_infinite() && self.kind == KernelKind::Sine {
            return Err(KernelsError::InvalidProblem("sine kernel needs a finite interval".into()));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(KernelsError::InvalidProblem(format!("lambda = {}", self.lambda)));
        }
        if self.order < 8 {
            return Err(KernelsError::InvalidProblem(format!("order = {}", self.order)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FredholmResult {
    pub value: f64,
    pub err_estimate: f64,
}

/// `sin(πu)/(πu)`.
pub fn sinc_pi(u: f64) -> f64 {
    let x = PI * u;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// d/du of `sin(πu)/(πu)`.
fn sinc_pi_derivative(u: f64) -> f64 {
    let x = PI * u;
    if x.abs() < 1e-4 {
        PI * (-x / 3.0 + x * x * x / 30.0)
    } else {
        PI * (x * x.cos() - x.sin()) / (x * x)
    }
}

pub fn sine_kernel(x: f64, y: f64) -> f64 {
    sinc_pi(x - y)
}

pub fn airy_kernel(x: f64, y: f64) -> f64 {
    let a = airy_ai(x);
    let d = x - y;
    if d.abs() < 1e-7 {
        // K(x, x + δ) = K(x, x) − δ Ai(x)²/2 + O(δ²)
        return a.aip * a.aip - x * a.ai * a.ai + 0.5 * d * a.ai * a.ai;
    }
    let b = airy_ai(y);
    (a.ai * b.aip - a.aip * b.ai) / d
}

/// First point past `lo` (on a 1/8 grid) where `Ai² < AIRY_TAIL`.
pub fn airy_truncation(lo: f64) -> Result<f64, KernelsError> {
    let mut x = lo.max(0.0);
    while airy_ai(x).ai.powi(2) >= AIRY_TAIL {
        x += 0.125;
        if x > AIRY_TRUNCATION_MAX {
            return Err(KernelsError::TruncationFailure(AIRY_TRUNCATION_MAX));
        }
    }
    Ok(x.max(lo))
}

fn nystrom(kind: KernelKind, lo: f64, hi: f64, lambda: f64, order: usize) -> f64 {
    if hi <= lo {
        return 1.0;
    }
    let (x, w) = gauss_legendre(order).mapped(lo, hi);
    let kernel = match kind {
        KernelKind::Sine => sine_kernel,
        KernelKind::Airy => airy_kernel,
    };
    let sw: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let m = DMatrix::from_fn(order, order, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - lambda * sw[i] * sw[j] * kernel(x[i], x[j])
    });
    m.determinant()
}

/// `det(Id − λK)` on the problem's interval by Gauss–Legendre Nyström, with
/// the difference to the doubled order as error estimate.
pub fn fredholm_det(p: &GapProblem) -> Result<FredholmResult, KernelsError> {
    p.validate()?;
    let [lo, mut hi] = p.interval;
    if p.kind == KernelKind::Airy {
        hi = hi.min(airy_truncation(lo)?);
    }
    let value = nystrom(p.kind, lo, hi, p.lambda, p.order);
    let fine = nystrom(p.kind, lo, hi, p.lambda, 2 * p.order);
    Ok(FredholmResult {
        value,
        err_estimate: (value - fine).abs(),
    })
}

/// `E(s) = det(Id − K_sine)` on `[0, s]`, continued analytically to `s < 0`
/// through the unsymmetrized Nyström matrix.
fn sine_gap(s: f64, order: usize) -> f64 {
    if s >= 0.0 {
        return nystrom(KernelKind::Sine, 0.0, s, 1.0, order);
    }
    let (x, w) = gauss_legendre(order).mapped(0.0, s);
    let m = DMatrix::from_fn(order, order, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - w[j] * sine_kernel(x[i], x[j])
    });
    m.determinant()
}

fn gaudin_step(s: f64) -> f64 {
    (s * 1e-3).max(1e-3)
}

/// Spacing density `p(s) = E''(s)`, central difference with one
/// Richardson step.
pub fn gaudin_density(s: f64) -> f64 {
    let h = gaudin_step(s);
    let e0 = sine_gap(s, DEFAULT_ORDER);
    let d2 = |h: f64| (sine_gap(s + h, DEFAULT_ORDER) - 2.0 * e0 + sine_gap(s - h, DEFAULT_ORDER)) / (h * h);
    (4.0 * d2(h / 2.0) - d2(h)) / 3.0
}

/// Spacing distribution `∫₀ˢ p = 1 + E'(s)`.
pub fn gaudin_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let h = gaudin_step(s);
    let d1 = |h: f64| (sine_gap(s + h, DEFAULT_ORDER) - sine_gap(s - h, DEFAULT_ORDER)) / (2.0 * h);
    1.0 + (4.0 * d1(h / 2.0) - d1(h)) / 3.0
}

/// Tracy–Widom β=2 distribution, `det(Id − K_Airy)` on `[s, ∞)`.
pub fn tw_cdf(s: f64) -> Result<f64, KernelsError> {
    let p = GapProblem::airy(s, DEFAULT_ORDER);
    p.validate()?;
    let hi = airy_truncation(s)?;
    Ok(nystrom(KernelKind::Airy, s, hi, 1.0, DEFAULT_ORDER))
}

/// Both routes at `s`: `(fredholm, painleve)`.
pub fn tw_cdf_both(s: f64) -> Result<(f64, f64), KernelsError> {
    Ok((tw_cdf(s)?, tw_cdf_painleve(s)?))
}

pub fn wigner_surmise(x: f64) -> f64 {
    0.5 * PI * x * (-0.25 * PI * x * x).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Hermitian,
    RealSymmetric,
    Quaternionic,
}

/// `∫₀^r sin(πs)/(πs) ds`.
fn sine_integral(r: f64) -> f64 {
    integrate_adaptive(0.0, r, 1e-14, sinc_pi)
}

/// Two-point cluster function `W₂(r)` of the unfolded bulk.
pub fn cluster_w2(r: f64, ensemble: Ensemble) -> f64 {
    match ensemble {
        Ensemble::Hermitian => 1.0 - sinc_pi(r).powi(2),
        Ensemble::RealSymmetric => {
            let tail = 0.5 - sine_integral(r);
            1.0 - sinc_pi(r).powi(2) - tail * sinc_pi_derivative(r)
        }
        Ensemble::Quaternionic => {
            // ∫₀^r sinc(2πs) ds = (1/2) ∫₀^{2r} sinc(πt) dt, d/dr sinc(2πr) = 2 sinc'(2r)
            let head = 0.5 * sine_integral(2.0 * r);
            1.0 - sinc_pi(2.0 * r).powi(2) + head * 2.0 * sinc_pi_derivative(2.0 * r)
        }
    }
}

#[cfg(test)]
mod tests;
