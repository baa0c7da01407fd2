//! Painlevé representations of the sine and Airy determinants.

use std::f64::consts::PI;

use super::KernelsError;
use crate::numerics::{airy_ai, integrate_ode, NumericsError};

/// Starting point of the σ-ODE.
pub const SIGMA_X0: f64 = 1e-4;
/// Starting point of the backward Hastings–McLeod integration.
pub const HM_START: f64 = 8.0;
/// Left end of the validated Hastings–McLeod range.
pub const HM_MIN: f64 = -8.0;

const ODE_TOL: f64 = 1e-13;

/// Taylor coefficients `a_1..a_7` of σ(x, λ) at x = 0, with `l = λ/π`.
fn sigma_series(lambda: f64) -> [f64; 7] {
    let l = lambda / PI;
    let l2 = l * l;
    [
        -l,
        -l2,
        -l2 * l,
        -l2 * l2 + l2 / 9.0,
        l2 * l * (5.0 / 36.0 - l2),
        l2 * (-l2 * l2 + l2 / 6.0 - 2.0 / 225.0),
        l2 * l * (-2700.0 * l2 * l2 + 525.0 * l2 - 28.0) / 2700.0,
    ]
}

/// `ln det(Id − λ K_sine)` on `[0, s]` from the σ-form of Painlevé V.
///
/// σ is started from its Taylor series at `x₀ = 1e−4` and continued with the
/// differentiated equation `xσ''' = −σ'' − 2A − 2B(1 + 2σ'/x)`,
/// `B = xσ' − σ`, `A = B + σ'²`, which conserves the original first-order
/// invariant. `∫σ/x` is carried along as a fourth component.
pub fn painleve_v_sigma(s: f64, lambda: f64) -> Result<f64, KernelsError> {
    if !(s > 0.0) || !(lambda > 0.0 && lambda <= 1.0) {
        return Err(KernelsError::InvalidProblem(format!("s = {s}, lambda = {lambda}")));
    }
    let a = sigma_series(lambda);
    let x_end = PI * s;
    let x0 = SIGMA_X0.min(0.5 * x_end);
    let (mut sig, mut d1, mut d2, mut head) = (0.0, 0.0, 0.0, 0.0);
    for (i, &ak) in a.iter().enumerate() {
        let k = (i + 1) as i32;
        sig += ak * x0.powi(k);
        d1 += f64::from(k) * ak * x0.powi(k - 1);
        if k >= 2 {
            d2 += f64::from(k * (k - 1)) * ak * x0.powi(k - 2);
        }
        head += ak * x0.powi(k) / f64::from(k);
    }
    let rhs = |x: f64, y: &[f64], dy: &mut [f64]| {
        let (sg, s1, s2) = (y[0], y[1], y[2]);
        let b = x * s1 - sg;
        let a = b + s1 * s1;
        dy[0] = s1;
        dy[1] = s2;
        dy[2] = (-s2 - 2.0 * a - 2.0 * b * (1.0 + 2.0 * s1 / x)) / x;
        dy[3] = sg / x;
    };
    let tr = integrate_ode(rhs, &[sig, d1, d2, head], x0, x_end, &[], ODE_TOL)?;
    Ok(tr.last()[3])
}

/// State `(q, q', ∫ₓ^∞ q², ∫ₓ^∞ (t − x) q²)` at `s`, integrated backward
/// from [`HM_START`] in units of `Ai(HM_START)`.
fn hastings_mcleod(s: f64) -> Result<[f64; 4], KernelsError> {
    if s < HM_MIN {
        return Err(NumericsError::StepUnderflow { t: HM_MIN }.into());
    }
    let a = airy_ai(HM_START);
    let c = a.ai;
    let x = HM_START;
    // Airy tails: ∫ Ai² = Ai'² − xAi², ∫ (t − x)Ai² = (2x²Ai² − 2xAi'² − AiAi')/3
    let p = a.aip / c;
    let i1 = p * p - x;
    let j = (2.0 * x * x - 2.0 * x * p * p - p) / 3.0;
    let c2 = c * c;
    let rhs = move |x: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = x * y[0] + 2.0 * c2 * y[0].powi(3);
        dy[2] = -y[0] * y[0];
        dy[3] = -y[2];
    };
    let tr = integrate_ode(rhs, &[1.0, p, i1, j], x, s, &[], ODE_TOL)?;
    let y = tr.last();
    Ok([c * y[0], c * y[1], c2 * y[2], c2 * y[3]])
}

/// The Hastings–McLeod solution `q(s)` of `q'' = sq + 2q³`, `q ~ Ai`.
pub fn painleve_ii_hm(s: f64) -> Result<f64, KernelsError> {
    Ok(hastings_mcleod(s)?[0])
}

/// Tracy–Widom distribution as `exp(−∫ₛ^∞ (x − s) q(x)² dx)`.
pub fn tw_cdf_painleve(s: f64) -> Result<f64, KernelsError> {
    if s >= HM_START {
        let a = airy_ai(s);
        let j = (2.0 * s * s * a.ai * a.ai - 2.0 * s * a.aip * a.aip - a.ai * a.aip) / 3.0;
        return Ok((-j).exp());
    }
    Ok((-hastings_mcleod(s)?[3]).exp())
}
