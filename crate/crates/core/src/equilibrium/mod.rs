//! Equilibrium measures of polynomial potentials with one or two cuts.
//!
//! With `f = V'/T` and `σ(x) = Π (x − e)` over the 2q endpoints, the density
//! is `ρ = (1/2π) |h| sqrt|σ|` on the support where `h = Pol(f/√σ)`. The
//! endpoints solve the moment conditions `[x^{-k}](f/√σ) = 0` for
//! `k = 1..q`, `[x^{-q-1}](f/√σ) = 2`, and for two cuts the vanishing of
//! `∫ h √σ` across the gap.

mod curve;

pub use curve::{build_spectral_curve, SpectralCurveG0};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::numerics::quadrature::integrate_sqrt_weight;
use crate::numerics::{gauss_legendre, Polynomial};
use crate::potentials::Potential;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EquilibriumError {
    #[error("V' has degree {dv} but {q} cuts need at least {q}")]
    DegreeMismatch { dv: usize, q: usize },
    #[error("cuts must be ordered, disjoint and non-degenerate")]
    InvalidCuts,
    #[error("temperature must be positive and finite, got {0}")]
    BadTemperature(f64),
    #[error("no one-cut solution: {0}")]
    NoOneCutSolution(String),
    #[error("no two-cut solution: {0}")]
    NoTwoCutSolution(String),
    #[error("neither one nor two cuts support the equilibrium measure")]
    Unsolved,
    #[error("spectral curve needs one cut, measure has {0}")]
    GenusUnsupported(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub a: f64,
    pub b: f64,
}

impl Cut {
    pub fn new(a: f64, b: f64) -> Self {
        Cut { a, b }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    Regular,
    Singular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson", into = "MeasureJson")]
pub struct EquilibriumMeasure {
    pub cuts: Vec<Cut>,
    pub h: Polynomial,
    pub temperature: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    cuts: Vec<Cut>,
    h: Vec<f64>,
    #[serde(rename = "T")]
    t: f64,
}

impl TryFrom<MeasureJson> for EquilibriumMeasure {
    type Error = EquilibriumError;

    fn try_from(j: MeasureJson) -> Result<Self, Self::Error> {
        check_cuts(&j.cuts)?;
        Ok(EquilibriumMeasure {
            cuts: j.cuts,
            h: Polynomial::from_real(&j.h),
            temperature: j.t,
        })
    }
}

impl From<EquilibriumMeasure> for MeasureJson {
    fn from(m: EquilibriumMeasure) -> Self {
        MeasureJson {
            cuts: m.cuts,
            h: m.h.real_coeffs(),
            t: m.temperature,
        }
    }
}

fn check_cuts(cuts: &[Cut]) -> Result<(), EquilibriumError> {
    if cuts.is_empty() || cuts.iter().any(|c| !(c.a < c.b) || !c.a.is_finite() || !c.b.is_finite()) {
        return Err(EquilibriumError::InvalidCuts);
    }
    if cuts.windows(2).any(|w| !(w[0].b < w[1].a)) {
        return Err(EquilibriumError::InvalidCuts);
    }
    Ok(())
}

fn check_temperature(t: f64) -> Result<(), EquilibriumError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(EquilibriumError::BadTemperature(t))
    }
}

impl EquilibriumMeasure {
    pub fn q(&self) -> usize {
        self.cuts.len()
    }

    /// Sign making `sign · h · sqrt|σ|` the density on cut `i`.
    fn cut_sign(&self, i: usize) -> f64 {
        if (self.q() - 1 - i) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `sqrt|Π (x − e)|` over the endpoints of every cut except `skip`.
    fn other_factor(&self, skip: usize, x: f64) -> f64 {
        self.cuts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .map(|(_, c)| ((x - c.a) * (x - c.b)).abs().sqrt())
            .product()
    }

    pub fn density(&self, x: f64) -> f64 {
        for (i, c) in self.cuts.iter().enumerate() {
            if c.contains(x) {
                let r = ((x - c.a) * (c.b - x)).max(0.0).sqrt();
                return self.cut_sign(i) * self.h.eval_real(x) * r * self.other_factor(i, x) / (2.0 * PI);
            }
        }
        0.0
    }

    /// Mass carried by cut `i` up to `x` (clamped to the cut).
    fn partial_mass(&self, i: usize, x: f64) -> f64 {
        let c = self.cuts[i];
        if x <= c.a {
            return 0.0;
        }
        let half = 0.5 * c.width();
        let mid = 0.5 * (c.a + c.b);
        // x = mid − half cos θ turns the edge square roots into sin θ
        let theta = ((mid - x.min(c.b)) / half).clamp(-1.0, 1.0).acos();
        let sign = self.cut_sign(i);
        let rule = gauss_legendre(96);
        rule.integrate(0.0, theta, |t| {
            let (s, co) = t.sin_cos();
            let xx = mid - half * co;
            sign * self.h.eval_real(xx) * self.other_factor(i, xx) * half * half * s * s / (2.0 * PI)
        })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (0..self.q()).map(|i| self.partial_mass(i, x)).sum()
    }

    /// Mass carried by each cut (filling fractions).
    pub fn cut_masses(&self) -> Vec<f64> {
        (0..self.q()).map(|i| self.partial_mass(i, f64::INFINITY)).collect()
    }

    pub fn mass(&self) -> f64 {
        self.cut_masses().iter().sum()
    }

    /// Smallest value of `sign · h` over 512 Chebyshev points per cut.
    pub fn min_signed_h(&self) -> f64 {
        let mut lo = f64::INFINITY;
        for (i, c) in self.cuts.iter().enumerate() {
            let sign = self.cut_sign(i);
            for k in 0..512 {
                let th = (k as f64 + 0.5) * PI / 512.0;
                let x = 0.5 * (c.a + c.b) - 0.5 * c.width() * th.cos();
                lo = lo.min(sign * self.h.eval_real(x));
            }
        }
        lo
    }

    pub fn support(&self) -> (f64, f64) {
        (self.cuts[0].a, self.cuts[self.q() - 1].b)
    }
}

impl EquilibriumMeasure {
    /// Change of the effective potential `V/T − 2∫ln|x−s|ρ(s)ds` from the
    /// support edge nearest to `x` (outside the support), whose derivative
    /// is `h √σ` on the branch with `√σ ~ x^q` at infinity.
    pub fn effective_potential_rise(&self, x: f64) -> f64 {
        let edges = endpoints_of(&self.cuts);
        let e = edges
            .iter()
            .copied()
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
            .expect("measure has cuts");
        let right = self.cuts.iter().filter(|c| c.a > x).count();
        let sign = if right % 2 == 0 { 1.0 } else { -1.0 };
        let dir = (x - e).signum();
        // t² = |t − e| removes the edge square root
        let rule = gauss_legendre(64);
        rule.integrate(0.0, (x - e).abs().sqrt(), |t| {
            let xx = e + dir * t * t;
            let sig: f64 = edges.iter().map(|&p| (xx - p).abs()).product();
            dir * sign * self.h.eval_real(xx) * sig.sqrt() * 2.0 * t
        })
    }

    /// Smallest effective-potential rise over the real critical points of
    /// the effective potential outside the support.
    pub fn min_outside_rise(&self) -> f64 {
        self.h
            .roots()
            .into_iter()
            .filter(|r| r.im.abs() <= 1e-7 * (1.0 + r.re.abs()))
            .map(|r| r.re)
            .filter(|&x| !self.cuts.iter().any(|c| c.contains(x)))
            .map(|x| self.effective_potential_rise(x))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn density_eval(m: &EquilibriumMeasure, x: f64) -> f64 {
    m.density(x)
}

/// Coefficients `s_k` with `1/sqrt(Π (x − e)) = x^{-n/2} Σ s_k x^{-k}`.
fn inverse_sqrt_series(endpoints: &[f64], len: usize) -> Vec<f64> {
    let mut c = vec![1.0; len];
    for k in 1..len {
        c[k] = c[k - 1] * (2 * k - 1) as f64 / (2 * k) as f64;
    }
    let mut s = vec![0.0; len];
    s[0] = 1.0;
    for &e in endpoints {
        let mut next = vec![0.0; len];
        for (i, &si) in s.iter().enumerate() {
            let mut ek = 1.0;
            for k in 0..len - i {
                next[i + k] += si * c[k] * ek;
                ek *= e;
            }
        }
        s = next;
    }
    s
}

fn scaled_derivative(v: &Potential, t: f64) -> Vec<f64> {
    v.derivative_polynomial().real_coeffs().iter().map(|c| c / t).collect()
}

fn endpoints_of(cuts: &[Cut]) -> Vec<f64> {
    cuts.iter().flat_map(|c| [c.a, c.b]).collect()
}

/// `Σ_j f_j s_{j−q+p}`, the coefficient of `x^{-p}` in `f/√σ` (p may be negative).
fn laurent_coeff(f: &[f64], s: &[f64], q: usize, p: i64) -> f64 {
    f.iter()
        .enumerate()
        .map(|(j, &fj)| {
            let k = j as i64 - q as i64 + p;
            if k >= 0 && (k as usize) < s.len() {
                fj * s[k as usize]
            } else {
                0.0
            }
        })
        .sum()
}

fn h_from_coeffs(f: &[f64], endpoints: &[f64], q: usize) -> Polynomial {
    let deg = f.len() as i64 - 1 - q as i64;
    let s = inverse_sqrt_series(endpoints, f.len() + q + 3);
    if deg < 0 {
        return Polynomial::zero();
    }
    let h: Vec<f64> = (0..=deg).map(|p| laurent_coeff(f, &s, q, -p)).collect();
    Polynomial::from_real(&h)
}

/// `h = Pol((V'/T)/√σ)`, so that `ρ = (1/2π)|h|√|σ|` on the cuts.
pub fn h_from_endpoints(v: &Potential, t: f64, cuts: &[Cut]) -> Result<Polynomial, EquilibriumError> {
    check_temperature(t)?;
    check_cuts(cuts)?;
    let q = cuts.len();
    let dv = v.degree() - 1;
    if dv < q {
        return Err(EquilibriumError::DegreeMismatch { dv, q });
    }
    Ok(h_from_coeffs(&scaled_derivative(v, t), &endpoints_of(cuts), q))
}

/// Endpoint conditions; `None` when the endpoints are out of order.
fn residual(f: &[f64], e: &[f64]) -> Option<Vec<f64>> {
    if e.windows(2).any(|w| !(w[0] < w[1])) || e.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let q = e.len() / 2;
    let s = inverse_sqrt_series(e, f.len() + q + 3);
    let mut r: Vec<f64> = (1..=q as i64).map(|p| laurent_coeff(f, &s, q, p)).collect();
    r.push(laurent_coeff(f, &s, q, q as i64 + 1) - 2.0);
    if q == 2 {
        let h = h_from_coeffs(f, e, q);
        let (a1, b1, a2, b2) = (e[0], e[1], e[2], e[3]);
        r.push(integrate_sqrt_weight(b1, a2, 128, |x| {
            h.eval_real(x) * ((x - a1) * (b2 - x)).sqrt()
        }));
    }
    Some(r)
}

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 200;
const NEWTON_HALVINGS: usize = 8;

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Damped Newton with a central-difference Jacobian.
fn newton(f: &[f64], start: &[f64]) -> Option<Vec<f64>> {
    let n = start.len();
    let mut x = start.to_vec();
    let mut fx = residual(f, &x)?;
    for _ in 0..NEWTON_MAX_ITER {
        let norm = max_norm(&fx);
        if norm < NEWTON_TOL {
            return Some(x);
        }
        let mut jac = DMatrix::zeros(n, n);
        for k in 0..n {
            let step = 1e-7 * x[k].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += step;
            xm[k] -= step;
            let (rp, rm) = (residual(f, &xp)?, residual(f, &xm)?);
            for i in 0..n {
                jac[(i, k)] = (rp[i] - rm[i]) / (2.0 * step);
            }
        }
        let rhs = DVector::from_iterator(n, fx.iter().map(|v| -v));
        let dx = jac.lu().solve(&rhs)?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=NEWTON_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, d)| a + lambda * d).collect();
            if let Some(ft) = residual(f, &trial) {
                if max_norm(&ft) < norm {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let (nx, nf) = accepted?;
        x = nx;
        fx = nf;
    }
    (max_norm(&fx) < NEWTON_TOL).then_some(x)
}

const NEGATIVE_DENSITY_TOL: f64 = -1e-10;

fn finish(f: &[f64], e: Vec<f64>, t: f64) -> Result<EquilibriumMeasure, String> {
    let q = e.len() / 2;
    let cuts: Vec<Cut> = e.chunks(2).map(|c| Cut::new(c[0], c[1])).collect();
    let m = EquilibriumMeasure {
        h: h_from_coeffs(f, &e, q),
        cuts,
        temperature: t,
    };
    let lo = m.min_signed_h();
    if lo < NEGATIVE_DENSITY_TOL {
        return Err(format!("density negative on the support (min h = {lo:e})"));
    }
    let rise = m.min_outside_rise();
    if rise < NEGATIVE_DENSITY_TOL {
        return Err(format!("effective potential drops below its support value ({rise:e})"));
    }
    Ok(m)
}

fn gaussian_halfwidth(v: &Potential, t: f64, x: f64) -> f64 {
    let k = v.second_derivative(x);
    if k > 0.0 {
        2.0 * (t / k).sqrt()
    } else {
        2.0 * t.sqrt()
    }
}

pub fn solve_one_cut(v: &Potential, t: f64) -> Result<EquilibriumMeasure, EquilibriumError> {
    check_temperature(t)?;
    let f = scaled_derivative(v, t);
    let minima = v.minima();
    let mut centers: Vec<f64> = minima.clone();
    centers.push(0.0);
    if !minima.is_empty() {
        centers.push(minima.iter().sum::<f64>() / minima.len() as f64);
    }
    let base = minima.first().map_or(2.0 * t.sqrt(), |&x| gaussian_halfwidth(v, t, x));
    let mut starts = Vec::new();
    for &c in &centers {
        let w0 = gaussian_halfwidth(v, t, c).max(base);
        for scale in [1.0, 2.0, 4.0, 8.0] {
            starts.push([c - w0 * scale, c + w0 * scale]);
        }
    }
    let mut last = String::from("Newton did not converge from any initialization");
    for s in starts {
        if let Some(e) = newton(&f, &s) {
            match finish(&f, e, t) {
                Ok(m) => return Ok(m),
                Err(msg) => last = msg,
            }
        }
    }
    Err(EquilibriumError::NoOneCutSolution(last))
}

pub fn solve_two_cut(v: &Potential, t: f64) -> Result<EquilibriumMeasure, EquilibriumError> {
    check_temperature(t)?;
    if v.degree() < 4 {
        return Err(EquilibriumError::DegreeMismatch {
            dv: v.degree() - 1,
            q: 3,
        });
    }
    let minima = v.minima();
    if minima.len() < 2 {
        return Err(EquilibriumError::NoTwoCutSolution("potential has fewer than two minima".into()));
    }
    let f = scaled_derivative(v, t);
    let (m1, m2) = if minima[0] < minima[1] {
        (minima[0], minima[1])
    } else {
        (minima[1], minima[0])
    };
    let mid = 0.5 * (m1 + m2);
    let w1 = gaussian_halfwidth(v, 0.5 * t, m1);
    let w2 = gaussian_halfwidth(v, 0.5 * t, m2);
    let mut last = String::from("Newton did not converge from any initialization");
    for scale in [1.0, 0.5, 1.5, 2.0, 0.25] {
        let gap = 1e-3 * (m2 - m1);
        let b1 = (m1 + scale * w1).min(mid - gap);
        let a2 = (m2 - scale * w2).max(mid + gap);
        let s = [m1 - scale * w1, b1, a2, m2 + scale * w2];
        if let Some(e) = newton(&f, &s) {
            match finish(&f, e, t) {
                Ok(m) => return Ok(m),
                Err(msg) => last = msg,
            }
        }
    }
    Err(EquilibriumError::NoTwoCutSolution(last))
}

/// One cut if it yields a nonnegative density, otherwise two.
pub fn solve_auto(v: &Potential, t: f64) -> Result<EquilibriumMeasure, EquilibriumError> {
    check_temperature(t)?;
    match solve_one_cut(v, t) {
        Ok(m) => Ok(m),
        Err(EquilibriumError::NoOneCutSolution(_)) => solve_two_cut(v, t).map_err(|_| EquilibriumError::Unsolved),
        Err(e) => Err(e),
    }
}

const REGULARITY_TOL: f64 = 1e-8;

/// Singular when h has a (numerically) real zero on the closed support.
pub fn classify_regularity(m: &EquilibriumMeasure) -> Regularity {
    let h = &m.h;
    let scale = m
        .cuts
        .iter()
        .flat_map(|c| [c.a, c.b, 0.5 * (c.a + c.b)])
        .map(|x| h.eval_real(x).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // double zeros can split into a close complex pair; h' catches their midpoint
    let candidates = h.roots().into_iter().chain(h.derivative().roots()).map(|r| r.re);
    for x in candidates {
        let near = m.cuts.iter().any(|c| x >= c.a - REGULARITY_TOL && x <= c.b + REGULARITY_TOL);
        if near && h.eval_real(x).abs() <= REGULARITY_TOL * scale {
            return Regularity::Singular;
        }
    }
    Regularity::Regular
}
