//! Topological recursion on genus-zero hyperelliptic curves in Joukowski
//! form, with residues taken symbolically at the branch points z = ±1.
//!
//! Correlators are densities in the z coordinates: `W_n^(g)(z_1..z_n)`
//! stands for the form `W dz_1 ... dz_n`. Stable correlators are stored as
//! [`PoleTensor`]s, finite sums of products of poles at ±1, which makes the
//! recursion exact up to rounding.

mod local;
mod rescaled;
mod tensor;

pub use rescaled::{gamma, rescaled_curve, w20_xi, RescaledCurveSpec};
pub use tensor::{Pole, PoleTensor};

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equilibrium::SpectralCurveG0;
use crate::numerics::{Polynomial, RationalFunction, Series};
use local::Local;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecursionError {
    #[error("points coincide: {0} and {1}")]
    Coincident(Complex64, Complex64),
    #[error("point {0} is on a branch point")]
    OnBranchPoint(Complex64),
    #[error("(n, g) = ({n}, {g}) is outside the recursion's range")]
    Unstable { n: usize, g: u32 },
    #[error("2g + n = {0} exceeds the depth cap {1}")]
    DepthExceeded(u32, u32),
    #[error("expected {expected} spectators, got {got}")]
    SpectatorCount { expected: usize, got: usize },
    #[error("spectator {0} is within 1e-6 of 0 or ±1")]
    BadSpectator(Complex64),
    #[error("x = {0} lies on the cut, sheet is ambiguous")]
    BranchAmbiguity(Complex64),
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `1/(z1 − z2)²`.
pub fn bergman(z1: Complex64, z2: Complex64) -> Result<Complex64, RecursionError> {
    let d = z1 - z2;
    if d.norm() < 1e-12 {
        return Err(RecursionError::Coincident(z1, z2));
    }
    Ok(1.0 / (d * d))
}

fn check_off_branch(z: Complex64) -> Result<(), RecursionError> {
    if (z - 1.0).norm() < 1e-9 || (z + 1.0).norm() < 1e-9 {
        return Err(RecursionError::OnBranchPoint(z));
    }
    Ok(())
}

/// `[1/(z0 − z) − 1/(z0 − 1/z)] / [2 (y(z) − y(1/z)) x'(z)]`.
pub fn recursion_kernel(curve: &SpectralCurveG0, z0: Complex64, z: Complex64) -> Result<Complex64, RecursionError> {
    check_off_branch(z)?;
    if z.norm() < 1e-12 {
        return Err(RecursionError::Coincident(z, ZERO));
    }
    let zb = 1.0 / z;
    for w in [z, zb] {
        if (z0 - w).norm() < 1e-12 {
            return Err(RecursionError::Coincident(z0, w));
        }
    }
    let num = 1.0 / (z0 - z) - 1.0 / (z0 - zb);
    let den = 2.0 * (curve.y(z) - curve.y(zb)) * curve.dx(z);
    Ok(num / den)
}

/// `y(z) x'(z)` as a rational function (the density of `y dx`).
pub fn ydx_rational(curve: &SpectralCurveG0) -> RationalFunction {
    let d = curve.half_degree();
    let zz = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
    let num = (&(&zz * &zz) * &curve.q_polynomial()).scale(curve.halfwidth / 2.0);
    let mut den = vec![ZERO; d + 4];
    den[d + 3] = ONE;
    RationalFunction::from_parts_unreduced(num, Polynomial::new(den))
}

/// `1/(4 y x') · (−1/z²)`: the curve part of the kernel times the
/// Jacobian of the conjugate argument.
fn kernel_weight(curve: &SpectralCurveG0) -> RationalFunction {
    let d = curve.half_degree();
    let zz = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
    let den = (&(&zz * &zz) * &curve.q_polynomial()).scale(curve.halfwidth * 2.0);
    let mut num = vec![ZERO; d + 2];
    num[d + 1] = -ONE;
    RationalFunction::from_parts_unreduced(Polynomial::new(num), den)
}

pub const DEFAULT_MAX_DEPTH: u32 = 8;

/// Recursion engine for one curve, with a memo of computed tensors.
pub struct TopologicalRecursion {
    curve: SpectralCurveG0,
    max_depth: u32,
    cache: Option<Mutex<HashMap<(u32, usize), Arc<PoleTensor>>>>,
}

struct Expansion {
    series: Series,
    key: Vec<(usize, Pole)>,
}

fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 + n as i64 > 2
}

impl TopologicalRecursion {
    pub fn new(curve: SpectralCurveG0) -> Self {
        TopologicalRecursion {
            curve,
            max_depth: DEFAULT_MAX_DEPTH,
            cache: Some(Mutex::new(HashMap::new())),
        }
    }

    /// Engine that recomputes every tensor on demand.
    pub fn uncached(curve: SpectralCurveG0) -> Self {
        TopologicalRecursion {
            cache: None,
            ..Self::new(curve)
        }
    }

    pub fn with_max_depth(mut self, depth: u32) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn curve(&self) -> &SpectralCurveG0 {
        &self.curve
    }

    fn check_range(&self, n: usize, g: u32) -> Result<(), RecursionError> {
        if n == 0 {
            return Err(RecursionError::Unstable { n, g });
        }
        let depth = 2 * g + n as u32;
        if depth > self.max_depth {
            return Err(RecursionError::DepthExceeded(depth, self.max_depth));
        }
        Ok(())
    }

    /// The pole tensor of a stable `W_n^(g)`.
    pub fn tensor(&self, n: usize, g: u32) -> Result<Arc<PoleTensor>, RecursionError> {
        self.check_range(n, g)?;
        if !is_stable(g, n) {
            return Err(RecursionError::Unstable { n, g });
        }
        Ok(self.tensor_unchecked(g, n))
    }

    fn tensor_unchecked(&self, g: u32, n: usize) -> Arc<PoleTensor> {
        if let Some(cache) = &self.cache {
            if let Some(t) = cache.lock().expect("cache poisoned").get(&(g, n)) {
                return Arc::clone(t);
            }
        }
        let t = Arc::new(self.compute(g, n));
        if let Some(cache) = &self.cache {
            let mut map = cache.lock().expect("cache poisoned");
            return Arc::clone(map.entry((g, n)).or_insert(t));
        }
        t
    }

    /// Expansion at `a` of a correlator whose first argument is z (or 1/z
    /// when `inverted`) and whose other arguments are the spectators at
    /// `positions`.
    fn expand(&self, loc: &Local, g: u32, positions: &[usize], inverted: bool, max_m: u32) -> Vec<Expansion> {
        if g == 0 && positions.len() == 1 {
            let base = if inverted { loc.delta() } else { loc.t() };
            let a = loc.a as i8;
            return loc
                .bergman_terms(&base, max_m)
                .into_iter()
                .map(|(k, series)| Expansion {
                    series,
                    key: vec![(positions[0], (a, k))],
                })
                .collect();
        }
        let t = self.tensor_unchecked(g, positions.len() + 1);
        let mut cache: BTreeMap<Pole, Series> = BTreeMap::new();
        let mut out = Vec::with_capacity(t.terms.len());
        for (key, &coef) in &t.terms {
            let s = cache
                .entry(key[0])
                .or_insert_with(|| {
                    if inverted {
                        loc.inverted(key[0].0, key[0].1)
                    } else {
                        loc.direct(key[0].0, key[0].1)
                    }
                })
                .scale(coef);
            out.push(Expansion {
                series: s,
                key: positions.iter().copied().zip(key[1..].iter().copied()).collect(),
            });
        }
        out
    }

    fn compute(&self, g: u32, n: usize) -> PoleTensor {
        let k = n - 1;
        let mut sub_orders = 0;
        if g >= 1 && is_stable(g - 1, k + 2) {
            sub_orders = sub_orders.max(self.tensor_unchecked(g - 1, k + 2).max_order());
        }
        for h in 0..=g {
            for size in 0..=k {
                if is_stable(h, size + 1) && !(h == g && size == k) {
                    sub_orders = sub_orders.max(self.tensor_unchecked(h, size + 1).max_order());
                }
            }
        }
        let pmax = 2 * sub_orders + 2;
        let top = pmax as i32 + 4;
        let weight = kernel_weight(&self.curve);

        let mut out = PoleTensor::new(n);
        for a in [1.0, -1.0] {
            let loc = Local { a, top };
            let rk = weight.laurent_at(Complex64::new(a, 0.0), top);
            let delta = loc.delta();
            let mut terms: Vec<Expansion> = Vec::new();

            if g >= 1 {
                if g == 1 && k == 0 {
                    terms.push(Expansion {
                        series: loc.joukowski_gap(),
                        key: Vec::new(),
                    });
                } else {
                    let t = self.tensor_unchecked(g - 1, k + 2);
                    for (key, &coef) in &t.terms {
                        let s = &loc.direct(key[0].0, key[0].1) * &loc.inverted(key[1].0, key[1].1);
                        terms.push(Expansion {
                            series: s.scale(coef),
                            key: (0..k).zip(key[2..].iter().copied()).collect(),
                        });
                    }
                }
            }

            for h in 0..=g {
                for mask in 0u32..(1 << k) {
                    let left: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
                    let right: Vec<usize> = (0..k).filter(|i| mask & (1 << i) == 0).collect();
                    if (h == 0 && left.is_empty()) || (h == g && right.is_empty()) {
                        continue;
                    }
                    let lx = self.expand(&loc, h, &left, false, pmax);
                    let rx = self.expand(&loc, g - h, &right, true, pmax);
                    for l in &lx {
                        for r in &rx {
                            let mut key = l.key.clone();
                            key.extend_from_slice(&r.key);
                            terms.push(Expansion {
                                series: &l.series * &r.series,
                                key,
                            });
                        }
                    }
                }
            }

            let mut third: Vec<Series> = Vec::new();
            for term in terms {
                let gs = &rk * &term.series;
                let mut spect = vec![(0i8, 0u32); k];
                for (pos, pole) in &term.key {
                    spect[*pos] = *pole;
                }
                let max_m = (-1 - gs.val).max(0) as u32;
                while third.len() < max_m as usize {
                    let m = third.len() as u32 + 1;
                    third.push(loc.third_kind(&delta, m));
                }
                for m in 1..=max_m {
                    let e = &third[m as usize - 1];
                    let mut res = ZERO;
                    for i in gs.val..=(-1 - m as i32) {
                        res += gs.coeff(i) * e.coeff(-1 - i);
                    }
                    if res != ZERO {
                        let mut key = Vec::with_capacity(n);
                        key.push((a as i8, m + 1));
                        key.extend_from_slice(&spect);
                        out.add(key, res);
                    }
                }
            }
        }
        out
    }

    fn check_spectators(&self, n: usize, spectators: &[Complex64]) -> Result<(), RecursionError> {
        if spectators.len() + 1 != n {
            return Err(RecursionError::SpectatorCount {
                expected: n.saturating_sub(1),
                got: spectators.len(),
            });
        }
        for &s in spectators {
            if s.norm() < 1e-6 || (s - 1.0).norm() < 1e-6 || (s + 1.0).norm() < 1e-6 {
                return Err(RecursionError::BadSpectator(s));
            }
        }
        Ok(())
    }

    /// `W_n^(g)` as a rational function of its first argument, the others
    /// bound to `spectators`.
    pub fn correlator_rational(
        &self,
        n: usize,
        g: u32,
        spectators: &[Complex64],
    ) -> Result<RationalFunction, RecursionError> {
        self.check_range(n, g)?;
        match (n, g) {
            (1, 0) => return Ok(ydx_rational(&self.curve)),
            (2, 0) => {
                self.check_spectators(n, spectators)?;
                let s = spectators[0];
                let den = Polynomial::from_roots(&[s, s]);
                return Ok(RationalFunction::from_parts_unreduced(Polynomial::one(), den));
            }
            _ => {}
        }
        self.check_spectators(n, spectators)?;
        let coeffs = self.tensor(n, g)?.bind_spectators(spectators);
        let order = |p: i8| coeffs.keys().filter(|q| q.0 == p).map(|q| q.1).max().unwrap_or(0);
        let (ap, am) = (order(1), order(-1));
        let zp = Polynomial::linear(ONE);
        let zm = Polynomial::linear(-ONE);
        let mut num = Polynomial::zero();
        for (&(p, k), &c) in &coeffs {
            let term = if p == 1 {
                &zp.pow(ap - k) * &zm.pow(am)
            } else {
                &zp.pow(ap) * &zm.pow(am - k)
            };
            num = &num + &term.scale(c);
        }
        let den = &zp.pow(ap) * &zm.pow(am);
        Ok(RationalFunction::from_parts_unreduced(num, den))
    }

    /// `W_n^(g)(z0, spectators)`.
    pub fn correlator(
        &self,
        n: usize,
        g: u32,
        spectators: &[Complex64],
        z0: Complex64,
    ) -> Result<Complex64, RecursionError> {
        self.check_range(n, g)?;
        match (n, g) {
            (1, 0) => {
                check_off_branch(z0)?;
                Ok(self.curve.y(z0) * self.curve.dx(z0))
            }
            (2, 0) => {
                self.check_spectators(n, spectators)?;
                bergman(z0, spectators[0])
            }
            _ => {
                self.check_spectators(n, spectators)?;
                check_off_branch(z0)?;
                for &s in spectators {
                    if (s - z0).norm() < 1e-12 {
                        return Err(RecursionError::Coincident(z0, s));
                    }
                }
                let mut pts = vec![z0];
                pts.extend_from_slice(spectators);
                Ok(self.tensor(n, g)?.eval(&pts))
            }
        }
    }

    /// Resolvent `ω_n^(g)(x_1..x_n)` from the z-densities, evaluated on the
    /// physical sheet.
    pub fn map_to_x(&self, n: usize, g: u32, xs: &[Complex64]) -> Result<Complex64, RecursionError> {
        self.check_range(n, g)?;
        if xs.len() != n {
            return Err(RecursionError::SpectatorCount {
                expected: n - 1,
                got: xs.len().saturating_sub(1),
            });
        }
        let (lo, hi) = self.curve.branch_points();
        for &x in xs {
            if segment_distance(x, lo, hi) < 1e-9 {
                return Err(RecursionError::BranchAmbiguity(x));
            }
        }
        let zs: Vec<Complex64> = xs.iter().map(|&x| self.curve.z_of_x(x)).collect();
        if (n, g) == (1, 0) {
            let y = self.curve.y(zs[0]);
            return Ok(y - self.y_polynomial_part().eval(xs[0]));
        }
        let w = self.correlator(n, g, &zs[1..], zs[0])?;
        let jac: Complex64 = zs.iter().map(|&z| self.curve.dx(z)).product();
        let mut out = w / jac;
        if (n, g) == (2, 0) {
            out -= 1.0 / ((xs[0] - xs[1]) * (xs[0] - xs[1]));
        }
        Ok(out)
    }

    /// Polynomial part of `y(x)` at x → ∞ on the physical sheet, so that
    /// `ω_1^(0) = y − Pol(y)`.
    pub fn y_polynomial_part(&self) -> Polynomial {
        let p = self.curve.x_polynomial();
        let (c, u) = (self.curve.center, self.curve.halfwidth);
        let shifted = p.taylor_shift(c);
        let deg = shifted.degree().unwrap_or(0);
        // sqrt(w² − u²) = w Σ_k binom(1/2, k) (−u²)^k w^{−2k}
        let mut out = vec![ZERO; deg + 2];
        let mut gen = ONE;
        for k in 0..=deg / 2 + 1 {
            if k > 0 {
                gen *= (0.5 - (k - 1) as f64) / k as f64 * (-u * u);
            }
            for (i, &pc) in shifted.coeffs().iter().enumerate() {
                let e = i as i64 + 1 - 2 * k as i64;
                if e >= 0 {
                    out[e as usize] += -0.5 * pc * gen;
                }
            }
        }
        Polynomial::new(out).taylor_shift(-c)
    }

    /// Symplectic invariant `F_g`, g ≥ 1.
    pub fn f_g(&self, g: u32) -> Result<Complex64, RecursionError> {
        if g == 0 {
            return Err(RecursionError::Unstable { n: 0, g });
        }
        if g == 1 {
            return Ok(self.f1());
        }
        self.check_range(1, g)?;
        let t = self.tensor(1, g)?;
        let ydx = ydx_rational(&self.curve);
        // Laurent coefficients of y x' in z give the primitive Φ
        let laurent = self.ydx_laurent();
        let mut total = ZERO;
        for a in [1.0, -1.0] {
            let za = Complex64::new(a, 0.0);
            let top = t.max_order() as i32 + 1;
            let taylor = ydx.laurent_at(za, top);
            for (key, &c) in &t.terms {
                if f64::from(key[0].0) != a {
                    continue;
                }
                let k = key[0].1;
                // Res (z − a)^{-k} Φ(z) = Φ^{(k−1)}(a)/(k−1)! = [t^{k−2}](y x') / (k − 1)
                let phi = if k == 1 {
                    primitive_at(&laurent, za)
                } else {
                    taylor.coeff(k as i32 - 2) / f64::from(k - 1)
                };
                total += c * phi;
            }
        }
        Ok(total / (2.0 - 2.0 * f64::from(g)))
    }

    /// `(power, coefficient)` pairs of the Laurent polynomial `y(z) x'(z)`.
    fn ydx_laurent(&self) -> Vec<(i32, Complex64)> {
        let d = self.curve.half_degree() as i32;
        let r = ydx_rational(&self.curve);
        r.numerator()
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as i32 - (d + 3), c))
            .collect()
    }

    /// `F_1 = −(1/24) ln(256 u² Q(1) Q(−1))`, i.e. `−(1/24) ln((b − a)⁴ h(a) h(b))`
    /// for a real one-cut curve.
    fn f1(&self) -> Complex64 {
        let u = self.curve.halfwidth;
        let arg = 256.0 * u * u * self.curve.q(ONE) * self.curve.q(-ONE);
        -arg.ln() / 24.0
    }
}

/// Laurent primitive plus `t_0 log z` (principal branch) at `z`.
fn primitive_at(laurent: &[(i32, Complex64)], z: Complex64) -> Complex64 {
    laurent
        .iter()
        .map(|&(p, c)| if p == -1 { c * z.ln() } else { c * z.powi(p + 1) / f64::from(p + 1) })
        .sum()
}

fn segment_distance(x: Complex64, lo: Complex64, hi: Complex64) -> f64 {
    let d = hi - lo;
    let t = ((x - lo) * d.conj()).re / d.norm_sqr();
    (x - (lo + d * t.clamp(0.0, 1.0))).norm()
}

/// Correlator export row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorTable {
    pub n: usize,
    pub g: u32,
    pub spectators: Vec<[f64; 2]>,
    pub rational: RationalTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalTable {
    pub num: Vec<[f64; 2]>,
    pub den: Vec<[f64; 2]>,
}

impl CorrelatorTable {
    pub fn new(n: usize, g: u32, spectators: &[Complex64], r: &RationalFunction) -> Self {
        let pairs = |p: &Polynomial| p.coeffs().iter().map(|c| [c.re, c.im]).collect();
        CorrelatorTable {
            n,
            g,
            spectators: spectators.iter().map(|c| [c.re, c.im]).collect(),
            rational: RationalTable {
                num: pairs(r.numerator()),
                den: pairs(r.denominator()),
            },
        }
    }
}

/// Coefficient of `x^{-(j+1)}` in `ω_1^(g)(x)` at large x, from a trapezoid
/// contour integral of `x(z)^j W(z) dz` around `|z| = radius`.
pub fn large_x_coefficient(tr: &TopologicalRecursion, g: u32, j: u32, radius: f64) -> Result<Complex64, RecursionError> {
    let nodes = 256;
    let mut acc = ZERO;
    for i in 0..nodes {
        let th = 2.0 * PI * i as f64 / nodes as f64;
        let z = Complex64::from_polar(radius, th);
        let w = if g == 0 {
            tr.map_to_x(1, 0, &[tr.curve.x(z)])? * tr.curve.dx(z)
        } else {
            tr.correlator(1, g, &[], z)?
        };
        // dz = i z dθ
        acc += tr.curve.x(z).powu(j) * w * Complex64::i() * z;
    }
    Ok(acc / (nodes as f64 * Complex64::i()))
}
