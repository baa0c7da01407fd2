//! Dense univariate polynomials with complex coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default tolerance used when grouping nearby roots into one cluster.
pub const ROOT_CLUSTER_TOL: f64 = 1e-9;

/// A polynomial stored as ascending coefficients.
///
/// The representation is canonical: the last stored coefficient is nonzero,
/// and the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

/// A group of numerically coincident roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z - root`
    pub fn linear(root: Complex64) -> Self {
        Self::new(vec![-root, Complex64::new(1.0, 0.0)])
    }

    /// Monic polynomial with the given roots (repeated as listed).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, &r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Real parts of the coefficients.
    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Evaluates the real part of the coefficients at a real point.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.re)
    }

    /// Sum of `|c_k| |z|^k`, the natural scale for rounding errors of `eval`.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn integral(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Complex64::new(0.0, 0.0));
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Self::new(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(self.leading().inv())
    }

    /// Coefficients of `t -> p(center + t)`.
    pub fn taylor_shift(&self, center: Complex64) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let upper = c[j + 1];
                c[j] += center * upper;
            }
        }
        Self::new(c)
    }

    /// `p(a z + b)`
    pub fn compose_affine(&self, a: Complex64, b: Complex64) -> Self {
        let shifted = self.taylor_shift(b);
        let mut pow = Complex64::new(1.0, 0.0);
        Self::new(
            shifted
                .coeffs
                .iter()
                .map(|&c| {
                    let v = c * pow;
                    pow *= a;
                    v
                })
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
            rem[k + dd] = Complex64::new(0.0, 0.0);
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Divides by `(z - root)` and discards the remainder.
    pub fn deflate(&self, root: Complex64) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut carry = self.coeffs[n - 1];
        out[n - 2] = carry;
        for k in (1..n - 1).rev() {
            carry = self.coeffs[k] + root * carry;
            out[k - 1] = carry;
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Zeroes coefficients whose modulus is below `tol` times the largest one.
    pub fn chop(&self, tol: f64) -> Self {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c.norm() <= tol * scale {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }

    /// All roots, from the eigenvalues of the companion matrix followed by one
    /// Newton step each.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(n) => n,
        };
        // exact zeros at the origin would make the companion matrix nilpotent
        let zeros = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        if zeros > 0 {
            let mut out = vec![Complex64::new(0.0, 0.0); zeros];
            out.extend(Polynomial::new(self.coeffs[zeros..].to_vec()).roots());
            return out;
        }
        let lead = self.leading();
        let mut comp = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..n {
            comp[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        let raw: Vec<Complex64> = match Schur::try_new(comp, f64::EPSILON, 10_000) {
            Some(schur) => schur.eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default(),
            None => self.durand_kerner(),
        };
        let dp = self.derivative();
        raw.into_iter()
            .map(|r| {
                let d = dp.eval(r);
                if d.norm() > 0.0 {
                    let step = self.eval(r) / d;
                    let polished = r - step;
                    if self.eval(polished).norm() <= self.eval(r).norm() {
                        return polished;
                    }
                }
                r
            })
            .collect()
    }

    fn durand_kerner(&self) -> Vec<Complex64> {
        let m = self.monic();
        let n = m.coeffs.len() - 1;
        let radius = 1.0 + m.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let seed = Complex64::from_polar(1.0, 0.4);
        let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius * 0.5).collect();
        for _ in 0..2000 {
            let mut moved: f64 = 0.0;
            for i in 0..n {
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        den *= z[i] - z[j];
                    }
                }
                if den.norm() == 0.0 {
                    continue;
                }
                let step = m.eval(z[i]) / den;
                z[i] -= step;
                moved = moved.max(step.norm());
            }
            if moved <= 1e-15 * radius {
                break;
            }
        }
        z
    }

    /// Roots grouped into clusters of numerically coincident values.
    ///
    /// Eigenvalue estimates of a k-fold root scatter on a circle of radius
    /// about `eps^(1/k)`. Groups of k nearest neighbours are accepted, largest
    /// k first, when their spread is within `max(tol, (1e-13)^(1/k))`
    /// relative to the center and the group is well separated from the
    /// remaining roots.
    pub fn root_clusters(&self, tol: f64) -> Vec<RootCluster> {
        let mut left = self.roots();
        let mut out = Vec::new();
        let mut k = left.len();
        while k >= 2 {
            let mut found = None;
            for r in &left {
                let mut by_dist: Vec<(f64, usize)> =
                    left.iter().enumerate().map(|(i, s)| ((s - r).norm(), i)).collect();
                by_dist.sort_by(|a, b| a.0.total_cmp(&b.0));
                let group: Vec<Complex64> = by_dist[..k].iter().map(|&(_, i)| left[i]).collect();
                let center = mean(&group);
                let spread = group.iter().map(|m| (m - center).norm()).fold(0.0, f64::max);
                let allowed = tol.max(1e-13f64.powf(1.0 / k as f64)) * (1.0 + center.norm());
                let gap = by_dist.get(k).map_or(f64::INFINITY, |&(d, _)| d);
                if spread <= allowed && gap > 10.0 * spread.max(tol) {
                    found = Some(by_dist[..k].iter().map(|&(_, i)| i).collect::<Vec<_>>());
                    break;
                }
            }
            match found {
                Some(mut idx) => {
                    idx.sort_unstable_by(|a, b| b.cmp(a));
                    let group: Vec<Complex64> = idx.iter().map(|&i| left.remove(i)).collect();
                    out.push(RootCluster {
                        center: self.refine_multiple_root(mean(&group), group.len()),
                        multiplicity: group.len(),
                    });
                    k = k.min(left.len());
                }
                None => k -= 1,
            }
        }
        out.extend(left.into_iter().map(|r| RootCluster {
            center: r,
            multiplicity: 1,
        }));
        out
    }

    /// Newton on `p^(k-1)`, for which a k-fold root of `p` is simple.
    fn refine_multiple_root(&self, mut z: Complex64, k: usize) -> Complex64 {
        let mut d = self.clone();
        for _ in 0..k - 1 {
            d = d.derivative();
        }
        let dd = d.derivative();
        for _ in 0..3 {
            let den = dd.eval(z);
            if den.norm() == 0.0 {
                break;
            }
            let next = z - d.eval(z) / den;
            if !next.is_finite() || (next - z).norm() > 1e-3 * (1.0 + z.norm()) {
                break;
            }
            z = next;
        }
        z
    }

    /// True when the Taylor coefficients of orders `0..k` at `z` are all
    /// negligible relative to the polynomial's local scale.
    pub fn vanishes_to_order(&self, z: Complex64, k: usize) -> bool {
        let shifted = self.taylor_shift(z);
        let scale = self.eval_scale(z).max(f64::MIN_POSITIVE);
        let radius = 1.0 + z.norm();
        (0..k).all(|j| {
            // A j-th Taylor coefficient perturbed by rounding scales like
            // eps * scale / radius^j; allow a generous factor for clustering.
            shifted.coeff(j).norm() * radius.powi(j as i32) <= 1e-6 * scale
        })
    }
}

fn mean(v: &[Complex64]) -> Complex64 {
    v.iter().sum::<Complex64>() / v.len() as f64
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
