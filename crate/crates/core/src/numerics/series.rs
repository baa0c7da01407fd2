//! Truncated Laurent series `sum_k c_k t^(val + k)` in one local variable.
//!
//! A series knows its coefficients exactly up to (but excluding) the exponent
//! `val + coeffs.len()`; arithmetic propagates that precision.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::polynomial::Polynomial;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub val: i32,
    pub coeffs: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl Series {
    pub fn new(val: i32, coeffs: Vec<Complex64>) -> Self {
        Series { val, coeffs }
    }

    /// The constant `c`, known up to exponent `top`.
    pub fn constant(c: Complex64, top: i32) -> Self {
        let mut coeffs = vec![ZERO; top.max(0) as usize];
        if let Some(first) = coeffs.first_mut() {
            *first = c;
        }
        Series { val: 0, coeffs }
    }

    /// `t^k`, known up to exponent `top`.
    pub fn monomial(k: i32, top: i32) -> Self {
        let len = (top - k).max(0) as usize;
        let mut coeffs = vec![ZERO; len];
        if let Some(first) = coeffs.first_mut() {
            *first = Complex64::new(1.0, 0.0);
        }
        Series { val: k, coeffs }
    }

    /// Taylor series of a polynomial around `center`.
    pub fn from_polynomial(p: &Polynomial, center: Complex64, top: i32) -> Self {
        let shifted = p.taylor_shift(center);
        let len = top.max(0) as usize;
        Series {
            val: 0,
            coeffs: (0..len).map(|k| shifted.coeff(k)).collect(),
        }
    }

    /// Exclusive upper exponent of known coefficients.
    pub fn top(&self) -> i32 {
        self.val + self.coeffs.len() as i32
    }

    /// Coefficient of `t^k` (zero below the valuation).
    ///
    /// Panics if `k` lies beyond the known precision.
    pub fn coeff(&self, k: i32) -> Complex64 {
        assert!(k < self.top(), "coefficient t^{k} beyond series precision");
        if k < self.val {
            ZERO
        } else {
            self.coeffs[(k - self.val) as usize]
        }
    }

    pub fn truncate(&self, top: i32) -> Self {
        let len = (top - self.val).clamp(0, self.coeffs.len() as i32) as usize;
        Series {
            val: self.val,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Series {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Drops leading coefficients that are exactly zero or below `tol`
    /// relative to the largest coefficient.
    pub fn normalize(&self, tol: f64) -> Self {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let skip = self
            .coeffs
            .iter()
            .take_while(|c| c.norm() <= tol * scale)
            .count();
        Series {
            val: self.val + skip as i32,
            coeffs: self.coeffs[skip..].to_vec(),
        }
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self) -> Self {
        let s = self.normalize(0.0);
        assert!(!s.coeffs.is_empty(), "inverse of a series with no known nonzero term");
        let n = s.coeffs.len();
        let a0 = s.coeffs[0];
        let mut out = vec![ZERO; n];
        out[0] = a0.inv();
        for k in 1..n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += s.coeffs[j] * out[k - j];
            }
            out[k] = -acc / a0;
        }
        Series {
            val: -s.val,
            coeffs: out,
        }
    }

    pub fn powi(&self, e: u32, top: i32) -> Self {
        (0..e).fold(Series::constant(Complex64::new(1.0, 0.0), top), |acc, _| {
            &acc * self
        })
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let val = self.val + rhs.val;
        let top = (self.val + rhs.top()).min(rhs.val + self.top());
        let len = (top - val).max(0) as usize;
        let mut coeffs = vec![ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a == ZERO {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        Series { val, coeffs }
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let val = self.val.min(rhs.val);
        let top = self.top().min(rhs.top());
        Series {
            val,
            coeffs: (val..top)
                .map(|k| {
                    let a = if k >= self.val { self.coeff(k) } else { ZERO };
                    let b = if k >= rhs.val { rhs.coeff(k) } else { ZERO };
                    a + b
                })
                .collect(),
        }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self + &(-rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
