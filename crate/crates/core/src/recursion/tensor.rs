//! Correlators as finite sums of products of poles at the branch points.

use std::collections::BTreeMap;

use num_complex::Complex64;

/// Pole `(z − p)^{-k}` at branch point `p = ±1`.
pub type Pole = (i8, u32);

/// `Σ c · Π_i (z_i − p_i)^{-k_i}` with one pole factor per argument.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PoleTensor {
    pub arity: usize,
    pub terms: BTreeMap<Vec<Pole>, Complex64>,
}

impl PoleTensor {
    pub fn new(arity: usize) -> Self {
        PoleTensor {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, key: Vec<Pole>, c: Complex64) {
        debug_assert_eq!(key.len(), self.arity);
        *self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(key, &c)| {
                key.iter()
                    .zip(z)
                    .fold(c, |acc, (&(p, k), &zi)| acc * pole_factor(zi, p, k))
            })
            .sum()
    }

    /// Highest pole order appearing in any argument.
    pub fn max_order(&self) -> u32 {
        self.terms.keys().flat_map(|k| k.iter().map(|p| p.1)).max().unwrap_or(0)
    }

    /// Coefficients of `(z_0 − p)^{-k}` after binding arguments `1..` to
    /// numbers.
    pub fn bind_spectators(&self, spectators: &[Complex64]) -> BTreeMap<Pole, Complex64> {
        let mut out = BTreeMap::new();
        for (key, &c) in &self.terms {
            let v = key[1..]
                .iter()
                .zip(spectators)
                .fold(c, |acc, (&(p, k), &zi)| acc * pole_factor(zi, p, k));
            *out.entry(key[0]).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        out
    }
}

pub fn pole_factor(z: Complex64, p: i8, k: u32) -> Complex64 {
    (z - f64::from(p)).powi(-(k as i32))
}
