//! Local expansions at a branch point `z = a + t`, `a = ±1`.

use num_complex::Complex64;

use crate::numerics::{Polynomial, Series};

pub(crate) struct Local {
    pub a: f64,
    pub top: i32,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Local {
    fn linear(&self, c0: f64, c1: f64, top: i32) -> Series {
        Series::from_polynomial(&Polynomial::from_real(&[c0, c1]), c(0.0), top)
    }

    fn t_pow(&self, k: i32) -> Series {
        Series::monomial(k, self.top)
    }

    /// `(z − p)^{-k}`
    pub fn direct(&self, p: i8, k: u32) -> Series {
        if f64::from(p) == self.a {
            self.t_pow(-(k as i32))
        } else {
            self.linear(2.0 * self.a, 1.0, self.top).inverse().powi(k, self.top)
        }
    }

    /// `(1/z − p)^{-k}`
    pub fn inverted(&self, p: i8, k: u32) -> Series {
        let k32 = k as i32;
        let a_plus_t = self.linear(self.a, 1.0, self.top + k32);
        if f64::from(p) == self.a {
            // 1/z − a = −a t/(a + t)
            let sign = if k % 2 == 0 { 1.0 } else { -self.a };
            (&self.t_pow(-k32) * &a_plus_t.powi(k, self.top + k32)).scale(c(sign))
        } else {
            // 1/z + a = (2 + a t)/(a + t)
            let ratio = &a_plus_t * &self.linear(2.0, self.a, self.top).inverse();
            ratio.powi(k, self.top)
        }
    }

    /// `δ = 1/z − a = −t/(1 + a t)`
    pub fn delta(&self) -> Series {
        (&self.t_pow(1) * &self.linear(1.0, self.a, self.top).inverse()).scale(c(-1.0))
    }

    /// `(z − 1/z)^{-2} = t^{-2} (a + t)² / (2a + t)²`
    pub fn joukowski_gap(&self) -> Series {
        let num = self.linear(self.a, 1.0, self.top + 2).powi(2, self.top + 2);
        let den = self.linear(2.0 * self.a, 1.0, self.top + 2).powi(2, self.top + 2).inverse();
        &self.t_pow(-2) * &(&num * &den)
    }

    /// Series of `Σ_m (m+1) s^m` terms for a Bergman factor: returns
    /// `(m + 2, (m + 1) base^m)` for m = 0..=max_m, where the coefficient of
    /// the spectator pole `(z_j − a)^{-(m+2)}` is listed.
    pub fn bergman_terms(&self, base: &Series, max_m: u32) -> Vec<(u32, Series)> {
        let mut out = Vec::with_capacity(max_m as usize + 1);
        let mut pw = Series::constant(c(1.0), self.top);
        for m in 0..=max_m {
            out.push((m + 2, pw.scale(c(f64::from(m + 1)))));
            pw = &pw * base;
        }
        out
    }

    pub fn t(&self) -> Series {
        self.t_pow(1)
    }

    /// `t^m − δ^m`, the coefficient of `(z_0 − a)^{-(m+1)}` in
    /// `1/(z_0 − z) − 1/(z_0 − 1/z)`.
    pub fn third_kind(&self, delta: &Series, m: u32) -> Series {
        &self.t_pow(m as i32) - &delta.powi(m, self.top)
    }
}
