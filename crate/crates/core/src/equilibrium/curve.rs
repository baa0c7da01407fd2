//! Genus-zero spectral curves in Joukowski form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{EquilibriumError, EquilibriumMeasure};
use crate::numerics::{Polynomial, RationalFunction};

/// `x(z) = c + (u/2)(z + 1/z)`, `y(z) = (z − 1/z) Q(z)` with `Q(1/z) = Q(z)`.
///
/// `Q` is stored as the Laurent coefficients of `z^{-d} .. z^{d}`. The
/// sheet `|z| > 1` is the physical one (x → ∞ as z → ∞), where
/// `y = ω − V'/(2T)` and `Im y(x + i0) = −πρ(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurveG0 {
    pub center: Complex64,
    pub halfwidth: Complex64,
    q_laurent: Vec<Complex64>,
}

impl SpectralCurveG0 {
    /// Builds the curve from the Laurent coefficients of `Q` (length 2d+1).
    ///
    /// # Panics
    /// If the coefficient list has even length.
    pub fn from_laurent(center: Complex64, halfwidth: Complex64, q_laurent: Vec<Complex64>) -> Self {
        assert!(q_laurent.len() % 2 == 1, "Q needs coefficients for z^-d..z^d");
        SpectralCurveG0 {
            center,
            halfwidth,
            q_laurent,
        }
    }

    /// Curve with `Q(z) = −(u/4) P(x(z))` for a polynomial `P`, so that
    /// `y = −(1/2) P(x) sqrt((x − c)² − u²)` on the physical sheet.
    pub fn from_polynomial(center: Complex64, halfwidth: Complex64, p: &Polynomial) -> Self {
        let d = p.degree().unwrap_or(0);
        // z^d P(x(z)) = Σ p_k (u/2 z² + c z + u/2)^k z^{d-k}
        let quad = Polynomial::new(vec![halfwidth / 2.0, center, halfwidth / 2.0]);
        let mut acc = Polynomial::zero();
        for (k, &pk) in p.coeffs().iter().enumerate() {
            let mut shift = vec![Complex64::new(0.0, 0.0); d - k + 1];
            shift[d - k] = pk;
            acc = &acc + &(&quad.pow(k as u32) * &Polynomial::new(shift));
        }
        let scale = -halfwidth / 4.0;
        let q = (0..=2 * d).map(|i| acc.coeff(i) * scale).collect();
        Self::from_laurent(center, halfwidth, q)
    }

    pub fn half_degree(&self) -> usize {
        self.q_laurent.len() / 2
    }

    pub fn q_laurent(&self) -> &[Complex64] {
        &self.q_laurent
    }

    /// The polynomial `P` with `Q(z) = −(u/4) P(x(z))`, so that
    /// `y = −(1/2) P(x) sqrt((x − c)² − u²)` on the physical sheet.
    pub fn x_polynomial(&self) -> Polynomial {
        // z^j + z^{-j} = 2 T_j(w), w = (x − c)/u
        let d = self.half_degree();
        let w = Polynomial::new(vec![-self.center / self.halfwidth, 1.0 / self.halfwidth]);
        let mut t_prev = Polynomial::one();
        let mut t_cur = w.clone();
        let mut acc = Polynomial::constant(self.q_laurent[d]);
        for j in 1..=d {
            if j > 1 {
                let next = &(&(&w * &t_cur) * &Polynomial::from_real(&[2.0])) - &t_prev;
                t_prev = t_cur;
                t_cur = next;
            }
            acc = &acc + &t_cur.scale(self.q_laurent[d + j] * 2.0);
        }
        acc.scale(-4.0 / self.halfwidth)
    }

    /// `z^d Q(z)` as a polynomial of degree 2d.
    pub fn q_polynomial(&self) -> Polynomial {
        Polynomial::new(self.q_laurent.clone())
    }

    pub fn x(&self, z: Complex64) -> Complex64 {
        self.center + self.halfwidth * 0.5 * (z + 1.0 / z)
    }

    pub fn dx(&self, z: Complex64) -> Complex64 {
        self.halfwidth * 0.5 * (1.0 - 1.0 / (z * z))
    }

    pub fn q(&self, z: Complex64) -> Complex64 {
        let d = self.half_degree() as i32;
        self.q_polynomial().eval(z) * z.powi(-d)
    }

    pub fn y(&self, z: Complex64) -> Complex64 {
        (z - 1.0 / z) * self.q(z)
    }

    /// `y(z)` as a rational function, `(z² − 1) z^d Q(z) / z^{d+1}`.
    pub fn y_rational(&self) -> RationalFunction {
        let d = self.half_degree();
        let num = &Polynomial::from_real(&[-1.0, 0.0, 1.0]) * &self.q_polynomial();
        let mut den = vec![Complex64::new(0.0, 0.0); d + 2];
        den[d + 1] = Complex64::new(1.0, 0.0);
        RationalFunction::new(num, Polynomial::new(den)).expect("z^(d+1) is nonzero")
    }

    /// Images of the branch points z = −1 and z = 1.
    pub fn branch_points(&self) -> (Complex64, Complex64) {
        (self.center - self.halfwidth, self.center + self.halfwidth)
    }

    /// Preimage of `x` on the physical sheet (|z| ≥ 1).
    pub fn z_of_x(&self, x: Complex64) -> Complex64 {
        let w = (x - self.center) / self.halfwidth;
        let r = (w * w - 1.0).sqrt();
        let (z1, z2) = (w + r, w - r);
        if z1.norm() >= z2.norm() {
            z1
        } else {
            z2
        }
    }
}

/// The genus-zero curve of a one-cut measure.
pub fn build_spectral_curve(m: &EquilibriumMeasure) -> Result<SpectralCurveG0, EquilibriumError> {
    if m.q() != 1 {
        return Err(EquilibriumError::GenusUnsupported(m.q()));
    }
    let c = m.cuts[0];
    let center = Complex64::new(0.5 * (c.a + c.b), 0.0);
    let halfwidth = Complex64::new(0.5 * (c.b - c.a), 0.0);
    Ok(SpectralCurveG0::from_polynomial(center, halfwidth, &m.h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{solve_one_cut, solve_two_cut, Cut};
    use crate::potentials::{critical_quartic, quadratic, Potential};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn semicircle() -> SpectralCurveG0 {
        build_spectral_curve(&solve_one_cut(&quadratic(), 1.0).unwrap()).unwrap()
    }

    #[test]
    fn semicircle_curve() {
        let sc = semicircle();
        for z in [c(1.3, 0.4), c(-0.2, 2.0), c(3.0, -1.0)] {
            let want = -(z - 1.0 / z) / 2.0;
            assert!((sc.y(z) - want).norm() < 1e-12);
            assert!((sc.y_rational().eval(z) - want).norm() < 1e-12);
        }
        let (lo, hi) = sc.branch_points();
        assert!((lo - c(-2.0, 0.0)).norm() < 1e-10 && (hi - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn boundary_values_give_the_density() {
        let sc = semicircle();
        let eps = 1e-12;
        let above = sc.y(sc.z_of_x(c(0.0, eps)));
        let below = sc.y(sc.z_of_x(c(0.0, -eps)));
        let jump = (below - above) / (2.0 * PI * Complex64::i());
        assert!((jump.re - 1.0 / PI).abs() < 1e-9 && jump.im.abs() < 1e-9);
        assert!((above.im + 1.0).abs() < 1e-9);

        let m = solve_one_cut(&critical_quartic(0.3).unwrap(), 6.0).unwrap();
        let cv = build_spectral_curve(&m).unwrap();
        for x in [-1.0, 0.5, 2.0] {
            let y = cv.y(cv.z_of_x(c(x, 1e-13)));
            assert!((y.im + PI * m.density(x)).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn y_squared_is_polynomial_in_x() {
        // y² = (1/4) h² ((x − c)² − u²)
        let m = solve_one_cut(&critical_quartic(0.2).unwrap(), 7.0).unwrap();
        let cv = build_spectral_curve(&m).unwrap();
        let (a, b) = (m.cuts[0].a, m.cuts[0].b);
        for z in [c(1.5, 0.3), c(-0.4, 0.9)] {
            let x = cv.x(z);
            let want = 0.25 * m.h.eval(x).powi(2) * (x - a) * (x - b);
            assert!((cv.y(z).powi(2) - want).norm() < 1e-9 * want.norm().max(1.0));
        }
    }

    #[test]
    fn involutions() {
        let m = solve_one_cut(&critical_quartic(0.3).unwrap(), 6.0).unwrap();
        let cv = build_spectral_curve(&m).unwrap();
        for z in [c(1.7, 0.2), c(0.3, -0.8), c(-2.2, 1.1)] {
            assert!((cv.x(z) - cv.x(1.0 / z)).norm() < 1e-12);
            assert!((cv.y(z) + cv.y(1.0 / z)).norm() < 1e-10);
        }
    }

    #[test]
    fn two_cut_measure_is_rejected() {
        let v = Potential::from_coefficients("double-well", &[0.0, 0.0, -1.0, 0.0, 0.25]).unwrap();
        let m = solve_two_cut(&v, 0.3).unwrap();
        assert_eq!(build_spectral_curve(&m), Err(EquilibriumError::GenusUnsupported(2)));
        let _ = Cut::new(0.0, 1.0);
    }
}
