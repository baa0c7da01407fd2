//! Rational functions `num / den` with a monic, reduced denominator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::polynomial::{Polynomial, RootCluster, ROOT_CLUSTER_TOL};
use super::series::Series;
use super::NumericsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds `num / den`, normalizing the denominator to be monic and
    /// cancelling common roots.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, NumericsError> {
        if den.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        Ok(Self::from_parts_unreduced(num, den).reduce())
    }

    /// Normalizes the denominator to be monic without attempting cancellation.
    pub fn from_parts_unreduced(num: Polynomial, den: Polynomial) -> Self {
        let lead = den.leading();
        RationalFunction {
            num: num.scale(lead.inv()),
            den: den.monic(),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Root clusters of the denominator (the poles, with multiplicity, before
    /// any numerator cancellation is considered).
    pub fn poles(&self) -> Vec<RootCluster> {
        self.den.root_clusters(ROOT_CLUSTER_TOL)
    }

    /// Cancels every denominator root that is also a numerator root.
    pub fn reduce(&self) -> Self {
        if self.num.is_zero() {
            return RationalFunction {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            };
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for cluster in self.den.root_clusters(ROOT_CLUSTER_TOL) {
            let mut left = cluster.multiplicity;
            while left > 0 && num.degree().unwrap_or(0) > 0 && vanishes_strictly(&num, cluster.center) {
                num = num.deflate(cluster.center);
                den = den.deflate(cluster.center);
                left -= 1;
            }
        }
        Self::from_parts_unreduced(num, den)
    }

    /// Laurent expansion around `center`, known up to exponent `top`.
    pub fn laurent_at(&self, center: Complex64, top: i32) -> Series {
        let den_order = leading_zero_order(&self.den, center, 1e-11);
        let num_order = leading_zero_order(&self.num, center, 1e-11);
        let extra = den_order as i32 + 1;
        let n = Series::from_polynomial(&self.num, center, top + extra + num_order as i32);
        let d = Series::from_polynomial(&self.den, center, top + 2 * extra + num_order as i32);
        let n = strip(n, num_order);
        let d = strip(d, den_order);
        (&n * &d.inverse()).truncate(top)
    }

    /// Residue at `pole`, which must lie within the clustering tolerance of a
    /// denominator root.
    pub fn residue_at(&self, pole: Complex64) -> Result<Complex64, NumericsError> {
        let cluster = self
            .den
            .root_clusters(ROOT_CLUSTER_TOL)
            .into_iter()
            .filter(|c| (c.center - pole).norm() <= ROOT_CLUSTER_TOL * (1.0 + c.center.norm()))
            .max_by_key(|c| c.multiplicity);
        if cluster.is_none() && !self.den.vanishes_to_order(pole, 1) {
            return Err(NumericsError::NotAPole { re: pole.re, im: pole.im });
        }
        let m = leading_zero_order(&self.den, pole, 1e-7);
        let k = leading_zero_order(&self.num, pole, 1e-7).min(m);
        let n = strip(Series::from_polynomial(&self.num, pole, m as i32 + 1), k);
        let d = strip(Series::from_polynomial(&self.den, pole, 2 * m as i32 + 1), m);
        let f = &n * &d.inverse();
        Ok(f.coeff(-1))
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::from_parts_unreduced(num, &self.den * &other.den).reduce()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_parts_unreduced(&self.num * &other.num, &self.den * &other.den).reduce()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }
}

fn vanishes_strictly(p: &Polynomial, z: Complex64) -> bool {
    p.eval(z).norm() <= 1e-9 * p.eval_scale(z).max(f64::MIN_POSITIVE)
}

/// Number of leading Taylor coefficients at `z` that are negligible.
fn leading_zero_order(p: &Polynomial, z: Complex64, tol: f64) -> usize {
    if p.is_zero() {
        return 0;
    }
    let shifted = p.taylor_shift(z);
    let scale = p.eval_scale(z).max(f64::MIN_POSITIVE);
    let radius = 1.0 + z.norm();
    shifted
        .coeffs()
        .iter()
        .enumerate()
        .take_while(|(j, c)| c.norm() * radius.powi(*j as i32) <= tol * scale)
        .count()
        .min(p.degree().unwrap_or(0))
}

fn strip(s: Series, k: usize) -> Series {
    Series::new(s.val + k as i32, s.coeffs[k.min(s.coeffs.len())..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn simple_pole_residue() {
        let f = RationalFunction::new(Polynomial::one(), Polynomial::linear(c(2.0))).unwrap();
        assert!((f.residue_at(c(2.0)).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn double_pole_without_residue() {
        let den = Polynomial::linear(c(1.0)).pow(2);
        let f = RationalFunction::new(Polynomial::one(), den).unwrap();
        assert!(f.residue_at(c(1.0)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn cover_up_residue() {
        let num = Polynomial::from_real(&[1.0, 3.0]);
        let den = Polynomial::from_roots(&[c(1.0), c(-1.0)]);
        let f = RationalFunction::new(num, den).unwrap();
        assert!((f.residue_at(c(1.0)).unwrap() - 2.0).norm() < 1e-13);
    }

    #[test]
    fn not_a_pole() {
        let f = RationalFunction::new(Polynomial::one(), Polynomial::linear(c(2.0))).unwrap();
        assert!(matches!(f.residue_at(c(3.0)), Err(NumericsError::NotAPole { .. })));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(Polynomial::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn reduction_cancels_common_roots() {
        let num = Polynomial::from_roots(&[c(1.0), c(3.0)]);
        let den = Polynomial::from_roots(&[c(1.0), c(1.0), c(-2.0)]);
        let f = RationalFunction::new(num, den).unwrap();
        assert_eq!(f.denominator().degree(), Some(2));
        assert_eq!(f.numerator().degree(), Some(1));
        let z = Complex64::new(0.3, 0.2);
        let expect = (z - 3.0) / ((z - 1.0) * (z + 2.0));
        assert!((f.eval(z) - expect).norm() < 1e-12);
    }

    #[test]
    fn laurent_expansion_at_double_pole() {
        // 1/(z-1)^2 + 3/(z-1) + 2
        let den = Polynomial::linear(c(1.0)).pow(2);
        let num = &(&Polynomial::one() + &Polynomial::linear(c(1.0)).scale(c(3.0)))
            + &den.scale(c(2.0));
        let f = RationalFunction::new(num, den).unwrap();
        let s = f.laurent_at(c(1.0), 2);
        assert_eq!(s.val, -2);
        assert!((s.coeff(-2) - 1.0).norm() < 1e-13);
        assert!((s.coeff(-1) - 3.0).norm() < 1e-13);
        assert!((s.coeff(0) - 2.0).norm() < 1e-13);
        assert!(s.coeff(1).norm() < 1e-13);
    }
}
