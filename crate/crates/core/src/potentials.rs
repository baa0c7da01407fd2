//! Polynomial potential families.
//!
//! Potentials are stored without the `1/T` prefactor; temperature is always
//! passed separately.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::Polynomial;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PotentialError {
    #[error("potential must have degree at least 2, got {0}")]
    DegreeTooLow(usize),
    #[error("even-degree potential needs a positive leading coefficient, got {0}")]
    NotConfining(f64),
    #[error("parameter {name} = {value} outside its domain")]
    BadParameter { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialJson", into = "PotentialJson")]
pub struct Potential {
    v: Polynomial,
    dv: Polynomial,
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct PotentialJson {
    name: String,
    coefficients: Vec<f64>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

impl TryFrom<PotentialJson> for Potential {
    type Error = PotentialError;
    fn try_from(j: PotentialJson) -> Result<Self, Self::Error> {
        let mut p = Potential::from_coefficients(&j.name, &j.coefficients)?;
        p.params = j.params;
        Ok(p)
    }
}

impl From<Potential> for PotentialJson {
    fn from(p: Potential) -> Self {
        PotentialJson {
            coefficients: p.v.real_coeffs(),
            name: p.name,
            params: p.params,
        }
    }
}

impl Potential {
    /// A potential with the given ascending real coefficients.
    pub fn from_coefficients(name: &str, coeffs: &[f64]) -> Result<Self, PotentialError> {
        let v = Polynomial::from_real(coeffs);
        let deg = v.degree().unwrap_or(0);
        if deg < 2 {
            return Err(PotentialError::DegreeTooLow(deg));
        }
        let lead = v.leading().re;
        if deg % 2 == 0 && lead <= 0.0 {
            return Err(PotentialError::NotConfining(lead));
        }
        Ok(Potential {
            dv: v.derivative(),
            v,
            name: name.to_string(),
            params: BTreeMap::new(),
        })
    }

    fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.v
    }

    pub fn derivative_polynomial(&self) -> &Polynomial {
        &self.dv
    }

    pub fn degree(&self) -> usize {
        self.v.degree().unwrap_or(0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.v.eval_real(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.dv.eval_real(x)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.dv.derivative().eval_real(x)
    }

    /// Real local minima of V, sorted by increasing value of V.
    pub fn minima(&self) -> Vec<f64> {
        let d2 = self.dv.derivative();
        let mut mins: Vec<f64> = self
            .dv
            .roots()
            .into_iter()
            .filter(|r| r.im.abs() <= 1e-7 * (1.0 + r.re.abs()))
            .map(|r| r.re)
            .filter(|&x| d2.eval_real(x) > 0.0)
            .collect();
        mins.sort_by(|a, b| self.value(*a).total_cmp(&self.value(*b)));
        mins.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        mins
    }

    /// Critical temperature of the family, when the family has one.
    pub fn critical_temperature(&self) -> Option<f64> {
        match self.name.as_str() {
            "critical-quartic" => self.params.get("epsilon").map(|&e| critical_temperature_quartic(e)),
            "singular" => {
                let m = *self.params.get("m")? as u32;
                Some(singular_tc(m, *self.params.get("b")?, *self.params.get("epsilon")?))
            }
            _ => None,
        }
    }
}

/// V(x) = x²/2.
pub fn quadratic() -> Potential {
    Potential::from_coefficients("quadratic", &[0.0, 0.0, 0.5]).expect("valid quadratic")
}

/// V(x) = x⁴/4 − (4cos πε/3) x³ + cos(2πε) x² + 8cos(πε) x.
pub fn critical_quartic(epsilon: f64) -> Result<Potential, PotentialError> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(PotentialError::BadParameter {
            name: "epsilon",
            value: epsilon,
        });
    }
    let c1 = (PI * epsilon).cos();
    let c2 = (2.0 * PI * epsilon).cos();
    let coeffs = [0.0, 8.0 * c1, c2, -4.0 * c1 / 3.0, 0.25];
    Ok(Potential::from_coefficients("critical-quartic", &coeffs)?.with_param("epsilon", epsilon))
}

/// T_c = 1 + 4cos²(πε) for the critical quartic.
pub fn critical_temperature_quartic(epsilon: f64) -> f64 {
    let c1 = (PI * epsilon).cos();
    1.0 + 4.0 * c1 * c1
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The potential whose equilibrium density at T_c is proportional to
/// `(x − bε)^{2m} sqrt(b² − x²)`.
pub fn singular_family(m: u32, b: f64, epsilon: f64) -> Result<Potential, PotentialError> {
    if m == 0 {
        return Err(PotentialError::BadParameter {
            name: "m",
            value: 0.0,
        });
    }
    if !(b > 0.0) {
        return Err(PotentialError::BadParameter { name: "b", value: b });
    }
    if !(epsilon.abs() < 1.0) {
        return Err(PotentialError::BadParameter {
            name: "epsilon",
            value: epsilon,
        });
    }
    let mi = m as i64;
    let top = 2 * mi + 1;
    let mut dv = vec![0.0; (top + 1) as usize];
    for j in 0..=top {
        let mut c = binomial(2 * mi, j - 1) * (-b * epsilon).powi((top - j) as i32);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        for n in 1..=((top - j) / 2) {
            let nu = n as u32;
            c += binomial(2 * mi, 2 * n + j - 1)
                * sign
                * factorial(2 * nu - 2)
                * epsilon.powi((2 * (mi - n) + 1 - j) as i32)
                * b.powi((top - j) as i32)
                / (factorial(nu) * factorial(nu - 1) * 2f64.powi(2 * n as i32 - 1));
        }
        dv[j as usize] = c;
    }
    let v = Polynomial::from_real(&dv).integral();
    let coeffs: Vec<f64> = v.real_coeffs();
    Ok(Potential::from_coefficients("singular", &coeffs)?
        .with_param("m", m as f64)
        .with_param("b", b)
        .with_param("epsilon", epsilon))
}

/// Critical temperature of [`singular_family`].
pub fn singular_tc(m: u32, b: f64, epsilon: f64) -> f64 {
    let sum: f64 = (1..=m + 1)
        .map(|n| {
            epsilon.powi((2 * m + 2 - 2 * n) as i32) * factorial(2 * m)
                / (factorial(n) * factorial(2 * m + 2 - 2 * n) * factorial(n - 1) * 2f64.powi(2 * n as i32 - 1))
        })
        .sum();
    b.powi(2 * m as i32 + 2) / 2.0 * sum
}

/// The normalized critical density `(1/T_c)(1/2π)(x − bε)^{2m} sqrt(b² − x²)`.
pub fn singular_density(m: u32, b: f64, epsilon: f64, x: f64) -> f64 {
    if x.abs() >= b {
        return 0.0;
    }
    (x - b * epsilon).powi(2 * m as i32) * (b * b - x * x).sqrt() / (2.0 * PI * singular_tc(m, b, epsilon))
}

/// The critical quartic density at T_c, `(x − 2cos πε)² sqrt(4 − x²) / (2π T_c)`.
pub fn critical_quartic_density(epsilon: f64, x: f64) -> f64 {
    if x.abs() >= 2.0 {
        return 0.0;
    }
    let c1 = (PI * epsilon).cos();
    let d = x - 2.0 * c1;
    d * d * (4.0 - x * x).sqrt() / (2.0 * PI * critical_temperature_quartic(epsilon))
}

/// `Pol((x − bε)^{2m} sqrt(x² − b²))`, the polynomial part at infinity.
pub fn singular_polynomial_part(m: u32, b: f64, epsilon: f64) -> Polynomial {
    let h = Polynomial::from_real(&[-b * epsilon, 1.0]).pow(2 * m);
    let deg = 2 * m as usize + 1;
    // sqrt(x² − b²) = x Σ_k C(1/2, k) (−b²)^k x^{−2k}
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    let mut gen = 1.0;
    for k in 0..=m as usize + 1 {
        if k > 0 {
            gen *= (0.5 - (k - 1) as f64) / k as f64 * (-b * b);
        }
        for (i, &hc) in h.coeffs().iter().enumerate() {
            let p = i as i64 + 1 - 2 * k as i64;
            if p >= 0 {
                coeffs[p as usize] += hc * gen;
            }
        }
    }
    Polynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::integrate_sqrt_weight;

    #[test]
    fn quadratic_values() {
        let v = quadratic();
        assert_eq!(v.value(2.0), 2.0);
        assert_eq!(v.derivative(3.0), 3.0);
        assert_eq!(v.value(0.0), 0.0);
    }

    #[test]
    fn critical_quartic_half() {
        let v = critical_quartic(0.5).unwrap();
        let c = v.polynomial().real_coeffs();
        let expect = [0.0, 0.0, -1.0, 0.0, 0.25];
        for (a, b) in c.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn critical_quartic_cubic_coefficient() {
        let v = critical_quartic(0.0).unwrap();
        assert!((v.polynomial().coeff(3).re + 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn quartic_even_only_at_half() {
        for e in [0.0, 0.2, 0.5, 0.7, 1.0] {
            let c = critical_quartic(e).unwrap().polynomial().real_coeffs();
            let even = c[1].abs() < 1e-15 && c[3].abs() < 1e-15;
            assert_eq!(even, e == 0.5, "eps={e}");
        }
    }

    #[test]
    fn quartic_tc() {
        assert!((critical_temperature_quartic(0.5) - 1.0).abs() < 1e-15);
        assert!((critical_temperature_quartic(0.0) - 5.0).abs() < 1e-15);
        assert!((critical_temperature_quartic(1.0) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn quartic_tc_normalizes_critical_density() {
        for e in [0.0, 0.3, 0.5] {
            let c1 = (PI * e).cos();
            let mass = integrate_sqrt_weight(-2.0, 2.0, 8, |x| {
                let d = x - 2.0 * c1;
                d * d / (2.0 * PI * critical_temperature_quartic(e))
            });
            assert!((mass - 1.0).abs() < 1e-13, "eps={e}");
        }
    }

    #[test]
    fn singular_tc_values() {
        assert!((singular_tc(1, 1.0, 0.0) - 1.0 / 16.0).abs() < 1e-15);
        assert!((singular_tc(1, 2.0, 0.0) - 1.0).abs() < 1e-15);
        // exact rational values 5/4, 57/16, 861/64 at b = 2, ε = 1/4
        assert!((singular_tc(1, 2.0, 0.25) - 1.25).abs() < 1e-14);
        assert!((singular_tc(2, 2.0, 0.25) - 57.0 / 16.0).abs() < 1e-13);
        assert!((singular_tc(3, 2.0, 0.25) - 861.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn singular_tc_is_unnormalized_mass() {
        for m in 1..=3 {
            for b in [1.0, 2.0] {
                for e in [0.0, 0.125, 0.25] {
                    let mass = integrate_sqrt_weight(-b, b, 16, |x| (x - b * e).powi(2 * m as i32) / (2.0 * PI));
                    let tc = singular_tc(m, b, e);
                    assert!(tc > 0.0);
                    assert!((mass - tc).abs() <= 1e-8, "m={m} b={b} e={e}");
                }
            }
        }
    }

    #[test]
    fn singular_derivative_degree_and_polynomial_part() {
        for m in 1..=3 {
            for (b, e) in [(1.0, 0.0), (2.0, 0.25), (1.5, -0.4)] {
                let v = singular_family(m, b, e).unwrap();
                assert_eq!(v.derivative_polynomial().degree(), Some(2 * m as usize + 1));
                let pol = singular_polynomial_part(m, b, e);
                let diff = v.derivative_polynomial() - &pol;
                assert!(diff.coeffs().iter().all(|c| c.norm() < 1e-12), "m={m}");
            }
        }
    }

    #[test]
    fn singular_m1_exact_coefficients() {
        // b = 2, ε = 1/4: V' = x³ − x² − 7x/4 + 2
        let v = singular_family(1, 2.0, 0.25).unwrap();
        let c = v.derivative_polynomial().real_coeffs();
        for (a, b) in c.iter().zip([2.0, -1.75, -1.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn json_round_trip() {
        let v = critical_quartic(0.25).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains("\"coefficients\""));
        let back: Potential = serde_json::from_str(&s).unwrap();
        assert_eq!(back.name, "critical-quartic");
        assert_eq!(back.params["epsilon"], 0.25);
        assert!((back.value(1.3) - v.value(1.3)).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_confining() {
        assert!(Potential::from_coefficients("bad", &[0.0, 0.0, -1.0]).is_err());
        assert!(Potential::from_coefficients("bad", &[0.0, 1.0]).is_err());
    }

    #[test]
    fn double_well_minima() {
        let v = critical_quartic(0.5).unwrap();
        let m = v.minima();
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|x| (x.abs() - 2f64.sqrt()).abs() < 1e-10));
    }
}
