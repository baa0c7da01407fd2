//! Polynomials, rational functions, quadrature, special functions, ODEs
//! and random streams.

pub mod airy;
pub mod ode;
pub mod polynomial;
pub mod quadrature;
pub mod rational;
pub mod rng;
pub mod series;

pub use airy::{airy_ai, Airy};
pub use ode::{integrate_ode, Trajectory};
pub use polynomial::{Polynomial, RootCluster, ROOT_CLUSTER_TOL};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use rational::RationalFunction;
pub use rng::RngStream;
pub use series::Series;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("{re}{im:+}i is not a pole")]
    NotAPole { re: f64, im: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
}
