//! Log-gas eigenvalue sampling, equilibrium measures, universal
//! random-matrix laws and topological recursion on genus-0 curves.

pub mod cli;
pub mod equilibrium;
pub mod kernels;
pub mod numerics;
pub mod potentials;
pub mod recursion;
pub mod sampler;
pub mod stats;
