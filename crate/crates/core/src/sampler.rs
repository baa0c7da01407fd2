//! Metropolis-within-Gibbs sampling of the log-gas
//! `Δ(λ)^{2β} exp(−(N/T) Σ V(λ_i))`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numerics::RngStream;
use crate::potentials::Potential;

/// Distances below this count as coincident eigenvalues.
pub const COLLISION_DIST: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SamplerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("proposal {proposal} collides with eigenvalue {index}")]
    Collision { index: usize, proposal: f64 },
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasConfig {
    pub n: usize,
    pub temperature: f64,
    pub beta: f64,
    pub potential: Potential,
    pub proposal_sigma: f64,
    pub seed: u64,
}

impl GasConfig {
    pub fn new(n: usize, temperature: f64, beta: f64, potential: Potential, seed: u64) -> Self {
        GasConfig {
            n,
            temperature,
            beta,
            potential,
            proposal_sigma: 0.1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.n < 2 {
            return Err(SamplerError::InvalidConfig(format!("n = {} < 2", self.n)));
        }
        for (name, v) in [
            ("temperature", self.temperature),
            ("beta", self.beta),
            ("proposal_sigma", self.proposal_sigma),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SamplerError::InvalidConfig(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    fn coupling(&self) -> f64 {
        self.n as f64 / self.temperature
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub eigenvalues: Vec<f64>,
    pub proposals: u64,
    pub accepted: u64,
    pub collisions: u64,
    pub rng: RngStream,
}

impl ChainState {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }
}

/// λ_k = (−1)^k 2k/N, k = 1..N, on random stream `stream`.
pub fn init_state(config: &GasConfig, stream: u64) -> ChainState {
    let n = config.n;
    let eigenvalues = (1..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * 2.0 * k as f64 / n as f64
        })
        .collect();
    ChainState {
        eigenvalues,
        proposals: 0,
        accepted: 0,
        collisions: 0,
        rng: RngStream::new(config.seed, stream),
    }
}

/// Unnormalized log-density `−(N/T) Σ V(λ_i) + 2β Σ_{i<j} ln|λ_i − λ_j|`.
pub fn log_density(eigenvalues: &[f64], config: &GasConfig) -> f64 {
    let pot: f64 = eigenvalues.iter().map(|&x| config.potential.value(x)).sum();
    let mut inter = 0.0;
    for (i, &a) in eigenvalues.iter().enumerate() {
        for &b in &eigenvalues[i + 1..] {
            inter += (a - b).abs().ln();
        }
    }
    -config.coupling() * pot + 2.0 * config.beta * inter
}

const CHUNK: usize = 16;

/// Log acceptance ratio for moving eigenvalue `index` to `proposal`.
pub fn log_accept_delta(
    eigenvalues: &[f64],
    config: &GasConfig,
    index: usize,
    proposal: f64,
) -> Result<f64, SamplerError> {
    let old = *eigenvalues.get(index).ok_or(SamplerError::BadIndex(index))?;
    if proposal == old {
        return Ok(0.0);
    }
    let v = &config.potential;
    let dpot = -config.coupling() * (v.value(proposal) - v.value(old));
    // products of ratios in chunks keep the number of logarithms small
    let mut log_sum = 0.0;
    let mut prod = 1.0;
    let mut in_chunk = 0;
    let mut chunk_start = 0;
    for (j, &lj) in eigenvalues.iter().enumerate() {
        if j == index {
            continue;
        }
        let num = (proposal - lj).abs();
        if num < COLLISION_DIST {
            return Err(SamplerError::Collision { index: j, proposal });
        }
        prod *= num / (old - lj).abs();
        in_chunk += 1;
        if in_chunk == CHUNK || j + 1 == eigenvalues.len() || (j + 2 == eigenvalues.len() && index == j + 1) {
            log_sum += if prod.is_normal() {
                prod.ln()
            } else {
                // left the normal range: redo this chunk term by term
                (chunk_start..=j)
                    .filter(|&k| k != index)
                    .map(|k| (proposal - eigenvalues[k]).abs().ln() - (old - eigenvalues[k]).abs().ln())
                    .sum()
            };
            prod = 1.0;
            in_chunk = 0;
            chunk_start = j + 1;
        }
    }
    Ok(dpot + 2.0 * config.beta * log_sum)
}

/// Proposal kernel for single-site moves; must be symmetric.
pub trait Proposal: Sync {
    fn propose(&self, current: f64, rng: &mut RngStream) -> f64;
}

#[derive(Debug, Clone, Copy)]
pub struct GaussianProposal {
    pub sigma: f64,
}

impl Proposal for GaussianProposal {
    fn propose(&self, current: f64, rng: &mut RngStream) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        current + self.sigma * z
    }
}

/// Uniform independent proposal over a finite set of sites.
#[derive(Debug, Clone)]
pub struct LatticeProposal {
    pub sites: Vec<f64>,
}

impl Proposal for LatticeProposal {
    fn propose(&self, _current: f64, rng: &mut RngStream) -> f64 {
        self.sites[rng.random_range(0..self.sites.len())]
    }
}

/// One Metropolis update of a uniformly chosen site.
pub fn step<P: Proposal + ?Sized>(state: &mut ChainState, config: &GasConfig, proposal: &P) {
    let n = state.eigenvalues.len();
    let i = state.rng.random_range(0..n);
    let cand = proposal.propose(state.eigenvalues[i], &mut state.rng);
    let u = state.rng.uniform();
    state.proposals += 1;
    match log_accept_delta(&state.eigenvalues, config, i, cand) {
        Ok(delta) => {
            if delta >= 0.0 || u < delta.exp() {
                state.eigenvalues[i] = cand;
                state.accepted += 1;
            }
        }
        Err(_) => state.collisions += 1,
    }
}

/// `N · n_sweeps` single-site updates with the Gaussian proposal of the config.
pub fn sweep(state: &mut ChainState, config: &GasConfig, n_sweeps: usize) {
    let prop = GaussianProposal {
        sigma: config.proposal_sigma,
    };
    sweep_with(state, config, n_sweeps, &prop);
}

pub fn sweep_with<P: Proposal + ?Sized>(state: &mut ChainState, config: &GasConfig, n_sweeps: usize, proposal: &P) {
    for _ in 0..n_sweeps * config.n {
        step(state, config, proposal);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunPlan {
    pub chains: usize,
    pub samples_per_chain: usize,
    pub burnin_sweeps: usize,
    pub thin_sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub chain: usize,
    pub proposals: u64,
    pub accepted: u64,
    pub collisions: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    /// Samples ordered by chain index, then by draw order.
    pub samples: Vec<Vec<f64>>,
    pub chains: Vec<ChainSummary>,
}

impl Ensemble {
    pub fn acceptance_rate(&self) -> f64 {
        let p: u64 = self.chains.iter().map(|c| c.proposals).sum();
        let a: u64 = self.chains.iter().map(|c| c.accepted).sum();
        if p == 0 {
            0.0
        } else {
            a as f64 / p as f64
        }
    }

    pub fn pooled(&self) -> Vec<f64> {
        self.samples.iter().flatten().copied().collect()
    }
}

fn run_chain(config: &GasConfig, chain: usize, samples: usize, burnin: usize, thin: usize) -> (Vec<Vec<f64>>, ChainSummary) {
    let mut st = init_state(config, chain as u64);
    sweep(&mut st, config, burnin);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        sweep(&mut st, config, thin);
        out.push(st.eigenvalues.clone());
    }
    let summary = ChainSummary {
        chain,
        proposals: st.proposals,
        accepted: st.accepted,
        collisions: st.collisions,
    };
    (out, summary)
}

/// A single chain (stream 0): burn-in, then one recorded state every
/// `thin_sweeps` sweeps.
pub fn sample_ensemble(
    config: &GasConfig,
    n_samples: usize,
    burnin_sweeps: usize,
    thin_sweeps: usize,
) -> Result<Vec<Vec<f64>>, SamplerError> {
    config.validate()?;
    if n_samples == 0 || thin_sweeps == 0 {
        return Err(SamplerError::InvalidConfig("n_samples and thin_sweeps must be >= 1".into()));
    }
    Ok(run_chain(config, 0, n_samples, burnin_sweeps, thin_sweeps).0)
}

/// Worker cap from `SPECTRALGAS_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("SPECTRALGAS_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Independent chains on streams `0..chains`, run in parallel and merged by
/// chain index. Output does not depend on the number of workers.
pub fn sample_chains(config: &GasConfig, plan: &RunPlan) -> Result<Ensemble, SamplerError> {
    config.validate()?;
    if plan.chains == 0 || plan.samples_per_chain == 0 || plan.thin_sweeps == 0 {
        return Err(SamplerError::InvalidConfig(
            "chains, samples_per_chain and thin_sweeps must be >= 1".into(),
        ));
    }
    let work = || {
        (0..plan.chains)
            .into_par_iter()
            .map(|c| run_chain(config, c, plan.samples_per_chain, plan.burnin_sweeps, plan.thin_sweeps))
            .collect::<Vec<_>>()
    };
    let results = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SamplerError::Pool(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut samples = Vec::with_capacity(plan.chains * plan.samples_per_chain);
    let mut chains = Vec::with_capacity(plan.chains);
    for (s, c) in results {
        samples.extend(s);
        chains.push(c);
    }
    Ok(Ensemble { samples, chains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{critical_quartic, quadratic};
    use proptest::prelude::*;
    use rand::Rng;

    fn gauss(n: usize) -> GasConfig {
        GasConfig::new(n, 1.0, 1.0, quadratic(), 7)
    }

    #[test]
    fn initial_states() {
        let s = init_state(&gauss(4), 0);
        assert_eq!(s.eigenvalues, vec![-0.5, 1.0, -1.5, 2.0]);
        let s = init_state(&gauss(2), 0);
        assert_eq!(s.eigenvalues, vec![-1.0, 2.0]);
        let s = init_state(&gauss(9), 0);
        let m = s.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        assert_eq!(m, 2.0);
        assert_eq!((s.proposals, s.accepted), (0, 0));
    }

    #[test]
    fn hand_evaluated_delta() {
        let d = log_accept_delta(&[0.0, 1.0], &gauss(2), 0, 2.0).unwrap();
        assert!((d + 4.0).abs() < 1e-15);
        assert!((d.exp() - 0.0183156388887).abs() < 1e-12);
    }

    #[test]
    fn identity_move_is_free() {
        let s = init_state(&gauss(10), 0);
        assert_eq!(log_accept_delta(&s.eigenvalues, &gauss(10), 3, s.eigenvalues[3]).unwrap(), 0.0);
    }

    #[test]
    fn collision_is_flagged() {
        let r = log_accept_delta(&[0.0, 1.0, 2.0], &gauss(3), 0, 1.0);
        assert!(matches!(r, Err(SamplerError::Collision { index: 1, .. })));
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let cfg = gauss(20);
        let mut a = init_state(&cfg, 0);
        let mut b = init_state(&cfg, 0);
        sweep(&mut a, &cfg, 5);
        sweep(&mut b, &cfg, 5);
        assert_eq!(a, b);
        assert_eq!(a.proposals, 100);
    }

    #[test]
    fn small_sigma_accepts_almost_everything() {
        let mut cfg = gauss(10);
        cfg.proposal_sigma = 1e-9;
        let mut s = init_state(&cfg, 0);
        sweep(&mut s, &cfg, 20);
        assert!(s.acceptance_rate() > 0.999);
    }

    #[test]
    fn appendix_run_counts() {
        let cfg = GasConfig::new(200, 1.0, 1.0, critical_quartic(0.5).unwrap(), 1);
        let mut s = init_state(&cfg, 0);
        sweep(&mut s, &cfg, 50);
        assert_eq!(s.proposals, 10_000);
        let r = s.acceptance_rate();
        assert!(r > 0.0 && r < 1.0);
    }

    #[test]
    fn chains_do_not_depend_on_worker_count() {
        let cfg = gauss(12);
        let plan = RunPlan {
            chains: 4,
            samples_per_chain: 3,
            burnin_sweeps: 2,
            thin_sweeps: 1,
        };
        let a = sample_chains(&cfg, &plan).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| sample_chains(&cfg, &plan).unwrap());
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.samples.len(), 12);
    }

    #[test]
    fn exchange_test_on_five_point_lattice() {
        // N = 3 on five sites: the chain's occupation frequencies must match
        // the exact Gibbs weights over all 5^3 configurations.
        let sites = vec![-1.0, -0.5, 0.0, 0.5, 1.0];
        let cfg = GasConfig::new(3, 1.0, 1.0, quadratic(), 3);
        let mut exact = std::collections::HashMap::new();
        let mut z = 0.0;
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let w = log_density(&[sites[a], sites[b], sites[c]], &cfg).exp();
                    exact.insert([a, b, c], w);
                    z += w;
                }
            }
        }
        let prop = LatticeProposal { sites: sites.clone() };
        let mut st = init_state(&cfg, 0);
        st.eigenvalues = vec![-1.0, 0.0, 1.0];
        let idx = |x: f64| sites.iter().position(|&s| s == x).unwrap();
        let mut counts = std::collections::HashMap::new();
        let steps = 400_000;
        for _ in 0..steps {
            step(&mut st, &cfg, &prop);
            let key = [idx(st.eigenvalues[0]), idx(st.eigenvalues[1]), idx(st.eigenvalues[2])];
            *counts.entry(key).or_insert(0usize) += 1;
        }
        let tv: f64 = exact
            .iter()
            .map(|(k, w)| (w / z - *counts.get(k).unwrap_or(&0) as f64 / steps as f64).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.05, "tv = {tv}");
    }

    proptest! {
        #[test]
        fn delta_is_antisymmetric(
            eigs in prop::collection::vec(-3.0f64..3.0, 3..40),
            i in 0usize..40,
            target in -3.0f64..3.0,
            beta in 0.3f64..3.0,
        ) {
            let i = i % eigs.len();
            let mut cfg = GasConfig::new(eigs.len(), 1.3, beta, critical_quartic(0.3).unwrap(), 1);
            cfg.proposal_sigma = 0.1;
            prop_assume!(eigs.iter().enumerate().all(|(j, &x)| j == i || (x - target).abs() > 1e-6));
            let mut sorted = eigs.clone();
            sorted.sort_by(f64::total_cmp);
            prop_assume!(sorted.windows(2).all(|w| w[1] - w[0] > 1e-6));
            let fwd = log_accept_delta(&eigs, &cfg, i, target).unwrap();
            let mut moved = eigs.clone();
            let old = moved[i];
            moved[i] = target;
            let back = log_accept_delta(&moved, &cfg, i, old).unwrap();
            prop_assert!((fwd + back).abs() <= 1e-12 * (1.0 + fwd.abs()));
            let full = log_density(&moved, &cfg) - log_density(&eigs, &cfg);
            prop_assert!((full - fwd).abs() <= 1e-10 * (1.0 + full.abs()));
        }

        #[test]
        fn log_density_is_permutation_invariant(
            eigs in prop::collection::vec(-3.0f64..3.0, 2..20),
            seed in 0u64..1000,
        ) {
            let cfg = GasConfig::new(eigs.len(), 1.0, 1.0, quadratic(), 1);
            let mut perm = eigs.clone();
            let mut rng = RngStream::new(seed, 0);
            for k in (1..perm.len()).rev() {
                let j = rng.random_range(0..=k);
                perm.swap(k, j);
            }
            let a = log_density(&eigs, &cfg);
            let b = log_density(&perm, &cfg);
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()) || (a.is_infinite() && b.is_infinite()));
        }
    }
}
