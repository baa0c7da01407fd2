//! Histograms, unfolded spacings, empirical CDFs and the Kolmogorov–Smirnov
//! distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Pairs with `ρ(λᵢ) ≤ RHO_CUT_FRACTION · max ρ` are dropped when unfolding.
pub const RHO_CUT_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("need at least one bin")]
    NoBins,
    #[error("empty range [{0}, {1}]")]
    BadRange(f64, f64),
    #[error("empty sample")]
    EmptyData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub normalized_density: Vec<f64>,
    /// Points that fell outside the range.
    pub outside: usize,
}

impl Histogram {
    /// True when no point landed in range; the density is then all zeros.
    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }

    /// Leftmost and rightmost edges of the occupied bins.
    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.counts.iter().position(|&c| c > 0)?;
        let last = self.counts.iter().rposition(|&c| c > 0)?;
        Some((self.edges[first], self.edges[last + 1]))
    }
}

/// Equal-width histogram on `[lo, hi]`; bins are half open except the last.
/// The density is normalized over the points inside the range.
pub fn histogram(data: &[f64], bins: usize, range: [f64; 2]) -> Result<Histogram, StatsError> {
    let [lo, hi] = range;
    if bins == 0 {
        return Err(StatsError::NoBins);
    }
    if !(lo < hi) {
        return Err(StatsError::BadRange(lo, hi));
    }
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0u64; bins];
    let mut outside = 0;
    for &x in data {
        if !(lo..=hi).contains(&x) {
            outside += 1;
            continue;
        }
        let mut i = (((x - lo) / width) as usize).min(bins - 1);
        // edge rounding: keep [e_i, e_{i+1})
        if x < edges[i] {
            i -= 1;
        } else if i + 1 < bins && x >= edges[i + 1] {
            i += 1;
        }
        counts[i] += 1;
    }
    let total: u64 = counts.iter().sum();
    let normalized_density = edges
        .windows(2)
        .zip(&counts)
        .map(|(e, &c)| if total == 0 { 0.0 } else { c as f64 / (total as f64 * (e[1] - e[0])) })
        .collect();
    Ok(Histogram {
        edges,
        counts,
        normalized_density,
        outside,
    })
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Unfolded {
    pub spacings: Vec<f64>,
    /// Pairs dropped by the density cut.
    pub excluded: usize,
}

/// `rᵢ = N (λᵢ₊₁ − λᵢ) ρ(λᵢ)` for consecutive pairs of a sorted sample,
/// keeping pairs with `ρ(λᵢ) > 0.05 max ρ` (max over the sample points).
pub fn unfold_spacings<F: Fn(f64) -> f64>(sorted: &[f64], rho: F, n: usize) -> Unfolded {
    if sorted.len() < 2 {
        return Unfolded::default();
    }
    let dens: Vec<f64> = sorted.iter().map(|&x| rho(x)).collect();
    let cut = RHO_CUT_FRACTION * dens.iter().copied().fold(0.0, f64::max);
    let mut out = Unfolded::default();
    for (w, &d) in sorted.windows(2).zip(&dens) {
        if d > cut {
            out.spacings.push(n as f64 * (w[1] - w[0]) * d);
        } else {
            out.excluded += 1;
        }
    }
    out
}

/// Unfolds every sample on its own, then pools in sample order.
pub fn unfold_pooled<F: Fn(f64) -> f64 + Sync>(samples: &[Vec<f64>], rho: F, n: usize) -> Unfolded {
    let parts: Vec<Unfolded> = samples
        .par_iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_by(f64::total_cmp);
            unfold_spacings(&s, &rho, n)
        })
        .collect();
    parts.into_iter().fold(Unfolded::default(), |mut acc, p| {
        acc.spacings.extend(p.spacings);
        acc.excluded += p.excluded;
        acc
    })
}

/// Empirical CDF of a sample, right-continuous.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(sample: &[f64]) -> Self {
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ecdf { sorted }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }
}

/// `sup |ECDF − F|` over the sample points, checking both sides of each jump.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptyData);
    }
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// A function tabulated on a uniform grid and linearly interpolated, clamped
/// to the end values outside the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<f64>,
}

impl Tabulated {
    pub fn new<F: Fn(f64) -> f64 + Sync>(lo: f64, hi: f64, points: usize, f: F) -> Self {
        assert!(points >= 2 && lo < hi);
        let h = (hi - lo) / (points - 1) as f64;
        let values = (0..points).into_par_iter().map(|i| f(lo + h * i as f64)).collect();
        Tabulated { lo, hi, values }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        if x <= self.lo {
            return self.values[0];
        }
        if x >= self.hi {
            return self.values[n - 1];
        }
        let t = (x - self.lo) / (self.hi - self.lo) * (n - 1) as f64;
        let i = (t as usize).min(n - 2);
        let f = t - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }
}

/// Edge scaling of the largest eigenvalue, `N^{2/3} (λ_max/√T − 2)`, for a
/// gas whose equilibrium support is `[−2√T, 2√T]`.
pub fn rescale_largest(lambda_max: f64, n: usize, temperature: f64) -> f64 {
    (n as f64).powf(2.0 / 3.0) * (lambda_max / temperature.sqrt() - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn histogram_examples() {
        let h = histogram(&[0.5], 1, [0.0, 1.0]).unwrap();
        assert_eq!(h.normalized_density, vec![1.0]);
        let h = histogram(&[0.1, 0.9], 2, [0.0, 1.0]).unwrap();
        assert_eq!(h.normalized_density, vec![1.0, 1.0]);
        // last bin closed, others half open
        let h = histogram(&[0.0, 0.5, 1.0], 2, [0.0, 1.0]).unwrap();
        assert_eq!(h.counts, vec![1, 2]);
        assert_eq!(h.support(), Some((0.0, 1.0)));
    }

    #[test]
    fn histogram_errors_and_empty() {
        assert_eq!(histogram(&[1.0], 0, [0.0, 1.0]), Err(StatsError::NoBins));
        assert_eq!(histogram(&[1.0], 3, [1.0, 1.0]), Err(StatsError::BadRange(1.0, 1.0)));
        let h = histogram(&[], 4, [0.0, 1.0]).unwrap();
        assert!(h.is_empty() && h.normalized_density.iter().all(|&d| d == 0.0));
        let h = histogram(&[5.0, -1.0], 4, [0.0, 1.0]).unwrap();
        assert!(h.is_empty());
        assert_eq!(h.outside, 2);
        assert_eq!(h.support(), None);
    }

    #[test]
    fn uniform_histogram_is_flat() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let data: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        let h = histogram(&data, 20, [0.0, 1.0]).unwrap();
        let worst = h.normalized_density.iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 0.05, "{worst}");
    }

    #[test]
    fn unfolding_uniform_spacing() {
        let (n, l) = (50, 3.0);
        let pts: Vec<f64> = (0..n).map(|i| l * i as f64 / (n - 1) as f64).collect();
        let u = unfold_spacings(&pts, |_| 1.0 / l, n);
        assert_eq!(u.excluded, 0);
        assert_eq!(u.spacings.len(), n - 1);
        for r in u.spacings {
            assert_abs_diff_eq!(r, n as f64 / (n - 1) as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn unfolding_drops_low_density_pairs() {
        let pts = [0.0, 1.0, 2.0, 3.0];
        let rho = |x: f64| if x < 0.5 { 0.01 } else { 1.0 };
        let u = unfold_spacings(&pts, rho, 4);
        assert_eq!(u.excluded, 1);
        assert_eq!(u.spacings.len(), 2);
        assert_eq!(unfold_spacings(&[1.0], rho, 1), Unfolded::default());
    }

    #[test]
    fn ks_examples() {
        let uniform = |x: f64| x.clamp(0.0, 1.0);
        assert_eq!(ks_distance(&[0.0], uniform).unwrap(), 1.0);
        let n = 100;
        let grid: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        assert!(ks_distance(&grid, uniform).unwrap() <= 1.0 / n as f64 + 1e-15);
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let data: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        assert!(ks_distance(&data, uniform).unwrap() < 0.02);
        assert_eq!(ks_distance(&[], uniform), Err(StatsError::EmptyData));
    }

    #[test]
    fn ecdf_steps() {
        let e = Ecdf::new(&[2.0, 1.0, 3.0, 2.0]);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval(3.0), 1.0);
    }

    #[test]
    fn tabulated_interpolates() {
        let t = Tabulated::new(0.0, 2.0, 201, |x| x * x);
        assert_abs_diff_eq!(t.eval(1.005), 1.005f64.powi(2), epsilon = 1e-4);
        assert_eq!(t.eval(-1.0), 0.0);
        assert_eq!(t.eval(3.0), 4.0);
    }

    #[test]
    fn largest_eigenvalue_scaling() {
        assert_eq!(rescale_largest(2.0, 100, 1.0), 0.0);
        assert_abs_diff_eq!(rescale_largest(4.0 + 2.0 / 1000f64.powf(2.0 / 3.0), 1000, 4.0), 1.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn histogram_mass(data in proptest::collection::vec(-3.0f64..3.0, 1..200), bins in 1usize..30) {
            let h = histogram(&data, bins, [-3.0, 3.0]).unwrap();
            let mass: f64 = h.normalized_density.iter().zip(h.edges.windows(2)).map(|(d, e)| d * (e[1] - e[0])).sum();
            prop_assert!((mass - 1.0).abs() < 1e-12);
        }

        #[test]
        fn unfolding_affine_invariance(
            mut pts in proptest::collection::vec(-1.0f64..1.0, 3..60),
            a in 0.2f64..5.0,
            b in -3.0f64..3.0,
        ) {
            pts.sort_by(f64::total_cmp);
            let rho = |x: f64| 0.75 * (1.0 - x * x).max(0.0) + 0.1;
            let moved: Vec<f64> = pts.iter().map(|x| a * x + b).collect();
            let u = unfold_spacings(&pts, rho, pts.len());
            let v = unfold_spacings(&moved, |y| rho((y - b) / a) / a, pts.len());
            prop_assert_eq!(u.excluded, v.excluded);
            for (r, s) in u.spacings.iter().zip(&v.spacings) {
                prop_assert!((r - s).abs() < 1e-12);
            }
        }

        #[test]
        fn ks_in_unit_interval(data in proptest::collection::vec(-2.0f64..2.0, 1..100)) {
            let d = ks_distance(&data, |x| 1.0 / (1.0 + (-x).exp())).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
        }
    }
}
