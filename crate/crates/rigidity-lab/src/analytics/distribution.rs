//! The exact counting distribution: a Poisson binomial built by convolving
//! the Bernoulli factors of the restricted-kernel spectrum, O(m²) overall.

use crate::error::Result;
use crate::geometry::CountingRegion;

use super::gram::{bernoulli_spectrum, BernoulliSpectrum};
use super::KernelContext;

#[derive(Debug, Clone)]
pub struct CountDistribution {
    /// `pmf[k] = P[N = k]`, `k = 0..=m`.
    pub pmf: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

impl CountDistribution {
    pub fn from_bernoulli_means(probs: &[f64]) -> Self {
        let mut pmf = vec![1.0f64];
        for &p in probs {
            let q = 1.0 - p;
            let mut next = vec![0.0; pmf.len() + 1];
            for (k, &w) in pmf.iter().enumerate() {
                next[k] += w * q;
                next[k + 1] += w * p;
            }
            pmf = next;
        }
        let mean: f64 = pmf.iter().enumerate().map(|(k, &w)| k as f64 * w).sum();
        let second: f64 = pmf.iter().enumerate().map(|(k, &w)| (k as f64) * (k as f64) * w).sum();
        Self { pmf, mean, variance: (second - mean * mean).max(0.0) }
    }

    pub fn from_spectrum(spectrum: &BernoulliSpectrum) -> Self {
        Self::from_bernoulli_means(&spectrum.probs)
    }

    /// `P[N ≥ k]`.
    pub fn tail_ge(&self, k: usize) -> f64 {
        if k >= self.pmf.len() {
            return 0.0;
        }
        self.pmf[k..].iter().sum()
    }

    /// Two-sided tail `P[|N - center| ≥ t]` for a real center.
    pub fn tail_two_sided(&self, center: f64, t: f64) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .filter(|(k, _)| (*k as f64 - center).abs() >= t)
            .map(|(_, &w)| w)
            .sum()
    }

    pub fn normalization_defect(&self) -> f64 {
        (self.pmf.iter().sum::<f64>() - 1.0).abs()
    }
}

/// Exact counting distribution of a region.
pub fn count_distribution(ctx: &KernelContext, region: &CountingRegion) -> Result<CountDistribution> {
    Ok(CountDistribution::from_spectrum(&bernoulli_spectrum(ctx, region)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::gram::expected_count_exact;
    use crate::params::EnsembleParams;

    #[test]
    fn all_ones_is_point_mass() {
        let d = CountDistribution::from_bernoulli_means(&[1.0; 7]);
        assert_eq!(d.pmf.len(), 8);
        assert!((d.pmf[7] - 1.0).abs() < 1e-12);
        assert!((d.mean - 7.0).abs() < 1e-12);
        assert!(d.variance < 1e-12);
    }

    #[test]
    fn iid_half_is_binomial() {
        let d = CountDistribution::from_bernoulli_means(&[0.5; 4]);
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0];
        for (k, &e) in expect.iter().enumerate() {
            assert!((d.pmf[k] - e / 16.0).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn normalization_and_moment_consistency() {
        let params = EnsembleParams::new(64, 32).unwrap();
        let ctx = KernelContext::new(params);
        let region = CountingRegion::Disc { i: 3 };
        let d = count_distribution(&ctx, &region).unwrap();
        assert!(d.normalization_defect() < 1e-10);
        let trace = expected_count_exact(&ctx, &region).unwrap();
        assert!((d.mean - trace).abs() < 1e-10, "pmf mean {} vs trace {trace}", d.mean);
    }

    #[test]
    fn tails() {
        let d = CountDistribution::from_bernoulli_means(&[0.5; 4]);
        assert!((d.tail_ge(0) - 1.0).abs() < 1e-14);
        assert!((d.tail_ge(4) - 1.0 / 16.0).abs() < 1e-14);
        assert_eq!(d.tail_ge(9), 0.0);
        assert!((d.tail_two_sided(2.0, 2.0) - 2.0 / 16.0).abs() < 1e-14);
        assert!((d.tail_two_sided(2.0, 0.0) - 1.0).abs() < 1e-14);
    }
}
