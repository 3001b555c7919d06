//! Exact counting variances by two independent routes.
//!
//! The spectral route sums `p(1-p)` over the Bernoulli means of the
//! restricted kernel. The decomposed route integrates `|K(z, w)|²` over the
//! region times its complement, split into four pieces (disc against
//! outside, disc against complementary arc, arc against outside, arc against
//! complementary arc). Diagonal angular integrals collapse to products of
//! binomial tails; the off-diagonal arc-arc terms carry the angular factor
//! `-4 sin²((j-k)θ/2) / (j-k)²` against squared annulus overlaps and are
//! always negative. The two routes share no code path beyond the incomplete
//! beta function, so their agreement is a genuine cross-check.

use crate::error::{Error, Result};
use crate::geometry::{radius, CountingRegion};

use super::gram::{bernoulli_spectrum, radial_overlap};
use super::special::binomial_tail_gt;
use super::KernelContext;

/// Variance of the exact counting law: `Σ_k p_k (1 - p_k)` over the
/// Bernoulli spectrum.
pub fn variance_exact_spectral(ctx: &KernelContext, region: &CountingRegion) -> Result<f64> {
    Ok(bernoulli_spectrum(ctx, region)?.variance())
}

/// The four pieces of the direct variance computation for a sector region.
#[derive(Debug, Clone, Copy)]
pub struct VarianceDecomposition {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
}

impl VarianceDecomposition {
    pub fn total(&self) -> f64 {
        self.v1 + self.v2 + self.v3 + self.v4
    }
}

/// Exact variance of the count on `Sector { i, θ }` via the four-part
/// integral decomposition. Errors on non-sector regions and θ outside
/// `(0, 2π]`.
pub fn variance_exact_decomposed(
    ctx: &KernelContext,
    region: &CountingRegion,
) -> Result<VarianceDecomposition> {
    let (i, theta) = match *region {
        CountingRegion::Sector { i, theta } => (i, theta),
        _ => {
            return Err(Error::RegionOutOfRange(
                "variance decomposition is defined for sector regions".into(),
            ))
        }
    };
    region.validate()?;
    let params = ctx.params();
    let m = params.m();
    let nm = params.n() - params.m();
    let r_in = radius(i, params);
    let r_out = radius(i + 1, params);
    let frac = theta / std::f64::consts::TAU;

    // diagonal binomial tails at the two radii
    let mut t_in = Vec::with_capacity(m);
    let mut t_out = Vec::with_capacity(m);
    for j in 0..m {
        t_in.push(binomial_tail_gt(nm + j, j, r_in * r_in)?);
        t_out.push(binomial_tail_gt(nm + j, j, r_out * r_out)?);
    }

    let mut v1 = 0.0;
    let mut v2 = 0.0;
    let mut v3 = 0.0;
    let mut v4 = 0.0;
    for j in 0..m {
        let dt = t_out[j] - t_in[j];
        v1 += t_in[j] * (1.0 - t_out[j]);
        v2 += (1.0 - frac) * t_in[j] * dt;
        v3 += frac * dt * (1.0 - t_out[j]);
        v4 += frac * (1.0 - frac) * dt * dt;
    }

    // off-diagonal arc-arc terms: normalized annulus overlaps squared, times
    // -4 sin²(dθ/2)/d² hiding a (2π)² that cancels the normalization
    let tau = std::f64::consts::TAU;
    let mut w = vec![vec![0.0f64; m]; m];
    for j in 0..m {
        for k in j + 1..m {
            let pref = (-0.5 * (ctx.log_normalizer(j + 1) + ctx.log_normalizer(k + 1))).exp();
            w[j][k] = tau * pref * radial_overlap(ctx, j, k, r_in, r_out)?;
        }
    }
    let pi_sq = std::f64::consts::PI * std::f64::consts::PI;
    for j in 0..m {
        for k in j + 1..m {
            let d = (k - j) as f64;
            let s = (d * theta / 2.0).sin();
            // ordered pairs (j,k) and (k,j) contribute equally
            v4 -= 2.0 * w[j][k] * w[j][k] * s * s / (pi_sq * d * d);
        }
    }

    Ok(VarianceDecomposition { v1, v2, v3, v4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::EnsembleParams;
    use crate::stream::RandomStream;

    fn ctx(n: usize, m: usize) -> KernelContext {
        KernelContext::new(EnsembleParams::new(n, m).unwrap())
    }

    #[test]
    fn full_support_variance_vanishes() {
        let c = ctx(20, 10);
        let v = variance_exact_spectral(&c, &CountingRegion::CustomDisc { r: 1.0 }).unwrap();
        assert!(v.abs() < 1e-9);
    }

    #[test]
    fn disc_variance_is_binomial_tail_sum() {
        let params = EnsembleParams::new(64, 32).unwrap();
        let c = KernelContext::new(params);
        let i = 3;
        let v = variance_exact_spectral(&c, &CountingRegion::Disc { i }).unwrap();
        let r_sq = radius(i, &params).powi(2);
        let direct: f64 = (0..32)
            .map(|j| {
                let t = binomial_tail_gt(32 + j, j, r_sq).unwrap();
                t * (1.0 - t)
            })
            .sum();
        assert!((v - direct).abs() < 1e-9, "{v} vs {direct}");
    }

    #[test]
    fn v1_matches_independent_binomial_products() {
        // independent oracle: binomial CDFs by direct log-space summation
        fn tail_direct(n: usize, j: usize, x: f64) -> f64 {
            use crate::analytics::special::ln_gamma;
            let mut sum = 0.0;
            for k in (j + 1)..=n {
                let ln_c = ln_gamma(n as f64 + 1.0)
                    - ln_gamma(k as f64 + 1.0)
                    - ln_gamma((n - k) as f64 + 1.0);
                sum += (ln_c + k as f64 * x.ln() + (n - k) as f64 * (-x).ln_1p()).exp();
            }
            sum
        }
        let params = EnsembleParams::new(64, 32).unwrap();
        let c = KernelContext::new(params);
        let i = 3;
        let dec = variance_exact_decomposed(&c, &CountingRegion::Sector { i, theta: 1.0 }).unwrap();
        let (u, v) = (radius(i, &params).powi(2), radius(i + 1, &params).powi(2));
        let mut expect = 0.0;
        for j in 0..32 {
            let y = tail_direct(32 + j, j, u);
            let x_le = 1.0 - tail_direct(32 + j, j, v);
            expect += y * x_le;
        }
        assert!((dec.v1 - expect).abs() < 1e-10, "{} vs {expect}", dec.v1);
    }

    #[test]
    fn full_angle_sector_reduces_to_disc() {
        let params = EnsembleParams::new(48, 24).unwrap();
        let c = KernelContext::new(params);
        let i = 2;
        let dec = variance_exact_decomposed(
            &c,
            &CountingRegion::Sector { i, theta: std::f64::consts::TAU },
        )
        .unwrap();
        assert_eq!(dec.v2, 0.0);
        assert!(dec.v4.abs() < 1e-12, "v4 = {}", dec.v4);
        let disc_var = variance_exact_spectral(&c, &CountingRegion::Disc { i: i + 1 }).unwrap();
        assert!((dec.total() - disc_var).abs() < 1e-9, "{} vs {disc_var}", dec.total());
    }

    #[test]
    fn spectral_and_decomposed_agree_on_random_sectors() {
        let params = EnsembleParams::new(48, 24).unwrap();
        let c = KernelContext::new(params);
        let mut s = RandomStream::for_trial(404, 0);
        for case in 0..10 {
            let i = 1 + (s.uniform() * 3.0) as usize; // 1..=3
            let theta = (s.uniform() * std::f64::consts::TAU).max(0.05);
            let region = CountingRegion::Sector { i, theta };
            let spectral = variance_exact_spectral(&c, &region).unwrap();
            let decomposed = variance_exact_decomposed(&c, &region).unwrap().total();
            assert!(
                (spectral - decomposed).abs() <= 1e-7,
                "case {case}: i={i} theta={theta}: {spectral} vs {decomposed}"
            );
        }
    }

    #[test]
    fn rejects_non_sector_regions_and_bad_theta() {
        let c = ctx(48, 24);
        assert!(variance_exact_decomposed(&c, &CountingRegion::Disc { i: 2 }).is_err());
        assert!(
            variance_exact_decomposed(&c, &CountingRegion::Sector { i: 2, theta: 7.0 }).is_err()
        );
        assert!(
            variance_exact_decomposed(&c, &CountingRegion::Sector { i: 2, theta: 0.0 }).is_err()
        );
    }
}
