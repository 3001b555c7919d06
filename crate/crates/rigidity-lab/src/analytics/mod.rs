//! Exact determinantal analytics for the truncation eigenvalue process.
//!
//! The eigenvalues form a determinantal point process on the closed unit disc
//! with kernel
//!
//! ```text
//! K(z₁, z₂) = Σ_{j=1}^m (1/N_j) (z₁ z̄₂)^{j-1} (1-|z₁|²)^{(n-m-1)/2} (1-|z₂|²)^{(n-m-1)/2},
//! N_j = π (j-1)! (n-m-1)! / (n-m+j-1)!
//! ```
//!
//! Restricting the kernel to a region and diagonalizing the resulting Gram
//! matrix yields the exact counting law: the count is a sum of independent
//! Bernoulli variables whose means are the restricted operator's eigenvalues.
//! Everything downstream (exact means, variances, full distributions, tail
//! bounds) is built on that representation.

pub mod bounds;
pub mod distribution;
pub mod gram;
pub mod special;
pub mod variance;

pub use bounds::{bound_bernstein, bound_dbl, bound_individual, bound_variance, IndividualBound, BoundConstants};
pub use distribution::{count_distribution, CountDistribution};
pub use gram::{bernoulli_spectrum, expected_count_exact, gram_matrix, radial_overlap, BernoulliSpectrum};
pub use variance::{variance_exact_decomposed, variance_exact_spectral, VarianceDecomposition};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::CountingRegion;
use crate::params::EnsembleParams;
use special::{ln_gamma, reg_inc_beta};

/// Immutable context for kernel evaluations: ensemble parameters plus the
/// log normalizers `ln N_j`, `j = 1..m`.
#[derive(Debug, Clone)]
pub struct KernelContext {
    params: EnsembleParams,
    log_normalizers: Vec<f64>,
}

impl KernelContext {
    pub fn new(params: EnsembleParams) -> Self {
        let n = params.n() as f64;
        let m = params.m() as f64;
        let ln_pi = std::f64::consts::PI.ln();
        let log_normalizers = (1..=params.m())
            .map(|j| {
                let j = j as f64;
                ln_pi + ln_gamma(j) + ln_gamma(n - m) - ln_gamma(n - m + j)
            })
            .collect();
        Self { params, log_normalizers }
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    /// `ln N_j` for 1-based `j`.
    pub fn log_normalizer(&self, j: usize) -> f64 {
        self.log_normalizers[j - 1]
    }
}

/// Kernel evaluation in log-magnitude/phase form. Overflow-free for
/// `|z| ≤ 1`; NaN inputs are rejected.
pub fn kernel_eval(ctx: &KernelContext, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    if !(z1.re.is_finite() && z1.im.is_finite() && z2.re.is_finite() && z2.im.is_finite()) {
        return Err(Error::Numerical("kernel arguments must be finite".into()));
    }
    let r1_sq = z1.norm_sqr();
    let r2_sq = z2.norm_sqr();
    if r1_sq > 1.0 + 1e-12 || r2_sq > 1.0 + 1e-12 {
        return Err(Error::Numerical("kernel arguments must lie in the unit disc".into()));
    }
    let r1_sq = r1_sq.min(1.0);
    let r2_sq = r2_sq.min(1.0);
    let m = ctx.params.m();
    let n = ctx.params.n();
    let half_exp = (n - m - 1) as f64 / 2.0;

    // (1-|z|²) factors contribute even when they vanish, provided the
    // exponent is zero (n = m + 1)
    let ln_edge = |r_sq: f64| -> f64 {
        if half_exp == 0.0 {
            0.0
        } else {
            half_exp * (-r_sq).ln_1p()
        }
    };
    let ln_base = ln_edge(r1_sq) + ln_edge(r2_sq);

    let w = z1 * z2.conj();
    let w_norm = w.norm();
    let w_phase = if w_norm == 0.0 { 0.0 } else { w.arg() };
    let ln_w = if w_norm == 0.0 { f64::NEG_INFINITY } else { w_norm.ln() };

    // factor out the largest log magnitude to avoid overflow in the sum
    let mut ln_mags = Vec::with_capacity(m);
    let mut max_ln = f64::NEG_INFINITY;
    for j in 1..=m {
        let lm = if j == 1 {
            ln_base - ctx.log_normalizer(j)
        } else if w_norm == 0.0 {
            f64::NEG_INFINITY
        } else {
            ln_base - ctx.log_normalizer(j) + (j - 1) as f64 * ln_w
        };
        if lm > max_ln {
            max_ln = lm;
        }
        ln_mags.push(lm);
    }
    if max_ln == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, lm) in ln_mags.iter().enumerate() {
        if lm.is_finite() {
            let mag = (lm - max_ln).exp();
            let phase = j as f64 * w_phase;
            acc += Complex64::from_polar(mag, phase);
        }
    }
    Ok(acc * max_ln.exp())
}

/// Diagonal kernel value via the closed-form expansion: `K(z, z) =
/// (n-m)/π · (1-|z|²)^{-2} · (1 - tail)`, where the tail is the probability
/// that a negative-binomial variable reaches m, i.e. `I_{|z|²}(m, n-m+1)`.
pub fn kzz_diag(ctx: &KernelContext, z: Complex64) -> Result<f64> {
    let x = z.norm_sqr();
    if x >= 1.0 {
        return Err(Error::Numerical(format!("kzz expansion needs |z| < 1, got |z|² = {x}")));
    }
    let n = ctx.params.n() as f64;
    let m = ctx.params.m() as f64;
    // 1 - P[Y_{n-m+1}(x) ≥ m] = 1 - I_x(m, n-m+1), via the symmetry
    // identity to keep full relative accuracy when the tail is near 1
    let one_minus_tail = reg_inc_beta(n - m + 1.0, m, 1.0 - x)?;
    let one_minus = 1.0 - x;
    Ok((n - m) / std::f64::consts::PI / (one_minus * one_minus) * one_minus_tail)
}

/// Coordinate convention for the limiting density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityConvention {
    /// `f_α`, supported on `|z| < sqrt(α)`.
    Raw,
    /// `g_α`, supported on `|z| < 1`.
    Rescaled,
}

/// The limiting eigenvalue density at `z`, zero outside its support.
pub fn limiting_density(params: &EnsembleParams, z: Complex64, convention: DensityConvention) -> f64 {
    let alpha = params.alpha();
    let r_sq = z.norm_sqr();
    let pi = std::f64::consts::PI;
    match convention {
        DensityConvention::Raw => {
            if r_sq < alpha {
                (1.0 - alpha) / (pi * alpha * (1.0 - r_sq) * (1.0 - r_sq))
            } else {
                0.0
            }
        }
        DensityConvention::Rescaled => {
            if r_sq < 1.0 {
                let d = 1.0 - alpha * r_sq;
                (1.0 - alpha) / (pi * d * d)
            } else {
                0.0
            }
        }
    }
}

/// Limiting-measure mass `μ_α(region)` in closed form.
pub fn region_mass(params: &EnsembleParams, region: &CountingRegion) -> Result<f64> {
    region.validate()?;
    let m = params.m() as f64;
    let alpha = params.alpha();
    let outside = |what: String| Err(Error::RegionOutOfRange(what));
    match *region {
        CountingRegion::Disc { i } => {
            if i * i > params.m() {
                return outside(format!("disc({i}) exceeds the support (i² > m)"));
            }
            Ok((i * i) as f64 / m)
        }
        CountingRegion::Sector { i, theta } => {
            if (i + 1) * (i + 1) > params.m() {
                return outside(format!("sector({i}, θ) exceeds the support ((i+1)² > m)"));
            }
            Ok(((i * i) as f64 + theta / std::f64::consts::TAU * (2 * i + 1) as f64) / m)
        }
        CountingRegion::Annulus { l } => {
            if l * l > params.m() {
                return outside(format!("annulus({l}) exceeds the support (l² > m)"));
            }
            Ok((2 * l - 1) as f64 / m)
        }
        CountingRegion::CustomDisc { r } => {
            let r_sq = r * r;
            if r_sq > alpha + 1e-12 {
                return outside(format!("disc of radius {r} exceeds the support sqrt(α)"));
            }
            Ok((1.0 - alpha) / alpha * r_sq / (1.0 - r_sq))
        }
    }
}
