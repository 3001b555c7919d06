//! Restricted-kernel Gram matrices and the exact counting law they carry.
//!
//! The kernel is a rank-m projection onto the span of
//! `φ_j(z) = N_j^{-1/2} z^{j-1} (1-|z|²)^{(n-m-1)/2}`. Restricting to a
//! region `D` and diagonalizing the Gram matrix `M_{jk} = ∫_D φ_k φ̄_j`
//! yields the Bernoulli means of the counting distribution. Radial overlap
//! integrals reduce, via `u = r²`, to incomplete beta functions — for equal
//! indices these are exactly binomial tail probabilities, which is what makes
//! fully exact means and variances possible.

use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::geometry::{radius, CountingRegion};
use crate::matrix::ComplexMatrix;

use super::special::{integrate, ln_beta, reg_inc_beta};
use super::KernelContext;

/// Eigenvalues in `[0, 1]` of the kernel operator restricted to a region:
/// the means of the independent Bernoulli variables whose sum is the count.
#[derive(Debug, Clone)]
pub struct BernoulliSpectrum {
    pub probs: Vec<f64>,
    pub region: CountingRegion,
}

impl BernoulliSpectrum {
    pub fn mean(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn variance(&self) -> f64 {
        self.probs.iter().map(|p| p * (1.0 - p)).sum()
    }
}

/// `∫_a^b (1-r²)^{n-m-1} r^{j+k+1} dr` for 0-based `0 ≤ j, k ≤ m-1`,
/// via the substitution `u = r²` and the incomplete beta function with
/// parameters `((j+k)/2 + 1, n-m)`; half-integer first parameter for odd
/// `j+k`. Falls back to adaptive Gauss–Legendre quadrature if the continued
/// fraction stalls.
pub fn radial_overlap(ctx: &KernelContext, j: usize, k: usize, a: f64, b: f64) -> Result<f64> {
    let m = ctx.params().m();
    if j >= m || k >= m {
        return Err(Error::RegionOutOfRange(format!("overlap indices ({j}, {k}) out of range")));
    }
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(Error::RegionOutOfRange(format!("overlap bounds [{a}, {b}] out of range")));
    }
    let nm = (ctx.params().n() - ctx.params().m()) as f64;
    let s = (j + k) as f64 / 2.0 + 1.0;
    let (ua, ub) = (a * a, b * b);

    let diff = match (reg_inc_beta(s, nm, ua), reg_inc_beta(s, nm, ub)) {
        (Ok(ia), Ok(ib)) => {
            if ib > 0.5 {
                // both ends possibly near 1: difference via the complements
                let ca = reg_inc_beta(nm, s, 1.0 - ua)?;
                let cb = reg_inc_beta(nm, s, 1.0 - ub)?;
                ca - cb
            } else {
                ib - ia
            }
        }
        _ => {
            // continued fraction stalled; integrate the transformed kernel
            // 0.5 u^{s-1} (1-u)^{n-m-1} directly
            return Ok(0.5
                * integrate(
                    |u| {
                        let lead = if s == 1.0 { 0.0 } else { (s - 1.0) * u.ln() };
                        (lead + (nm - 1.0) * (-u).ln_1p()).exp()
                    },
                    ua,
                    ub,
                    1e-10,
                ));
        }
    };
    Ok(0.5 * diff.max(0.0) * ln_beta(s, nm).exp())
}

/// Radial bounds `[inner, outer]` of a region's disc part and arc part.
/// The disc part always starts at 0; the arc part is empty for plain discs.
struct RadialPieces {
    disc_outer: f64,
    arc: Option<(f64, f64, f64)>, // (inner, outer, theta)
}

fn radial_pieces(ctx: &KernelContext, region: &CountingRegion) -> Result<RadialPieces> {
    region.validate()?;
    let p = ctx.params();
    Ok(match *region {
        CountingRegion::Disc { i } => RadialPieces { disc_outer: radius(i, p), arc: None },
        CountingRegion::Sector { i, theta } => RadialPieces {
            disc_outer: radius(i, p),
            arc: Some((radius(i, p), radius(i + 1, p), theta)),
        },
        CountingRegion::Annulus { l } => RadialPieces {
            disc_outer: 0.0,
            arc: Some((radius(l - 1, p), radius(l, p), std::f64::consts::TAU)),
        },
        CountingRegion::CustomDisc { r } => RadialPieces { disc_outer: r, arc: None },
    })
}

/// The m×m Hermitian Gram matrix of the kernel restricted to a region.
///
/// Entry `(j, k)` (1-based) is `(N_j N_k)^{-1/2}` times the radial overlap
/// weighted by the angular factor: `2π δ_{jk}` over full circles, and over an
/// arc `(0, θ)` the factor `θ` on the diagonal or
/// `(e^{i(k-j)θ} - 1)/(i(k-j))` off it.
pub fn gram_matrix(ctx: &KernelContext, region: &CountingRegion) -> Result<ComplexMatrix> {
    let pieces = radial_pieces(ctx, region)?;
    let m = ctx.params().m();
    let tau = std::f64::consts::TAU;
    let mut g = ComplexMatrix::zeros(m, m);

    for j in 1..=m {
        for k in j..=m {
            let pref = (-0.5 * (ctx.log_normalizer(j) + ctx.log_normalizer(k))).exp();
            let mut entry = Complex64::new(0.0, 0.0);
            if j == k && pieces.disc_outer > 0.0 {
                let ov = radial_overlap(ctx, j - 1, k - 1, 0.0, pieces.disc_outer)?;
                entry += Complex64::new(tau * ov, 0.0);
            }
            if let Some((inner, outer, theta)) = pieces.arc {
                let ov = radial_overlap(ctx, j - 1, k - 1, inner, outer)?;
                let angular = if j == k {
                    Complex64::new(theta, 0.0)
                } else {
                    let d = (k as f64) - (j as f64);
                    let rot = Complex64::from_polar(1.0, d * theta) - 1.0;
                    rot / Complex64::new(0.0, d)
                };
                entry += angular * ov;
            }
            g[(j - 1, k - 1)] = pref * entry;
            if j != k {
                g[(k - 1, j - 1)] = (pref * entry).conj();
            }
        }
    }
    Ok(g)
}

/// Tolerance for Gram eigenvalues escaping `[0, 1]`; larger violations
/// indicate a quadrature or eigensolver failure and are reported as errors.
const CLAMP_TOL: f64 = 1e-10;

/// The Bernoulli means of the counting law on a region: the eigenvalues of
/// the restricted Gram matrix, clamped to `[0, 1]`.
pub fn bernoulli_spectrum(ctx: &KernelContext, region: &CountingRegion) -> Result<BernoulliSpectrum> {
    let g = gram_matrix(ctx, region)?;
    let eig = eigen::hermitian_eigenvalues(&g, eigen::DEFAULT_TOL)?;
    let mut probs = Vec::with_capacity(eig.values.len());
    for v in &eig.values {
        let p = v.re;
        if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&p) {
            return Err(Error::SpectrumOutOfRange { value: p });
        }
        probs.push(p.clamp(0.0, 1.0));
    }
    let spectrum = BernoulliSpectrum { probs, region: *region };
    let trace = expected_count_exact(ctx, region)?;
    if (spectrum.mean() - trace).abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "Bernoulli means sum {} disagrees with exact trace {trace}",
            spectrum.mean()
        )));
    }
    Ok(spectrum)
}

/// Exact expected count on a region: the trace of the restricted Gram
/// matrix, evaluated directly from the diagonal overlaps.
pub fn expected_count_exact(ctx: &KernelContext, region: &CountingRegion) -> Result<f64> {
    let pieces = radial_pieces(ctx, region)?;
    let m = ctx.params().m();
    let tau = std::f64::consts::TAU;
    let mut sum = 0.0;
    for j in 1..=m {
        let pref = (-ctx.log_normalizer(j)).exp();
        if pieces.disc_outer > 0.0 {
            sum += pref * tau * radial_overlap(ctx, j - 1, j - 1, 0.0, pieces.disc_outer)?;
        }
        if let Some((inner, outer, theta)) = pieces.arc {
            sum += pref * theta * radial_overlap(ctx, j - 1, j - 1, inner, outer)?;
        }
    }
    Ok(sum)
}
