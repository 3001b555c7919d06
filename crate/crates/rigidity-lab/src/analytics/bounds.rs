//! Calculators for the concentration and rigidity bounds.
//!
//! The bounded-Lipschitz bound is fully explicit. The counting, individual
//! and variance bounds are stated with constants that depend only on α and
//! are never given numerically; those enter here as fit parameters, produced
//! by the calibration routine in [`crate::experiments`] and never presented
//! as anything but fits.

use crate::error::{Error, Result};
use crate::geometry::{annulus_index, valid_index_bound};
use crate::params::EnsembleParams;

/// Constants used by the bound calculators. The two `t11` fields are exact
/// closed forms; the remaining three are calibrated fit parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub c_alpha_t11: f64,
    pub c_prime_alpha_t11: f64,
    pub c_alpha_bernstein: f64,
    pub c_alpha_individual: f64,
    pub c_alpha_variance: f64,
}

impl BoundConstants {
    /// The explicit pair: `C_α = 1/(128π(1+√(3+log α⁻¹))²)` and
    /// `C'_α = 6 + 3 log α⁻¹`.
    pub fn explicit_t11(alpha: f64) -> (f64, f64) {
        let log_inv = (1.0 / alpha).ln();
        let c = 1.0 / (128.0 * std::f64::consts::PI * (1.0 + (3.0 + log_inv).sqrt()).powi(2));
        (c, 6.0 + 3.0 * log_inv)
    }

    /// Constants with all fit parameters set to 1; a placeholder until
    /// calibration has run.
    pub fn unit_fits(alpha: f64) -> Self {
        Self::with_fits(alpha, 1.0, 1.0, 1.0)
    }

    pub fn with_fits(alpha: f64, bernstein: f64, individual: f64, variance: f64) -> Self {
        let (c, c_prime) = Self::explicit_t11(alpha);
        Self {
            c_alpha_t11: c,
            c_prime_alpha_t11: c_prime,
            c_alpha_bernstein: bernstein,
            c_alpha_individual: individual,
            c_alpha_variance: variance,
        }
    }
}

/// Threshold on `t` opening the extended index range of the counting bound:
/// `(12/(1-α)) sqrt(2m log(m+1))`.
pub fn extended_range_threshold(params: &EnsembleParams) -> f64 {
    let m = params.m() as f64;
    12.0 / (1.0 - params.alpha()) * (2.0 * m * (m + 1.0).ln()).sqrt()
}

/// Counting concentration bound:
/// `2e² exp[-min{t²/(C_α i √log i), t/4}]`.
///
/// Valid for `i` up to the admissible index bound; indices beyond it (up to
/// `√m`) are accepted only with `t` above the extended-range threshold.
pub fn bound_bernstein(
    consts: &BoundConstants,
    params: &EnsembleParams,
    i: usize,
    theta: f64,
    t: f64,
) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::Numerical(format!("bound requires t > 0, got {t}")));
    }
    if !(0.0..=std::f64::consts::TAU).contains(&theta) {
        return Err(Error::RegionOutOfRange(format!("theta = {theta} outside [0, 2pi]")));
    }
    let vib = valid_index_bound(params)?;
    let fi = i as f64;
    let sqrt_m = (params.m() as f64).sqrt();
    if fi > vib && !(fi <= sqrt_m && t > extended_range_threshold(params)) {
        return Err(Error::IndexOutOfRange {
            p: i,
            reason: format!(
                "i beyond admissible bound {vib:.4} and t = {t} not in the extended range"
            ),
        });
    }
    let denom = consts.c_alpha_bernstein * fi * fi.ln().max(0.0).sqrt();
    let quad = if denom > 0.0 { t * t / denom } else { f64::INFINITY };
    Ok(2.0 * std::f64::consts::E.powi(2) * (-quad.min(t / 4.0)).exp())
}

/// The two branch values of the individual-eigenvalue bound at a scaled
/// deviation `s`, plus the piecewise-selected value (0 beyond the support
/// cutoff). Both branch formulas are reported because their constants
/// differ; `value` picks the branch the statement assigns to `s`.
#[derive(Debug, Clone, Copy)]
pub struct IndividualBound {
    pub small_s: f64,
    pub large_s: f64,
    pub cutoff: f64,
    pub value: f64,
}

/// Rigidity bound for the p-th spiral-ordered eigenvalue at scaled deviation
/// `s` (the deviation measured in units of `1/sqrt(n-m+(l-1)²)`).
pub fn bound_individual(
    consts: &BoundConstants,
    params: &EnsembleParams,
    p: usize,
    s: f64,
) -> Result<IndividualBound> {
    let l = annulus_index(p.max(1));
    let vib = valid_index_bound(params)?;
    if p == 0 || l < 2 || (l as f64) > vib {
        return Err(Error::IndexOutOfRange {
            p,
            reason: format!("requires 2 <= ceil(sqrt(p)) <= {vib:.4}"),
        });
    }
    let fl = l as f64;
    let nm = (params.n() - params.m()) as f64;
    let cutoff = 2.0 * (nm + (fl - 1.0) * (fl - 1.0)).sqrt();
    let small_s = 2.0 * (-(s * s) / (consts.c_alpha_bernstein * fl * fl.ln().sqrt())).exp();
    let large_s = 2.0 * (-consts.c_alpha_individual * s * s).exp();
    let value = if s > cutoff {
        0.0
    } else if s <= 2.0 * std::f64::consts::PI * (fl - 1.0) {
        small_s
    } else {
        large_s
    };
    Ok(IndividualBound { small_s, large_s, cutoff, value })
}

/// The fully explicit bounded-Lipschitz deviation bound, as a function of
/// the deviation radius `r`:
/// `e² exp{-C_α m² r² + 2m log m + C'_α m} + (e/2π) sqrt(m/(1-α)) e^{-m}`.
///
/// Vacuous (astronomically large) at desk scales; reported, not asserted.
pub fn bound_dbl(params: &EnsembleParams) -> impl Fn(f64) -> f64 {
    let (c, c_prime) = BoundConstants::explicit_t11(params.alpha());
    let m = params.m() as f64;
    let alpha = params.alpha();
    move |r: f64| {
        let exponent = -c * m * m * r * r + 2.0 * m * m.ln() + c_prime * m;
        let first = std::f64::consts::E.powi(2) * exponent.exp();
        let second = std::f64::consts::E / std::f64::consts::TAU * (m / (1.0 - alpha)).sqrt()
            * (-m).exp();
        first + second
    }
}

/// Variance bound for the p-th eigenvalue:
/// `C_α sqrt(p log(p+1)) / n` with the calibrated constant.
pub fn bound_variance(consts: &BoundConstants, params: &EnsembleParams, p: usize) -> Result<f64> {
    let l = annulus_index(p.max(1));
    let vib = valid_index_bound(params)?;
    if p == 0 || l < 2 || (l as f64) > vib {
        return Err(Error::IndexOutOfRange {
            p,
            reason: format!("requires 2 <= ceil(sqrt(p)) <= {vib:.4}"),
        });
    }
    let fp = p as f64;
    Ok(consts.c_alpha_variance * (fp * (fp + 1.0).ln()).sqrt() / params.n() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> EnsembleParams {
        EnsembleParams::new(64, 32).unwrap()
    }

    #[test]
    fn explicit_constants_at_half() {
        let (c, c_prime) = BoundConstants::explicit_t11(0.5);
        // direct evaluation of the closed forms
        let expect_c = 1.0 / (128.0 * std::f64::consts::PI * (1.0 + (3.0 + 2f64.ln()).sqrt()).powi(2));
        assert!((c - expect_c).abs() < 1e-18);
        assert!((c - 2.913e-4).abs() < 2e-7, "c = {c}");
        assert!((c_prime - (6.0 + 3.0 * 2f64.ln())).abs() < 1e-15);
        assert!((c_prime - 8.0794).abs() < 1e-4);
    }

    #[test]
    fn bernstein_bound_shape() {
        let p = params();
        let consts = BoundConstants::unit_fits(p.alpha());
        // monotone decreasing to zero in t
        let mut prev = f64::INFINITY;
        for k in 1..40 {
            let t = k as f64;
            let b = bound_bernstein(&consts, &p, 3, 1.0, t).unwrap();
            assert!(b <= prev);
            prev = b;
        }
        assert!(prev < 1e-3);

        // branch crossover continuity: t²/(C i √log i) = t/4
        let i = 3usize;
        let denom = consts.c_alpha_bernstein * 3.0 * 3f64.ln().sqrt();
        let t_cross = denom / 4.0;
        let b = bound_bernstein(&consts, &p, i, 1.0, t_cross).unwrap();
        let quad = 2.0 * std::f64::consts::E.powi(2) * (-t_cross * t_cross / denom).exp();
        let lin = 2.0 * std::f64::consts::E.powi(2) * (-t_cross / 4.0).exp();
        assert!((quad - lin).abs() < 1e-12 && (b - quad).abs() < 1e-12);

        // i = 1 collapses to the linear branch
        let b1 = bound_bernstein(&consts, &p, 1, 1.0, 8.0).unwrap();
        assert!((b1 - 2.0 * std::f64::consts::E.powi(2) * (-2f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn bernstein_regime_checks() {
        let p = params();
        let consts = BoundConstants::unit_fits(p.alpha());
        assert!(bound_bernstein(&consts, &p, 3, 1.0, 0.0).is_err());
        // i = 4 exceeds the bound (≈3.41): rejected at small t, accepted in
        // the extended range
        assert!(bound_bernstein(&consts, &p, 4, 1.0, 5.0).is_err());
        let t_ext = extended_range_threshold(&p) + 1.0;
        assert!(bound_bernstein(&consts, &p, 4, 1.0, t_ext).is_ok());
        // i beyond sqrt(m) is always out
        assert!(bound_bernstein(&consts, &p, 7, 1.0, t_ext).is_err());
    }

    #[test]
    fn individual_bound_branches() {
        let p = params();
        let consts = BoundConstants::with_fits(p.alpha(), 2.0, 0.05, 1.0);
        // p = 3 -> l = 2; cutoff = 2 sqrt(33)
        let cutoff = 2.0 * 33f64.sqrt();
        let b = bound_individual(&consts, &p, 3, cutoff + 0.5).unwrap();
        assert_eq!(b.value, 0.0);
        assert!((b.cutoff - cutoff).abs() < 1e-12);

        let small = bound_individual(&consts, &p, 3, 1.0).unwrap();
        assert_eq!(small.value, small.small_s);
        let mid = bound_individual(&consts, &p, 3, 2.0 * std::f64::consts::PI + 0.2).unwrap();
        assert_eq!(mid.value, mid.large_s);

        // both branch values are reported at the boundary
        let boundary = bound_individual(&consts, &p, 3, 2.0 * std::f64::consts::PI).unwrap();
        assert!(boundary.small_s > 0.0 && boundary.large_s > 0.0);

        // p out of the admissible range
        assert!(bound_individual(&consts, &p, 1, 1.0).is_err());
        assert!(bound_individual(&consts, &p, 17, 1.0).is_err()); // l = 5 > 3.41
    }

    #[test]
    fn dbl_bound_monotone() {
        let p = EnsembleParams::new(32, 16).unwrap();
        let f = bound_dbl(&p);
        let mut prev = f64::INFINITY;
        for k in 0..200 {
            let r = k as f64 * 0.05;
            let v = f(r);
            assert!(v.is_finite(), "r = {r}");
            assert!(v <= prev + 1e-9 * prev.abs());
            prev = v;
        }
        // large r: only the additive remainder survives
        let floor = std::f64::consts::E / std::f64::consts::TAU * (16.0 / 0.5f64).sqrt()
            * (-16.0f64).exp();
        assert!((f(1e3) - floor).abs() < 1e-12 * floor.max(1.0));
    }

    #[test]
    fn variance_bound_scaling() {
        let consts = BoundConstants::with_fits(0.5, 1.0, 1.0, 3.0);
        let p64 = params();
        let p128 = EnsembleParams::new(128, 64).unwrap();
        let b64 = bound_variance(&consts, &p64, 5).unwrap();
        let b128 = bound_variance(&consts, &p128, 5).unwrap();
        assert!((b64 / b128 - 2.0).abs() < 1e-12);
        assert!(bound_variance(&consts, &p64, 1).is_err());
    }
}
