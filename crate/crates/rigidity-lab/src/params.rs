//! Ensemble parameters shared by every module.

use crate::error::{Error, Result};

/// Parameters of the truncated-unitary ensemble: ambient dimension `n`,
/// truncation size `m`, and the coordinate convention.
///
/// When `rescaled` is set, eigenvalues refer to the top-left block of
/// `sqrt(n/m) · U`, so the limiting support is the full unit disc; otherwise
/// raw coordinates are used and the limiting support is the disc of radius
/// `sqrt(m/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleParams {
    n: usize,
    m: usize,
    rescaled: bool,
}

impl EnsembleParams {
    /// Validates `1 ≤ m < n` and builds raw-coordinate parameters.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("m must be at least 1".into()));
        }
        if m >= n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= m < n, got n = {n}, m = {m}"
            )));
        }
        Ok(Self { n, m, rescaled: false })
    }

    /// Same as [`EnsembleParams::new`] with the rescaled convention enabled.
    pub fn new_rescaled(n: usize, m: usize) -> Result<Self> {
        Ok(Self { rescaled: true, ..Self::new(n, m)? })
    }

    pub fn with_rescaled(self, rescaled: bool) -> Self {
        Self { rescaled, ..self }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rescaled(&self) -> bool {
        self.rescaled
    }

    /// Aspect ratio `α = m/n ∈ (0, 1)`.
    pub fn alpha(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    /// The rescaling factor `sqrt(n/m)` applied under the rescaled convention.
    pub fn scale(&self) -> f64 {
        (self.n as f64 / self.m as f64).sqrt()
    }

    /// `ε_m = sqrt(2 log(m+1) / m)`, the regime-control quantity appearing in
    /// every admissible-index condition. Defined here once and shared.
    pub fn epsilon_m(&self) -> f64 {
        let m = self.m as f64;
        (2.0 * (m + 1.0).ln() / m).sqrt()
    }

    /// Checks `α ∈ (δ, 1−δ)` for a configured margin.
    pub fn check_alpha_margin(&self, delta: f64) -> Result<()> {
        let a = self.alpha();
        if a <= delta || a >= 1.0 - delta {
            return Err(Error::InvalidParams(format!(
                "alpha = {a:.4} outside ({delta}, {})",
                1.0 - delta
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_dimensions() {
        assert!(EnsembleParams::new(4, 4).is_err());
        assert!(EnsembleParams::new(4, 0).is_err());
        assert!(EnsembleParams::new(4, 5).is_err());
        assert!(EnsembleParams::new(4, 2).is_ok());
    }

    #[test]
    fn alpha_and_scale() {
        let p = EnsembleParams::new(64, 32).unwrap();
        assert_eq!(p.alpha(), 0.5);
        assert!((p.scale() - 2f64.sqrt()).abs() < 1e-15);
        assert!(!p.rescaled());
        assert!(p.with_rescaled(true).rescaled());
    }

    #[test]
    fn epsilon_m_matches_formula() {
        let p = EnsembleParams::new(64, 32).unwrap();
        let expect = (2.0 * 33f64.ln() / 32.0).sqrt();
        assert!((p.epsilon_m() - expect).abs() < 1e-15);
        // monotone decreasing in m at fixed alpha
        let p2 = EnsembleParams::new(128, 64).unwrap();
        assert!(p2.epsilon_m() < p.epsilon_m());
    }

    #[test]
    fn alpha_margin() {
        let p = EnsembleParams::new(100, 2).unwrap();
        assert!(p.check_alpha_margin(0.05).is_err());
        assert!(EnsembleParams::new(64, 32).unwrap().check_alpha_margin(0.05).is_ok());
    }
}
