//! The combinatorial layer: a spiral (modulus-then-argument) total order on
//! the complex plane, annulus radii `r_i = i / sqrt(n - m + i²)`, the
//! disc-plus-arc counting regions built from them, predicted eigenvalue
//! locations, and the counting function.
//!
//! Argument convention: arguments live in `(0, 2π]`, with the argument of 0
//! defined as 0 and 0 initial in the order. Points on the positive real axis
//! carry argument `2π`, so a full-angle arc closes an annulus with no gap.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::haar::SpectrumSample;
use crate::params::EnsembleParams;

const TWO_PI: f64 = std::f64::consts::TAU;

/// Sort key for the spiral order: modulus first, then argument in `(0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralOrderKey {
    pub modulus: f64,
    pub argument: f64,
}

impl SpiralOrderKey {
    pub fn of(z: Complex64) -> Self {
        Self { modulus: z.norm(), argument: spiral_argument(z) }
    }
}

/// Argument in `(0, 2π]` for nonzero `z`; 0 for `z = 0`.
pub fn spiral_argument(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 0.0;
    }
    let a = z.im.atan2(z.re); // (-π, π]
    if a <= 0.0 {
        a + TWO_PI
    } else {
        a
    }
}

/// Total order on the complex plane: compare modulus, then argument.
pub fn spiral_cmp(a: Complex64, b: Complex64) -> Ordering {
    let ka = SpiralOrderKey::of(a);
    let kb = SpiralOrderKey::of(b);
    ka.modulus
        .partial_cmp(&kb.modulus)
        .unwrap()
        .then(ka.argument.partial_cmp(&kb.argument).unwrap())
}

/// Eigenvalues in increasing spiral order. The underlying sort is stable, so
/// exact floating-point ties keep their input order.
pub fn spiral_sort(sample: &SpectrumSample) -> SpectrumSample {
    let mut out = sample.clone();
    out.values.sort_by(|a, b| spiral_cmp(*a, *b));
    out
}

/// Annulus radius `r_i = i / sqrt(n - m + i²)`; `r_0 = 0`.
pub fn radius(i: usize, params: &EnsembleParams) -> f64 {
    if i == 0 {
        return 0.0;
    }
    let i = i as f64;
    let nm = (params.n() - params.m()) as f64;
    i / (nm + i * i).sqrt()
}

/// A counting region in raw (unrescaled) coordinates.
///
/// `Sector { i, theta }` is the open disc of radius `r_i` together with the
/// arc sector `{ r_i ≤ |z| < r_{i+1}, 0 < arg z < θ }`; at `θ = 2π` the arc is
/// the whole annulus, so the region closes to the open disc of radius
/// `r_{i+1}`. `Annulus { l }` spans radii `[r_{l-1}, r_l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountingRegion {
    Disc { i: usize },
    Sector { i: usize, theta: f64 },
    Annulus { l: usize },
    CustomDisc { r: f64 },
}

impl CountingRegion {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CountingRegion::Disc { i } | CountingRegion::Sector { i, .. } if i == 0 => {
                Err(Error::RegionOutOfRange("index i must be positive".into()))
            }
            CountingRegion::Sector { theta, .. } if !(theta > 0.0 && theta <= TWO_PI) => {
                Err(Error::RegionOutOfRange(format!("theta = {theta} outside (0, 2pi]")))
            }
            CountingRegion::Annulus { l } if l == 0 => {
                Err(Error::RegionOutOfRange("index l must be positive".into()))
            }
            CountingRegion::CustomDisc { r } if !(0.0..=1.0).contains(&r) => {
                Err(Error::RegionOutOfRange(format!("radius r = {r} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }

    pub fn contains(&self, z: Complex64, params: &EnsembleParams) -> bool {
        let rho = z.norm();
        match *self {
            CountingRegion::Disc { i } => rho < radius(i, params),
            CountingRegion::Sector { i, theta } => {
                if rho < radius(i, params) {
                    return true;
                }
                if rho >= radius(i + 1, params) {
                    return false;
                }
                // full-angle arc closes the annulus; otherwise the arc is
                // open in the argument, which in (0, 2π] excludes only the
                // positive real axis and the boundary ray itself
                theta >= TWO_PI || (z != Complex64::new(0.0, 0.0) && spiral_argument(z) < theta)
            }
            CountingRegion::Annulus { l } => {
                rho >= radius(l - 1, params) && rho < radius(l, params)
            }
            CountingRegion::CustomDisc { r } => rho < r,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            CountingRegion::Disc { i } => format!("disc:{i}"),
            CountingRegion::Sector { i, theta } => format!("sector:{i}:{theta}"),
            CountingRegion::Annulus { l } => format!("annulus:{l}"),
            CountingRegion::CustomDisc { r } => format!("customdisc:{r}"),
        }
    }
}

/// Deterministic predicted eigenvalue locations, in raw coordinates and
/// spiral order: for `p = (l-1)² + q` with `1 ≤ q ≤ 2l - 1`, the point is
/// `r_{l-1} · exp(2πi q / (2l - 1))`.
#[derive(Debug, Clone)]
pub struct PredictedLattice {
    pub points: Vec<Complex64>,
}

/// `l = ⌈√p⌉` for `p ≥ 1`, in exact integer arithmetic.
pub fn annulus_index(p: usize) -> usize {
    let r = p.isqrt();
    if r * r == p {
        r
    } else {
        r + 1
    }
}

pub fn predicted_location(p: usize, params: &EnsembleParams) -> Complex64 {
    let l = annulus_index(p);
    let q = p - (l - 1) * (l - 1);
    let r = radius(l - 1, params);
    if q == 2 * l - 1 {
        // the full-turn point lies exactly on the positive real axis
        // (argument 2π in this crate's convention); constructing it via
        // from_polar would let rounding flip its argument to ~0
        return Complex64::new(r, 0.0);
    }
    let angle = TWO_PI * q as f64 / (2 * l - 1) as f64;
    Complex64::from_polar(r, angle)
}

pub fn predicted_lattice(params: &EnsembleParams) -> PredictedLattice {
    let points = (1..=params.m()).map(|p| predicted_location(p, params)).collect();
    PredictedLattice { points }
}

/// Number of sample eigenvalues inside the region. The sample must be in raw
/// coordinates, matching the region definitions.
pub fn count_in_region(sample: &SpectrumSample, region: &CountingRegion) -> Result<usize> {
    if sample.params.rescaled() {
        return Err(Error::CoordinateConvention { required: "raw", got: "rescaled" });
    }
    region.validate()?;
    Ok(sample.values.iter().filter(|z| region.contains(**z, &sample.params)).count())
}

/// The largest admissible annulus index for the counting concentration
/// regime: `sqrt(m) · (1 - ε_m / (1 - α(1 - ε_m)))^{1/2}`.
///
/// Errors when the value does not exceed 1, i.e. no interior index exists at
/// this size.
pub fn valid_index_bound(params: &EnsembleParams) -> Result<f64> {
    if params.m() < 3 {
        return Err(Error::InvalidParams("index bound needs m >= 3".into()));
    }
    let m = params.m() as f64;
    let alpha = params.alpha();
    let eps = params.epsilon_m();
    let inner = 1.0 - eps / (1.0 - alpha * (1.0 - eps));
    if inner <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "no admissible index at n = {}, m = {}",
            params.n(),
            params.m()
        )));
    }
    let bound = m.sqrt() * inner.sqrt();
    if bound <= 1.0 {
        return Err(Error::InvalidParams(format!(
            "index bound {bound:.4} <= 1: regime too small"
        )));
    }
    Ok(bound)
}
