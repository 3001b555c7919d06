//! Eigenvalue statistics of truncated Haar unitary matrices.
//!
//! An `n × n` Haar unitary, truncated to its top-left `m × m` block, has
//! eigenvalues forming a determinantal point process on the unit disc. This
//! crate samples that ensemble, computes its exact counting statistics
//! (means, variances and full counting distributions via restricted-kernel
//! Gram spectra), evaluates the concentration and rigidity bounds that govern
//! it, and runs Monte Carlo experiments placing empirical estimates beside
//! their exact counterparts.
//!
//! The main entry points:
//!
//! - [`haar`]: sampling (Ginibre draws, Haar unitaries via phase-corrected QR,
//!   truncations, eigenvalue spectra).
//! - [`eigen`]: self-contained complex Schur / Hermitian eigensolvers.
//! - [`geometry`]: the spiral order on `ℂ`, annulus radii, counting regions
//!   and predicted eigenvalue locations.
//! - [`analytics`]: exact kernel analytics — expected counts, counting
//!   variances (two independent routes), Poisson-binomial counting laws, and
//!   the concentration-bound calculators.
//! - [`experiments`]: reproducible Monte Carlo harness with exact columns.
//! - [`report`]: batch files, CSV tables and SVG figures.
//!
//! Runnable demonstrations of each capability live under `examples/`; the
//! same functionality is scripted by the thin `rigidity-lab` binary.

pub mod analytics;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod haar;
pub mod matrix;
pub mod params;
pub mod report;
pub mod stream;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use params::EnsembleParams;
pub use stream::RandomStream;
