//! Sampling of Haar unitary matrices and their truncations.
//!
//! Haar measure is realized by the standard construction: draw an n×n matrix
//! of independent standard complex Gaussians, take its QR decomposition, and
//! multiply each column of Q by the unit phase of the corresponding diagonal
//! entry of R. The phase correction is what makes the law exactly
//! left-invariant rather than merely orthogonal.

use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::params::EnsembleParams;
use crate::stream::RandomStream;

/// Acceptable departure from exact unitarity for a sampled matrix.
pub const UNITARY_TOL: f64 = 1e-10;

/// One trial's eigenvalue spectrum plus the metadata needed to reproduce it.
#[derive(Debug, Clone)]
pub struct SpectrumSample {
    pub values: Vec<Complex64>,
    pub params: EnsembleParams,
    pub seed: u64,
    pub trial_index: u64,
}

impl SpectrumSample {
    pub fn m(&self) -> usize {
        self.values.len()
    }
}

/// n×n matrix of independent standard complex Gaussians (real and imaginary
/// parts independent, mean 0, variance 1/2 each).
pub fn sample_ginibre(params: &EnsembleParams, stream: &mut RandomStream) -> ComplexMatrix {
    let n = params.n();
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = stream.complex_gaussian();
        }
    }
    g
}

/// Householder QR returning Q with columns multiplied by the unit phases of
/// diag(R). `None` signals a degenerate column (exactly zero norm), which has
/// probability zero for Gaussian input.
fn qr_phase_corrected(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.rows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);

    for k in 0..n {
        let mut norm_sq = 0.0;
        for i in k..n {
            norm_sq += r[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            return None;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let beta = -phase * norm;

        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= beta;
        let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / v_norm_sq;

        // r <- H r with H = I - tau v v†, acting on rows k..n
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..n {
                dot += v[i - k].conj() * r[(i, j)];
            }
            dot *= tau;
            for i in k..n {
                let delta = v[i - k] * dot;
                r[(i, j)] -= delta;
            }
        }
        // q <- q H, acting on columns k..n
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k..n {
                dot += q[(i, j)] * v[j - k];
            }
            dot *= tau;
            for j in k..n {
                let delta = dot * v[j - k].conj();
                q[(i, j)] -= delta;
            }
        }
    }

    for k in 0..n {
        let d = r[(k, k)];
        let dn = d.norm();
        if dn == 0.0 {
            return None;
        }
        let ph = d / dn;
        for i in 0..n {
            q[(i, k)] *= ph;
        }
    }
    Some(q)
}

/// Samples an n×n Haar-distributed unitary matrix.
///
/// Retries once if orthogonalization degenerates; a second failure is a hard
/// error (with Gaussian input this cannot happen short of RNG breakage).
pub fn haar_unitary(params: &EnsembleParams, stream: &mut RandomStream) -> Result<ComplexMatrix> {
    for _attempt in 0..2 {
        let g = sample_ginibre(params, stream);
        if let Some(u) = qr_phase_corrected(&g) {
            if u.unitary_defect() <= UNITARY_TOL {
                return Ok(u);
            }
        }
    }
    Err(Error::DegenerateDraw)
}

/// Top-left m×m block of U, multiplied by `sqrt(n/m)` under the rescaled
/// convention.
pub fn truncate(u: &ComplexMatrix, params: &EnsembleParams) -> Result<ComplexMatrix> {
    if u.rows() != params.n() || u.cols() != params.n() {
        return Err(Error::Dimension {
            expected: format!("{0}x{0}", params.n()),
            got: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    let block = u.top_left_block(params.m())?;
    Ok(if params.rescaled() { block.scale(params.scale()) } else { block })
}

/// Runs the full pipeline for one trial: Haar draw, truncation, eigenvalues.
pub fn sample_spectrum(params: &EnsembleParams, seed: u64, trial_index: u64) -> Result<SpectrumSample> {
    let mut stream = RandomStream::for_trial(seed, trial_index);
    let u = haar_unitary(params, &mut stream)?;
    let t = truncate(&u, params)?;
    let eig = eigen::general_eigenvalues(&t, eigen::DEFAULT_TOL)?;
    Ok(SpectrumSample { values: eig.values, params: *params, seed, trial_index })
}
