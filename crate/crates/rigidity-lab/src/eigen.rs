//! Self-contained dense eigensolvers.
//!
//! The general path reduces to upper Hessenberg form with Householder
//! reflections and runs an implicitly shifted complex QR iteration with
//! Wilkinson shifts and relative deflation. The full Schur decomposition
//! `A = Q T Q†` is kept internally so eigenvector residuals can be checked;
//! only eigenvalues and the residual bound are exposed.
//!
//! The Hermitian path reuses the same engine after validating and
//! symmetrizing its input, and returns real eigenvalues in ascending order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Default backward-stability tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative deflation threshold for subdiagonal entries.
const DEFLATION_TOL: f64 = 1e-14;

/// Eigenvalues of a matrix together with the largest relative residual
/// `‖Av − λv‖ / ‖A‖` observed over eigenpairs reconstructed from the Schur
/// form (Frobenius norm, unit eigenvectors).
#[derive(Debug, Clone)]
pub struct EigenvalueSet {
    pub values: Vec<Complex64>,
    pub residual_bound: f64,
}

struct Schur {
    /// Upper triangular factor (Hessenberg storage with zeroed subdiagonals).
    t: ComplexMatrix,
    /// Accumulated unitary factor.
    q: ComplexMatrix,
}

fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let mut norm_sq = 0.0;
        for i in k + 1..n {
            norm_sq += h[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let beta = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= beta;
        let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / v_norm_sq;

        // h <- H h (rows k+1..n), then h <- h H (columns k+1..n)
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                dot += v[i - k - 1].conj() * h[(i, j)];
            }
            dot *= tau;
            for i in k + 1..n {
                let delta = v[i - k - 1] * dot;
                h[(i, j)] -= delta;
            }
        }
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                dot += h[(i, j)] * v[j - k - 1];
            }
            dot *= tau;
            for j in k + 1..n {
                let delta = dot * v[j - k - 1].conj();
                h[(i, j)] -= delta;
            }
        }
        // accumulate q <- q H
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                dot += q[(i, j)] * v[j - k - 1];
            }
            dot *= tau;
            for j in k + 1..n {
                let delta = dot * v[j - k - 1].conj();
                q[(i, j)] -= delta;
            }
        }
        // entries below the subdiagonal are zero by construction
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` with real `c` such
/// that `G · (a, b)ᵀ = (r, 0)ᵀ`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let norm = (an * an + bn * bn).sqrt();
    let phase = a / an;
    (an / norm, phase * b.conj() / norm)
}

/// Wilkinson shift: the eigenvalue of the trailing 2×2 block closest to the
/// bottom-right entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr_half = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    let l1 = tr_half + root;
    let l2 = tr_half - root;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn schur_decompose(a: &ComplexMatrix, tol: f64) -> Result<Schur> {
    let n = a.rows();
    let (mut h, mut q) = hessenberg(a);
    if n <= 1 {
        return Ok(Schur { t: h, q });
    }

    let sweep_budget = 30 * n;
    let mut sweeps = 0usize;
    let mut hi = n - 1;
    let mut stagnant = 0usize;

    'outer: while hi > 0 {
        // deflate converged subdiagonals at the bottom of the active window
        loop {
            let s = h[(hi, hi - 1)].norm();
            let scale = h[(hi - 1, hi - 1)].norm() + h[(hi, hi)].norm();
            if s <= DEFLATION_TOL * scale.max(tol) {
                h[(hi, hi - 1)] = Complex64::new(0.0, 0.0);
                hi -= 1;
                stagnant = 0;
                if hi == 0 {
                    break 'outer;
                }
            } else {
                break;
            }
        }

        // find the top of the active Hessenberg window
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo, lo - 1)].norm();
            let scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s <= DEFLATION_TOL * scale.max(tol) {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        if sweeps >= sweep_budget {
            return Err(Error::NonConvergence { lo, hi, sweeps });
        }
        sweeps += 1;
        stagnant += 1;

        // Wilkinson shift, replaced by an ad-hoc exceptional shift when the
        // window refuses to shrink.
        let shift = if stagnant > 0 && stagnant % 12 == 0 {
            let mag = h[(hi, hi - 1)].norm() + if hi > 1 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + Complex64::new(1.5 * mag, 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };

        // implicit single-shift sweep: create the bulge at the top of the
        // window and chase it down with Givens rotations
        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let sc = s.conj();

            // rows k, k+1 (left rotation)
            let j0 = k.saturating_sub(1);
            for j in j0..n {
                let t1 = h[(k, j)];
                let t2 = h[(k + 1, j)];
                h[(k, j)] = c * t1 + s * t2;
                h[(k + 1, j)] = -sc * t1 + c * t2;
            }
            // columns k, k+1 (right rotation by G†)
            let imax = (k + 2).min(hi) + 1;
            for i in 0..imax.min(n) {
                let t1 = h[(i, k)];
                let t2 = h[(i, k + 1)];
                h[(i, k)] = c * t1 + sc * t2;
                h[(i, k + 1)] = -s * t1 + c * t2;
            }
            // accumulate q <- q G†
            for i in 0..n {
                let t1 = q[(i, k)];
                let t2 = q[(i, k + 1)];
                q[(i, k)] = c * t1 + sc * t2;
                q[(i, k + 1)] = -s * t1 + c * t2;
            }

            if k + 2 <= hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }

    // clear negligible subdiagonal leftovers so t is exactly triangular
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(Schur { t: h, q })
}

/// Unit-norm eigenvector of the triangular factor for the eigenvalue at
/// diagonal position `k`, by back substitution on the leading block.
fn triangular_eigenvector(t: &ComplexMatrix, k: usize) -> Vec<Complex64> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    y[k] = Complex64::new(1.0, 0.0);
    let tiny = f64::EPSILON * (1.0 + t.max_abs());
    for i in (0..k).rev() {
        let mut rhs = Complex64::new(0.0, 0.0);
        for j in i + 1..=k {
            rhs += t[(i, j)] * y[j];
        }
        let mut denom = t[(i, i)] - lambda;
        if denom.norm() < tiny {
            // clustered eigenvalues: perturb the pivot to keep the solve finite
            denom = Complex64::new(tiny, 0.0);
        }
        y[i] = -rhs / denom;
    }
    let norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut y {
        *z /= norm;
    }
    y
}

fn residual_bound(a: &ComplexMatrix, schur: &Schur) -> f64 {
    let n = a.rows();
    let norm_a = a.frobenius_norm();
    if norm_a == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for k in 0..n {
        let y = triangular_eigenvector(&schur.t, k);
        // v = Q y
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=k {
                acc += schur.q[(i, j)] * y[j];
            }
            v[i] = acc;
        }
        let lambda = schur.t[(k, k)];
        let mut res_sq = 0.0;
        for i in 0..n {
            let mut av = Complex64::new(0.0, 0.0);
            for j in 0..n {
                av += a[(i, j)] * v[j];
            }
            res_sq += (av - lambda * v[i]).norm_sqr();
        }
        worst = worst.max(res_sq.sqrt() / norm_a);
    }
    worst
}

fn validate_square(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    if !a.all_finite() {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// All eigenvalues of a general complex square matrix.
pub fn general_eigenvalues(a: &ComplexMatrix, tol: f64) -> Result<EigenvalueSet> {
    validate_square(a)?;
    let n = a.rows();
    if n == 0 {
        return Ok(EigenvalueSet { values: vec![], residual_bound: 0.0 });
    }
    let schur = schur_decompose(a, tol)?;
    let values = (0..n).map(|i| schur.t[(i, i)]).collect();
    Ok(EigenvalueSet { values, residual_bound: residual_bound(a, &schur) })
}

/// Eigenvalues of a Hermitian matrix, real and ascending.
///
/// The caller is expected to have symmetrized the input; anything farther
/// than `1e-12` (in max-entry norm) from Hermitian is rejected.
pub fn hermitian_eigenvalues(h: &ComplexMatrix, tol: f64) -> Result<EigenvalueSet> {
    validate_square(h)?;
    let defect = h.hermitian_defect();
    if defect > 1e-12 {
        return Err(Error::NotHermitian(defect));
    }
    // exact symmetrization to keep the QR iteration on a normal matrix
    let n = h.rows();
    let mut sym = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sym[(i, j)] = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
        }
    }
    let schur = schur_decompose(&sym, tol)?;
    let mut values: Vec<f64> = (0..n).map(|i| schur.t[(i, i)].re).collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let bound = residual_bound(&sym, &schur);
    Ok(EigenvalueSet {
        values: values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        residual_bound: bound,
    })
}

/// Greedy-free comparison of eigenvalue multisets: optimal bipartite matching
/// under absolute distance, true when a perfect matching exists with every
/// pair within `tol`. Complex eigenvalues have no canonical order, so sorted
/// comparison would be fragile. Exposed for tests across the crate.
pub fn multisets_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    if n == 0 {
        return true;
    }
    // Hungarian-style exact assignment on the distance matrix.
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| (x - y).norm()).collect())
        .collect();
    let assignment = crate::experiments::matching::min_cost_assignment(&cost);
    assignment.iter().enumerate().all(|(i, &j)| cost[i][j] <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar;
    use crate::params::EnsembleParams;
    use crate::stream::RandomStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
        let mut s = RandomStream::for_trial(seed, 0);
        let mut a = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = s.complex_gaussian();
            }
        }
        a
    }

    #[test]
    fn diagonal_matrix() {
        let mut a = ComplexMatrix::zeros(2, 2);
        a[(0, 0)] = c(0.5, 0.0);
        a[(1, 1)] = c(0.0, 0.3);
        let eig = general_eigenvalues(&a, DEFAULT_TOL).unwrap();
        assert!(multisets_match(&eig.values, &[c(0.5, 0.0), c(0.0, 0.3)], 1e-12));
    }

    #[test]
    fn nilpotent_matrix() {
        let mut a = ComplexMatrix::zeros(2, 2);
        a[(0, 1)] = c(1.0, 0.0);
        let eig = general_eigenvalues(&a, DEFAULT_TOL).unwrap();
        assert!(multisets_match(&eig.values, &[c(0.0, 0.0), c(0.0, 0.0)], 1e-7));
    }

    #[test]
    fn residuals_on_random_truncations() {
        // residual oracle by direct multiplication, via the internal Schur data
        let p = EnsembleParams::new(32, 16).unwrap();
        for trial in 0..6 {
            let mut s = RandomStream::for_trial(1000 + trial, trial);
            let u = haar::haar_unitary(&p, &mut s).unwrap();
            let a = haar::truncate(&u, &p).unwrap();
            let eig = general_eigenvalues(&a, DEFAULT_TOL).unwrap();
            assert!(
                eig.residual_bound <= 1e-8,
                "residual {} on trial {trial}",
                eig.residual_bound
            );
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        for seed in 0..8 {
            let n = 3 + (seed as usize % 14);
            let a = random_matrix(n, seed);
            let eig = general_eigenvalues(&a, DEFAULT_TOL).unwrap();
            let sum: Complex64 = eig.values.iter().sum();
            let tr = a.trace();
            let tol = 1e-8 * n as f64 * a.frobenius_norm();
            assert!((sum - tr).norm() <= tol, "sum {sum} trace {tr}");
        }
    }

    #[test]
    fn eigenvalue_product_matches_determinant() {
        // determinant of a unitary has modulus 1; compare against the product
        // on well-conditioned Haar draws
        let p = EnsembleParams::new(8, 4).unwrap();
        for trial in 0..4 {
            let mut s = RandomStream::for_trial(21, trial);
            let u = haar::haar_unitary(&p, &mut s).unwrap();
            let eig = general_eigenvalues(&u, DEFAULT_TOL).unwrap();
            let prod: Complex64 = eig.values.iter().product();
            assert!((prod.norm() - 1.0).abs() < 1e-6, "det modulus {}", prod.norm());
        }
    }

    #[test]
    fn unitary_similarity_invariance() {
        let a = random_matrix(10, 5);
        let p = EnsembleParams::new(10, 5).unwrap();
        let mut s = RandomStream::for_trial(99, 0);
        let w = haar::haar_unitary(&p, &mut s).unwrap();
        let sim = w.matmul(&a).unwrap().matmul(&w.adjoint()).unwrap();
        let e1 = general_eigenvalues(&a, DEFAULT_TOL).unwrap();
        let e2 = general_eigenvalues(&sim, DEFAULT_TOL).unwrap();
        assert!(multisets_match(&e1.values, &e2.values, 1e-8 * (1.0 + a.frobenius_norm())));
    }

    #[test]
    fn hermitian_identity_and_diagonal() {
        let eig = hermitian_eigenvalues(&ComplexMatrix::identity(3), DEFAULT_TOL).unwrap();
        for v in &eig.values {
            assert!((v.re - 1.0).abs() < 1e-13 && v.im == 0.0);
        }
        let mut d = ComplexMatrix::zeros(3, 3);
        d[(1, 1)] = c(0.5, 0.0);
        d[(2, 2)] = c(1.0, 0.0);
        let eig = hermitian_eigenvalues(&d, DEFAULT_TOL).unwrap();
        let got: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
        assert!((got[0] - 0.0).abs() < 1e-13);
        assert!((got[1] - 0.5).abs() < 1e-13);
        assert!((got[2] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn hermitian_rejects_asymmetric_input() {
        let mut a = ComplexMatrix::zeros(2, 2);
        a[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(hermitian_eigenvalues(&a, DEFAULT_TOL), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn hermitian_4x4_matches_characteristic_polynomial_roots() {
        // independent oracle: characteristic polynomial by Faddeev-LeVerrier,
        // roots by bisection between Gershgorin bounds
        let mut s = RandomStream::for_trial(2024, 0);
        for _case in 0..5 {
            let mut a = ComplexMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..=i {
                    if i == j {
                        a[(i, j)] = c(s.standard_normal(), 0.0);
                    } else {
                        let z = s.complex_gaussian();
                        a[(i, j)] = z;
                        a[(j, i)] = z.conj();
                    }
                }
            }
            let eig = hermitian_eigenvalues(&a, DEFAULT_TOL).unwrap();
            let got: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
            let want = charpoly_roots_4x4(&a);
            for (g, w) in got.iter().zip(want.iter()) {
                assert!((g - w).abs() < 1e-9, "eigs {got:?} vs charpoly {want:?}");
            }
        }
    }

    /// Coefficients of det(xI - A) for Hermitian 4x4 via Faddeev-LeVerrier,
    /// then all four real roots by sign-change bisection.
    fn charpoly_roots_4x4(a: &ComplexMatrix) -> Vec<f64> {
        let n = 4;
        // power-sum traces p_k = tr(A^k)
        let mut pows = Vec::new();
        let mut acc = a.clone();
        for _ in 0..n {
            pows.push(acc.trace().re);
            acc = acc.matmul(a).unwrap();
        }
        // Newton's identities: e_0 = 1, k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
        let mut e = vec![1.0f64];
        for k in 1..=n {
            let mut sum = 0.0;
            for i in 1..=k {
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                sum += sign * e[k - i] * pows[i - 1];
            }
            e.push(sum / k as f64);
        }
        // det(xI - A) = x^4 - e1 x^3 + e2 x^2 - e3 x + e4
        let poly = move |x: f64| x.powi(4) - e[1] * x.powi(3) + e[2] * x.powi(2) - e[3] * x + e[4];
        // Gershgorin interval
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            for j in 0..n {
                if i != j {
                    radius += a[(i, j)].norm();
                }
            }
            lo = lo.min(a[(i, i)].re - radius);
            hi = hi.max(a[(i, i)].re + radius);
        }
        // scan for sign changes on a fine grid, then bisect
        let steps = 40_000;
        let mut roots = Vec::new();
        let mut x_prev = lo;
        let mut f_prev = poly(lo);
        for k in 1..=steps {
            let x = lo + (hi - lo) * k as f64 / steps as f64;
            let f = poly(x);
            if f_prev == 0.0 {
                roots.push(x_prev);
            } else if f_prev.signum() != f.signum() {
                let (mut xa, mut xb) = (x_prev, x);
                let (mut fa, _) = (f_prev, f);
                for _ in 0..200 {
                    let xm = 0.5 * (xa + xb);
                    let fm = poly(xm);
                    if fm == 0.0 {
                        xa = xm;
                        xb = xm;
                        break;
                    }
                    if fa.signum() == fm.signum() {
                        xa = xm;
                        fa = fm;
                    } else {
                        xb = xm;
                    }
                }
                roots.push(0.5 * (xa + xb));
            }
            x_prev = x;
            f_prev = f;
        }
        assert_eq!(roots.len(), 4, "oracle expects distinct eigenvalues");
        roots
    }

    #[test]
    fn gershgorin_bounds_hold() {
        let mut s = RandomStream::for_trial(31, 0);
        let n = 6;
        let mut a = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                if i == j {
                    a[(i, j)] = c(s.standard_normal(), 0.0);
                } else {
                    let z = s.complex_gaussian();
                    a[(i, j)] = z;
                    a[(j, i)] = z.conj();
                }
            }
        }
        let eig = hermitian_eigenvalues(&a, DEFAULT_TOL).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let d = a[(i, i)].re;
            let mut off = 0.0;
            for j in 0..n {
                if j != i {
                    off += a[(i, j)].norm();
                }
            }
            lo = lo.min(d - off);
            hi = hi.max(d + off);
        }
        for v in &eig.values {
            assert!(v.re >= lo - 1e-12 && v.re <= hi + 1e-12);
        }
    }

    #[test]
    fn empty_and_single() {
        let a = ComplexMatrix::zeros(0, 0);
        assert!(general_eigenvalues(&a, DEFAULT_TOL).unwrap().values.is_empty());
        let mut b = ComplexMatrix::zeros(1, 1);
        b[(0, 0)] = c(2.0, -3.0);
        let eig = general_eigenvalues(&b, DEFAULT_TOL).unwrap();
        assert_eq!(eig.values[0], c(2.0, -3.0));
    }
}
