//! Singular value decomposition via one-sided (Hestenes) Jacobi.
//!
//! One-sided Jacobi orthogonalizes columns in a fixed sweep order, which
//! makes the factorization deterministic for a fixed input; the phase
//! freedom of complex singular vectors is then pinned by a sign convention
//! (first non-negligible entry of each left vector is made real and
//! non-negative). Downstream candidate-set construction consumes singular
//! vector phases, so this convention is load-bearing for reproducibility,
//! not cosmetic.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

const MAX_SWEEPS: usize = 64;
/// Column pairs with |<ci,cj>| below this times ||ci|| ||cj|| are treated
/// as orthogonal.
const ORTH_TOL: f64 = 1e-14;
/// Entries below this fraction of the column norm do not anchor the phase
/// convention.
const PHASE_ANCHOR_TOL: f64 = 1e-9;

/// Full SVD `A = left * diag(singular) * right^H`.
///
/// `left` is rows x rows unitary, `right` is cols x cols unitary and
/// `singular` holds the min(rows, cols) singular values in nonincreasing
/// order.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: ComplexMatrix,
    pub singular: Vec<f64>,
    pub right: ComplexMatrix,
}

/// Truncated SVD: the leading `k` left/right singular vectors plus the
/// complete set of singular values.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    /// rows x k, orthonormal columns.
    pub left: ComplexMatrix,
    /// All min(rows, cols) singular values, nonincreasing.
    pub singular: Vec<f64>,
    /// cols x k, orthonormal columns.
    pub right: ComplexMatrix,
}

/// Full singular value decomposition.
///
/// Fails with [`LinalgError::SvdNoConvergence`] if the Jacobi sweeps do not
/// reach column orthogonality within the iteration budget.
pub fn svd(a: &ComplexMatrix) -> Result<SvdResult, LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    if m >= n {
        let (mut u_cols, sigma, v_cols, rank) = jacobi_tall(a)?;
        complete_basis(&mut u_cols, m);
        debug_assert_eq!(v_cols.len(), n);
        let (left, right) = apply_sign_convention(u_cols, v_cols, rank);
        Ok(SvdResult {
            left,
            singular: sigma,
            right,
        })
    } else {
        // A = (A^H)^H: decompose the tall adjoint and swap factors.
        let (mut u_cols, sigma, v_cols, rank) = jacobi_tall(&a.adjoint())?;
        complete_basis(&mut u_cols, n);
        let (left, right) = apply_sign_convention(v_cols, u_cols, rank);
        Ok(SvdResult {
            left,
            singular: sigma,
            right,
        })
    }
}

/// Truncated SVD with `k` retained components.
///
/// Equivalent to slicing the full decomposition but skips the basis
/// completion, which matters when one side is much larger than `k`.
pub fn svd_thin(a: &ComplexMatrix, k: usize) -> Result<ThinSvd, LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    let kmax = m.min(n);
    if k == 0 || k > kmax {
        return Err(LinalgError::RankTooLarge {
            requested: k,
            available: kmax,
        });
    }
    let (u_cols, sigma, v_cols, rank) = if m >= n {
        jacobi_tall(a)?
    } else {
        let (u, s, v, r) = jacobi_tall(&a.adjoint())?;
        (v, s, u, r)
    };
    let u_cols = u_cols.into_iter().take(k).collect::<Vec<_>>();
    let v_cols = v_cols.into_iter().take(k).collect::<Vec<_>>();
    let (left, right) = apply_sign_convention(u_cols, v_cols, rank);
    Ok(ThinSvd {
        left,
        singular: sigma,
        right,
    })
}

/// Columns of the factor matrices during the Jacobi iteration.
type ColumnSet = Vec<Vec<Complex64>>;

/// One-sided Jacobi on a tall (or square) matrix, rows >= cols.
///
/// Returns (`u_cols`, `sigma`, `v_cols`, `rank`) with `u_cols` the min-side
/// left singular vectors (n orthonormal columns of length m, numerically
/// null directions filled deterministically), `sigma` sorted nonincreasing,
/// `v_cols` the full set of n right singular vectors and `rank` the number
/// of singular values above the working-precision cutoff.
fn jacobi_tall(a: &ComplexMatrix) -> Result<(ColumnSet, Vec<f64>, ColumnSet, usize), LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m >= n);

    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::ZERO; n];
            e[j] = Complex64::ONE;
            e
        })
        .collect();

    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= MAX_SWEEPS {
            return Err(LinalgError::SvdNoConvergence { sweeps });
        }
        sweeps += 1;
        converged = true;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let alpha: f64 = w[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = w[i]
                    .iter()
                    .zip(&w[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let gnorm = gamma.norm();
                if gnorm <= ORTH_TOL * (alpha * beta).sqrt() || gnorm == 0.0 {
                    continue;
                }
                converged = false;

                // Rotate the pair so the 2x2 Gram matrix diagonalizes:
                // phase-align column j (gamma * phase = |gamma|), then apply
                // the real Jacobi rotation.
                let phase = gamma.conj() / gnorm;
                let zeta = (beta - alpha) / (2.0 * gnorm);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                rotate_pair(&mut w, i, j, phase, c, s);
                rotate_pair(&mut v, i, j, phase, c, s);
            }
        }
    }

    // Column norms are the singular values; sort nonincreasing with a
    // stable order for ties.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));

    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let v_cols: Vec<Vec<Complex64>> = order.iter().map(|&k| v[k].clone()).collect();
    let rank_tol = sigma.first().copied().unwrap_or(0.0) * f64::EPSILON * (m.max(n) as f64);
    let rank = sigma.iter().filter(|&&s| s > rank_tol && s > 0.0).count();
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (rank_pos, &k) in order.iter().enumerate() {
        if rank_pos < rank {
            let inv = 1.0 / sigma[rank_pos];
            u_cols.push(w[k].iter().map(|z| z * inv).collect());
        } else {
            // Numerically zero direction: the left vector is unconstrained,
            // fill it deterministically during completion.
            u_cols.push(Vec::new());
        }
    }
    fill_null_columns(&mut u_cols, m);
    Ok((u_cols, sigma, v_cols, rank))
}

fn rotate_pair(cols: &mut [Vec<Complex64>], i: usize, j: usize, phase: Complex64, c: f64, s: f64) {
    // i < j always, so the split keeps both columns borrowable.
    let (head, tail) = cols.split_at_mut(j);
    for (xi_ref, xj_ref) in head[i].iter_mut().zip(tail[0].iter_mut()) {
        let xi = *xi_ref;
        let xj = *xj_ref * phase;
        *xi_ref = xi * c - xj * s;
        *xj_ref = xi * s + xj * c;
    }
}

/// Replace empty placeholder columns by unit vectors orthogonal to every
/// other column (canonical basis candidates, doubly orthogonalized).
fn fill_null_columns(cols: &mut [Vec<Complex64>], dim: usize) {
    let missing: Vec<usize> = (0..cols.len()).filter(|&k| cols[k].is_empty()).collect();
    if missing.is_empty() {
        return;
    }
    let mut basis: Vec<Vec<Complex64>> = cols.iter().filter(|c| !c.is_empty()).cloned().collect();
    let mut fresh = Vec::with_capacity(missing.len());
    let mut cand = 0;
    while fresh.len() < missing.len() && cand < dim {
        let mut e = vec![Complex64::ZERO; dim];
        e[cand] = Complex64::ONE;
        cand += 1;
        if let Some(q) = orthonormalize_against(e, &basis) {
            basis.push(q.clone());
            fresh.push(q);
        }
    }
    assert_eq!(fresh.len(), missing.len(), "basis completion fell short");
    for (slot, q) in missing.into_iter().zip(fresh) {
        cols[slot] = q;
    }
}

/// Extend a set of orthonormal columns of length `dim` to `dim` of them.
fn complete_basis(cols: &mut Vec<Vec<Complex64>>, dim: usize) {
    let mut cand = 0;
    while cols.len() < dim {
        assert!(cand < dim, "basis completion fell short");
        let mut e = vec![Complex64::ZERO; dim];
        e[cand] = Complex64::ONE;
        cand += 1;
        if let Some(q) = orthonormalize_against(e, cols) {
            cols.push(q);
        }
    }
}

/// Two-pass modified Gram-Schmidt of `v` against `basis`; None if the
/// residual is negligible.
fn orthonormalize_against(mut v: Vec<Complex64>, basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    for _ in 0..2 {
        for b in basis {
            let proj: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-3 {
        return None;
    }
    let inv = 1.0 / norm;
    Some(v.into_iter().map(|z| z * inv).collect())
}

/// Pin the phase freedom: rotate each left column so its first
/// non-negligible entry is real non-negative, counter-rotating the paired
/// right column where a nonzero singular value couples them. Columns past
/// the numerical rank are unconstrained and anchored independently.
fn apply_sign_convention(
    mut left: Vec<Vec<Complex64>>,
    mut right: Vec<Vec<Complex64>>,
    coupled: usize,
) -> (ComplexMatrix, ComplexMatrix) {
    for k in 0..left.len() {
        let rot = anchor_phase(&left[k]);
        for z in left[k].iter_mut() {
            *z *= rot;
        }
        if k < coupled && k < right.len() {
            for z in right[k].iter_mut() {
                *z *= rot;
            }
        }
    }
    for col in right.iter_mut().skip(coupled) {
        let rot = anchor_phase(col);
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
    (
        ComplexMatrix::from_cols(&left),
        ComplexMatrix::from_cols(&right),
    )
}

/// Unit complex number that rotates the column's anchor entry onto the
/// non-negative real axis. The anchor is the first entry whose modulus is
/// non-negligible relative to the column, so round-off zeros cannot flip
/// the convention.
fn anchor_phase(col: &[Complex64]) -> Complex64 {
    let scale = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let anchor = col
        .iter()
        .find(|z| z.norm() > PHASE_ANCHOR_TOL * scale)
        .copied()
        .unwrap_or(Complex64::ONE);
    if anchor == Complex64::ZERO {
        return Complex64::ONE;
    }
    anchor.conj() / anchor.norm()
}

/// Sign-convention helper shared with the beamformer design: rotate a
/// coupled (left, right) singular-vector pair in place.
pub(crate) fn pin_vector_pair(p: &mut [Complex64], q: &mut [Complex64]) {
    let rot = anchor_phase(p);
    for z in p.iter_mut() {
        *z *= rot;
    }
    for z in q.iter_mut() {
        *z *= rot;
    }
}
