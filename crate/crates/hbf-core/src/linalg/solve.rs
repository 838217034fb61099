//! Regularized linear solves and Hermitian positive-definite
//! log-determinants.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

/// Solve `(alpha*I + M) X = B` by LU with partial pivoting.
///
/// The caller supplies `alpha > 0` as the invertibility regularizer; a
/// system that is still rank-deficient at working precision is reported as
/// [`LinalgError::SingularSystem`].
pub fn solve_regularized(
    m: &ComplexMatrix,
    alpha: f64,
    b: &ComplexMatrix,
) -> Result<ComplexMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::ShapeMismatch {
            context: "solve_regularized system matrix must be square",
            lhs_rows: m.rows(),
            lhs_cols: m.cols(),
            rhs_rows: m.rows(),
            rhs_cols: m.rows(),
        });
    }
    if b.rows() != m.rows() {
        return Err(LinalgError::ShapeMismatch {
            context: "solve_regularized right-hand side rows",
            lhs_rows: m.rows(),
            lhs_cols: m.cols(),
            rhs_rows: b.rows(),
            rhs_cols: b.cols(),
        });
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(LinalgError::NonPositiveAlpha { alpha });
    }

    let n = m.rows();
    let mut lu = m.clone();
    for i in 0..n {
        lu[(i, i)] += Complex64::new(alpha, 0.0);
    }
    let scale = lu.max_abs();
    let pivot_tol = scale * (n as f64) * f64::EPSILON;

    let mut x = b.clone();
    // In-place LU with row pivoting, applied to the right-hand side as we go.
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut best, mut best_mag) = (k, lu[(k, k)].norm());
        for r in k + 1..n {
            let mag = lu[(r, k)].norm();
            if mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        if best_mag <= pivot_tol {
            return Err(LinalgError::SingularSystem);
        }
        if best != k {
            perm.swap(k, best);
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(best, j)];
                lu[(best, j)] = tmp;
            }
            for j in 0..x.cols() {
                let tmp = x[(k, j)];
                x[(k, j)] = x[(best, j)];
                x[(best, j)] = tmp;
            }
        }
        let piv = lu[(k, k)];
        for r in k + 1..n {
            let factor = lu[(r, k)] / piv;
            if factor == Complex64::ZERO {
                continue;
            }
            lu[(r, k)] = factor;
            for j in k + 1..n {
                let sub = factor * lu[(k, j)];
                lu[(r, j)] -= sub;
            }
            for j in 0..x.cols() {
                let sub = factor * x[(k, j)];
                x[(r, j)] -= sub;
            }
        }
    }
    // Back substitution.
    for j in 0..x.cols() {
        for k in (0..n).rev() {
            let mut acc = x[(k, j)];
            for r in k + 1..n {
                acc -= lu[(k, r)] * x[(r, j)];
            }
            x[(k, j)] = acc / lu[(k, k)];
        }
    }
    Ok(x)
}

/// Base-2 log-determinant of a Hermitian positive-definite matrix, via
/// Cholesky: log2|A| = 2 * sum log2 L_kk.
///
/// Rejects inputs that are not Hermitian to tolerance or not positive
/// definite; both cases are distinct errors rather than silent garbage.
pub fn logdet2_hermitian_pd(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    const HERM_TOL: f64 = 1e-10;
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch {
            context: "logdet argument must be square",
            lhs_rows: a.rows(),
            lhs_cols: a.cols(),
            rhs_rows: a.rows(),
            rhs_cols: a.rows(),
        });
    }
    let asym = a.sub(&a.adjoint()).frobenius_norm();
    if asym > HERM_TOL * a.frobenius_norm().max(1.0) {
        return Err(LinalgError::NotHermitian { tol: HERM_TOL });
    }

    let n = a.rows();
    let mut l = a.hermitian_part();
    let mut logdet2 = 0.0;
    for k in 0..n {
        let mut pivot = l[(k, k)].re;
        for r in 0..k {
            pivot -= l[(k, r)].norm_sqr();
        }
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { pivot, index: k });
        }
        let lkk = pivot.sqrt();
        logdet2 += 2.0 * lkk.log2();
        l[(k, k)] = Complex64::new(lkk, 0.0);
        for r in k + 1..n {
            let mut acc = l[(r, k)];
            for c in 0..k {
                acc -= l[(r, c)] * l[(k, c)].conj();
            }
            l[(r, k)] = acc / lkk;
        }
    }
    Ok(logdet2)
}
