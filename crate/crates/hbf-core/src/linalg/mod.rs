//! Dense complex linear algebra used by the beamformer design and the
//! spectral-efficiency evaluator.
//!
//! The kernel is deliberately small: matrices at play are a few hundred
//! rows at most, so everything is plain row-major storage and O(n^3)
//! textbook algorithms with careful determinism (fixed sweep order, fixed
//! tie-breaks, pinned sign conventions).

mod solve;
mod svd;

pub use solve::{logdet2_hermitian_pd, solve_regularized};
pub(crate) use svd::pin_vector_pair;
pub use svd::{svd, svd_thin, SvdResult, ThinSvd};

use num_complex::Complex64;
use thiserror::Error;

/// Errors from the linear-algebra kernel.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix dimensions must be strictly positive (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("data length {len} does not match {rows}x{cols}")]
    BadDataLength { len: usize, rows: usize, cols: usize },
    #[error("dimension mismatch: {context} ({lhs_rows}x{lhs_cols} vs {rhs_rows}x{rhs_cols})")]
    ShapeMismatch {
        context: &'static str,
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },
    #[error("SVD failed to converge after {sweeps} Jacobi sweeps")]
    SvdNoConvergence { sweeps: usize },
    #[error("regularized system is singular to working precision")]
    SingularSystem,
    #[error("regularizer must be positive (got {alpha})")]
    NonPositiveAlpha { alpha: f64 },
    #[error("matrix is not Hermitian to tolerance {tol}")]
    NotHermitian { tol: f64 },
    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { pivot: f64, index: usize },
    #[error("truncation rank {requested} exceeds min dimension {available}")]
    RankTooLarge { requested: usize, available: usize },
}

/// Dense complex matrix, row-major.
///
/// Construction rejects empty dimensions and non-finite entries; arithmetic
/// on valid matrices stays finite for the magnitudes this crate works with.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::BadDataLength {
                len: data.len(),
                rows,
                cols,
            });
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFiniteEntry {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Internal constructor for results of arithmetic on already-valid inputs.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert!(rows > 0 && cols > 0 && data.len() == rows * cols);
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "zero-sized matrix");
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_raw(rows, cols, data)
    }

    /// Square diagonal matrix from real entries.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(diag[i], 0.0);
        }
        m
    }

    /// Assemble from column vectors (all of equal length).
    pub fn from_cols(cols: &[Vec<Complex64>]) -> Self {
        assert!(!cols.is_empty(), "no columns");
        let rows = cols[0].len();
        assert!(cols.iter().all(|c| c.len() == rows), "ragged columns");
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        assert!(j < self.cols);
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Copy of the leading `k` columns.
    pub fn leading_cols(&self, k: usize) -> ComplexMatrix {
        assert!(k >= 1 && k <= self.cols);
        Self::from_fn(self.rows, k, |i, j| self[(i, j)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: Complex64) -> ComplexMatrix {
        Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z * c).collect(),
        )
    }

    pub fn scale_real(&self, c: f64) -> ComplexMatrix {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_raw(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_raw(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Matrix product.
    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = vec![Complex64::ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                let lhs_row = i * other.cols;
                for j in 0..other.cols {
                    out[lhs_row + j] += aik * other[(k, j)];
                }
            }
        }
        Self::from_raw(self.rows, other.cols, out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)] * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hermitian part (A + A^H) / 2; used to scrub round-off asymmetry
    /// before Cholesky-based log-determinants.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        assert_eq!(self.rows, self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Deviation from unitarity: ||A^H A - I||_F.
    pub fn unitary_residual(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        gram.sub(&ComplexMatrix::identity(gram.rows())).frobenius_norm()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
