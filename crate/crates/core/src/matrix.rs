//! Dense symmetric, positive-definite and Hermitian matrices.
//!
//! Every wrapper validates on construction and is immutable afterwards, so a
//! `PositiveDefiniteMatrix` in hand is a certificate that the check passed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Relative Frobenius distance `||a - b|| / max(||b||, 1e-300)`.
pub fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    let denom = b.norm().max(1e-300);
    (a - b).norm() / denom
}

/// Frobenius distance normalised by `max(1, ||b||)`; usable when `b` may be zero.
pub fn scaled_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Builds a matrix from row-major nested rows.
pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidArgument("ragged matrix rows".into()));
    }
    let m = Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

/// Row-major nested rows of `m`.
pub fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Assembles `[[a, b], [c, d]]` from four n x n blocks.
pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Splits a 2n x 2n matrix into its four n x n blocks `(A, B, C, D)`.
pub fn blocks(m: &Matrix) -> (Matrix, Matrix, Matrix, Matrix) {
    let n = m.nrows() / 2;
    (
        m.view((0, 0), (n, n)).into_owned(),
        m.view((0, n), (n, n)).into_owned(),
        m.view((n, 0), (n, n)).into_owned(),
        m.view((n, n), (n, n)).into_owned(),
    )
}

/// Real symmetric matrix, stored in symmetrized form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    m: Matrix,
    defect: f64,
}

impl SymmetricMatrix {
    /// Symmetrizes `m` as `(m + m^T)/2`; rejects a relative asymmetry above
    /// [`tol::MAX_ASYMMETRY`].
    pub fn new(m: Matrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let t = m.transpose();
        let defect = (&m - &t).norm() / m.norm().max(1e-300);
        if defect > tol::MAX_ASYMMETRY {
            return Err(Error::NotSymmetric { defect });
        }
        let m = (m + t) * 0.5;
        Ok(Self { m, defect })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: Matrix::identity(n, n),
            defect: 0.0,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: Matrix::zeros(n, n),
            defect: 0.0,
        }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diagonal(&Vector::from_column_slice(d)))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    /// Relative asymmetry of the matrix this was built from.
    pub fn asymmetry_defect(&self) -> f64 {
        self.defect
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        to_rows(&self.m)
    }
}

/// Symmetric matrix whose eigenvalues are all strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveDefiniteMatrix(SymmetricMatrix);

impl PositiveDefiniteMatrix {
    /// Certifies `min eig > PD_RATIO * max eig`.
    pub fn new(s: SymmetricMatrix) -> Result<Self> {
        let spec = eig_sym(&s);
        let min = spec.values[0];
        let max = *spec.values.last().expect("non-empty");
        if !(max > 0.0 && min > tol::PD_RATIO * max) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
                max_eigenvalue: max,
            });
        }
        Ok(Self(s))
    }

    pub fn from_matrix(m: Matrix) -> Result<Self> {
        Self::new(SymmetricMatrix::new(m)?)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(SymmetricMatrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self(SymmetricMatrix::identity(n))
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(SymmetricMatrix::diagonal(d)?)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        self.0.matrix()
    }

    pub fn symmetric(&self) -> &SymmetricMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0.into_matrix()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0.to_rows()
    }

    pub fn eigen(&self) -> Spectrum {
        eig_sym(&self.0)
    }

    /// Inverse, computed spectrally.
    pub fn inverse(&self) -> PositiveDefiniteMatrix {
        self.spectral_map(|l| 1.0 / l)
    }

    pub fn sqrt(&self) -> PositiveDefiniteMatrix {
        sym_sqrt(self)
    }

    pub fn inv_sqrt(&self) -> PositiveDefiniteMatrix {
        self.spectral_map(|l| 1.0 / l.sqrt())
    }

    /// Multiplies by a positive scalar.
    pub fn scaled(&self, s: f64) -> Result<PositiveDefiniteMatrix> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scale must be positive, got {s}"
            )));
        }
        Ok(Self(SymmetricMatrix {
            m: self.matrix() * s,
            defect: 0.0,
        }))
    }

    /// `f` applied to the eigenvalues; `f` must map positives to positives.
    fn spectral_map(&self, f: impl Fn(f64) -> f64) -> PositiveDefiniteMatrix {
        let spec = self.eigen();
        let d = Matrix::from_diagonal(&Vector::from_iterator(
            spec.values.len(),
            spec.values.iter().map(|&l| f(l)),
        ));
        let m = &spec.basis * d * spec.basis.transpose();
        let m = (&m + m.transpose()) * 0.5;
        Self(SymmetricMatrix { m, defect: 0.0 })
    }
}

/// Complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: DMatrix<Complex64>,
}

impl HermitianMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let adj = m.adjoint();
        let defect = (&m - &adj).norm() / m.norm().max(1e-300);
        if defect > tol::MAX_ASYMMETRY {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self {
            m: (m + adj).scale(0.5),
        })
    }

    /// `re + i * im` for real symmetric `re` and antisymmetric `im`.
    pub fn from_parts(re: &Matrix, im: &Matrix) -> Result<Self> {
        let m = DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        });
        Self::new(m)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    /// Real eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Orthogonal matrix whose columns are the matching eigenvectors.
    pub basis: Matrix,
}

/// Symmetric eigen-decomposition with `M = basis * diag(values) * basis^T`.
pub fn eig_sym(m: &SymmetricMatrix) -> Spectrum {
    let eig = m.matrix().clone().symmetric_eigen();
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut basis = Matrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        basis.set_column(k, &eig.eigenvectors.column(i));
    }
    Spectrum { values, basis }
}

/// Principal square root via the spectral decomposition.
pub fn sym_sqrt(m: &PositiveDefiniteMatrix) -> PositiveDefiniteMatrix {
    m.spectral_map(f64::sqrt)
}

/// True iff `min eig >= -tol * (1 + max |eig|)`.
pub fn is_psd(m: &HermitianMatrix, tol: f64) -> bool {
    let ev = m.eigenvalues();
    let min = ev[0];
    let max_abs = ev.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    min >= -tol * (1.0 + max_abs)
}
