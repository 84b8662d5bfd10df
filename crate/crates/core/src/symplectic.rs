//! The symplectic group Sp(n) on phase space `z = (x, p)`.
//!
//! Generator conventions, used everywhere in the crate:
//!
//! * `J   = [[0, I], [-I, 0]]`
//! * `M_L = [[L^{-1}, 0], [0, L^T]]`
//! * `V_P = [[I, 0], [-P, I]]`

use crate::error::{Error, Result};
use crate::matrix::{
    self, blocks, from_blocks, HermitianMatrix, Matrix, PositiveDefiniteMatrix, SymmetricMatrix,
};
use crate::tol;

/// The standard symplectic matrix of half-dimension `n`.
pub fn j_matrix(n: usize) -> Matrix {
    let z = Matrix::zeros(n, n);
    let i = Matrix::identity(n, n);
    from_blocks(&z, &i, &(-&i), &z)
}

/// Outcome of a symplecticity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticityReport {
    /// `||M^T J M - J|| / ||J||` (Frobenius).
    pub defect: f64,
    pub tol: f64,
    pub is_symplectic: bool,
}

/// Measures how far `m` is from satisfying `M^T J M = J`.
pub fn verify_symplectic(m: &Matrix, tol: f64) -> Result<SymplecticityReport> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if !m.nrows().is_multiple_of(2) {
        return Err(Error::OddDimension(m.nrows()));
    }
    let j = j_matrix(m.nrows() / 2);
    let defect = (m.transpose() * &j * m - &j).norm() / j.norm().max(1e-300);
    Ok(SymplecticityReport {
        defect,
        tol,
        is_symplectic: defect <= tol,
    })
}

/// A 2n x 2n matrix certified to satisfy `S^T J S = J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    m: Matrix,
}

impl SymplecticMatrix {
    /// Certifies at the internal tolerance [`tol::SYMPLECTIC`].
    pub fn new(m: Matrix) -> Result<Self> {
        Self::with_tolerance(m, tol::SYMPLECTIC)
    }

    /// Certifies at the looser file-loading tolerance [`tol::SYMPLECTIC_LOAD`].
    pub fn load(m: Matrix) -> Result<Self> {
        Self::with_tolerance(m, tol::SYMPLECTIC_LOAD)
    }

    pub fn with_tolerance(m: Matrix, tol: f64) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let report = verify_symplectic(&m, tol)?;
        if !report.is_symplectic {
            return Err(Error::NotSymplectic {
                defect: report.defect,
            });
        }
        Ok(Self {
            n: m.nrows() / 2,
            m,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            m: Matrix::identity(2 * n, 2 * n),
        }
    }

    pub fn j(n: usize) -> Self {
        Self { n, m: j_matrix(n) }
    }

    /// `M_L`; fails when `L` is singular.
    pub fn m_l(l: &Matrix) -> Result<Self> {
        if l.nrows() != l.ncols() {
            return Err(Error::NotSquare {
                rows: l.nrows(),
                cols: l.ncols(),
            });
        }
        let det = l.determinant();
        if det.is_nan() || det.abs() <= tol::SINGULAR_DET {
            return Err(Error::SingularL { det });
        }
        let n = l.nrows();
        let linv = l.clone().try_inverse().ok_or(Error::SingularL { det })?;
        let z = Matrix::zeros(n, n);
        Self::new(from_blocks(&linv, &z, &z, &l.transpose()))
    }

    /// `V_P` for symmetric `P`.
    pub fn v_p(p: &SymmetricMatrix) -> Self {
        let n = p.dim();
        let i = Matrix::identity(n, n);
        let z = Matrix::zeros(n, n);
        Self {
            n,
            m: from_blocks(&i, &z, &(-p.matrix()), &i),
        }
    }

    /// Half-dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub fn blocks(&self) -> (Matrix, Matrix, Matrix, Matrix) {
        blocks(&self.m)
    }

    pub fn defect(&self) -> f64 {
        verify_symplectic(&self.m, f64::INFINITY)
            .map(|r| r.defect)
            .unwrap_or(f64::INFINITY)
    }

    /// `S^{-1} = -J S^T J`, exact for symplectic `S`.
    pub fn inverse(&self) -> Self {
        let j = j_matrix(self.n);
        Self {
            n: self.n,
            m: -(&j * self.m.transpose() * &j),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            m: self.m.transpose(),
        }
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &SymplecticMatrix) -> Self {
        assert_eq!(self.n, other.n, "half-dimension mismatch");
        Self {
            n: self.n,
            m: &self.m * &other.m,
        }
    }

    /// `S^T S`, the membership matrix of `S^{-1}(ball)`.
    pub fn gram(&self) -> Result<PositiveDefiniteMatrix> {
        PositiveDefiniteMatrix::from_matrix(self.m.transpose() * &self.m)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        matrix::to_rows(&self.m)
    }
}

/// The generators `J`, `M_L`, `V_P` for one choice of `(L, P)`.
#[derive(Debug, Clone)]
pub struct Generators {
    pub j: SymplecticMatrix,
    pub m_l: SymplecticMatrix,
    pub v_p: SymplecticMatrix,
}

pub fn standard_generators(n: usize, l: &Matrix, p: &SymmetricMatrix) -> Result<Generators> {
    if l.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: l.nrows(),
        });
    }
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.dim(),
        });
    }
    Ok(Generators {
        j: SymplecticMatrix::j(n),
        m_l: SymplecticMatrix::m_l(l)?,
        v_p: SymplecticMatrix::v_p(p),
    })
}

/// Factors of `S = V_P * M_L * R` with `R = [[U, V], [-V, U]]`.
#[derive(Debug, Clone)]
pub struct PreIwasawaFactors {
    pub p: SymmetricMatrix,
    pub l: PositiveDefiniteMatrix,
    pub u: Matrix,
    pub v: Matrix,
    /// Relative asymmetry of `P` before symmetrization.
    pub p_defect: f64,
}

impl PreIwasawaFactors {
    /// The orthogonal symplectic factor.
    pub fn r(&self) -> Matrix {
        from_blocks(&self.u, &self.v, &(-&self.v), &self.u)
    }

    /// `V_P * M_L * R`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.u.nrows();
        let i = Matrix::identity(n, n);
        let z = Matrix::zeros(n, n);
        let v_p = from_blocks(&i, &z, &(-self.p.matrix()), &i);
        let l = self.l.matrix();
        let linv = self.l.inverse().into_matrix();
        let m_l = from_blocks(&linv, &z, &z, l);
        v_p * m_l * self.r()
    }

    /// Relative Frobenius error of the reconstruction against `s`.
    pub fn reconstruction_defect(&self, s: &SymplecticMatrix) -> f64 {
        matrix::rel_diff(&self.reconstruct(), s.matrix())
    }
}

/// Pre-Iwasawa decomposition.
///
/// With `K = AA^T + BB^T`: `L = K^{-1/2}`, `P = -(CA^T + DB^T) K^{-1}`,
/// `U = K^{-1/2} A`, `V = K^{-1/2} B`.
pub fn pre_iwasawa(s: &SymplecticMatrix) -> Result<PreIwasawaFactors> {
    let (a, b, c, d) = s.blocks();
    let k = PositiveDefiniteMatrix::from_matrix(&a * a.transpose() + &b * b.transpose())
        .map_err(|_| Error::DegenerateBlocks)?;
    let l = k.inv_sqrt();
    let kinv = k.inverse();
    let p_raw = -(&c * a.transpose() + &d * b.transpose()) * kinv.matrix();
    let p_t = p_raw.transpose();
    let p_defect = (&p_raw - &p_t).norm() / p_raw.norm().max(1.0);
    if p_defect > tol::MAX_ASYMMETRY {
        return Err(Error::Invariant(format!(
            "pre-Iwasawa P is asymmetric (defect {p_defect:.3e})"
        )));
    }
    let p = SymmetricMatrix::new((p_raw + p_t) * 0.5)?;
    let u = l.matrix() * &a;
    let v = l.matrix() * &b;
    Ok(PreIwasawaFactors {
        p,
        l,
        u,
        v,
        p_defect,
    })
}

/// Symplectic eigenvalues of a 2n x 2n positive-definite matrix, descending.
///
/// The spectrum of `JM` is `{±iλ_j}`; the λ_j are read off the Hermitian
/// matrix `i M^{1/2} J M^{1/2}`, whose eigenvalues are `±λ_j`.
pub fn symplectic_eigenvalues(m: &PositiveDefiniteMatrix) -> Result<Vec<f64>> {
    let dim = m.dim();
    if !dim.is_multiple_of(2) {
        return Err(Error::OddDimension(dim));
    }
    let n = dim / 2;
    let r = m.sqrt();
    let k = r.matrix() * j_matrix(n) * r.matrix();
    let h = HermitianMatrix::from_parts(&Matrix::zeros(dim, dim), &k)?;
    let mut ev = h.eigenvalues();
    ev.reverse();
    ev.truncate(n);
    if ev.iter().any(|&l| l.is_nan() || l <= 0.0) {
        return Err(Error::Invariant(
            "non-positive symplectic eigenvalue of a positive-definite matrix".into(),
        ));
    }
    Ok(ev)
}

/// Largest symplectic eigenvalue.
pub fn max_symplectic_eigenvalue(m: &PositiveDefiniteMatrix) -> Result<f64> {
    Ok(symplectic_eigenvalues(m)?[0])
}
