//! Generalized Gaussian coherent states `ψ_{X,Y}^{z0}` at the parameter level.
//!
//! A state is its tuple `(hbar, X, Y, z0)`; global phases are not
//! represented, so two states are equal exactly when their parameters are.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrix::{self, from_blocks, Matrix, PositiveDefiniteMatrix, SymmetricMatrix, Vector};
use crate::symplectic::SymplecticMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n: usize,
    hbar: f64,
    x: PositiveDefiniteMatrix,
    y: SymmetricMatrix,
    z0: Vector,
}

impl GaussianState {
    pub fn new(
        hbar: f64,
        x: PositiveDefiniteMatrix,
        y: SymmetricMatrix,
        z0: Vector,
    ) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        let n = x.dim();
        if y.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: y.dim(),
            });
        }
        if z0.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: z0.len(),
            });
        }
        if z0.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, hbar, x, y, z0 })
    }

    /// The standard coherent state `X = I`, `Y = 0`, centered at the origin.
    pub fn standard(n: usize, hbar: f64) -> Result<Self> {
        Self::new(
            hbar,
            PositiveDefiniteMatrix::identity(n),
            SymmetricMatrix::zeros(n),
            Vector::zeros(2 * n),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn x(&self) -> &PositiveDefiniteMatrix {
        &self.x
    }

    pub fn y(&self) -> &SymmetricMatrix {
        &self.y
    }

    pub fn z0(&self) -> &Vector {
        &self.z0
    }

    /// Same state with a different `hbar`.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        Self::new(hbar, self.x.clone(), self.y.clone(), self.z0.clone())
    }

    /// Same state recentered at `z0`.
    pub fn with_center(&self, z0: Vector) -> Result<Self> {
        Self::new(self.hbar, self.x.clone(), self.y.clone(), z0)
    }

    /// Largest parameter discrepancy: Frobenius distances on `X`, `Y`, `z0`
    /// (each scaled by `max(1, norm)`) and the relative `hbar` gap.
    pub fn distance(&self, other: &GaussianState) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let dx = matrix::scaled_diff(self.x.matrix(), other.x.matrix());
        let dy = matrix::scaled_diff(self.y.matrix(), other.y.matrix());
        let dz = (&self.z0 - &other.z0).norm() / other.z0.norm().max(1.0);
        let dh = (self.hbar - other.hbar).abs() / other.hbar;
        dx.max(dy).max(dz).max(dh)
    }

    pub fn approx_eq(&self, other: &GaussianState, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// `G = [[X + Y X^{-1} Y, Y X^{-1}], [X^{-1} Y, X^{-1}]]`, uncertified.
    pub fn g_matrix(&self) -> Matrix {
        let xinv = self.x.inverse().into_matrix();
        let y = self.y.matrix();
        let tl = self.x.matrix() + y * &xinv * y;
        let tr = y * &xinv;
        let bl = &xinv * y;
        from_blocks(&tl, &tr, &bl, &xinv)
    }

    /// `M_XY = [[X^2 + Y^2, Y], [Y, I]]`, uncertified.
    pub fn fermi_m_matrix(&self) -> Matrix {
        let x = self.x.matrix();
        let y = self.y.matrix();
        let i = Matrix::identity(self.n, self.n);
        from_blocks(&(x * x + y * y), y, y, &i)
    }

    /// The state's symplectic factor `S = [[X^{1/2}, 0], [X^{-1/2} Y, X^{-1/2}]]`.
    pub fn symplectic_factor(&self) -> Result<SymplecticMatrix> {
        let xs = self.x.sqrt().into_matrix();
        let xis = self.x.inv_sqrt().into_matrix();
        let z = Matrix::zeros(self.n, self.n);
        let bl = &xis * self.y.matrix();
        SymplecticMatrix::new(from_blocks(&xs, &z, &bl, &xis))
    }
}

/// Wigner-function data of a state: `G = S^T S` and `Σ = (hbar/2) G^{-1}`.
#[derive(Debug, Clone)]
pub struct WignerData {
    pub g: PositiveDefiniteMatrix,
    pub s: SymplecticMatrix,
    pub sigma: PositiveDefiniteMatrix,
}

pub fn wigner_covariance(state: &GaussianState) -> Result<WignerData> {
    let s = state.symplectic_factor()?;
    let g = PositiveDefiniteMatrix::from_matrix(state.g_matrix())?;
    let sts = s.matrix().transpose() * s.matrix();
    let defect = matrix::rel_diff(&sts, g.matrix());
    if defect > 1e-9 {
        return Err(Error::Invariant(format!(
            "G != S^T S (defect {defect:.3e})"
        )));
    }
    let det = g.matrix().determinant();
    if (det - 1.0).abs() > 1e-8 {
        return Err(Error::Invariant(format!("det G = {det} != 1")));
    }
    let sigma = g.inverse().scaled(state.hbar / 2.0)?;
    Ok(WignerData { g, s, sigma })
}

/// Closed-form Wigner function `(π hbar)^{-n} exp(-G(z - z0)·(z - z0)/hbar)`.
pub fn wigner_eval(state: &GaussianState, z: &Vector) -> f64 {
    let d = z - &state.z0;
    let q = d.dot(&(state.g_matrix() * &d));
    (PI * state.hbar).powi(-(state.n as i32)) * (-q / state.hbar).exp()
}

/// The Fermi matrix `M_XY` with its level `hbar * Tr X`.
#[derive(Debug, Clone)]
pub struct FermiMatrix {
    pub m: PositiveDefiniteMatrix,
    pub level: f64,
}

/// Builds `M_XY` and certifies `M_XY = S^T diag(X, X) S`.
pub fn fermi_matrix(state: &GaussianState) -> Result<FermiMatrix> {
    let m = PositiveDefiniteMatrix::from_matrix(state.fermi_m_matrix())?;
    let s = state.symplectic_factor()?;
    let z = Matrix::zeros(state.n, state.n);
    let dx = from_blocks(state.x.matrix(), &z, &z, state.x.matrix());
    let fact = s.matrix().transpose() * dx * s.matrix();
    let defect = matrix::rel_diff(&fact, m.matrix());
    if defect > 1e-9 {
        return Err(Error::Invariant(format!(
            "M_XY != S^T D_X S (defect {defect:.3e})"
        )));
    }
    Ok(FermiMatrix {
        m,
        level: state.hbar * state.x.trace(),
    })
}

/// Weyl symbol `H_XY(z) = M_XY (z - z0)·(z - z0) - hbar Tr X`.
pub fn fermi_symbol(state: &GaussianState, z: &Vector) -> f64 {
    let d = z - &state.z0;
    d.dot(&(state.fermi_m_matrix() * &d)) - state.hbar * state.x.trace()
}

/// Parameter-level action of a metaplectic generator or a phase-space translation.
#[derive(Debug, Clone)]
pub enum Generator {
    /// `V_P`: `Y -> Y + P`.
    Shear(SymmetricMatrix),
    /// `M_L`: `X + iY -> L^T (X + iY) L`.
    Dilation(Matrix),
    /// Heisenberg-Weyl translation `z0 -> z0 + z1`.
    Translation(Vector),
}

pub fn apply_generator(state: &GaussianState, g: &Generator) -> Result<GaussianState> {
    let n = state.n;
    match g {
        Generator::Shear(p) => {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            let y = SymmetricMatrix::new(state.y.matrix() + p.matrix())?;
            GaussianState::new(state.hbar, state.x.clone(), y, state.z0.clone())
        }
        Generator::Dilation(l) => {
            if l.nrows() != n || l.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: l.nrows(),
                });
            }
            let det = l.determinant();
            if det.is_nan() || det.abs() <= crate::tol::SINGULAR_DET {
                return Err(Error::SingularL { det });
            }
            let lt = l.transpose();
            let x = PositiveDefiniteMatrix::from_matrix(&lt * state.x.matrix() * l)?;
            let y = SymmetricMatrix::new(&lt * state.y.matrix() * l)?;
            GaussianState::new(state.hbar, x, y, state.z0.clone())
        }
        Generator::Translation(z1) => {
            if z1.len() != 2 * n {
                return Err(Error::DimensionMismatch {
                    expected: 2 * n,
                    found: z1.len(),
                });
            }
            GaussianState::new(state.hbar, state.x.clone(), state.y.clone(), &state.z0 + z1)
        }
    }
}
