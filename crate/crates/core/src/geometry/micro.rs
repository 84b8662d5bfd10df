//! Lagrangian frames, polar duality, microlocal pairs and their John ellipsoids.
//!
//! A frame `S` carries the coordinate planes `ℓ_X = R^n × 0` and
//! `ℓ_P = 0 × R^n` to the transversal pair `(ℓ, ℓ') = (S ℓ_X, S ℓ_P)`.
//! Ellipsoids lying in one of these planes have rank-n quadrics, so they
//! are kept as `(frame, shape, side)` rather than as singular 2n x 2n matrices.

use crate::error::{Error, Result};
use crate::gaussian::{wigner_covariance, GaussianState};
use crate::geometry::blob::{state_from_blob, QuantumBlob};
use crate::matrix::{self, PositiveDefiniteMatrix, Vector};
use crate::symplectic::SymplecticMatrix;

/// `(ℓ, ℓ') = S(ℓ_X, ℓ_P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    s: SymplecticMatrix,
}

impl LagrangianFrame {
    pub fn new(s: SymplecticMatrix) -> Self {
        Self { s }
    }

    pub fn standard(n: usize) -> Self {
        Self::new(SymplecticMatrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.s.n()
    }

    pub fn matrix(&self) -> &SymplecticMatrix {
        &self.s
    }
}

/// `{x : A x·x <= hbar}` has polar dual `{p : A^{-1} p·p <= hbar}`.
pub fn polar_dual(a: &PositiveDefiniteMatrix, hbar: f64) -> Result<PositiveDefiniteMatrix> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    Ok(a.inverse())
}

/// Which Lagrangian plane of the frame an ellipsoid lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `ℓ = S ℓ_X`.
    Position,
    /// `ℓ' = S ℓ_P`.
    Momentum,
}

/// `S({u ∈ side plane : shape u·u <= hbar}) + center`, stored structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct CarriedEllipsoid {
    pub frame: LagrangianFrame,
    pub shape: PositiveDefiniteMatrix,
    pub side: Side,
    pub hbar: f64,
    pub center: Vector,
}

impl CarriedEllipsoid {
    /// Membership: the frame coordinates must lie in the side plane (within
    /// `plane_tol`, relative to `sqrt(hbar)`) and satisfy the shape inequality.
    pub fn contains(&self, z: &Vector, plane_tol: f64) -> bool {
        let n = self.frame.n();
        let w = self.frame.s.inverse().into_matrix() * (z - &self.center);
        let (u, off) = match self.side {
            Side::Position => (w.rows(0, n).into_owned(), w.rows(n, n).into_owned()),
            Side::Momentum => (w.rows(n, n).into_owned(), w.rows(0, n).into_owned()),
        };
        off.norm() <= plane_tol * self.hbar.sqrt()
            && u.dot(&(self.shape.matrix() * &u)) <= self.hbar * (1.0 + 1e-12)
    }

    /// Embeds a point `u` of the reference plane into phase space.
    pub fn embed(&self, u: &Vector) -> Vector {
        let n = self.frame.n();
        let mut w = Vector::zeros(2 * n);
        match self.side {
            Side::Position => w.rows_mut(0, n).copy_from(u),
            Side::Momentum => w.rows_mut(n, n).copy_from(u),
        }
        self.frame.s.matrix() * w + &self.center
    }
}

/// `(X_ℓ, X_ℓ'^hbar) = S(X, X^hbar)` for `X = {x : A x·x <= hbar}`, centered at the origin.
pub fn lagrangian_polar_dual(
    frame: &LagrangianFrame,
    a: &PositiveDefiniteMatrix,
    hbar: f64,
) -> Result<(CarriedEllipsoid, CarriedEllipsoid)> {
    if a.dim() != frame.n() {
        return Err(Error::DimensionMismatch {
            expected: frame.n(),
            found: a.dim(),
        });
    }
    let dual = polar_dual(a, hbar)?;
    let center = Vector::zeros(2 * frame.n());
    Ok((
        CarriedEllipsoid {
            frame: frame.clone(),
            shape: a.clone(),
            side: Side::Position,
            hbar,
            center: center.clone(),
        },
        CarriedEllipsoid {
            frame: frame.clone(),
            shape: dual,
            side: Side::Momentum,
            hbar,
            center,
        },
    ))
}

/// The microlocal pair `X_ℓ × X_ℓ'^hbar` translated to `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct MicrolocalPair {
    frame: LagrangianFrame,
    a: PositiveDefiniteMatrix,
    hbar: f64,
    center: Vector,
}

impl MicrolocalPair {
    pub fn new(
        frame: LagrangianFrame,
        a: PositiveDefiniteMatrix,
        hbar: f64,
        center: Vector,
    ) -> Result<Self> {
        let n = frame.n();
        if a.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.dim(),
            });
        }
        if center.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: center.len(),
            });
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self {
            frame,
            a,
            hbar,
            center,
        })
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn frame(&self) -> &LagrangianFrame {
        &self.frame
    }

    pub fn shape(&self) -> &PositiveDefiniteMatrix {
        &self.a
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    /// The two carried ellipsoids, translated to the pair's center.
    pub fn carried(&self) -> Result<(CarriedEllipsoid, CarriedEllipsoid)> {
        let (mut x, mut xd) = lagrangian_polar_dual(&self.frame, &self.a, self.hbar)?;
        x.center = self.center.clone();
        xd.center = self.center.clone();
        Ok((x, xd))
    }

    /// Image of the pair under a linear symplectic map.
    pub fn transformed(&self, s0: &SymplecticMatrix) -> MicrolocalPair {
        MicrolocalPair {
            frame: LagrangianFrame::new(s0.compose(&self.frame.s)),
            a: self.a.clone(),
            hbar: self.hbar,
            center: s0.matrix() * &self.center,
        }
    }

    /// Same two carried point-sets as `other`, compared through
    /// `S M_{A^{1/2}}` restricted to each coordinate plane.
    pub fn same_sets(&self, other: &MicrolocalPair, tol: f64) -> bool {
        let n = self.n();
        if n != other.n() {
            return false;
        }
        let (Ok(c1), Ok(c2)) = (normalized_carrier(self), normalized_carrier(other)) else {
            return false;
        };
        // C(B_X) = {C_x u : |u|^2 <= hbar} is determined by C_x C_x^T.
        let same_plane_quadric = |first_col: usize| {
            let a = c1.matrix().columns(first_col, n).into_owned();
            let b = c2.matrix().columns(first_col, n).into_owned();
            matrix::rel_diff(&(&a * a.transpose()), &(&b * b.transpose())) <= tol
        };
        same_plane_quadric(0)
            && same_plane_quadric(n)
            && (&self.center - &other.center).norm() <= tol * other.center.norm().max(1.0)
            && (self.hbar - other.hbar).abs() <= tol * other.hbar
    }
}

/// `S M_{A^{1/2}}` with `M_{A^{1/2}} = [[A^{-1/2}, 0], [0, A^{1/2}]]`.
fn normalized_carrier(pair: &MicrolocalPair) -> Result<SymplecticMatrix> {
    let m = SymplecticMatrix::m_l(pair.a.sqrt().matrix())?;
    Ok(pair.frame.s.compose(&m))
}

/// John ellipsoid of `X_ℓ × X_ℓ'^hbar`: the blob with carrier `S M_{A^{1/2}}`.
///
/// In frame coordinates it is `{A x·x + A^{-1} p·p <= hbar}`, the largest
/// ellipsoid inscribed in the product. Note `{x : A x·x <= hbar}` is
/// `A^{-1/2} B(sqrt(hbar))`, hence the square root in the carrier.
pub fn john_ellipsoid_of_pair(pair: &MicrolocalPair) -> Result<QuantumBlob> {
    QuantumBlob::new(normalized_carrier(pair)?, pair.center.clone(), pair.hbar)
}

/// Shapes of the oblique projections of `blob` onto `ℓ` along `ℓ'` and
/// onto `ℓ'` along `ℓ`, expressed in the frame's reference planes.
///
/// With `Q_w` the blob's quadric in frame coordinates, the projection onto
/// the x-plane is `{x : ((Q_w^{-1})_xx)^{-1} x·x <= hbar}`, likewise for p.
pub fn oblique_projection_shapes(
    blob: &QuantumBlob,
    frame: &LagrangianFrame,
) -> Result<(PositiveDefiniteMatrix, PositiveDefiniteMatrix)> {
    let q = blob.membership_matrix()?;
    let s = frame.s.matrix();
    let qw = PositiveDefiniteMatrix::from_matrix(s.transpose() * q.matrix() * s)?;
    let qw_inv = qw.inverse();
    let (xx, _, _, pp) = matrix::blocks(qw_inv.matrix());
    Ok((
        PositiveDefiniteMatrix::from_matrix(xx)?.inverse(),
        PositiveDefiniteMatrix::from_matrix(pp)?.inverse(),
    ))
}

/// Canonical pair of a state: frame `S^{-1}` and shape `I`.
pub fn micro_from_state(state: &GaussianState) -> Result<MicrolocalPair> {
    let w = wigner_covariance(state)?;
    MicrolocalPair::new(
        LagrangianFrame::new(w.s.inverse()),
        PositiveDefiniteMatrix::identity(state.n()),
        state.hbar(),
        state.z0().clone(),
    )
}

/// The state whose blob is the pair's John ellipsoid.
pub fn state_from_micro(pair: &MicrolocalPair) -> Result<GaussianState> {
    state_from_blob(&john_ellipsoid_of_pair(pair)?)
}
