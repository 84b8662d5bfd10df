use crate::error::{Error, Result};
use crate::gaussian::{wigner_covariance, GaussianState};
use crate::geometry::Ellipsoid;
use crate::matrix::{self, blocks, PositiveDefiniteMatrix, SymmetricMatrix, Vector};
use crate::symplectic::SymplecticMatrix;
use crate::tol;

/// A quantum blob `S(B^{2n}(sqrt(hbar))) + center`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumBlob {
    carrier: SymplecticMatrix,
    center: Vector,
    hbar: f64,
}

impl QuantumBlob {
    pub fn new(carrier: SymplecticMatrix, center: Vector, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if center.len() != 2 * carrier.n() {
            return Err(Error::DimensionMismatch {
                expected: 2 * carrier.n(),
                found: center.len(),
            });
        }
        Ok(Self {
            carrier,
            center,
            hbar,
        })
    }

    /// The ball `B^{2n}(sqrt(hbar))` at the origin.
    pub fn ball(n: usize, hbar: f64) -> Result<Self> {
        Self::new(SymplecticMatrix::identity(n), Vector::zeros(2 * n), hbar)
    }

    pub fn n(&self) -> usize {
        self.carrier.n()
    }

    pub fn carrier(&self) -> &SymplecticMatrix {
        &self.carrier
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `(S^{-1})^T S^{-1}`: the blob is `{Q(z - c)·(z - c) <= hbar}`.
    pub fn membership_matrix(&self) -> Result<PositiveDefiniteMatrix> {
        self.carrier.inverse().gram()
    }

    pub fn as_ellipsoid(&self) -> Result<Ellipsoid> {
        Ellipsoid::new(self.membership_matrix()?, self.center.clone(), self.hbar)
    }

    pub fn contains(&self, z: &Vector) -> bool {
        let w = self.carrier.inverse().into_matrix() * (z - &self.center);
        w.norm_squared() <= self.hbar * (1.0 + 1e-12)
    }

    /// Image under a linear symplectic map.
    pub fn transformed(&self, s: &SymplecticMatrix) -> QuantumBlob {
        QuantumBlob {
            carrier: s.compose(&self.carrier),
            center: s.matrix() * &self.center,
            hbar: self.hbar,
        }
    }

    /// Same set as `other` (membership matrices and centers agree within `tol`).
    pub fn same_set(&self, other: &QuantumBlob, tol: f64) -> bool {
        let (Ok(a), Ok(b)) = (self.membership_matrix(), other.membership_matrix()) else {
            return false;
        };
        matrix::rel_diff(a.matrix(), b.matrix()) <= tol
            && (&self.center - &other.center).norm() <= tol * other.center.norm().max(1.0)
            && (self.hbar - other.hbar).abs() <= tol * other.hbar
    }
}

/// Covariance ellipsoid of a state as a blob with carrier `S^{-1}`.
pub fn blob_from_state(state: &GaussianState) -> Result<QuantumBlob> {
    let w = wigner_covariance(state)?;
    QuantumBlob::new(w.s.inverse(), state.z0().clone(), state.hbar())
}

/// Inverse of [`blob_from_state`]: `G = (T T^T)^{-1}`, `X = (G22)^{-1}`,
/// `Y = (G22)^{-1} G21`. Depends on the carrier only through `T T^T`.
pub fn state_from_blob(blob: &QuantumBlob) -> Result<GaussianState> {
    let t = blob.carrier.matrix();
    let g = PositiveDefiniteMatrix::from_matrix(t * t.transpose())?.inverse();
    let (_, _, g21, g22) = blocks(g.matrix());
    let x = PositiveDefiniteMatrix::from_matrix(g22)?.inverse();
    let y_raw = x.matrix() * g21;
    let y_t = y_raw.transpose();
    let defect = (&y_raw - &y_t).norm() / y_raw.norm().max(1.0);
    if defect > tol::MAX_ASYMMETRY {
        return Err(Error::InconsistentBlob { defect });
    }
    let y = SymmetricMatrix::new((y_raw + y_t) * 0.5)?;
    GaussianState::new(blob.hbar, x, y, blob.center.clone())
}

/// Spectral certificate that a state's blob lies inside its Fermi ellipsoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InclusionCertificate {
    pub holds: bool,
    /// `Tr X - ω_max`, non-negative when the inclusion holds.
    pub margin: f64,
}

/// In the coordinates `w = S z` the blob is `|w|^2 <= hbar` and the Fermi
/// ellipsoid is `diag(X, X) w·w <= hbar Tr X`, so the inclusion reduces to
/// `ω_max(X) <= Tr X`.
pub fn blob_inside_fermi(state: &GaussianState) -> InclusionCertificate {
    let omega_max = *state.x().eigen().values.last().expect("n >= 1");
    let margin = state.x().trace() - omega_max;
    InclusionCertificate {
        holds: margin >= -1e-12 * state.x().trace(),
        margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{rel_diff, Matrix};
    use crate::random;
    use crate::symplectic::{pre_iwasawa, symplectic_eigenvalues};

    fn state1(x: f64, y: f64) -> GaussianState {
        GaussianState::new(
            1.0,
            PositiveDefiniteMatrix::diagonal(&[x]).unwrap(),
            SymmetricMatrix::diagonal(&[y]).unwrap(),
            Vector::zeros(2),
        )
        .unwrap()
    }

    #[test]
    fn blob_examples() {
        let b = blob_from_state(&GaussianState::standard(2, 1.5).unwrap()).unwrap();
        assert!(b.same_set(&QuantumBlob::ball(2, 1.5).unwrap(), 1e-14));

        let b = blob_from_state(&state1(2.0, 0.0)).unwrap();
        let q = b.membership_matrix().unwrap();
        assert!(
            rel_diff(
                q.matrix(),
                PositiveDefiniteMatrix::diagonal(&[2.0, 0.5])
                    .unwrap()
                    .matrix()
            ) < 1e-14
        );

        let b = blob_from_state(&state1(1.0, 1.0)).unwrap();
        let q = b.membership_matrix().unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        assert!(rel_diff(q.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn blob_membership_is_quantum() {
        let mut rng = random::rng(31);
        for n in 1..=4 {
            let b = blob_from_state(&random::gaussian_state(&mut rng, n, 1.0)).unwrap();
            for l in symplectic_eigenvalues(&b.membership_matrix().unwrap()).unwrap() {
                assert!((l - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let s = state_from_blob(&QuantumBlob::ball(1, 1.0).unwrap()).unwrap();
        assert!(s.approx_eq(&GaussianState::standard(1, 1.0).unwrap(), 1e-14));

        // carrier T with (T^{-1})^T T^{-1} = [[2, 1], [1, 1]]: T = S^{-1}, S = [[1, 0], [1, 1]]
        let t =
            SymplecticMatrix::new(Matrix::from_row_slice(2, 2, &[1.0, 0.0, -1.0, 1.0])).unwrap();
        let s = state_from_blob(&QuantumBlob::new(t, Vector::zeros(2), 1.0).unwrap()).unwrap();
        assert!(s.approx_eq(&state1(1.0, 1.0), 1e-14));
    }

    #[test]
    fn carrier_rotation_does_not_matter() {
        let mut rng = random::rng(41);
        for n in 1..=4 {
            let t = random::symplectic_word(&mut rng, n, 6);
            let f = pre_iwasawa(&t).unwrap();
            let truncated =
                SymplecticMatrix::v_p(&f.p).compose(&SymplecticMatrix::m_l(f.l.matrix()).unwrap());
            let c = random::vector(&mut rng, 2 * n, 1.0);
            let a = state_from_blob(&QuantumBlob::new(t, c.clone(), 1.0).unwrap()).unwrap();
            let b = state_from_blob(&QuantumBlob::new(truncated, c, 1.0).unwrap()).unwrap();
            assert!(a.approx_eq(&b, 1e-9), "n = {n}: {}", a.distance(&b));
        }
    }

    #[test]
    fn blob_round_trips() {
        let mut rng = random::rng(51);
        for i in 0..40 {
            let n = 1 + i % 4;
            let s = random::gaussian_state(&mut rng, n, 0.8);
            let b = blob_from_state(&s).unwrap();
            let back = state_from_blob(&b).unwrap();
            assert!(back.approx_eq(&s, 1e-9));
            assert!(blob_from_state(&back).unwrap().same_set(&b, 1e-9));
        }
    }

    #[test]
    fn inclusion_certificates() {
        let s = GaussianState::standard(2, 1.0).unwrap();
        let c = blob_inside_fermi(&s);
        assert!(c.holds && (c.margin - 1.0).abs() < 1e-14);

        let s = GaussianState::new(
            1.0,
            PositiveDefiniteMatrix::diagonal(&[1.0, 3.0]).unwrap(),
            SymmetricMatrix::zeros(2),
            Vector::zeros(4),
        )
        .unwrap();
        let c = blob_inside_fermi(&s);
        assert!(c.holds && (c.margin - 1.0).abs() < 1e-14);

        let c = blob_inside_fermi(&state1(3.7, -0.4));
        assert!(c.holds && c.margin.abs() < 1e-14);
    }
}
