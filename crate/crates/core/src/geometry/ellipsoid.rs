use crate::error::{Error, FermiMismatch, Result};
use crate::gaussian::{fermi_matrix, GaussianState};
use crate::matrix::{blocks, Matrix, PositiveDefiniteMatrix, SymmetricMatrix, Vector};
use crate::symplectic::SymplecticMatrix;
use crate::tol;

/// The solid ellipsoid `{z : M(z - center)·(z - center) <= level}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    m: PositiveDefiniteMatrix,
    center: Vector,
    level: f64,
}

impl Ellipsoid {
    pub fn new(m: PositiveDefiniteMatrix, center: Vector, level: f64) -> Result<Self> {
        if !(level > 0.0 && level.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ellipsoid level must be positive, got {level}"
            )));
        }
        if center.len() != m.dim() {
            return Err(Error::DimensionMismatch {
                expected: m.dim(),
                found: center.len(),
            });
        }
        if center.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m, center, level })
    }

    /// Centered ball of radius `r` in dimension `dim`.
    pub fn ball(dim: usize, r: f64) -> Result<Self> {
        Self::new(
            PositiveDefiniteMatrix::identity(dim),
            Vector::zeros(dim),
            r * r,
        )
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &PositiveDefiniteMatrix {
        &self.m
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// Same set with level 1.
    pub fn normalized(&self) -> Ellipsoid {
        Ellipsoid {
            m: self.m.scaled(1.0 / self.level).expect("positive level"),
            center: self.center.clone(),
            level: 1.0,
        }
    }

    /// `M(z - c)·(z - c)`.
    pub fn quadratic(&self, z: &Vector) -> f64 {
        let d = z - &self.center;
        d.dot(&(self.m.matrix() * &d))
    }

    /// Membership with a relative slack of `1e-12` on the level.
    pub fn contains(&self, z: &Vector) -> bool {
        self.quadratic(z) <= self.level * (1.0 + 1e-12)
    }

    /// Image under the dilation `z -> c + λ(z - c)`.
    pub fn dilated(&self, lambda: f64) -> Result<Ellipsoid> {
        Ellipsoid::new(
            self.m.clone(),
            self.center.clone(),
            self.level * lambda * lambda,
        )
    }

    /// Image `S(Ω)` under a linear symplectic map.
    pub fn transformed(&self, s: &SymplecticMatrix) -> Result<Ellipsoid> {
        let sinv = s.inverse().into_matrix();
        let m = PositiveDefiniteMatrix::from_matrix(sinv.transpose() * self.m.matrix() * &sinv)?;
        Ellipsoid::new(m, s.matrix() * &self.center, self.level)
    }

    /// Half-widths of the axis-aligned bounding box: `sqrt(level * (M^{-1})_ii)`.
    pub fn bounding_half_widths(&self) -> Vector {
        let minv = self.m.inverse();
        Vector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|i| (self.level * minv.matrix()[(i, i)]).sqrt()),
        )
    }
}

/// Fermi ellipsoid `{M_XY (z - z0)·(z - z0) <= hbar Tr X}`.
pub fn fermi_from_state(state: &GaussianState) -> Result<Ellipsoid> {
    let f = fermi_matrix(state)?;
    Ellipsoid::new(f.m, state.z0().clone(), f.level)
}

/// Inverse of [`fermi_from_state`]: reads `Y = M12`, `X = sqrt(M11 - Y^2)`.
///
/// `(M, level)` and `(cM, c level)` describe the same set, so the pair is
/// first rescaled to give the lower-right block unit mean diagonal. Each of
/// the three recognition conditions is then checked separately.
pub fn state_from_fermi(e: &Ellipsoid, hbar: f64) -> Result<GaussianState> {
    if !e.dim().is_multiple_of(2) {
        return Err(Error::OddDimension(e.dim()));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let n = e.dim() / 2;
    let (m11, m12, _, m22) = blocks(e.matrix().matrix());
    let scale = m22.trace() / n as f64;
    let (m11, m12, m22) = (m11 / scale, m12 / scale, m22 / scale);
    let level = e.level() / scale;

    let id = Matrix::identity(n, n);
    let dev = (&m22 - &id).norm() / id.norm();
    if dev > tol::FERMI_RECOGNITION {
        return Err(Error::NotAFermiEllipsoid {
            reason: FermiMismatch::LowerRightBlock,
            deviation: dev,
        });
    }
    let y = SymmetricMatrix::new(m12)?;
    let x2 = SymmetricMatrix::new(m11 - y.matrix() * y.matrix())?;
    let x2 = PositiveDefiniteMatrix::new(x2).map_err(|err| match err {
        Error::NotPositiveDefinite { min_eigenvalue, .. } => Error::NotAFermiEllipsoid {
            reason: FermiMismatch::PositionBlock,
            deviation: min_eigenvalue,
        },
        other => other,
    })?;
    let x = x2.sqrt();
    let expected = hbar * x.trace();
    let dev = (level - expected).abs() / expected;
    if dev > tol::FERMI_RECOGNITION {
        return Err(Error::NotAFermiEllipsoid {
            reason: FermiMismatch::Level,
            deviation: dev,
        });
    }
    GaussianState::new(hbar, x, y, e.center().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rel_diff;
    use crate::random;

    fn pd(rows: &[&[f64]]) -> PositiveDefiniteMatrix {
        PositiveDefiniteMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn state(x: &[f64], y: f64) -> GaussianState {
        let n = x.len();
        GaussianState::new(
            1.0,
            PositiveDefiniteMatrix::diagonal(x).unwrap(),
            SymmetricMatrix::diagonal(&vec![y; n]).unwrap(),
            Vector::zeros(2 * n),
        )
        .unwrap()
    }

    #[test]
    fn fermi_examples() {
        let e = fermi_from_state(&state(&[1.0], 0.0)).unwrap();
        assert!(rel_diff(e.matrix().matrix(), &Matrix::identity(2, 2)) < 1e-14);
        assert_eq!(e.level(), 1.0);

        let e = fermi_from_state(&state(&[2.0], 0.0)).unwrap();
        assert!(
            rel_diff(
                e.matrix().matrix(),
                pd(&[&[4.0, 0.0], &[0.0, 1.0]]).matrix()
            ) < 1e-14
        );
        assert_eq!(e.level(), 2.0);

        let e = fermi_from_state(&state(&[1.0, 2.0], 0.0)).unwrap();
        let d = PositiveDefiniteMatrix::diagonal(&[1.0, 4.0, 1.0, 1.0]).unwrap();
        assert!(rel_diff(e.matrix().matrix(), d.matrix()) < 1e-14);
        assert_eq!(e.level(), 3.0);
    }

    #[test]
    fn fermi_inverse_examples() {
        let disk = Ellipsoid::ball(2, 1.0).unwrap();
        let s = state_from_fermi(&disk, 1.0).unwrap();
        assert!(s.approx_eq(&GaussianState::standard(1, 1.0).unwrap(), 1e-14));

        let e = Ellipsoid::new(pd(&[&[2.0, 1.0], &[1.0, 1.0]]), Vector::zeros(2), 1.0).unwrap();
        let s = state_from_fermi(&e, 1.0).unwrap();
        assert!(s.approx_eq(&state(&[1.0], 1.0), 1e-14));

        let e = Ellipsoid::new(pd(&[&[4.0, 0.0], &[0.0, 1.0]]), Vector::zeros(2), 2.0).unwrap();
        let s = state_from_fermi(&e, 1.0).unwrap();
        assert!(s.approx_eq(&state(&[2.0], 0.0), 1e-14));
    }

    #[test]
    fn normalized_form_is_recognised() {
        let e = fermi_from_state(&state(&[2.0], 0.5)).unwrap().normalized();
        let s = state_from_fermi(&e, 1.0).unwrap();
        assert!(s.approx_eq(&state(&[2.0], 0.5), 1e-12));
    }

    #[test]
    fn fermi_recognition_failures() {
        // lower-right block not a multiple of I
        let m = PositiveDefiniteMatrix::diagonal(&[1.0, 1.0, 1.0, 2.0]).unwrap();
        let e = Ellipsoid::new(m, Vector::zeros(4), 2.0).unwrap();
        assert!(matches!(
            state_from_fermi(&e, 1.0),
            Err(Error::NotAFermiEllipsoid {
                reason: FermiMismatch::LowerRightBlock,
                ..
            })
        ));
        // level inconsistent with hbar Tr X
        let e = Ellipsoid::ball(2, 2.0).unwrap();
        assert!(matches!(
            state_from_fermi(&e, 1.0),
            Err(Error::NotAFermiEllipsoid {
                reason: FermiMismatch::Level,
                ..
            })
        ));
        // but it is a Fermi ellipsoid for hbar = 4
        assert!(state_from_fermi(&e, 4.0).is_ok());
    }

    #[test]
    fn fermi_round_trip_random() {
        let mut rng = random::rng(21);
        for i in 0..50 {
            let n = 1 + i % 4;
            let s = random::gaussian_state(&mut rng, n, 0.5 + (i as f64) * 0.05);
            let back = state_from_fermi(&fermi_from_state(&s).unwrap(), s.hbar()).unwrap();
            assert!(back.approx_eq(&s, 1e-9), "distance {}", back.distance(&s));
        }
    }

    #[test]
    fn transform_and_bounds() {
        let c = Vector::from_vec(vec![1.0, -1.0]);
        let e = Ellipsoid::new(pd(&[&[4.0, 0.0], &[0.0, 1.0]]), c, 4.0).unwrap();
        let hw = e.bounding_half_widths();
        assert!((hw[0] - 1.0).abs() < 1e-14 && (hw[1] - 2.0).abs() < 1e-14);
        let s = SymplecticMatrix::j(1);
        let t = e.transformed(&s).unwrap();
        let z = Vector::from_vec(vec![0.3, 0.2]);
        assert!((t.quadratic(&(s.matrix() * &z)) - e.quadratic(&z)).abs() < 1e-12);
        assert!((t.center() - Vector::from_vec(vec![-1.0, -1.0])).norm() < 1e-14);
    }
}
