//! Serializable file formats. Matrices are row-major nested arrays.
//!
//! Each format converts to its validated core type through `into_*`, which
//! reports the offending field alongside the error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::geometry::{Ellipsoid, LagrangianFrame, MicrolocalPair, QuantumBlob};
use crate::matrix::{from_rows, to_rows, PositiveDefiniteMatrix, SymmetricMatrix, Vector};
use crate::symplectic::{PreIwasawaFactors, SymplecticMatrix};

type Rows = Vec<Vec<f64>>;

/// A core error tagged with the field that caused it.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: &'static str,
    pub error: Error,
}

impl std::fmt::Display for FieldError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.error)
    }
}

impl std::error::Error for FieldError {}

pub type FieldResult<T> = std::result::Result<T, FieldError>;

trait At<T> {
    fn at(self, field: &'static str) -> FieldResult<T>;
}

impl<T> At<T> for Result<T> {
    fn at(self, field: &'static str) -> FieldResult<T> {
        self.map_err(|error| FieldError { field, error })
    }
}

fn vector(v: &[f64]) -> Result<Vector> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(Vector::from_column_slice(v))
}

fn positive(hbar: f64) -> Result<f64> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(hbar)
    } else {
        Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {hbar}"
        )))
    }
}

fn expect_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub n: usize,
    pub hbar: f64,
    #[serde(rename = "X")]
    pub x: Rows,
    #[serde(rename = "Y")]
    pub y: Rows,
    pub z0: Vec<f64>,
}

impl StateJson {
    pub fn from_state(s: &GaussianState) -> Self {
        Self {
            n: s.n(),
            hbar: s.hbar(),
            x: s.x().to_rows(),
            y: s.y().to_rows(),
            z0: s.z0().iter().copied().collect(),
        }
    }

    pub fn into_state(self) -> FieldResult<GaussianState> {
        let hbar = positive(self.hbar).at("hbar")?;
        let x = PositiveDefiniteMatrix::from_rows(&self.x).at("X")?;
        expect_dim(self.n, x.dim()).at("X")?;
        let y = SymmetricMatrix::from_rows(&self.y).at("Y")?;
        expect_dim(self.n, y.dim()).at("Y")?;
        let z0 = vector(&self.z0).at("z0")?;
        expect_dim(2 * self.n, z0.len()).at("z0")?;
        GaussianState::new(hbar, x, y, z0).at("state")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidJson {
    pub matrix: Rows,
    pub center: Vec<f64>,
    pub level: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
}

impl EllipsoidJson {
    pub fn from_ellipsoid(e: &Ellipsoid, hbar: Option<f64>) -> Self {
        Self {
            matrix: e.matrix().to_rows(),
            center: e.center().iter().copied().collect(),
            level: e.level(),
            hbar,
        }
    }

    pub fn into_ellipsoid(self) -> FieldResult<Ellipsoid> {
        if let Some(h) = self.hbar {
            positive(h).at("hbar")?;
        }
        let m = PositiveDefiniteMatrix::from_rows(&self.matrix).at("matrix")?;
        let c = vector(&self.center).at("center")?;
        Ellipsoid::new(m, c, self.level).at("level")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlobJson {
    #[serde(rename = "S")]
    pub s: Rows,
    pub center: Vec<f64>,
    pub hbar: f64,
}

impl BlobJson {
    pub fn from_blob(b: &QuantumBlob) -> Self {
        Self {
            s: b.carrier().to_rows(),
            center: b.center().iter().copied().collect(),
            hbar: b.hbar(),
        }
    }

    pub fn into_blob(self) -> FieldResult<QuantumBlob> {
        let hbar = positive(self.hbar).at("hbar")?;
        let s = SymplecticMatrix::load(from_rows(&self.s).at("S")?).at("S")?;
        let c = vector(&self.center).at("center")?;
        QuantumBlob::new(s, c, hbar).at("center")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub frame: Rows,
    #[serde(rename = "A")]
    pub a: Rows,
    pub hbar: f64,
    pub center: Vec<f64>,
}

impl PairJson {
    pub fn from_pair(p: &MicrolocalPair) -> Self {
        Self {
            frame: p.frame().matrix().to_rows(),
            a: p.shape().to_rows(),
            hbar: p.hbar(),
            center: p.center().iter().copied().collect(),
        }
    }

    pub fn into_pair(self) -> FieldResult<MicrolocalPair> {
        let hbar = positive(self.hbar).at("hbar")?;
        let s = SymplecticMatrix::load(from_rows(&self.frame).at("frame")?).at("frame")?;
        let a = PositiveDefiniteMatrix::from_rows(&self.a).at("A")?;
        expect_dim(s.n(), a.dim()).at("A")?;
        let c = vector(&self.center).at("center")?;
        MicrolocalPair::new(LagrangianFrame::new(s), a, hbar, c).at("center")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymplecticJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub matrix: Rows,
}

impl SymplecticJson {
    pub fn into_symplectic(self) -> FieldResult<SymplecticMatrix> {
        let s = SymplecticMatrix::load(from_rows(&self.matrix).at("matrix")?).at("matrix")?;
        if let Some(n) = self.n {
            expect_dim(n, s.n()).at("n")?;
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceJson {
    #[serde(rename = "Sigma")]
    pub sigma: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
}

impl CovarianceJson {
    pub fn into_sigma(self) -> FieldResult<PositiveDefiniteMatrix> {
        if let Some(h) = self.hbar {
            positive(h).at("hbar")?;
        }
        let s = PositiveDefiniteMatrix::from_rows(&self.sigma).at("Sigma")?;
        if s.dim() % 2 != 0 {
            return Err(Error::OddDimension(s.dim())).at("Sigma");
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IwasawaJson {
    #[serde(rename = "P")]
    pub p: Rows,
    #[serde(rename = "L")]
    pub l: Rows,
    #[serde(rename = "U")]
    pub u: Rows,
    #[serde(rename = "V")]
    pub v: Rows,
    pub defect: f64,
}

impl IwasawaJson {
    pub fn from_factors(f: &PreIwasawaFactors, s: &SymplecticMatrix) -> Self {
        Self {
            p: f.p.to_rows(),
            l: f.l.to_rows(),
            u: to_rows(&f.u),
            v: to_rows(&f.v),
            defect: f.reconstruction_defect(s),
        }
    }
}

/// `{code, message, location}` error object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub code: String,
    pub message: String,
    pub location: Option<String>,
}

impl ErrorJson {
    pub fn new(error: &Error, location: Option<String>) -> Self {
        Self {
            code: error.code().to_string(),
            message: error.to_string(),
            location,
        }
    }
}
