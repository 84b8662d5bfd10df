use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;

use qblob_core::schema::{
    BlobJson, CovarianceJson, EllipsoidJson, ErrorJson, FieldError, PairJson, StateJson,
    SymplecticJson,
};
use qblob_core::{
    Ellipsoid, Error, GaussianState, MicrolocalPair, PositiveDefiniteMatrix, QuantumBlob,
    SymplecticMatrix,
};

/// A reportable failure: exit 1 for bad input, exit 2 for internal errors.
#[derive(Debug)]
pub struct Failure {
    pub body: ErrorJson,
    pub internal: bool,
}

impl Failure {
    pub fn input(code: &str, message: impl Into<String>, location: Option<String>) -> Self {
        Self {
            body: ErrorJson {
                code: code.into(),
                message: message.into(),
                location,
            },
            internal: false,
        }
    }

    pub fn core(error: Error, location: Option<String>) -> Self {
        Self {
            internal: error.is_internal(),
            body: ErrorJson::new(&error, location),
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.internal {
            2
        } else {
            1
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::core(e, None)
    }
}

pub type Outcome<T> = Result<T, Failure>;

/// A parsed input file remembers its path for error locations.
pub struct Input {
    path: String,
    value: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    State,
    Ellipsoid,
    Blob,
    Pair,
    Covariance,
    Symplectic,
}

impl Input {
    pub fn read(path: &Path) -> Outcome<Self> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input("IoError", e.to_string(), Some(shown.clone())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| {
            Failure::input(
                "ParseError",
                e.to_string(),
                Some(format!("{shown}:{}:{}", e.line(), e.column())),
            )
        })?;
        if !value.is_object() {
            return Err(Failure::input(
                "ParseError",
                "expected a JSON object",
                Some(shown),
            ));
        }
        Ok(Self { path: shown, value })
    }

    pub fn kind(&self) -> Outcome<Kind> {
        let has = |k: &str| self.value.get(k).is_some();
        let kind = if has("X") {
            Kind::State
        } else if has("frame") {
            Kind::Pair
        } else if has("S") {
            Kind::Blob
        } else if has("Sigma") {
            Kind::Covariance
        } else if has("matrix") && has("level") {
            Kind::Ellipsoid
        } else if has("matrix") {
            Kind::Symplectic
        } else {
            return Err(Failure::input(
                "ParseError",
                "unrecognised input format",
                Some(self.path.clone()),
            ));
        };
        Ok(kind)
    }

    fn decode<T: DeserializeOwned>(&self) -> Outcome<T> {
        serde_json::from_value(self.value.clone())
            .map_err(|e| Failure::input("ParseError", e.to_string(), Some(self.path.clone())))
    }

    fn located(&self, e: FieldError) -> Failure {
        Failure::core(e.error, Some(format!("{}#/{}", self.path, e.field)))
    }

    pub fn state(&self, hbar: Option<f64>) -> Outcome<GaussianState> {
        let mut dto: StateJson = self.decode()?;
        if let Some(h) = hbar {
            dto.hbar = h;
        }
        dto.into_state().map_err(|e| self.located(e))
    }

    /// The ellipsoid and the hbar it is read with (flag, then file, then 1).
    pub fn ellipsoid(&self, hbar: Option<f64>) -> Outcome<(Ellipsoid, f64)> {
        let dto: EllipsoidJson = self.decode()?;
        let h = hbar.or(dto.hbar).unwrap_or(1.0);
        let e = dto.into_ellipsoid().map_err(|e| self.located(e))?;
        Ok((e, h))
    }

    pub fn blob(&self, hbar: Option<f64>) -> Outcome<QuantumBlob> {
        let mut dto: BlobJson = self.decode()?;
        if let Some(h) = hbar {
            dto.hbar = h;
        }
        dto.into_blob().map_err(|e| self.located(e))
    }

    pub fn pair(&self, hbar: Option<f64>) -> Outcome<MicrolocalPair> {
        let mut dto: PairJson = self.decode()?;
        if let Some(h) = hbar {
            dto.hbar = h;
        }
        dto.into_pair().map_err(|e| self.located(e))
    }

    pub fn covariance(&self, hbar: Option<f64>) -> Outcome<(PositiveDefiniteMatrix, f64)> {
        let dto: CovarianceJson = self.decode()?;
        let h = hbar.or(dto.hbar).unwrap_or(1.0);
        let sigma = dto.into_sigma().map_err(|e| self.located(e))?;
        Ok((sigma, h))
    }

    pub fn symplectic(&self) -> Outcome<SymplecticMatrix> {
        let dto: SymplecticJson = self.decode()?;
        dto.into_symplectic().map_err(|e| self.located(e))
    }
}
