use std::fs;
use std::path::Path;

use drift_hodge::matcore::Matrix;
use drift_hodge::polyfield::{Monomial, PolyVectorField, Polynomial};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::report::InputDigest;

/// Failure to read or decode an input; always a caller error.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse {what}: {source}")]
    Parse { what: String, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
}

pub struct Inputs {
    digest: InputDigest,
}

impl Inputs {
    pub fn new(command: &str) -> Self {
        let mut digest = InputDigest::default();
        digest.add("command", command.as_bytes());
        Inputs { digest }
    }

    pub fn flag(&mut self, label: &str, value: impl ToString) {
        self.digest.add(label, value.to_string().as_bytes());
    }

    fn read(&mut self, label: &str, path: &Path) -> Result<Vec<u8>, InputError> {
        let bytes = fs::read(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
        self.digest.add(label, &bytes);
        Ok(bytes)
    }

    fn parse<T: DeserializeOwned>(&mut self, label: &str, path: &Path) -> Result<T, InputError> {
        let bytes = self.read(label, path)?;
        serde_json::from_slice(&bytes).map_err(|source| InputError::Parse { what: path.display().to_string(), source })
    }

    pub fn matrix(&mut self, label: &str, path: &Path) -> Result<Matrix, InputError> {
        self.parse(label, path)
    }

    pub fn polynomial(&mut self, label: &str, path: &Path) -> Result<Polynomial, InputError> {
        self.parse(label, path)
    }

    /// Matrix JSON is read as the linear field `x ↦ Gx`.
    pub fn drift(&mut self, label: &str, path: &Path) -> Result<Drift, InputError> {
        let value: Value = self.parse(label, path)?;
        let what = || path.display().to_string();
        if value.get("rows").is_some() {
            let g: Matrix = serde_json::from_value(value).map_err(|source| InputError::Parse { what: what(), source })?;
            Ok(Drift::Linear(g))
        } else {
            let f: PolyVectorField =
                serde_json::from_value(value).map_err(|source| InputError::Parse { what: what(), source })?;
            Ok(Drift::Field(f))
        }
    }

    /// Inline JSON array, or a path to a file holding one.
    pub fn vector(&mut self, label: &str, text: &str) -> Result<Vec<f64>, InputError> {
        let bytes = if text.trim_start().starts_with('[') {
            self.digest.add(label, text.as_bytes());
            text.as_bytes().to_vec()
        } else {
            self.read(label, Path::new(text))?
        };
        serde_json::from_slice(&bytes).map_err(|source| InputError::Parse { what: label.to_string(), source })
    }

    pub fn digest(self) -> String {
        self.digest.hex()
    }
}

pub enum Drift {
    Linear(Matrix),
    Field(PolyVectorField),
}

impl Drift {
    pub fn field(&self) -> PolyVectorField {
        match self {
            Drift::Linear(g) => PolyVectorField::linear(g),
            Drift::Field(f) => f.clone(),
        }
    }

    /// `G` when the drift is exactly `x ↦ Gx`.
    pub fn matrix(&self) -> Result<Matrix, InputError> {
        match self {
            Drift::Linear(g) => Ok(g.clone()),
            Drift::Field(f) => {
                let d = f.dim();
                let linear_only = f
                    .components()
                    .iter()
                    .all(|p| p.terms().all(|(m, _)| m.degree() == 1));
                if !linear_only {
                    return Err(InputError::Invalid("drift must be linear (x ↦ Gx) for this command".into()));
                }
                Ok(Matrix::from_fn(d, d, |i, j| f.component(i).coeff(&Monomial::var(d, j))))
            }
        }
    }
}
