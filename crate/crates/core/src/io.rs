//! JSON file formats for algebras and forms.
//!
//! Complex scalars are `[re, im]` pairs, matrices are lists of rows, and the
//! structure tensor is `structure[i][j][k] = c_ij^k` with
//! `b_i b_j = Σ_k c_ij^k b_k`. Floats round-trip exactly.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{validate_spec, AlgebraSpec, SpecError};
use crate::gns::{FormSpec, GnsError};
use crate::linalg::{AntilinearMap, CMatrix, CVector, GramMatrix, LinalgError};
use crate::{AlgebraSpec64, CMatrix64, CVector64, FormSpec64, Settings64, Tolerances};

pub type Scalar = [f64; 2];

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("malformed input: {0}")]
    Syntax(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Form(#[from] GnsError),
    #[error("invalid algebra: {}", .0.join(", "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub structure: Vec<Vec<Vec<Scalar>>>,
    pub star: Vec<Vec<Scalar>>,
    pub sharp: Vec<Vec<Scalar>>,
    pub gram: Vec<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    pub matrix: Vec<Vec<Scalar>>,
}

fn z(s: Scalar) -> Complex<f64> {
    Complex::new(s[0], s[1])
}

fn s(z: Complex<f64>) -> Scalar {
    [z.re, z.im]
}

fn matrix_from_rows(name: &str, rows: &[Vec<Scalar>], n: usize) -> Result<CMatrix64, IoError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(IoError::Shape(format!("{name} must be {n}x{n}")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| z(rows[i][j])))
}

fn matrix_to_rows(m: &CMatrix64) -> Vec<Vec<Scalar>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| s(m[(i, j)])).collect())
        .collect()
}

fn vector(name: &str, v: &[Scalar], n: usize) -> Result<CVector64, IoError> {
    if v.len() != n {
        return Err(IoError::Shape(format!("{name} must have length {n}")));
    }
    Ok(CVector::from_iterator(n, v.iter().map(|&x| z(x))))
}

impl AlgebraFile {
    pub fn from_spec(spec: &AlgebraSpec64) -> Self {
        let n = spec.dim();
        let structure = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| spec.basis_product(i, j).iter().map(|&x| s(x)).collect())
                    .collect()
            })
            .collect();
        Self {
            dim: n,
            structure,
            star: matrix_to_rows(spec.star().matrix()),
            sharp: matrix_to_rows(spec.sharp().matrix()),
            gram: matrix_to_rows(spec.gram().matrix()),
            unit: spec.unit().map(|u| u.iter().map(|&x| s(x)).collect()),
        }
    }

    /// Builds the `AlgebraSpec`, checking shapes, the Gram matrix and finiteness.
    pub fn to_spec(&self, tol: &Tolerances<f64>) -> Result<AlgebraSpec64, IoError> {
        let n = self.dim;
        let structure: Vec<Vec<Vec<Complex<f64>>>> = self
            .structure
            .iter()
            .map(|row| {
                row.iter()
                    .map(|k| k.iter().map(|&x| z(x)).collect())
                    .collect()
            })
            .collect();
        let gram = GramMatrix::new(matrix_from_rows("gram", &self.gram, n)?, tol)?;
        let star = AntilinearMap::new(matrix_from_rows("star", &self.star, n)?)?;
        let sharp = AntilinearMap::new(matrix_from_rows("sharp", &self.sharp, n)?)?;
        let unit = self
            .unit
            .as_deref()
            .map(|u| vector("unit", u, n))
            .transpose()?;
        Ok(AlgebraSpec::from_structure(
            &structure, star, sharp, gram, unit,
        )?)
    }
}

impl FormFile {
    pub fn from_form(form: &FormSpec64) -> Self {
        Self {
            matrix: matrix_to_rows(form.matrix()),
        }
    }

    pub fn to_form(&self, tol: &Tolerances<f64>) -> Result<FormSpec64, IoError> {
        let n = self.matrix.len();
        let m = matrix_from_rows("form matrix", &self.matrix, n)?;
        Ok(FormSpec::new(m, tol)?)
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Parses and validates an algebra; a spec that fails [`validate_spec`] is
/// an input error naming the violated checks.
pub fn parse_algebra_str(text: &str, settings: &Settings64) -> Result<AlgebraSpec64, IoError> {
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| IoError::Syntax(e.to_string()))?;
    let spec = file.to_spec(&settings.tol)?;
    let v = validate_spec(&spec, settings);
    if !v.is_valid() {
        return Err(IoError::Invalid(
            v.violations()
                .iter()
                .map(|c| format!("{} (residual {:e})", c.name, c.residual))
                .collect(),
        ));
    }
    Ok(spec)
}

pub fn parse_algebra(
    path: impl AsRef<Path>,
    settings: &Settings64,
) -> Result<AlgebraSpec64, IoError> {
    parse_algebra_str(&read(path.as_ref())?, settings)
}

pub fn parse_form_str(text: &str, tol: &Tolerances<f64>) -> Result<FormSpec64, IoError> {
    let file: FormFile = serde_json::from_str(text).map_err(|e| IoError::Syntax(e.to_string()))?;
    file.to_form(tol)
}

pub fn parse_form(path: impl AsRef<Path>, tol: &Tolerances<f64>) -> Result<FormSpec64, IoError> {
    parse_form_str(&read(path.as_ref())?, tol)
}

/// Pretty JSON with a trailing newline.
pub fn algebra_to_json(spec: &AlgebraSpec64) -> String {
    to_json(&AlgebraFile::from_spec(spec))
}

pub fn form_to_json(form: &FormSpec64) -> String {
    to_json(&FormFile::from_form(form))
}

fn to_json<S: Serialize>(value: &S) -> String {
    let mut out = serde_json::to_string_pretty(value).unwrap_or_default();
    out.push('\n');
    out
}

/// Parses `"0.25"` or `"2/3"`.
pub fn parse_real(text: &str) -> Result<f64, IoError> {
    let t = text.trim();
    let bad = || IoError::Syntax(format!("not a number: {text:?}"));
    let value = match t.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0.0 {
                return Err(bad());
            }
            a / b
        }
        None => t.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Comma-separated list of [`parse_real`] values.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>, IoError> {
    text.split(',').map(parse_real).collect()
}
