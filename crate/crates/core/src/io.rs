//! JSON ingestion of matrices and models, JSON/CSV output helpers.
//!
//! Matrices use `{"n": n, "re": [[...]], "im": [[...]]}` with rows in order;
//! `im` may be omitted for real matrices.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matfun::{CMatrix, DensityMatrix, HermitianMatrix};
use crate::submanifold::SubmanifoldModel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub rho: MatrixJson,
    pub generators: Vec<MatrixJson>,
    #[serde(default)]
    pub orthonormalize: bool,
}

fn check_rows(name: &str, rows: &[Vec<f64>], n: usize) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("\"{name}\" must be {n} rows of {n} numbers")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Input(format!("\"{name}\" has non-finite entries")));
    }
    Ok(())
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.n == 0 {
            return Err(Error::Input("\"n\" must be positive".into()));
        }
        check_rows("re", &self.re, self.n)?;
        if let Some(im) = &self.im {
            check_rows("im", im, self.n)?;
        }
        Ok(CMatrix::from_fn(self.n, self.n, |i, j| {
            Complex64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let im: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect();
        let im = im.iter().flatten().any(|&x| x != 0.0).then_some(im);
        Self { n, re, im }
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }

    /// Hermitian, unit trace and faithful.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_hermitian()?)
    }
}

impl ModelJson {
    pub fn to_model(&self) -> Result<SubmanifoldModel> {
        let rho = self.rho.to_density()?;
        let gens = self.generators.iter().map(MatrixJson::to_hermitian).collect::<Result<Vec<_>>>()?;
        SubmanifoldModel::new(rho, gens, self.orthonormalize)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<MatrixJson> {
    read_json(path)
}

pub fn read_hermitian(path: &Path) -> Result<HermitianMatrix> {
    read_matrix(path)?.to_hermitian()
}

pub fn read_density(path: &Path) -> Result<DensityMatrix> {
    read_matrix(path)?.to_density()
}

pub fn read_model(path: &Path) -> Result<SubmanifoldModel> {
    read_json::<ModelJson>(path)?.to_model()
}

/// Parses `"0.1,-2,3e-4"`.
pub fn parse_vector(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            let v: f64 = x.trim().parse().map_err(|_| Error::Input(format!("not a number: {x:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Input(format!("not finite: {x:?}")))
            }
        })
        .collect()
}

/// One row of a long-format table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub t: f64,
    pub quantity: String,
    pub value: f64,
}

/// `t,quantity,value` with one row per pair.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("t,quantity,value\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.t, r.quantity, r.value);
    }
    out
}

/// `quantity,value` for the scalar fields of a JSON object; nested arrays
/// are flattened with an index suffix (`eta.0`, `metric.1.0`).
pub fn scalars_csv(value: &serde_json::Value) -> String {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut String) {
        match v {
            serde_json::Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, v, out);
                }
            }
            serde_json::Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), v, out);
                }
            }
            serde_json::Value::String(s) => {
                let _ = writeln!(out, "{prefix},{s}");
            }
            other => {
                let _ = writeln!(out, "{prefix},{other}");
            }
        }
    }
    let mut out = String::from("quantity,value\n");
    walk("", value, &mut out);
    out
}
