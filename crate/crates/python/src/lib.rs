//! Python bindings for `modman`.
//!
//! Matrices cross the boundary as nested lists of (complex) numbers, row by row.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use modman::arcs::{energy_along, legendre_dual, log_partition, potential};
use modman::matfun::CMatrix;
use modman::random::{random_density, random_hermitian, rng_for};
use modman::verify::{run_verify, VerifyConfig};
use modman::{divergence, km_metric, standard_form, submanifold};

type Rows = Vec<Vec<Complex64>>;

fn to_py(e: modman::Error) -> PyErr {
    if e.is_input() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

pub fn rows_to_matrix(rows: &Rows) -> modman::Result<CMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(modman::Error::Input(format!("expected a square list of rows, got {n} rows")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &CMatrix) -> Rows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn hermitian(rows: &Rows) -> PyResult<modman::HermitianMatrix> {
    rows_to_matrix(rows).and_then(modman::HermitianMatrix::new).map_err(to_py)
}

/// Faithful density matrix.
#[pyclass(name = "DensityMatrix", module = "modman_py", frozen)]
pub struct PyDensityMatrix {
    inner: modman::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Rows) -> PyResult<Self> {
        let inner = rows_to_matrix(&rows).and_then(modman::DensityMatrix::from_matrix).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn diagonal(p: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: modman::DensityMatrix::diagonal(&p).map_err(to_py)? })
    }

    #[staticmethod]
    fn maximally_mixed(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("dimension must be positive"));
        }
        Ok(Self { inner: modman::DensityMatrix::maximally_mixed(n) })
    }

    /// Seeded random faithful state.
    #[staticmethod]
    #[pyo3(signature = (n, seed=0))]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        if n < 2 {
            return Err(PyValueError::new_err("dimension must be at least 2"));
        }
        Ok(Self { inner: random_density(&mut rng_for(seed, 0), n) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().iter().copied().collect()
    }

    fn to_list(&self) -> Rows {
        matrix_to_rows(self.inner.as_matrix())
    }

    fn expectation(&self, h: Rows) -> PyResult<f64> {
        let h = hermitian(&h)?;
        if h.dim() != self.inner.dim() {
            return Err(PyValueError::new_err("dimension mismatch"));
        }
        Ok(self.inner.expectation(&h))
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim={})", self.inner.dim())
    }
}

/// `γ_t = exp(log ρ + t h − ζ(t))`.
#[pyclass(name = "ExponentialArc", module = "modman_py", frozen)]
pub struct PyExponentialArc {
    inner: modman::ExponentialArc,
}

#[pymethods]
impl PyExponentialArc {
    #[new]
    fn new(rho: &PyDensityMatrix, h: Rows) -> PyResult<Self> {
        let inner = modman::ExponentialArc::new(rho.inner.clone(), hermitian(&h)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Arc from `rho` through `sigma` at `t = 1`.
    #[staticmethod]
    fn connecting(rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<Self> {
        Ok(Self { inner: modman::ExponentialArc::connecting(&rho.inner, &sigma.inner).map_err(to_py)? })
    }

    fn at(&self, t: f64) -> PyResult<PyDensityMatrix> {
        Ok(PyDensityMatrix { inner: self.inner.evaluate(t).map_err(to_py)?.state })
    }

    fn log_partition(&self, t: f64) -> PyResult<f64> {
        log_partition(&self.inner, t).map_err(to_py)
    }

    fn potential(&self, t: f64) -> PyResult<f64> {
        potential(&self.inner, t).map_err(to_py)
    }

    fn energy(&self, t: f64) -> PyResult<f64> {
        energy_along(&self.inner, t).map_err(to_py)
    }

    fn legendre_dual(&self, alpha: f64) -> PyResult<f64> {
        legendre_dual(&self.inner, alpha).map_err(to_py)
    }
}

/// Exponential family `ω_θ` through ρ spanned by Hermitian generators.
#[pyclass(name = "SubmanifoldModel", module = "modman_py", frozen)]
pub struct PySubmanifoldModel {
    inner: modman::SubmanifoldModel,
}

fn theta(v: Vec<f64>) -> modman::ThetaPoint {
    modman::ThetaPoint(v)
}

#[pymethods]
impl PySubmanifoldModel {
    #[new]
    #[pyo3(signature = (rho, generators, orthonormalize=false))]
    fn new(rho: &PyDensityMatrix, generators: Vec<Rows>, orthonormalize: bool) -> PyResult<Self> {
        let gens = generators.iter().map(hermitian).collect::<PyResult<Vec<_>>>()?;
        let inner = modman::SubmanifoldModel::new(rho.inner.clone(), gens, orthonormalize).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn num_params(&self) -> usize {
        self.inner.num_params()
    }

    fn state_at(&self, th: Vec<f64>) -> PyResult<PyDensityMatrix> {
        Ok(PyDensityMatrix { inner: submanifold::state_at(&self.inner, &theta(th)).map_err(to_py)? })
    }

    fn dual_coords(&self, th: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(submanifold::dual_coords(&self.inner, &theta(th)).map_err(to_py)?.0)
    }

    fn potential(&self, th: Vec<f64>) -> PyResult<f64> {
        submanifold::potential_theta(&self.inner, &theta(th)).map_err(to_py)
    }

    fn metric(&self, th: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        let g = submanifold::metric_at(&self.inner, &theta(th)).map_err(to_py)?;
        Ok((0..g.nrows()).map(|i| g.row(i).iter().copied().collect()).collect())
    }

    fn solve_theta(&self, eta: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(submanifold::solve_theta(&self.inner, &modman::EtaPoint(eta)).map_err(to_py)?.0)
    }

    fn dual_potential(&self, eta: Vec<f64>) -> PyResult<f64> {
        submanifold::dual_potential(&self.inner, &modman::EtaPoint(eta)).map_err(to_py)
    }
}

#[pyfunction]
fn araki_divergence(sigma: &PyDensityMatrix, tau: &PyDensityMatrix) -> PyResult<f64> {
    divergence::araki_divergence(&sigma.inner, &tau.inner).map_err(to_py)
}

#[pyfunction]
fn umegaki_divergence(sigma: &PyDensityMatrix, tau: &PyDensityMatrix) -> PyResult<f64> {
    divergence::umegaki_divergence(&sigma.inner, &tau.inner).map_err(to_py)
}

/// Kubo-Mori product of `h` and `k` at `rho`.
#[pyfunction]
fn km_inner(rho: &PyDensityMatrix, h: Rows, k: Rows) -> PyResult<f64> {
    let (h, k) = (hermitian(&h)?, hermitian(&k)?);
    if h.dim() != rho.inner.dim() || k.dim() != rho.inner.dim() {
        return Err(PyValueError::new_err("dimension mismatch"));
    }
    Ok(km_metric::km_inner(&km_metric::MetricContext::new(rho.inner.clone()), &h, &k))
}

#[pyfunction]
fn kms_residual(rho: &PyDensityMatrix, x: Rows, y: Rows, t: f64) -> PyResult<f64> {
    let (x, y) = (hermitian(&x)?, hermitian(&y)?);
    if x.dim() != rho.inner.dim() || y.dim() != rho.inner.dim() {
        return Err(PyValueError::new_err("dimension mismatch"));
    }
    let g = standard_form::build_standard_form(&rho.inner).map_err(to_py)?;
    Ok(standard_form::kms_boundary_check(&g, &x, &y, t))
}

/// Seeded random Hermitian matrix with unit operator norm.
#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn random_generator(n: usize, seed: u64) -> PyResult<Rows> {
    if n < 2 {
        return Err(PyValueError::new_err("dimension must be at least 2"));
    }
    Ok(matrix_to_rows(random_hermitian(&mut rng_for(seed, 1), n).as_matrix()))
}

/// Runs the property suite; returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (seed=0, trials=20, dims=None))]
fn verify(py: Python<'_>, seed: u64, trials: usize, dims: Option<Vec<usize>>) -> PyResult<String> {
    let cfg = VerifyConfig::new(seed, trials, dims.unwrap_or_else(|| (2..=8).collect()));
    let report = py.detach(|| run_verify(&cfg)).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn modman_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyExponentialArc>()?;
    m.add_class::<PySubmanifoldModel>()?;
    m.add_function(wrap_pyfunction!(araki_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(umegaki_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(km_inner, m)?)?;
    m.add_function(wrap_pyfunction!(kms_residual, m)?)?;
    m.add_function(wrap_pyfunction!(random_generator, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let rows = vec![
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.1, -0.2)],
            vec![Complex64::new(0.1, 0.2), Complex64::new(0.5, 0.0)],
        ];
        let m = rows_to_matrix(&rows).unwrap();
        assert_eq!(matrix_to_rows(&m), rows);
        assert!(rows_to_matrix(&vec![vec![Complex64::new(1.0, 0.0)]; 2]).is_err());
        assert!(rows_to_matrix(&vec![]).is_err());
    }
}
