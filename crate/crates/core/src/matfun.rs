//! Functions of Hermitian matrices.
//!
//! Everything else in the crate is expressed through the spectral
//! decomposition of a Hermitian matrix: exponentials and logarithms, real and
//! complex powers of density matrices, and first divided differences of `exp`
//! (the Daleckii-Krein form of the Fréchet derivative).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used for all operators and GNS vectors.
pub type CMatrix = DMatrix<Complex64>;

/// Largest anti-Hermitian part accepted (and discarded) on construction.
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Smallest eigenvalue a faithful density matrix may have.
pub const FAITHFUL_FLOOR: f64 = 1e-12;
/// Admitted deviation of a density matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-12;

const EIGEN_MAX_ITER: usize = 100_000;

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm(m: &CMatrix) -> f64 {
    m.norm()
}

/// Operator norm, the largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let gram = hermitize(&(m.adjoint() * m));
    let spec = decompose_raw(gram);
    spec.eigenvalues.iter().fold(0.0_f64, |acc, &v| acc.max(v)).max(0.0).sqrt()
}

fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// A Hermitian matrix. The stored entries are exactly Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
    correction: f64,
}

impl HermitianMatrix {
    /// Symmetrizes `m` to `(m + m†)/2`. Fails if the discarded anti-Hermitian
    /// part has Frobenius norm above [`HERMITIAN_TOL`].
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::Input("empty matrix".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Input("matrix has non-finite entries".into()));
        }
        let sym = hermitize(&m);
        let correction = (&m - &sym).norm();
        if correction > HERMITIAN_TOL {
            return Err(Error::NotHermitian { correction, limit: HERMITIAN_TOL });
        }
        Ok(Self { mat: sym, correction })
    }

    /// Hermitian part of `m`, whatever its anti-Hermitian part.
    pub(crate) fn hermitian_part(m: &CMatrix) -> Self {
        Self { mat: hermitize(m), correction: 0.0 }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self { mat: DMatrix::from_diagonal(&d), correction: 0.0 }
    }

    pub fn identity(n: usize) -> Self {
        Self { mat: CMatrix::identity(n, n), correction: 0.0 }
    }

    pub fn zeros(n: usize) -> Self {
        Self { mat: CMatrix::zeros(n, n), correction: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Norm of the anti-Hermitian part removed on construction.
    pub fn correction(&self) -> f64 {
        self.correction
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { mat: self.mat.scale(c), correction: 0.0 }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { mat: &self.mat + &other.mat, correction: 0.0 }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { mat: &self.mat - &other.mat, correction: 0.0 }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: f64, other: &Self) -> Self {
        Self { mat: &self.mat + other.mat.scale(c), correction: 0.0 }
    }

    /// `self + c·𝕀`.
    pub fn shift(&self, c: f64) -> Self {
        let mut mat = self.mat.clone();
        for i in 0..mat.nrows() {
            mat[(i, i)] += Complex64::new(c, 0.0);
        }
        Self { mat, correction: 0.0 }
    }

    /// `self − Tr(ρ·self)·𝕀`, the representative with vanishing expectation in `rho`.
    pub fn centered(&self, rho: &DensityMatrix) -> Self {
        self.shift(-rho.expectation(self))
    }

    /// Real part of `Tr(self · other)`; exact for Hermitian pairs.
    pub fn trace_product(&self, other: &Self) -> f64 {
        self.mat.iter().zip(other.mat.transpose().iter()).map(|(a, b)| (a * b).re).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn op_norm(&self) -> f64 {
        let spec = spectral_decompose(self);
        spec.eigenvalues.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn exp(&self) -> Self {
        // exp is finite on any finite spectrum below the f64 range.
        let spec = spectral_decompose(self);
        Self::hermitian_part(&spec.apply(f64::exp))
    }

    pub fn log(&self) -> Result<Self> {
        matrix_function(self, f64::ln)
    }
}

/// Eigenvalues in ascending order with unitary eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(λ) U†`.
    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x)
    }

    /// `U diag(f(λ)) U†` for a real function.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        self.apply_complex(|x| Complex64::new(f(x), 0.0))
    }

    /// `U diag(f(λ)) U†` for a complex-valued function.
    pub fn apply_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= f(self.eigenvalues[j]);
        }
        scaled * u.adjoint()
    }

    /// Matrix entries in the eigenbasis: `U† m U`.
    pub fn to_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        self.eigenvectors.adjoint() * m * &self.eigenvectors
    }

    /// Inverse of [`Self::to_eigenbasis`]: `U m U†`.
    pub fn from_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        &self.eigenvectors * m * self.eigenvectors.adjoint()
    }

    /// `U (K ∘ U† b U) U†` with the Schur multiplier `K_ij = kernel(λ_i, λ_j)`.
    pub fn apply_kernel<K: Fn(f64, f64) -> f64>(&self, b: &CMatrix, kernel: K) -> CMatrix {
        let mut tilde = self.to_eigenbasis(b);
        let lam = &self.eigenvalues;
        for j in 0..tilde.ncols() {
            for i in 0..tilde.nrows() {
                tilde[(i, j)] *= kernel(lam[i], lam[j]);
            }
        }
        self.from_eigenbasis(&tilde)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

fn decompose_raw(m: CMatrix) -> SpectralDecomposition {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, EIGEN_MAX_ITER)
        .expect("Hermitian eigensolver failed to converge");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    SpectralDecomposition { eigenvalues, eigenvectors }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Panics only if the underlying QR iteration fails to converge, which does
/// not happen for finite Hermitian input.
pub fn spectral_decompose(m: &HermitianMatrix) -> SpectralDecomposition {
    decompose_raw(m.mat.clone())
}

/// `U diag(f(λ)) U†`; [`Error::Domain`] if `f` is not finite at some eigenvalue.
pub fn matrix_function<F: Fn(f64) -> f64>(m: &HermitianMatrix, f: F) -> Result<HermitianMatrix> {
    let spec = spectral_decompose(m);
    if let Some(bad) = spec.eigenvalues.iter().find(|&&x| !f(x).is_finite()) {
        return Err(Error::Domain(format!("function is not finite at eigenvalue {bad:e}")));
    }
    Ok(HermitianMatrix::hermitian_part(&spec.apply(f)))
}

/// `ρ^z = U diag(exp(z ln p_i)) U†` for complex `z`.
pub fn matrix_power_complex(rho: &DensityMatrix, z: Complex64) -> CMatrix {
    rho.spectral().apply_complex(|p| (z * p.ln()).exp())
}

/// First divided difference of `exp`: `(e^x − e^y)/(x − y)`, `e^x` on the diagonal.
///
/// Evaluated as `e^{(x+y)/2} · sinh(d)/d` with `d = (x − y)/2`.
pub fn exp_divided_difference(x: f64, y: f64) -> f64 {
    let d = 0.5 * (x - y);
    let mid = (0.5 * (x + y)).exp();
    mid * sinhc(d)
}

/// `sinh(d)/d`, with a four-term Taylor series near zero.
fn sinhc(d: f64) -> f64 {
    if d.abs() < 1e-5 {
        let d2 = d * d;
        1.0 + d2 / 6.0 + d2 * d2 / 120.0 + d2 * d2 * d2 / 5040.0
    } else {
        d.sinh() / d
    }
}

/// Directional derivative `d/dt exp(a + t b)` at `t = 0`.
pub fn frechet_exp(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let spec = spectral_decompose(a);
    Ok(frechet_exp_with(&spec, b))
}

/// [`frechet_exp`] reusing the spectral data of `a`.
pub fn frechet_exp_with(spec: &SpectralDecomposition, b: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&spec.apply_kernel(b.as_matrix(), exp_divided_difference))
}

/// True iff the smallest eigenvalue of `m` is at least `−tol`.
pub fn is_psd(m: &HermitianMatrix, tol: f64) -> bool {
    spectral_decompose(m).min_eigenvalue() >= -tol
}

/// A faithful state: Hermitian, unit trace, every eigenvalue at least [`FAITHFUL_FLOOR`].
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectral: SpectralDecomposition,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace: tr, tol: TRACE_TOL });
        }
        let spectral = spectral_decompose(&matrix);
        Self::check_floor(&spectral)?;
        Ok(Self { matrix, spectral })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// Divides by the trace before validating.
    pub fn normalized(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if !(tr > 0.0) {
            return Err(Error::Trace { trace: tr, tol: TRACE_TOL });
        }
        Self::new(matrix.scale(1.0 / tr))
    }

    /// Builds `U diag(p) U†` from already-known spectral data (`p` ascending).
    pub(crate) fn from_spectrum(eigenvalues: DVector<f64>, eigenvectors: CMatrix) -> Result<Self> {
        let spectral = SpectralDecomposition { eigenvalues, eigenvectors };
        Self::check_floor(&spectral)?;
        let total: f64 = spectral.eigenvalues.iter().sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace: total, tol: TRACE_TOL });
        }
        let matrix = HermitianMatrix::hermitian_part(&spectral.reconstruct());
        Ok(Self { matrix, spectral })
    }

    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diagonal(p))
    }

    /// `𝕀/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self::new(HermitianMatrix::identity(n).scale(1.0 / n as f64))
            .expect("maximally mixed state is faithful")
    }

    fn check_floor(spectral: &SpectralDecomposition) -> Result<()> {
        let min = spectral.min_eigenvalue();
        if !(min >= FAITHFUL_FLOOR) {
            return Err(Error::Faithfulness { min_eigenvalue: min, floor: FAITHFUL_FLOOR });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn as_matrix(&self) -> &CMatrix {
        self.matrix.as_matrix()
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.spectral.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.spectral.eigenvectors
    }

    /// `Tr(ρ x)` for a Hermitian observable.
    pub fn expectation(&self, x: &HermitianMatrix) -> f64 {
        self.matrix.trace_product(x)
    }

    /// `Tr(ρ x)` for an arbitrary matrix.
    pub fn expectation_complex(&self, x: &CMatrix) -> Complex64 {
        (self.as_matrix() * x).trace()
    }

    pub fn log(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(&self.spectral.apply(f64::ln))
    }

    /// `ρ^u` for real `u`.
    pub fn power(&self, u: f64) -> CMatrix {
        self.spectral.apply(|p| p.powf(u))
    }

    pub fn sqrt(&self) -> CMatrix {
        self.spectral.apply(f64::sqrt)
    }

    pub fn inv_sqrt(&self) -> CMatrix {
        self.spectral.apply(|p| 1.0 / p.sqrt())
    }

    /// Operator-norm distance `‖U diag(p) U† − ρ‖`.
    pub fn reconstruction_error(&self) -> f64 {
        op_norm(&(self.spectral.reconstruct() - self.as_matrix()))
    }
}
