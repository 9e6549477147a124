//! Relative modular operator and relative entropy.
//!
//! For `Φ = vec(σ^{1/2})` and `Ψ = vec(τ^{1/2})` the relative modular
//! operator acts as `Δ_{Φ,Ψ} vec(M) = vec(σ M τ^{-1})`. With `σ = Σ s_i u_i u_i†`
//! and `τ = Σ t_j v_j v_j†` its eigenvectors are `vec(u_i v_j†)` with
//! eigenvalues `s_i / t_j`, so every function of it is a Schur multiplier in
//! the mixed basis `(σ-basis, τ-basis)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matfun::{CMatrix, DensityMatrix};
use crate::standard_form::{vector_of_state, ConeVector};

#[derive(Clone, Debug)]
pub struct RelativeModularOperator {
    sigma: DensityMatrix,
    tau: DensityMatrix,
    /// `W_ij = ⟨u_i | v_j⟩`.
    overlap: CMatrix,
}

/// Builds `Δ_{Φ,Ψ}` for `Φ = vec(σ^{1/2})`, `Ψ = vec(τ^{1/2})`.
pub fn relative_modular(sigma: &DensityMatrix, tau: &DensityMatrix) -> Result<RelativeModularOperator> {
    if sigma.dim() != tau.dim() {
        return Err(Error::DimensionMismatch { expected: sigma.dim(), got: tau.dim() });
    }
    let overlap = sigma.eigenvectors().adjoint() * tau.eigenvectors();
    Ok(RelativeModularOperator { sigma: sigma.clone(), tau: tau.clone(), overlap })
}

impl RelativeModularOperator {
    pub fn sigma(&self) -> &DensityMatrix {
        &self.sigma
    }

    pub fn tau(&self) -> &DensityMatrix {
        &self.tau
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    /// `Φ = vec(σ^{1/2})`.
    pub fn phi(&self) -> ConeVector {
        vector_of_state(&self.sigma)
    }

    /// `Ψ = vec(τ^{1/2})`.
    pub fn psi(&self) -> ConeVector {
        vector_of_state(&self.tau)
    }

    /// Eigenvalue `s_i / t_j` of the eigenvector `vec(u_i v_j†)`.
    pub fn eigenvalue(&self, i: usize, j: usize) -> f64 {
        self.sigma.eigenvalues()[i] / self.tau.eigenvalues()[j]
    }

    /// The full spectrum `{s_i / t_j}`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out: Vec<f64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.eigenvalue(i, j)).collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Applies `f(Δ_{Φ,Ψ})` through the spectral form.
    pub fn apply_function<F: Fn(f64) -> f64>(&self, v: &ConeVector, f: F) -> ConeVector {
        let us = self.sigma.eigenvectors();
        let vt = self.tau.eigenvectors();
        let mut tilde = us.adjoint() * v.as_matrix() * vt;
        for j in 0..tilde.ncols() {
            for i in 0..tilde.nrows() {
                tilde[(i, j)] *= f(self.eigenvalue(i, j));
            }
        }
        ConeVector::from_matrix(us * tilde * vt.adjoint())
    }

    /// `Δ_{Φ,Ψ} v` from the spectral form.
    pub fn apply(&self, v: &ConeVector) -> ConeVector {
        self.apply_function(v, |x| x)
    }

    /// `Δ_{Φ,Ψ} v = vec(σ M τ^{-1})` by direct multiplication.
    pub fn apply_direct(&self, v: &ConeVector) -> ConeVector {
        let tau_inv = self.tau.spectral().apply(|t| 1.0 / t);
        ConeVector::from_matrix(self.sigma.as_matrix() * v.as_matrix() * tau_inv)
    }

    /// `(log Δ_{Φ,Ψ}) v`.
    pub fn apply_log(&self, v: &ConeVector) -> ConeVector {
        self.apply_function(v, f64::ln)
    }

    /// `S_{Φ,Ψ} = J Δ_{Φ,Ψ}^{1/2}`, mapping `xΨ ↦ x*Φ`:
    /// `vec(M) ↦ vec(τ^{-1/2} M† σ^{1/2})`.
    pub fn apply_s(&self, v: &ConeVector) -> ConeVector {
        let half = self.apply_function(v, f64::sqrt);
        ConeVector::from_matrix(half.into_matrix().adjoint())
    }
}

/// Araki's relative entropy `((log Δ_{Φ,Ψ}) Φ, Φ)` in nats.
///
/// In the mixed eigenbasis the weight of `vec(u_i v_j†)` in `Φ` is
/// `|⟨u_i|σ^{1/2}|v_j⟩|² = s_i |W_ij|²`, giving
/// `Σ_ij s_i |W_ij|² (ln s_i − ln t_j)`.
pub fn araki_divergence(sigma: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    let op = relative_modular(sigma, tau)?;
    Ok(araki_from_operator(&op))
}

fn araki_from_operator(op: &RelativeModularOperator) -> f64 {
    let s = op.sigma.eigenvalues();
    let t = op.tau.eigenvalues();
    let mut total = 0.0;
    for i in 0..op.dim() {
        let ls = s[i].ln();
        for j in 0..op.dim() {
            total += s[i] * op.overlap[(i, j)].norm_sqr() * (ls - t[j].ln());
        }
    }
    total
}

/// Umegaki's trace formula `Tr σ(log σ − log τ)` in nats.
pub fn umegaki_divergence(sigma: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    if sigma.dim() != tau.dim() {
        return Err(Error::DimensionMismatch { expected: sigma.dim(), got: tau.dim() });
    }
    let diff = sigma.log().sub(&tau.log());
    Ok(sigma.expectation(&diff))
}

/// Dual form `−((log Δ_{Ψ,Φ}) Φ, Φ)`: applies the logarithm of the reversed
/// relative modular operator to `Φ` and takes the inner product.
pub fn araki_dual_form(sigma: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    let reversed = relative_modular(tau, sigma)?;
    let phi = vector_of_state(sigma);
    let image = reversed.apply_log(&phi);
    let value: Complex64 = image.inner(&phi);
    Ok(-value.re)
}
