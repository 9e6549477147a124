//! Exponential arcs `γ_t = exp(log ρ + t h − ζ(t))`.
//!
//! The energy function of an arc is `𝔥(ψ) = Tr(ψ h)`. The arc is defined for
//! every real `t`, not just `[0, 1]`; the map is analytic in `t`.

use nalgebra::DVector;

use crate::divergence::umegaki_divergence;
use crate::error::{Error, Result};
use crate::matfun::{
    frechet_exp_with, spectral_decompose, DensityMatrix, HermitianMatrix, SpectralDecomposition,
};
use crate::standard_form::TangentFunctional;

/// Largest operator norm of `log ρ + t h` accepted before exponentiation.
pub const OVERFLOW_GUARD: f64 = 700.0;

/// Generators whose centered Hilbert-Schmidt norm is below this are constant.
pub const CONSTANT_GENERATOR_TOL: f64 = 1e-12;

const GOLDEN_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct ExponentialArc {
    rho: DensityMatrix,
    h: HermitianMatrix,
    log_rho: HermitianMatrix,
}

/// A point of an arc together with the spectral data of its exponent.
#[derive(Clone, Debug)]
pub struct ArcPoint {
    pub state: DensityMatrix,
    /// `ζ(t)`.
    pub log_partition: f64,
    /// Spectral data of `log γ_t = log ρ + t h − ζ(t)`.
    pub log_spectrum: SpectralDecomposition,
}

impl ExponentialArc {
    pub fn new(rho: DensityMatrix, h: HermitianMatrix) -> Result<Self> {
        if rho.dim() != h.dim() {
            return Err(Error::DimensionMismatch { expected: rho.dim(), got: h.dim() });
        }
        let log_rho = rho.log();
        Ok(Self { rho, h, log_rho })
    }

    /// The arc from `rho` whose endpoint at `t = 1` is `sigma`, with centered generator.
    pub fn connecting(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        Self::new(rho.clone(), generator_between(rho, sigma)?)
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn generator(&self) -> &HermitianMatrix {
        &self.h
    }

    pub fn log_rho(&self) -> &HermitianMatrix {
        &self.log_rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// `𝔥(ψ) = Tr(ψ h)`.
    pub fn energy(&self, psi: &DensityMatrix) -> f64 {
        psi.expectation(&self.h)
    }

    /// Evaluates `γ_t` with `ζ(t)` by log-sum-exp over the spectrum of the exponent.
    pub fn evaluate(&self, t: f64) -> Result<ArcPoint> {
        if t == 0.0 {
            let spec = self.rho.spectral();
            return Ok(ArcPoint {
                state: self.rho.clone(),
                log_partition: 0.0,
                log_spectrum: SpectralDecomposition {
                    eigenvalues: spec.eigenvalues.map(f64::ln),
                    eigenvectors: spec.eigenvectors.clone(),
                },
            });
        }
        let exponent = self.log_rho.add_scaled(t, &self.h);
        let spec = spectral_decompose(&exponent);
        let norm = spec.min_eigenvalue().abs().max(spec.max_eigenvalue().abs());
        if !(norm <= OVERFLOW_GUARD) {
            return Err(Error::Overflow { norm, limit: OVERFLOW_GUARD });
        }
        let zeta = log_sum_exp(spec.eigenvalues.as_slice());
        let shifted: DVector<f64> = spec.eigenvalues.map(|x| x - zeta);
        let state = DensityMatrix::from_spectrum(shifted.map(f64::exp), spec.eigenvectors.clone())?;
        Ok(ArcPoint {
            state,
            log_partition: zeta,
            log_spectrum: SpectralDecomposition { eigenvalues: shifted, eigenvectors: spec.eigenvectors },
        })
    }

    /// The sub-arc starting at `γ_s` with generator `(t − s) h`; its value at
    /// `ε` is the value of `self` at `(1 − ε)s + εt`.
    pub fn subarc(&self, s: f64, t: f64) -> Result<Self> {
        Self::new(arc_point(self, s)?, self.h.scale(t - s))
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `γ_t`.
pub fn arc_point(arc: &ExponentialArc, t: f64) -> Result<DensityMatrix> {
    Ok(arc.evaluate(t)?.state)
}

/// `ζ(t) = log Tr exp(log ρ + t h)`; exactly 0 at `t = 0`.
pub fn log_partition(arc: &ExponentialArc, t: f64) -> Result<f64> {
    Ok(arc.evaluate(t)?.log_partition)
}

/// Mismatch in the exponential-arc identity
/// `D(ψ‖γ_t) = D(ψ‖γ_s) + D(γ_s‖γ_t) + (t − s)(𝔥(γ_s) − 𝔥(ψ))`.
pub fn arc_residual(arc: &ExponentialArc, psi: &DensityMatrix, s: f64, t: f64) -> Result<f64> {
    let gs = arc_point(arc, s)?;
    let gt = arc_point(arc, t)?;
    let lhs = umegaki_divergence(psi, &gt)?;
    let rhs = umegaki_divergence(psi, &gs)?
        + umegaki_divergence(&gs, &gt)?
        + (t - s) * (arc.energy(&gs) - arc.energy(psi));
    Ok((lhs - rhs).abs())
}

/// Scalar potential `Φ_γ(t) = D(γ_0‖γ_t) + t 𝔥(γ_0)`, evaluated from the divergence.
pub fn potential(arc: &ExponentialArc, t: f64) -> Result<f64> {
    let gt = arc_point(arc, t)?;
    Ok(umegaki_divergence(&arc.rho, &gt)? + t * arc.energy(&arc.rho))
}

/// Legendre transform `Φ*_γ(α) = sup{αt − Φ_γ(t) : 0 ≤ t ≤ 1}`.
///
/// The objective is strictly concave, so a golden-section search on `[0, 1]`
/// (tolerance `1e-12` in `t`) followed by a comparison with the endpoints
/// finds the supremum.
pub fn legendre_dual(arc: &ExponentialArc, alpha: f64) -> Result<f64> {
    if arc.h.centered(&arc.rho).hs_norm() <= CONSTANT_GENERATOR_TOL {
        return Err(Error::ConstantGenerator);
    }
    let objective = |t: f64| -> Result<f64> { Ok(alpha * t - potential(arc, t)?) };
    let (_, best) = golden_section_max(objective, 0.0, 1.0, GOLDEN_TOL)?;
    let ends = [objective(0.0)?, objective(1.0)?];
    Ok(ends.iter().cloned().fold(best, f64::max))
}

/// Maximizer and maximum of a unimodal function on `[a, b]`.
pub(crate) fn golden_section_max<F>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// `𝔥(γ_t) = Tr(γ_t h)`.
pub fn energy_along(arc: &ExponentialArc, t: f64) -> Result<f64> {
    Ok(arc.energy(&arc_point(arc, t)?))
}

/// Tangent `γ̇_t(x) = Tr(c_t x)` with `c_t = ∫₀¹ γ_t^u (h − 𝔥(γ_t)) γ_t^{1−u} du`,
/// evaluated as the Fréchet derivative of `exp` at `log γ_t`.
pub fn arc_derivative(arc: &ExponentialArc, t: f64) -> Result<TangentFunctional> {
    let point = arc.evaluate(t)?;
    let centered = arc.h.shift(-arc.energy(&point.state));
    let c = frechet_exp_with(&point.log_spectrum, &centered);
    TangentFunctional::new(c)
}

/// Generator `h = log σ − log ρ`, centered so that `Tr ρ h = 0`.
pub fn generator_between(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<HermitianMatrix> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    Ok(sigma.log().sub(&rho.log()).centered(rho))
}

/// Operator-norm distance between the endpoint of `(ρ, h)` followed by `k`
/// and the endpoint of `(ρ, h + k)`.
pub fn compose_arcs(rho: &DensityMatrix, h: &HermitianMatrix, k: &HermitianMatrix) -> Result<f64> {
    let first = arc_point(&ExponentialArc::new(rho.clone(), h.clone())?, 1.0)?;
    let chained = arc_point(&ExponentialArc::new(first, k.clone())?, 1.0)?;
    let direct = arc_point(&ExponentialArc::new(rho.clone(), h.add(k))?, 1.0)?;
    Ok(crate::matfun::op_norm(&(chained.as_matrix() - direct.as_matrix())))
}
