//! Kubo-Mori (Bogoliubov) scalar product.
//!
//! At a faithful state `ρ = Σ p_i e_i e_i†` the product of two generators is
//! `Σ_ij L(p_i, p_j) conj(h̃_ij) k̃_ij` with `h̃ = U†(h − Tr ρh)U` and the
//! logarithmic mean `L`. The same number is produced by the operator
//! `T_Ω = ((Δ_Ω − 1)/log Δ_Ω)^{1/2}` acting on `(h − ω(h))Ω`, by the integral
//! `∫₀¹ (Δ^{u/2}h_cΩ, Δ^{u/2}k_cΩ) du`, and by the mixed second derivative of
//! the relative entropy along two exponential arcs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::arcs::{arc_point, log_partition, ExponentialArc};
use crate::error::{Error, Result};
use crate::matfun::{CMatrix, DensityMatrix, HermitianMatrix};
use crate::quadrature::GaussLegendre;
use crate::standard_form::{apply_modular_power, build_standard_form, ConeVector, TangentFunctional};

/// `(r − 1)/ln r`, with a series for `|r − 1| < 1e-5`.
fn log_ratio_kernel(r: f64) -> f64 {
    let x = r - 1.0;
    if x.abs() < 1e-5 {
        1.0 + x / 2.0 - x * x / 12.0 + x * x * x / 24.0
    } else {
        x / r.ln()
    }
}

/// Logarithmic mean `L(p, q) = (p − q)/(ln p − ln q)`, `L(p, p) = p`.
pub fn log_mean(p: f64, q: f64) -> f64 {
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    hi * log_ratio_kernel(lo / hi)
}

/// Base point of the metric.
#[derive(Clone, Debug)]
pub struct MetricContext {
    rho: DensityMatrix,
}

impl MetricContext {
    pub fn new(rho: DensityMatrix) -> Self {
        Self { rho }
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    fn eigenbasis(&self, h: &HermitianMatrix) -> CMatrix {
        self.rho.spectral().to_eigenbasis(h.centered(&self.rho).as_matrix())
    }

    /// Smallest logarithmic mean over eigenvalue pairs; the lower bound of
    /// `km_inner(h, h) / ‖h_c‖²`.
    pub fn min_log_mean(&self) -> f64 {
        // L is monotone in each argument, so the minimum sits at (p_min, p_min).
        self.rho.eigenvalues()[0]
    }
}

/// Kubo-Mori product of two generators at the context's base point.
pub fn km_inner(ctx: &MetricContext, h: &HermitianMatrix, k: &HermitianMatrix) -> f64 {
    let ht = ctx.eigenbasis(h);
    let kt = ctx.eigenbasis(k);
    let p = ctx.rho.eigenvalues();
    let n = ctx.dim();
    let mut total = 0.0;
    for j in 0..n {
        for i in 0..n {
            total += log_mean(p[i], p[j]) * (ht[(i, j)].conj() * kt[(i, j)]).re;
        }
    }
    total
}

/// Gram matrix `G_ij = km_inner(h_i, h_j)`.
pub fn gram_matrix(ctx: &MetricContext, hs: &[HermitianMatrix]) -> DMatrix<f64> {
    let tilde: Vec<CMatrix> = hs.iter().map(|h| ctx.eigenbasis(h)).collect();
    let p = ctx.rho.eigenvalues();
    let n = ctx.dim();
    let weights = DMatrix::from_fn(n, n, |i, j| log_mean(p[i], p[j]));
    let m = hs.len();
    let mut g = DMatrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let v: f64 = tilde[a]
                .iter()
                .zip(tilde[b].iter())
                .zip(weights.iter())
                .map(|((x, y), w)| w * (x.conj() * y).re)
                .sum();
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    g
}

/// `T_Ω v`: multiplies `M̃_ij` (entries in the eigenbasis of ρ) by
/// `((p_i/p_j − 1)/ln(p_i/p_j))^{1/2}`.
pub fn t_operator_apply(ctx: &MetricContext, v: &ConeVector) -> ConeVector {
    let spec = ctx.rho.spectral();
    let out = spec.apply_kernel(v.as_matrix(), |pi, pj| log_ratio_kernel(pi / pj).sqrt());
    ConeVector::from_matrix(out)
}

/// `T_Ω (h − ω(h)) Ω`, the Hilbert-space image of the tangent of the arc with generator `h`.
pub fn t_vector_of_generator(ctx: &MetricContext, h: &HermitianMatrix) -> ConeVector {
    let g = ctx.rho.sqrt();
    let v = ConeVector::from_matrix(h.centered(&ctx.rho).as_matrix() * g);
    t_operator_apply(ctx, &v)
}

/// `∫₀¹ (Δ^{u/2} h_c Ω, Δ^{u/2} k_c Ω) du` by Gauss-Legendre quadrature on `nodes` points.
pub fn km_inner_quadrature(ctx: &MetricContext, h: &HermitianMatrix, k: &HermitianMatrix, nodes: usize) -> Result<f64> {
    let g = build_standard_form(&ctx.rho)?;
    let hv = g.apply_to_omega(h.centered(&ctx.rho).as_matrix());
    let kv = g.apply_to_omega(k.centered(&ctx.rho).as_matrix());
    let rule = GaussLegendre::new(nodes);
    Ok(rule.integrate(0.0, 1.0, |u| {
        let z = Complex64::new(0.5 * u, 0.0);
        apply_modular_power(&g, z, &hv).inner(&apply_modular_power(&g, z, &kv)).re
    }))
}

/// `−∂_s∂_t D(η_s‖γ_t)` at `s = t = 0` by a central mixed difference, where
/// `η` and `γ` are the arcs from ρ with generators `k` and `h`.
///
/// The four divergences are combined before evaluation: the entropy terms
/// cancel and `log γ_{±δ} = log ρ ± δh − ζ(±δ)`, leaving
/// `−Tr(η_δ − η_{−δ})(log γ_δ − log γ_{−δ})`.
pub fn eguchi_fd_inner(ctx: &MetricContext, h: &HermitianMatrix, k: &HermitianMatrix, step: f64) -> Result<f64> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::Domain(format!("finite-difference step {step} outside (0, 0.1]")));
    }
    let gamma = ExponentialArc::new(ctx.rho.clone(), h.clone())?;
    let eta = ExponentialArc::new(ctx.rho.clone(), k.clone())?;
    let zeta = log_partition(&gamma, step)? - log_partition(&gamma, -step)?;
    let dlog = h.scale(2.0 * step).shift(-zeta);
    let de = arc_point(&eta, step)?.hermitian().sub(arc_point(&eta, -step)?.hermitian());
    let mixed = -de.trace_product(&dlog);
    Ok(-mixed / (4.0 * step * step))
}

/// The traceless matrix `c = ∫₀¹ ρ^u h_c ρ^{1−u} du` of the initial tangent
/// of the arc with generator `h`.
pub fn tangent_of_generator(ctx: &MetricContext, h: &HermitianMatrix) -> TangentFunctional {
    let spec = ctx.rho.spectral();
    let c = spec.apply_kernel(h.centered(&ctx.rho).as_matrix(), log_mean);
    TangentFunctional::projected(&HermitianMatrix::hermitian_part(&c))
}

/// Inverse of [`tangent_of_generator`] on centered generators.
pub fn generator_of_tangent(ctx: &MetricContext, chi: &TangentFunctional) -> HermitianMatrix {
    let spec = ctx.rho.spectral();
    let h = spec.apply_kernel(chi.matrix().as_matrix(), |p, q| 1.0 / log_mean(p, q));
    HermitianMatrix::hermitian_part(&h).centered(&ctx.rho)
}
