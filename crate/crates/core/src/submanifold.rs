//! Finite-dimensional dually flat submanifolds.
//!
//! A reference state ρ and independent centered generators `h_1..h_m` define
//! the family `ω_θ = exp(log ρ + θ^i h_i − ζ(θ))`. Natural coordinates `θ`,
//! expectation coordinates `η_i = Tr(ω_θ h_i)`, potential `Φ(θ) = ζ(θ)` with
//! `∇Φ = η` and Hessian equal to the Kubo-Mori Gram matrix at `ω_θ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::arcs::{ArcPoint, ExponentialArc};
use crate::divergence::umegaki_divergence;
use crate::error::{Error, Result};
use crate::km_metric::{gram_matrix, generator_of_tangent, km_inner, MetricContext};
use crate::matfun::{spectral_decompose, DensityMatrix, HermitianMatrix};
use crate::standard_form::TangentFunctional;

/// Smallest admitted eigenvalue of the generators' Gram matrix at ρ.
pub const GRAM_FLOOR: f64 = 1e-10;

/// Natural coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaPoint(pub Vec<f64>);

/// Expectation coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaPoint(pub Vec<f64>);

impl ThetaPoint {
    pub fn zeros(m: usize) -> Self {
        Self(vec![0.0; m])
    }

    pub fn dot(&self, eta: &EtaPoint) -> f64 {
        self.0.iter().zip(&eta.0).map(|(a, b)| a * b).sum()
    }

    /// `(1 − t) a + t b`.
    pub fn lerp(a: &Self, b: &Self, t: f64) -> Self {
        Self(a.0.iter().zip(&b.0).map(|(x, y)| (1.0 - t) * x + t * y).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl EtaPoint {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

#[derive(Clone, Debug)]
pub struct SubmanifoldModel {
    rho: DensityMatrix,
    generators: Vec<HermitianMatrix>,
}

impl SubmanifoldModel {
    /// Centers the generators at ρ and checks independence through the
    /// Kubo-Mori Gram matrix. With `orthonormalize` the generators are
    /// replaced by a Gram-Schmidt orthonormal basis of their span.
    pub fn new(rho: DensityMatrix, generators: Vec<HermitianMatrix>, orthonormalize: bool) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Input("model needs at least one generator".into()));
        }
        for h in &generators {
            if h.dim() != rho.dim() {
                return Err(Error::DimensionMismatch { expected: rho.dim(), got: h.dim() });
            }
        }
        let ctx = MetricContext::new(rho.clone());
        let mut centered: Vec<HermitianMatrix> = generators.iter().map(|h| h.centered(&rho)).collect();
        let gram = gram_matrix(&ctx, &centered);
        let min_eig = gram.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min_eig > GRAM_FLOOR) {
            return Err(Error::DependentGenerators(min_eig));
        }
        if orthonormalize {
            let mut basis: Vec<HermitianMatrix> = Vec::with_capacity(centered.len());
            for h in &centered {
                let mut v = h.clone();
                for e in &basis {
                    v = v.add_scaled(-km_inner(&ctx, &v, e), e);
                }
                let norm = km_inner(&ctx, &v, &v).sqrt();
                basis.push(v.scale(1.0 / norm).centered(&rho));
            }
            centered = basis;
        }
        Ok(Self { rho, generators: centered })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn generators(&self) -> &[HermitianMatrix] {
        &self.generators
    }

    /// Number of parameters `m`.
    pub fn num_params(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    fn check_theta(&self, theta: &ThetaPoint) -> Result<()> {
        if theta.0.len() != self.num_params() {
            return Err(Error::DimensionMismatch { expected: self.num_params(), got: theta.0.len() });
        }
        if theta.0.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("non-finite coordinate".into()));
        }
        Ok(())
    }

    /// `θ^i h_i`.
    pub fn combined_generator(&self, theta: &ThetaPoint) -> Result<HermitianMatrix> {
        self.check_theta(theta)?;
        let mut h = HermitianMatrix::zeros(self.dim());
        for (c, g) in theta.0.iter().zip(&self.generators) {
            h = h.add_scaled(*c, g);
        }
        Ok(h)
    }

    /// The arc from ρ with generator `θ^i h_i`; `ω_θ` is its value at 1.
    pub fn arc(&self, theta: &ThetaPoint) -> Result<ExponentialArc> {
        ExponentialArc::new(self.rho.clone(), self.combined_generator(theta)?)
    }

    fn evaluate(&self, theta: &ThetaPoint) -> Result<ArcPoint> {
        self.arc(theta)?.evaluate(1.0)
    }

    fn eta_of(&self, state: &DensityMatrix) -> EtaPoint {
        EtaPoint(self.generators.iter().map(|h| state.expectation(h)).collect())
    }
}

/// `ω_θ`.
pub fn state_at(model: &SubmanifoldModel, theta: &ThetaPoint) -> Result<DensityMatrix> {
    Ok(model.evaluate(theta)?.state)
}

/// `η_i = Tr(ω_θ h_i)`.
pub fn dual_coords(model: &SubmanifoldModel, theta: &ThetaPoint) -> Result<EtaPoint> {
    Ok(model.eta_of(&state_at(model, theta)?))
}

/// `Φ(θ) = ζ(θ)`.
pub fn potential_theta(model: &SubmanifoldModel, theta: &ThetaPoint) -> Result<f64> {
    Ok(model.evaluate(theta)?.log_partition)
}

/// `Φ(θ) = D(ω‖ω_θ) + θ^i ω(h_i)`, the divergence form of the potential.
pub fn potential_theta_divergence(model: &SubmanifoldModel, theta: &ThetaPoint) -> Result<f64> {
    let state = state_at(model, theta)?;
    let linear = theta.dot(&model.eta_of(&model.rho));
    Ok(umegaki_divergence(&model.rho, &state)? + linear)
}

/// `g_ij(θ)`, the Kubo-Mori Gram matrix of the generators at `ω_θ`.
pub fn metric_at(model: &SubmanifoldModel, theta: &ThetaPoint) -> Result<DMatrix<f64>> {
    let ctx = MetricContext::new(state_at(model, theta)?);
    Ok(gram_matrix(&ctx, &model.generators))
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_iter: usize,
    /// Required `‖η(θ) − η‖∞` on return.
    pub tol: f64,
    pub armijo: f64,
    pub max_halvings: usize,
    /// `‖θ‖∞` beyond which the target is declared unattainable.
    pub theta_bound: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { max_iter: 200, tol: 1e-10, armijo: 1e-4, max_halvings: 60, theta_bound: 1e3 }
    }
}

/// Inverts `θ ↦ η(θ)` with the default options.
pub fn solve_theta(model: &SubmanifoldModel, eta: &EtaPoint) -> Result<ThetaPoint> {
    solve_theta_with(model, eta, &SolveOptions::default())
}

/// Damped Newton iteration `θ ← θ + α g(θ)⁻¹(η − η(θ))` on the convex gap
/// `F(θ) = Φ(θ) − θ·η`, with Armijo backtracking by halving. A step is also
/// accepted when it shrinks `‖η(θ) − η‖∞` by the same Armijo factor.
pub fn solve_theta_with(model: &SubmanifoldModel, eta: &EtaPoint, opts: &SolveOptions) -> Result<ThetaPoint> {
    let m = model.num_params();
    if eta.0.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: eta.0.len() });
    }
    if eta.0.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("non-finite target".into()));
    }
    let gap = |theta: &ThetaPoint| -> Result<(f64, EtaPoint, DensityMatrix)> {
        let point = model.evaluate(theta)?;
        let e = model.eta_of(&point.state);
        Ok((point.log_partition - theta.dot(eta), e, point.state))
    };
    let mut theta = ThetaPoint::zeros(m);
    let (mut f, mut current, mut state) = gap(&theta)?;
    let mut last_residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let residual = current.max_abs_diff(eta);
        if residual <= 1e-14 || (residual <= opts.tol && residual >= 0.5 * last_residual) {
            return Ok(theta);
        }
        last_residual = residual;
        let grad = DVector::from_iterator(m, current.0.iter().zip(&eta.0).map(|(a, b)| a - b));
        let g = gram_matrix(&MetricContext::new(state.clone()), &model.generators);
        let chol = g
            .cholesky()
            .ok_or_else(|| Error::NotAttained("metric lost positive definiteness".into()))?;
        let dir = chol.solve(&(-&grad));
        let slope = grad.dot(&dir);
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial = ThetaPoint(theta.0.iter().zip(dir.iter()).map(|(x, d)| x + alpha * d).collect());
            if let Ok((ft, et, st)) = gap(&trial) {
                let decrease = ft <= f + opts.armijo * alpha * slope;
                if decrease || et.max_abs_diff(eta) <= (1.0 - opts.armijo * alpha) * residual {
                    accepted = Some((trial, ft, et, st));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((t, ft, et, st)) => {
                theta = t;
                f = ft;
                current = et;
                state = st;
            }
            None if residual <= opts.tol => return Ok(theta),
            None => return Err(Error::NotAttained("line search stalled".into())),
        }
        if theta.max_abs() > opts.theta_bound {
            return Err(Error::NotAttained(format!("|θ| exceeded {}", opts.theta_bound)));
        }
    }
    let residual = current.max_abs_diff(eta);
    if residual <= opts.tol {
        Ok(theta)
    } else {
        Err(Error::NotAttained(format!("residual {residual:e} after {} iterations", opts.max_iter)))
    }
}

/// Legendre dual `Φ*(η) = θ·η − Φ(θ)` at `θ = θ(η)`, evaluated as `D(ω_θ‖ω)`.
pub fn dual_potential(model: &SubmanifoldModel, eta: &EtaPoint) -> Result<f64> {
    let theta = solve_theta(model, eta)?;
    umegaki_divergence(&state_at(model, &theta)?, &model.rho)
}

/// Point of the e-geodesic: `ω_{(1−t)θ_a + tθ_b}`.
pub fn e_geodesic(model: &SubmanifoldModel, theta_a: &ThetaPoint, theta_b: &ThetaPoint, t: f64) -> Result<DensityMatrix> {
    model.check_theta(theta_a)?;
    model.check_theta(theta_b)?;
    state_at(model, &ThetaPoint::lerp(theta_a, theta_b, t))
}

/// Point of the m-geodesic: `(1 − t)σ_a + tσ_b`, for `t ∈ [0, 1]`.
pub fn m_geodesic(sigma_a: &DensityMatrix, sigma_b: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if sigma_a.dim() != sigma_b.dim() {
        return Err(Error::DimensionMismatch { expected: sigma_a.dim(), got: sigma_b.dim() });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("mixture parameter {t} outside [0, 1]")));
    }
    DensityMatrix::normalized(sigma_a.hermitian().scale(1.0 - t).add_scaled(t, sigma_b.hermitian()))
}

/// Energy mismatch above which [`pythagorean_residual`] refuses to run.
pub const ENERGY_MATCH_TOL: f64 = 1e-8;

/// `|D(ψ‖γ_t) − D(ψ‖γ_s) − D(γ_s‖γ_t)|` along the arc with generator `θ^i h_i`,
/// for `ψ` with the same energy as `γ_s`.
pub fn pythagorean_residual(
    model: &SubmanifoldModel,
    psi: &DensityMatrix,
    theta: &ThetaPoint,
    s: f64,
    t: f64,
) -> Result<f64> {
    let arc = model.arc(theta)?;
    let gs = arc.evaluate(s)?.state;
    let gt = arc.evaluate(t)?.state;
    let mismatch = (arc.energy(psi) - arc.energy(&gs)).abs();
    if mismatch > ENERGY_MATCH_TOL {
        return Err(Error::Precondition(format!("energy mismatch {mismatch:e}")));
    }
    let lhs = umegaki_divergence(psi, &gt)?;
    let rhs = umegaki_divergence(psi, &gs)? + umegaki_divergence(&gs, &gt)?;
    Ok((lhs - rhs).abs())
}

/// Builds a faithful `ψ = γ_s + εΔ` with `Tr Δ = Tr Δh = 0`, so that ψ has
/// the energy of `γ_s` under the generator `h`. `direction` supplies the raw
/// perturbation; `fraction ∈ (0, 1)` sets `ε` relative to the largest
/// admissible step.
pub fn equal_energy_state(
    gamma_s: &DensityMatrix,
    h: &HermitianMatrix,
    direction: &HermitianMatrix,
    fraction: f64,
) -> Result<DensityMatrix> {
    let n = h.dim() as f64;
    let hp = h.shift(-h.trace() / n);
    let d = direction.shift(-direction.trace() / n);
    let hh = hp.trace_product(&hp);
    let delta = if hh > 0.0 { d.add_scaled(-d.trace_product(&hp) / hh, &hp) } else { d };
    let spec = spectral_decompose(&delta);
    let spread = spec.min_eigenvalue().abs().max(spec.max_eigenvalue().abs());
    if spread == 0.0 {
        return Ok(gamma_s.clone());
    }
    let eps = fraction * gamma_s.eigenvalues()[0] / spread;
    DensityMatrix::normalized(gamma_s.hermitian().add_scaled(eps, &delta))
}

/// Spread (max − min) over `grid` of the Kubo-Mori pairing at `ω_{θ(t)}`
/// between the m-transported tangent `c` and the e-transported generator `k`,
/// along the e-geodesic from `θ_a` to `θ_b`. Dual connections keep it constant.
pub fn connection_duality_variation(
    model: &SubmanifoldModel,
    theta_a: &ThetaPoint,
    theta_b: &ThetaPoint,
    c: &TangentFunctional,
    k: &HermitianMatrix,
    grid: &[f64],
) -> Result<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &t in grid {
        let ctx = MetricContext::new(e_geodesic(model, theta_a, theta_b, t)?);
        let v = km_inner(&ctx, &generator_of_tangent(&ctx, c), k);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::arc_point;
    use crate::matfun::{op_norm, CMatrix};
    use crate::random::{random_density, random_hermitian, rng_for};

    fn scalar_model() -> SubmanifoldModel {
        SubmanifoldModel::new(DensityMatrix::maximally_mixed(2), vec![HermitianMatrix::from_diagonal(&[1.0, -1.0])], false)
            .unwrap()
    }

    fn random_model(seed: u64, n: usize, m: usize, ortho: bool) -> SubmanifoldModel {
        let mut rng = rng_for(seed, 0);
        let rho = random_density(&mut rng, n);
        let gens = (0..m).map(|_| random_hermitian(&mut rng, n)).collect();
        SubmanifoldModel::new(rho, gens, ortho).unwrap()
    }

    #[test]
    fn origin_is_reference_state() {
        let model = random_model(81, 4, 3, false);
        let th = ThetaPoint::zeros(3);
        assert!(op_norm(&(state_at(&model, &th).unwrap().as_matrix() - model.rho().as_matrix())) < 1e-12);
        assert!(dual_coords(&model, &th).unwrap().0.iter().all(|x| x.abs() < 1e-14));
        assert!(potential_theta(&model, &th).unwrap().abs() < 1e-14);
    }

    #[test]
    fn single_parameter_matches_arc() {
        let mut rng = rng_for(82, 0);
        let rho = random_density(&mut rng, 3);
        let h = random_hermitian(&mut rng, 3).centered(&rho);
        let model = SubmanifoldModel::new(rho.clone(), vec![h.clone()], false).unwrap();
        let a = state_at(&model, &ThetaPoint(vec![0.7])).unwrap();
        let b = arc_point(&ExponentialArc::new(rho, h).unwrap(), 0.7).unwrap();
        assert!(op_norm(&(a.as_matrix() - b.as_matrix())) < 1e-12);
    }

    #[test]
    fn scalar_model_closed_forms() {
        let model = scalar_model();
        for th in [-0.8, 0.4, 1.5] {
            let t = ThetaPoint(vec![th]);
            assert!((dual_coords(&model, &t).unwrap().0[0] - th.tanh()).abs() < 1e-14);
            assert!((potential_theta(&model, &t).unwrap() - th.cosh().ln()).abs() < 1e-14);
            let g = metric_at(&model, &t).unwrap();
            assert!((g[(0, 0)] - 1.0 / th.cosh().powi(2)).abs() < 1e-13);
        }
        let theta = solve_theta(&model, &EtaPoint(vec![0.5])).unwrap();
        assert!((theta.0[0] - 0.5f64.atanh()).abs() <= 1e-9);
        assert!((theta.0[0] - 0.5493061).abs() <= 1e-7);
    }

    #[test]
    fn commuting_family_is_classical() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let rho = DensityMatrix::diagonal(&p).unwrap();
        let h1 = HermitianMatrix::from_diagonal(&[1.0, 0.0, -1.0, 0.5]);
        let h2 = HermitianMatrix::from_diagonal(&[0.0, 2.0, 0.3, -1.0]);
        let model = SubmanifoldModel::new(rho.clone(), vec![h1.clone(), h2.clone()], false).unwrap();
        let th = ThetaPoint(vec![0.6, -0.3]);
        let state = state_at(&model, &th).unwrap();
        let c1 = h1.centered(&rho);
        let c2 = h2.centered(&rho);
        let w: Vec<f64> = (0..4)
            .map(|i| p[i] * (0.6 * c1.as_matrix()[(i, i)].re - 0.3 * c2.as_matrix()[(i, i)].re).exp())
            .collect();
        let z: f64 = w.iter().sum();
        for i in 0..4 {
            assert!((state.as_matrix()[(i, i)].re - w[i] / z).abs() < 1e-14);
        }
    }

    #[test]
    fn potential_forms_and_gradients() {
        let model = random_model(83, 4, 3, false);
        let th = ThetaPoint(vec![0.3, -0.5, 0.8]);
        let a = potential_theta(&model, &th).unwrap();
        let b = potential_theta_divergence(&model, &th).unwrap();
        assert!((a - b).abs() <= 1e-10);
        let eta = dual_coords(&model, &th).unwrap();
        let g = metric_at(&model, &th).unwrap();
        let eps = 1e-5;
        for i in 0..3 {
            let mut plus = th.clone();
            let mut minus = th.clone();
            plus.0[i] += eps;
            minus.0[i] -= eps;
            let grad = (potential_theta(&model, &plus).unwrap() - potential_theta(&model, &minus).unwrap()) / (2.0 * eps);
            assert!((grad - eta.0[i]).abs() <= 1e-6);
            let ep = dual_coords(&model, &plus).unwrap();
            let em = dual_coords(&model, &minus).unwrap();
            for j in 0..3 {
                let jac = (ep.0[j] - em.0[j]) / (2.0 * eps);
                assert!((jac - g[(i, j)]).abs() <= 1e-6);
            }
        }
        assert!((g.clone() - g.transpose()).norm() < 1e-14);
        assert!(g.symmetric_eigenvalues().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn orthonormalized_gram_is_identity() {
        let model = random_model(84, 4, 3, true);
        let g = metric_at(&model, &ThetaPoint::zeros(3)).unwrap();
        assert!((g - DMatrix::<f64>::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn dependent_generators_rejected() {
        let mut rng = rng_for(85, 0);
        let rho = random_density(&mut rng, 3);
        let h = random_hermitian(&mut rng, 3);
        let r = SubmanifoldModel::new(rho.clone(), vec![h.clone(), h.scale(2.0).shift(1.0)], false);
        assert!(matches!(r, Err(Error::DependentGenerators(_))));
        let r = SubmanifoldModel::new(rho, vec![HermitianMatrix::identity(3)], false);
        assert!(matches!(r, Err(Error::DependentGenerators(_))));
    }

    #[test]
    fn newton_round_trip() {
        let model = random_model(86, 4, 3, false);
        assert_eq!(solve_theta(&model, &EtaPoint(vec![0.0; 3])).unwrap(), ThetaPoint::zeros(3));
        let mut rng = rng_for(87, 0);
        use rand::Rng;
        for _ in 0..10 {
            let target = ThetaPoint((0..3).map(|_| rng.random_range(-2.0..2.0)).collect());
            let eta = dual_coords(&model, &target).unwrap();
            let theta = solve_theta(&model, &eta).unwrap();
            let err = theta.0.iter().zip(&target.0).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err <= 1e-9, "err {err}");
        }
    }

    #[test]
    fn unattainable_target_detected() {
        // η = Tr(ω_θ σ_z) lies in (−1, 1)
        let model = scalar_model();
        assert!(matches!(solve_theta(&model, &EtaPoint(vec![1.5])), Err(Error::NotAttained(_))));
    }

    #[test]
    fn legendre_structure() {
        let model = random_model(88, 3, 2, false);
        let th = ThetaPoint(vec![0.4, -0.9]);
        let eta = dual_coords(&model, &th).unwrap();
        let lhs = potential_theta(&model, &th).unwrap() + dual_potential(&model, &eta).unwrap();
        assert!((lhs - th.dot(&eta)).abs() <= 1e-8);
    }

    #[test]
    fn maximality_chain() {
        let model = random_model(89, 4, 2, false);
        let th = ThetaPoint(vec![-0.7, 1.1]);
        let state = state_at(&model, &th).unwrap();
        let base = th.dot(&model.eta_of(model.rho()));
        let middle = umegaki_divergence(model.rho(), &state).unwrap() + base;
        let eta = dual_coords(&model, &th).unwrap();
        let right = th.dot(&eta);
        let alt = right - umegaki_divergence(&state, model.rho()).unwrap();
        assert!(middle - base >= -1e-12);
        assert!((middle - alt).abs() <= 1e-10);
        assert!(right - alt >= -1e-12);
    }

    #[test]
    fn geodesic_endpoints_and_affinity() {
        let model = random_model(90, 3, 2, false);
        let a = ThetaPoint(vec![0.2, 0.1]);
        let b = ThetaPoint(vec![-0.5, 0.9]);
        let sa = state_at(&model, &a).unwrap();
        let sb = state_at(&model, &b).unwrap();
        assert!(op_norm(&(e_geodesic(&model, &a, &b, 0.0).unwrap().as_matrix() - sa.as_matrix())) < 1e-12);
        assert!(op_norm(&(e_geodesic(&model, &a, &b, 1.0).unwrap().as_matrix() - sb.as_matrix())) < 1e-12);
        // midpoint lies on the arc connecting the endpoints
        let arc = ExponentialArc::connecting(&sa, &sb).unwrap();
        let mid = arc_point(&arc, 0.5).unwrap();
        assert!(op_norm(&(e_geodesic(&model, &a, &b, 0.5).unwrap().as_matrix() - mid.as_matrix())) <= 1e-10);

        assert!(op_norm(&(m_geodesic(&sa, &sb, 0.0).unwrap().as_matrix() - sa.as_matrix())) < 1e-15);
        assert!(op_norm(&(m_geodesic(&sa, &sb, 1.0).unwrap().as_matrix() - sb.as_matrix())) < 1e-15);
        let avg: CMatrix = (sa.as_matrix() + sb.as_matrix()).scale(0.5);
        assert!(op_norm(&(m_geodesic(&sa, &sb, 0.5).unwrap().as_matrix() - avg)) < 1e-15);
        let pts: Vec<CMatrix> = [0.2, 0.4, 0.6].iter().map(|&t| m_geodesic(&sa, &sb, t).unwrap().as_matrix().clone()).collect();
        let second = &pts[0] - pts[1].scale(2.0) + &pts[2];
        assert!(second.norm() <= 1e-14);
        assert!(m_geodesic(&sa, &sb, 1.5).is_err());
    }

    #[test]
    fn pythagorean_cases() {
        let model = random_model(91, 4, 2, false);
        let th = ThetaPoint(vec![0.8, -0.6]);
        let arc = model.arc(&th).unwrap();
        let s = 0.4;
        let gs = arc_point(&arc, s).unwrap();
        assert!(pythagorean_residual(&model, &gs, &th, s, 0.9).unwrap() < 1e-12);
        let mut rng = rng_for(92, 0);
        let psi = equal_energy_state(&gs, arc.generator(), &random_hermitian(&mut rng, 4), 0.5).unwrap();
        assert!((arc.energy(&psi) - arc.energy(&gs)).abs() <= 1e-10);
        for t in [0.0, 0.25, 1.0] {
            assert!(pythagorean_residual(&model, &psi, &th, s, t).unwrap() <= 1e-9);
        }
        let other = random_density(&mut rng, 4);
        assert!(matches!(pythagorean_residual(&model, &other, &th, s, 1.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn classical_pythagorean() {
        let p = [0.25, 0.25, 0.5];
        let rho = DensityMatrix::diagonal(&p).unwrap();
        let h = HermitianMatrix::from_diagonal(&[1.0, -1.0, 0.0]);
        let model = SubmanifoldModel::new(rho, vec![h], false).unwrap();
        let th = ThetaPoint(vec![1.0]);
        let arc = model.arc(&th).unwrap();
        let gs = arc_point(&arc, 0.5).unwrap();
        // classical perturbation keeping Σψ_i = 1 and Σψ_i h_i fixed
        let mut d = vec![0.0; 3];
        for i in 0..3 {
            d[i] = gs.as_matrix()[(i, i)].re;
        }
        let hc: Vec<f64> = (0..3).map(|i| arc.generator().as_matrix()[(i, i)].re).collect();
        // direction orthogonal to (1,1,1) and hc
        let v = [hc[1] - hc[2], hc[2] - hc[0], hc[0] - hc[1]];
        let eps = 0.3 * d.iter().cloned().fold(f64::INFINITY, f64::min) / v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let q: Vec<f64> = (0..3).map(|i| d[i] + eps * v[i]).collect();
        let psi = DensityMatrix::diagonal(&q).unwrap();
        let gt = arc_point(&arc, 1.0).unwrap();
        let kl = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * (x / y).ln()).sum::<f64>();
        let gtd: Vec<f64> = (0..3).map(|i| gt.as_matrix()[(i, i)].re).collect();
        let classical = (kl(&q, &gtd) - kl(&q, &d) - kl(&d, &gtd)).abs();
        let r = pythagorean_residual(&model, &psi, &th, 0.5, 1.0).unwrap();
        assert!(classical <= 1e-12 && r <= 1e-12);
    }

    #[test]
    fn dual_connections_pairing_constant() {
        let model = random_model(93, 3, 2, false);
        let mut rng = rng_for(94, 0);
        let c = TangentFunctional::projected(&random_hermitian(&mut rng, 3));
        let k = random_hermitian(&mut rng, 3);
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let var = connection_duality_variation(
            &model,
            &ThetaPoint(vec![0.3, -0.2]),
            &ThetaPoint(vec![-0.6, 0.9]),
            &c,
            &k,
            &grid,
        )
        .unwrap();
        assert!(var <= 1e-8);
    }
}
