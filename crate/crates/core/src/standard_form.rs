//! Standard form of the full matrix algebra in a faithful state.
//!
//! The GNS Hilbert space `ℂⁿ ⊗ ℂⁿ` is identified with `n×n` matrices through
//! `vec`, with the conventions
//!
//! * `(A ⊗ 𝕀) vec(M) = vec(A M)` (the algebra acts from the left),
//! * `(𝕀 ⊗ Bᵀ) vec(M) = vec(M B)` (the commutant acts from the right),
//! * `(vec(M), vec(N)) = Tr(N† M)` (linear in the first slot).
//!
//! The cyclic and separating vector is `Ω = vec(ρ^{1/2})`, so that
//! `ω(x) = (xΩ, Ω) = Tr(ρ x)`. The modular objects act as
//! `Δ^z vec(M) = vec(ρ^z M ρ^{-z})` and `J vec(M) = vec(M†)`. All actions are
//! `n×n` matrix products; no `n²×n²` operator is ever formed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matfun::{
    hs_norm, matrix_power_complex, op_norm, spectral_decompose, CMatrix, DensityMatrix,
    HermitianMatrix,
};

/// A vector of the GNS space, stored as the matrix `M` of `vec(M)`.
///
/// Cone vectors representing states are positive semidefinite with unit
/// Hilbert-Schmidt norm; general vectors (images under `Δ^z`, `J`, `S`) use
/// the same carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeVector {
    mat: CMatrix,
}

impl ConeVector {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare { rows: mat.nrows(), cols: mat.ncols() });
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_matrix(mat: CMatrix) -> Self {
        Self { mat }
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// `(self, other) = Tr(other† self)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.mat.iter().zip(other.mat.iter()).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn norm(&self) -> f64 {
        hs_norm(&self.mat)
    }

    /// `(x ⊗ 𝕀) v = vec(x M)`.
    pub fn left_mul(&self, x: &CMatrix) -> Self {
        Self { mat: x * &self.mat }
    }

    /// `(𝕀 ⊗ bᵀ) v = vec(M b)`.
    pub fn right_mul(&self, b: &CMatrix) -> Self {
        Self { mat: &self.mat * b }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        hs_norm(&(&self.mat - &other.mat))
    }
}

/// A tangent functional `χ(x) = Tr(c x)` with `c` traceless Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFunctional {
    mat: HermitianMatrix,
}

/// Admitted `|Tr c|` for a tangent functional.
pub const TRACELESS_TOL: f64 = 1e-12;

impl TangentFunctional {
    pub fn new(mat: HermitianMatrix) -> Result<Self> {
        let tr = mat.trace();
        if tr.abs() > TRACELESS_TOL * mat.hs_norm().max(1.0) {
            return Err(Error::NotTraceless(tr));
        }
        Ok(Self { mat })
    }

    /// Removes the trace part: `c − (Tr c / n) 𝕀`.
    pub fn projected(mat: &HermitianMatrix) -> Self {
        let n = mat.dim() as f64;
        Self { mat: mat.shift(-mat.trace() / n) }
    }

    pub fn zero(n: usize) -> Self {
        Self { mat: HermitianMatrix::zeros(n) }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `χ(x) = Tr(c x)`.
    pub fn evaluate(&self, x: &CMatrix) -> Complex64 {
        (self.mat.as_matrix() * x).trace()
    }

    pub fn evaluate_hermitian(&self, x: &HermitianMatrix) -> f64 {
        self.mat.trace_product(x)
    }
}

/// GNS representation of a faithful state `ω = Tr(ρ ·)`, with `β = 1`.
#[derive(Clone, Debug)]
pub struct GnsSpace {
    rho: DensityMatrix,
    sqrt: CMatrix,
    inv_sqrt: CMatrix,
}

impl GnsSpace {
    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// The cyclic and separating vector `Ω = vec(ρ^{1/2})`.
    pub fn omega(&self) -> ConeVector {
        ConeVector::from_matrix(self.sqrt.clone())
    }

    pub fn rho_sqrt(&self) -> &CMatrix {
        &self.sqrt
    }

    pub fn rho_inv_sqrt(&self) -> &CMatrix {
        &self.inv_sqrt
    }

    /// `xΩ = vec(x ρ^{1/2})`.
    pub fn apply_to_omega(&self, x: &CMatrix) -> ConeVector {
        ConeVector::from_matrix(x * &self.sqrt)
    }

    /// `ω(x) = (xΩ, Ω)`.
    pub fn vector_state(&self, x: &CMatrix) -> Complex64 {
        self.apply_to_omega(x).inner(&self.omega())
    }

    /// Tomita operator `S = JΔ^{1/2}`, which maps `xΩ ↦ x*Ω`.
    pub fn tomita(&self, v: &ConeVector) -> ConeVector {
        modular_conjugate(&apply_modular_power(self, Complex64::new(0.5, 0.0), v))
    }
}

/// Builds the standard form of `ρ`.
pub fn build_standard_form(rho: &DensityMatrix) -> Result<GnsSpace> {
    // DensityMatrix already enforces the faithfulness floor; re-check in case
    // the caller built it from raw spectral data.
    let min = rho.eigenvalues()[0];
    if !(min >= crate::matfun::FAITHFUL_FLOOR) {
        return Err(Error::Faithfulness { min_eigenvalue: min, floor: crate::matfun::FAITHFUL_FLOOR });
    }
    Ok(GnsSpace { rho: rho.clone(), sqrt: rho.sqrt(), inv_sqrt: rho.inv_sqrt() })
}

/// `Δ^z vec(M) = vec(ρ^z M ρ^{-z})`.
pub fn apply_modular_power(g: &GnsSpace, z: Complex64, v: &ConeVector) -> ConeVector {
    let left = matrix_power_complex(&g.rho, z);
    let right = matrix_power_complex(&g.rho, -z);
    ConeVector::from_matrix(left * v.as_matrix() * right)
}

/// Modular conjugation `J vec(M) = vec(M†)`.
pub fn modular_conjugate(v: &ConeVector) -> ConeVector {
    ConeVector::from_matrix(v.as_matrix().adjoint())
}

/// Modular automorphism `τ_w(x) = ρ^{-iw} x ρ^{iw}` for complex `w`.
pub fn modular_flow(g: &GnsSpace, x: &HermitianMatrix, w: Complex64) -> CMatrix {
    let i = Complex64::new(0.0, 1.0);
    matrix_power_complex(&g.rho, -i * w) * x.as_matrix() * matrix_power_complex(&g.rho, i * w)
}

/// `|ω(τ_{t−i}(x) y) − ω(y τ_t(x))|`, the KMS boundary mismatch at `β = 1`.
pub fn kms_boundary_check(g: &GnsSpace, x: &HermitianMatrix, y: &HermitianMatrix, t: f64) -> f64 {
    let shifted = modular_flow(g, x, Complex64::new(t, -1.0));
    let real = modular_flow(g, x, Complex64::new(t, 0.0));
    let lhs = g.rho.expectation_complex(&(shifted * y.as_matrix()));
    let rhs = g.rho.expectation_complex(&(y.as_matrix() * real));
    (lhs - rhs).norm()
}

/// Membership of `vec(M)` in the cone `V^α = closure{Δ^α xΩ : x ≥ 0}`.
///
/// `vec(M) ∈ V^α` iff `x = ρ^{-α} M ρ^{α-1/2}` is positive semidefinite.
/// The test accepts `x` when its anti-Hermitian part is below
/// `tol·max(1, ‖x‖)` and its smallest eigenvalue is at least `−tol`.
pub fn cone_membership(g: &GnsSpace, v: &ConeVector, alpha: f64, tol: f64) -> Result<bool> {
    if !(0.0..=0.5).contains(&alpha) {
        return Err(Error::Domain(format!("cone index {alpha} outside [0, 1/2]")));
    }
    let x = g.rho.power(-alpha) * v.as_matrix() * g.rho.power(alpha - 0.5);
    let scale = hs_norm(&x).max(1.0);
    if hs_norm(&(&x - x.adjoint())) > tol * scale {
        return Ok(false);
    }
    let herm = HermitianMatrix::hermitian_part(&x);
    Ok(spectral_decompose(&herm).min_eigenvalue() >= -tol)
}

/// Density matrix `M M†` of the vector state `ω_Φ(x) = (xΦ, Φ)`.
pub fn state_of_vector(v: &ConeVector) -> Result<DensityMatrix> {
    let norm2 = v.norm().powi(2);
    if (norm2 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm2));
    }
    let m = v.as_matrix();
    DensityMatrix::normalized(HermitianMatrix::hermitian_part(&(m * m.adjoint())))
}

/// The natural-cone representative `vec(σ^{1/2})` of a state.
pub fn vector_of_state(sigma: &DensityMatrix) -> ConeVector {
    ConeVector::from_matrix(sigma.sqrt())
}

/// Smallest `λ` with `ω_Φ(x*x) ≤ λ ω(x*x)` for all `x`: `‖ρ^{-1/2} M_Φ‖²` in
/// operator norm. Always finite for faithful `ρ`.
pub fn majorization_bound(g: &GnsSpace, phi: &ConeVector) -> f64 {
    op_norm(&(&g.inv_sqrt * phi.as_matrix())).powi(2)
}

/// Commutant Radon-Nikodym element `a′ = 𝕀 ⊗ Bᵀ` with `a′Ω = Φ`, returned as
/// `B = ρ^{-1/2} M_Φ`.
pub fn commutant_rn(g: &GnsSpace, phi: &ConeVector) -> Result<CMatrix> {
    commutant_rn_bounded(g, phi, f64::INFINITY)
}

/// [`commutant_rn`] that additionally requires the majorization bound not to
/// exceed `threshold`.
pub fn commutant_rn_bounded(g: &GnsSpace, phi: &ConeVector, threshold: f64) -> Result<CMatrix> {
    check_dim(g, phi)?;
    let bound = majorization_bound(g, phi);
    if !bound.is_finite() || bound > threshold {
        return Err(Error::Majorization { bound, threshold });
    }
    Ok(&g.inv_sqrt * phi.as_matrix())
}

/// Algebra Radon-Nikodym element `a = M_Φ ρ^{-1/2}` with `aΩ = Φ` and
/// `ω(a* x a) = ω_Φ(x)`. For `Φ` in the natural cone `a = J a′ J`.
pub fn algebra_rn(g: &GnsSpace, phi: &ConeVector) -> Result<CMatrix> {
    algebra_rn_bounded(g, phi, f64::INFINITY)
}

pub fn algebra_rn_bounded(g: &GnsSpace, phi: &ConeVector, threshold: f64) -> Result<CMatrix> {
    check_dim(g, phi)?;
    let bound = majorization_bound(g, phi);
    if !bound.is_finite() || bound > threshold {
        return Err(Error::Majorization { bound, threshold });
    }
    Ok(phi.as_matrix() * &g.inv_sqrt)
}

/// `J (𝕀 ⊗ Bᵀ) J` as a left multiplication: `vec(X) ↦ vec(B† X)`.
pub fn conjugate_commutant(b: &CMatrix) -> CMatrix {
    b.adjoint()
}

fn check_dim(g: &GnsSpace, v: &ConeVector) -> Result<()> {
    if v.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: v.dim() });
    }
    Ok(())
}

/// Output of [`tangent_split`]: `χ = λ(φ − ψ)` with `φ + ψ = 2ρ`.
#[derive(Clone, Debug)]
pub struct TangentSplit {
    pub lambda: f64,
    pub phi: DensityMatrix,
    pub psi: DensityMatrix,
    /// Step `s` in `φ = ρ + s c`, `ψ = ρ − s c`.
    pub step: f64,
}

/// Writes a tangent functional as a scaled difference of two faithful states.
///
/// `s` is half of the largest step keeping `ρ ± s c` positive semidefinite,
/// i.e. `s = 1 / (2 max|κ|)` over the eigenvalues `κ` of `ρ^{-1/2} c ρ^{-1/2}`.
pub fn tangent_split(g: &GnsSpace, chi: &TangentFunctional) -> Result<TangentSplit> {
    if chi.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: chi.dim() });
    }
    let c = chi.matrix();
    let whitened = HermitianMatrix::hermitian_part(&(&g.inv_sqrt * c.as_matrix() * &g.inv_sqrt));
    let spec = spectral_decompose(&whitened);
    let kappa = spec.min_eigenvalue().abs().max(spec.max_eigenvalue().abs());
    if kappa == 0.0 {
        return Ok(TangentSplit { lambda: 0.0, phi: g.rho.clone(), psi: g.rho.clone(), step: 0.0 });
    }
    let step = 0.5 / kappa;
    let rho = g.rho.hermitian();
    let phi = DensityMatrix::normalized(rho.add_scaled(step, c))?;
    let psi = DensityMatrix::normalized(rho.add_scaled(-step, c))?;
    Ok(TangentSplit { lambda: 0.5 / step, phi, psi, step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_matrix, random_density, random_hermitian, rng_for};
    use crate::matfun::is_psd;

    fn cz(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn omega_of_maximally_mixed_and_diagonal() {
        let g = build_standard_form(&DensityMatrix::maximally_mixed(3)).unwrap();
        let expected = CMatrix::identity(3, 3).scale(1.0 / 3f64.sqrt());
        assert!(g.omega().distance(&ConeVector::from_matrix(expected)) < 1e-15);

        let p = 0.3;
        let g = build_standard_form(&DensityMatrix::diagonal(&[p, 1.0 - p]).unwrap()).unwrap();
        let om = g.omega();
        assert!((om.as_matrix()[(0, 0)].re - p.sqrt()).abs() < 1e-15);
        assert!((om.as_matrix()[(1, 1)].re - (1.0 - p).sqrt()).abs() < 1e-15);
        assert!((om.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vector_state_is_trace_formula() {
        let mut rng = rng_for(21, 0);
        let rho = random_density(&mut rng, 5);
        let g = build_standard_form(&rho).unwrap();
        for _ in 0..20 {
            let x = gaussian_matrix(&mut rng, 5);
            let lhs = g.vector_state(&x);
            let rhs = rho.expectation_complex(&x);
            assert!((lhs - rhs).norm() <= 1e-12 * x.norm().max(1.0));
        }
    }

    #[test]
    fn modular_power_fixes_omega_and_is_unitary() {
        let mut rng = rng_for(22, 0);
        let rho = random_density(&mut rng, 4);
        let g = build_standard_form(&rho).unwrap();
        for z in [cz(0.3, 0.0), cz(-1.0, 2.0), cz(0.0, 5.0)] {
            let v = apply_modular_power(&g, z, &g.omega());
            assert!(v.distance(&g.omega()) < 1e-10);
        }
        let v = ConeVector::from_matrix(gaussian_matrix(&mut rng, 4));
        let w = apply_modular_power(&g, cz(0.0, 1.7), &v);
        assert!((w.norm() - v.norm()).abs() <= 1e-10 * v.norm());
    }

    #[test]
    fn half_power_moves_square_root_across() {
        let mut rng = rng_for(23, 0);
        let rho = random_density(&mut rng, 4);
        let g = build_standard_form(&rho).unwrap();
        let x = gaussian_matrix(&mut rng, 4);
        let v = g.apply_to_omega(&x);
        let w = apply_modular_power(&g, cz(0.5, 0.0), &v);
        let expected = g.rho_sqrt() * &x;
        assert!(hs_norm(&(w.as_matrix() - expected)) <= 1e-10 * x.norm());
    }

    #[test]
    fn conjugation_examples() {
        let g = build_standard_form(&DensityMatrix::diagonal(&[0.2, 0.8]).unwrap()).unwrap();
        assert!(modular_conjugate(&g.omega()).distance(&g.omega()) < 1e-15);
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = cz(0.0, 1.0);
        let j = modular_conjugate(&ConeVector::from_matrix(m.clone()));
        assert_eq!(j.as_matrix()[(0, 0)], cz(0.0, -1.0));
        assert_eq!(modular_conjugate(&j).as_matrix(), &m);
    }

    #[test]
    fn tomita_maps_x_omega_to_adjoint() {
        let mut rng = rng_for(24, 0);
        let rho = random_density(&mut rng, 4);
        let g = build_standard_form(&rho).unwrap();
        for _ in 0..20 {
            let x = gaussian_matrix(&mut rng, 4);
            let s = g.tomita(&g.apply_to_omega(&x));
            let expected = g.apply_to_omega(&x.adjoint());
            assert!(s.distance(&expected) <= 1e-10 * x.norm());
        }
    }

    #[test]
    fn modular_flow_cases() {
        let mut rng = rng_for(25, 0);
        let rho = random_density(&mut rng, 4);
        let g = build_standard_form(&rho).unwrap();
        let x = random_hermitian(&mut rng, 4);
        assert!(hs_norm(&(modular_flow(&g, &x, cz(0.0, 0.0)) - x.as_matrix())) < 1e-12);
        for t in [0.4, -2.0, 7.5] {
            let xt = modular_flow(&g, &x, cz(t, 0.0));
            let inv = rho.expectation_complex(&xt) - Complex64::from(rho.expectation(&x));
            assert!(inv.norm() <= 1e-10);
        }
        let tracial = build_standard_form(&DensityMatrix::maximally_mixed(4)).unwrap();
        let xt = modular_flow(&tracial, &x, cz(1.3, -0.4));
        assert!(hs_norm(&(xt - x.as_matrix())) < 1e-12);
    }

    #[test]
    fn kms_cases() {
        let mut rng = rng_for(26, 0);
        let x = random_hermitian(&mut rng, 4);
        let y = random_hermitian(&mut rng, 4);
        let tracial = build_standard_form(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert!(kms_boundary_check(&tracial, &x, &y, 0.9) < 1e-14);
        let rho = random_density(&mut rng, 4);
        let g = build_standard_form(&rho).unwrap();
        let id = HermitianMatrix::identity(4);
        for t in [0.0, 0.3, 1.7] {
            assert!(kms_boundary_check(&g, &x, &id, t) <= 1e-10);
            assert!(kms_boundary_check(&g, &x, &y, t) <= 1e-10);
        }
    }

    #[test]
    fn cone_membership_cases() {
        let mut rng = rng_for(27, 0);
        let rho = random_density(&mut rng, 3);
        let g = build_standard_form(&rho).unwrap();
        for alpha in [0.0, 0.1, 0.25, 0.4, 0.5] {
            assert!(cone_membership(&g, &g.omega(), alpha, 1e-9).unwrap());
        }
        // natural cone: xJxΩ = vec(x ρ^{1/2} x†)
        for _ in 0..10 {
            let x = gaussian_matrix(&mut rng, 3);
            let v = ConeVector::from_matrix(&x * g.rho_sqrt() * x.adjoint());
            assert!(cone_membership(&g, &v, 0.25, 1e-9).unwrap());
        }
        let not_psd = ConeVector::from_matrix(HermitianMatrix::from_diagonal(&[1.0, -0.5, 0.2]).into_matrix());
        assert!(!cone_membership(&g, &not_psd, 0.25, 1e-9).unwrap());
        // commutant cone at α = 1/2
        let b = gaussian_matrix(&mut rng, 3);
        let b = &b * b.adjoint();
        let v = ConeVector::from_matrix(g.rho_sqrt() * &b);
        assert!(cone_membership(&g, &v, 0.5, 1e-9).unwrap());
        assert!(cone_membership(&g, &v, 0.6, 1e-9).is_err());
    }

    #[test]
    fn natural_cone_vectors_are_j_fixed() {
        let mut rng = rng_for(28, 0);
        let a = gaussian_matrix(&mut rng, 4);
        let v = ConeVector::from_matrix(&a * a.adjoint());
        assert!(modular_conjugate(&v).distance(&v) < 1e-14);
    }

    #[test]
    fn state_vector_round_trips() {
        let mut rng = rng_for(29, 0);
        let rho = random_density(&mut rng, 4);
        let g = build_standard_form(&rho).unwrap();
        let back = state_of_vector(&g.omega()).unwrap();
        assert!(op_norm(&(back.as_matrix() - rho.as_matrix())) < 1e-12);

        let flat = ConeVector::from_matrix(CMatrix::identity(4, 4).scale(0.5));
        let mixed = state_of_vector(&flat).unwrap();
        assert!(op_norm(&(mixed.as_matrix() - CMatrix::identity(4, 4).scale(0.25))) < 1e-15);

        let a = gaussian_matrix(&mut rng, 4);
        let m = &a * a.adjoint();
        let m = m.scale(1.0 / m.norm());
        let v = ConeVector::from_matrix(m.clone());
        let sigma = state_of_vector(&v).unwrap();
        for _ in 0..10 {
            let x = gaussian_matrix(&mut rng, 4);
            let lhs = sigma.expectation_complex(&x);
            let rhs = v.left_mul(&x).inner(&v);
            assert!((lhs - rhs).norm() <= 1e-12 * x.norm());
        }
        let again = vector_of_state(&sigma);
        assert!(again.distance(&v) < 1e-10);
        assert!(matches!(
            state_of_vector(&ConeVector::from_matrix(m.scale(2.0))),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn radon_nikodym_closed_forms() {
        let g = build_standard_form(&DensityMatrix::diagonal(&[0.5, 0.5]).unwrap()).unwrap();
        let b = commutant_rn(&g, &g.omega()).unwrap();
        assert!((b - CMatrix::identity(2, 2)).norm() < 1e-14);
        let a = algebra_rn(&g, &g.omega()).unwrap();
        assert!((a - CMatrix::identity(2, 2)).norm() < 1e-14);
        assert!((majorization_bound(&g, &g.omega()) - 1.0).abs() < 1e-14);

        let phi = vector_of_state(&DensityMatrix::diagonal(&[0.3, 0.7]).unwrap());
        let b = commutant_rn(&g, &phi).unwrap();
        assert!((b[(0, 0)].re - 0.6f64.sqrt()).abs() < 1e-14);
        assert!((b[(1, 1)].re - 1.4f64.sqrt()).abs() < 1e-14);

        let g = build_standard_form(&DensityMatrix::diagonal(&[0.9, 0.1]).unwrap()).unwrap();
        let phi = vector_of_state(&DensityMatrix::diagonal(&[0.5, 0.5]).unwrap());
        assert!((majorization_bound(&g, &phi) - 5.0).abs() < 1e-12);
        let a = algebra_rn(&g, &phi).unwrap();
        assert!((a[(0, 0)].re - (0.5f64 / 0.9).sqrt()).abs() < 1e-14);
        assert!((a[(1, 1)].re - 5f64.sqrt()).abs() < 1e-14);
        assert!(matches!(commutant_rn_bounded(&g, &phi, 4.0), Err(Error::Majorization { .. })));
        assert!(commutant_rn_bounded(&g, &phi, 5.5).is_ok());
    }

    #[test]
    fn radon_nikodym_defining_relations() {
        let mut rng = rng_for(30, 0);
        let g = build_standard_form(&random_density(&mut rng, 4)).unwrap();
        let phi = vector_of_state(&random_density(&mut rng, 4));
        let b = commutant_rn(&g, &phi).unwrap();
        let a = algebra_rn(&g, &phi).unwrap();
        assert!(g.omega().right_mul(&b).distance(&phi) <= 1e-10);
        assert!(g.apply_to_omega(&a).distance(&phi) <= 1e-10);
        assert!(hs_norm(&(&a - conjugate_commutant(&b))) <= 1e-10);
        assert!((op_norm(&b).powi(2) - majorization_bound(&g, &phi)).abs() <= 1e-10);
        let sigma = state_of_vector(&phi).unwrap();
        for _ in 0..10 {
            let x = gaussian_matrix(&mut rng, 4);
            let xphi = g.apply_to_omega(&x).right_mul(&b);
            assert!(xphi.distance(&phi.left_mul(&x)) <= 1e-10 * x.norm());
            let lhs = g.vector_state(&(a.adjoint() * &x * &a));
            assert!((lhs - sigma.expectation_complex(&x)).norm() <= 1e-10 * x.norm());
        }
    }

    #[test]
    fn tangent_split_cases() {
        let g = build_standard_form(&DensityMatrix::maximally_mixed(2)).unwrap();
        let split = tangent_split(&g, &TangentFunctional::zero(2)).unwrap();
        assert_eq!(split.lambda, 0.0);
        assert!(op_norm(&(split.phi.as_matrix() - g.rho().as_matrix())) < 1e-15);

        let c = TangentFunctional::new(HermitianMatrix::from_diagonal(&[0.5, -0.5])).unwrap();
        let split = tangent_split(&g, &c).unwrap();
        assert!((split.step - 0.5).abs() < 1e-14);
        assert!((split.phi.as_matrix()[(0, 0)].re - 0.75).abs() < 1e-14);
        assert!((split.psi.as_matrix()[(0, 0)].re - 0.25).abs() < 1e-14);
        assert!((split.lambda - 1.0).abs() < 1e-14);

        let mut rng = rng_for(31, 0);
        let rho = random_density(&mut rng, 4);
        let g = build_standard_form(&rho).unwrap();
        let chi = TangentFunctional::projected(&random_hermitian(&mut rng, 4));
        let split = tangent_split(&g, &chi).unwrap();
        let recon = (split.phi.as_matrix() - split.psi.as_matrix()).scale(split.lambda);
        assert!(hs_norm(&(recon - chi.matrix().as_matrix())) <= 1e-12);
        assert!(split.phi.eigenvalues()[0] >= 1e-12 && split.psi.eigenvalues()[0] >= 1e-12);
        let sum = split.phi.as_matrix() + split.psi.as_matrix();
        assert!(hs_norm(&(sum - rho.as_matrix().scale(2.0))) <= 1e-12);
        assert!(is_psd(split.phi.hermitian(), 0.0));
    }

    #[test]
    fn tangent_functional_must_be_traceless() {
        assert!(matches!(
            TangentFunctional::new(HermitianMatrix::identity(2)),
            Err(Error::NotTraceless(_))
        ));
    }
}
