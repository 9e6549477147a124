//! Seeded property checks over random instances, with a serializable report.
//!
//! Each check maps one random trial to a nonnegative residual; a check passes
//! when every trial succeeds and the largest residual is within tolerance.
//! Trials may run in parallel but results are always assembled in trial order,
//! so a report depends only on the configuration.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arcs::{arc_residual, compose_arcs, energy_along, legendre_dual, log_partition, potential, ExponentialArc};
use crate::divergence::{araki_divergence, araki_dual_form, umegaki_divergence};
use crate::error::{Error, Result};
use crate::km_metric::{eguchi_fd_inner, km_inner, km_inner_quadrature, MetricContext};
use crate::matfun::{hs_norm, op_norm, spectral_decompose, CMatrix, DensityMatrix, HermitianMatrix};
use crate::random::{gaussian_matrix, random_density, random_hermitian, rng_for, GENERATOR_NAME};
use crate::standard_form::{
    algebra_rn, apply_modular_power, build_standard_form, commutant_rn, conjugate_commutant, kms_boundary_check,
    majorization_bound, modular_conjugate, state_of_vector, vector_of_state, ConeVector,
};
use crate::submanifold::{
    dual_coords, equal_energy_state, metric_at, potential_theta, pythagorean_residual, solve_theta, EtaPoint,
    SubmanifoldModel, ThetaPoint,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "MODMAN_THREADS";

type TrialFn = fn(&mut Pcg64, usize) -> Result<f64>;

/// One named property check.
#[derive(Clone, Copy)]
pub struct Check {
    pub name: &'static str,
    pub anchor: &'static str,
    /// Acceptance criterion (1 to 13) this check belongs to.
    pub criterion: u8,
    pub tolerance: f64,
    /// Deterministic checks run once regardless of the trial count.
    pub single: bool,
    run: TrialFn,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    /// Trial `i` uses dimension `dims[i % dims.len()]`.
    pub dims: Vec<usize>,
    /// Replaces every tolerance.
    pub tol: Option<f64>,
    /// Per-check tolerances, keyed by check name.
    pub tol_overrides: BTreeMap<String, f64>,
    pub threads: Option<usize>,
}

impl VerifyConfig {
    pub fn new(seed: u64, trials: usize, dims: Vec<usize>) -> Self {
        Self { seed, trials, dims, tol: None, tol_overrides: BTreeMap::new(), threads: None }
    }

    /// Reads the thread cap from [`THREADS_ENV`].
    pub fn threads_from_env(mut self) -> Self {
        self.threads = std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok()).filter(|&t: &usize| t > 0);
        self
    }

    fn tolerance_for(&self, check: &Check) -> f64 {
        self.tol_overrides.get(check.name).copied().or(self.tol).unwrap_or(check.tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub criterion: u8,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Trials that returned an error instead of a residual.
    pub errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub generator: String,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
}

impl VerifyReport {
    /// Records belonging to one acceptance criterion.
    pub fn criterion(&self, c: u8) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(move |r| r.criterion == c)
    }
}

fn stream(check_index: usize, trial: usize) -> u64 {
    ((check_index as u64) << 32) | trial as u64
}

fn run_check(cfg: &VerifyConfig, index: usize, check: &Check) -> CheckRecord {
    let trials = if check.single { 1 } else { cfg.trials };
    let outcomes: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(cfg.seed, stream(index, i));
            let n = cfg.dims[i % cfg.dims.len()];
            (check.run)(&mut rng, n).and_then(|r| {
                if r.is_nan() {
                    Err(Error::Domain("residual is NaN".into()))
                } else {
                    Ok(r)
                }
            })
        })
        .collect();
    let mut max_residual = 0.0f64;
    let mut errors = 0;
    let mut first_error = None;
    for o in outcomes {
        match o {
            Ok(r) => max_residual = max_residual.max(r),
            Err(e) => {
                errors += 1;
                first_error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    let tolerance = cfg.tolerance_for(check);
    CheckRecord {
        name: check.name.to_string(),
        anchor: check.anchor.to_string(),
        criterion: check.criterion,
        trials,
        max_residual,
        tolerance,
        errors,
        first_error,
        pass: errors == 0 && max_residual <= tolerance,
    }
}

/// Runs every check in [`checks`].
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    run_selected(cfg, &checks())
}

pub fn run_selected(cfg: &VerifyConfig, selected: &[Check]) -> Result<VerifyReport> {
    if cfg.dims.is_empty() || cfg.dims.iter().any(|&n| n < 2) {
        return Err(Error::Input("dimensions must be at least 2".into()));
    }
    if cfg.trials == 0 {
        return Err(Error::Input("trial count must be positive".into()));
    }
    let all = checks();
    let body = || {
        selected
            .iter()
            .map(|c| {
                let index = all.iter().position(|a| a.name == c.name).unwrap_or(all.len());
                run_check(cfg, index, c)
            })
            .collect::<Vec<_>>()
    };
    let records = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?
            .install(body),
        None => body(),
    };
    let all_pass = records.iter().all(|r| r.pass);
    Ok(VerifyReport {
        generator: GENERATOR_NAME.to_string(),
        seed: cfg.seed,
        dims: cfg.dims.clone(),
        trials: cfg.trials,
        checks: records,
        all_pass,
    })
}

/// The full list of checks, in report order.
pub fn checks() -> Vec<Check> {
    macro_rules! check {
        ($name:expr, $anchor:expr, $crit:expr, $tol:expr, $f:expr) => {
            Check { name: $name, anchor: $anchor, criterion: $crit, tolerance: $tol, single: false, run: $f }
        };
        ($name:expr, $anchor:expr, $crit:expr, $tol:expr, $f:expr, single) => {
            Check { name: $name, anchor: $anchor, criterion: $crit, tolerance: $tol, single: true, run: $f }
        };
    }
    vec![
        check!("divergence.three-way", "divergence.araki-umegaki-dual", 1, 1e-9, divergence_three_way),
        check!("arcs.definition", "arcs.def.arc-identity", 2, 1e-9, arc_definition),
        check!("arcs.energy-increasing", "arcs.prop.a-energy-monotone", 3, 0.0, energy_increasing),
        check!("arcs.tangent-line", "arcs.prop.c-convexity", 3, 1e-10, tangent_line),
        check!("arcs.legendre", "arcs.prop.d-legendre", 3, 1e-8, legendre_identity),
        check!("arcs.potential-is-log-partition", "matrix.potential-zeta", 4, 1e-10, potential_is_zeta),
        check!("metric.quadrature", "metric.t-omega-integral", 5, 1e-10, metric_quadrature),
        check!("metric.eguchi", "metric.eguchi-derivative", 5, 1e-5, metric_eguchi),
        check!("metric.eguchi-order", "metric.eguchi-derivative.order", 5, EGUCHI_ORDER_TOL, metric_eguchi_order),
        check!("metric.pauli-closed-form", "metric.closed-form", 5, 1e-10, metric_pauli, single),
        check!("arcs.divergence-derivative", "arcs.thm.derivative", 6, 1e-6, divergence_derivative),
        check!("arcs.additivity", "arcs.prop.generator-additivity", 7, 1e-10, additivity),
        check!("modular.kms", "modular.kms-boundary", 8, 1e-10, kms),
        check!("tomita.j-involution", "tomita.j-squared", 9, 1e-10, j_involution),
        check!("tomita.delta-omega", "tomita.delta-fixes-omega", 9, 1e-10, delta_fixes_omega),
        check!("tomita.s-adjoint", "tomita.s-x-omega", 9, 1e-10, s_adjoint),
        check!("tomita.cone-j-fixed", "tomita.natural-cone", 9, 1e-10, cone_j_fixed),
        check!("radon-nikodym.commutant", "rn.commutant-omega", 10, 1e-10, rn_commutant),
        check!("radon-nikodym.algebra", "rn.algebra-conjugate", 10, 1e-10, rn_algebra),
        check!("radon-nikodym.state", "rn.state-identity", 10, 1e-10, rn_state),
        check!("radon-nikodym.majorization", "rn.majorization-constant", 10, 1e-10, rn_majorization),
        check!("flat.gradient", "flat.potential-gradient", 11, 1e-5, flat_gradient),
        check!("flat.hessian", "flat.potential-hessian", 11, 1e-5, flat_hessian),
        check!("flat.newton-round-trip", "flat.coordinate-inverse", 11, 1e-9, newton_round_trip),
        check!("flat.scalar-benchmark", "flat.scalar-atanh", 11, 1e-9, scalar_benchmark, single),
        check!("flat.pythagorean", "flat.pythagorean-equal-energy", 12, 1e-9, pythagorean),
        check!("metric.nondegenerate", "metric.prop.nondegenerate", 13, 1e-6, nondegenerate),
        check!("metric.lower-bound", "metric.prop.nondegenerate.bound", 13, 1e-10, metric_lower_bound),
    ]
}

/// Allowed deviation of the observed finite-difference order from 2.
pub const EGUCHI_ORDER_TOL: f64 = 0.25;

const UNIT_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect()
}

fn random_arc(rng: &mut Pcg64, n: usize) -> Result<ExponentialArc> {
    let rho = random_density(rng, n);
    ExponentialArc::new(rho, random_hermitian(rng, n))
}

fn divergence_three_way(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let s = random_density(rng, n);
    let t = random_density(rng, n);
    let a = araki_divergence(&s, &t)?;
    let u = umegaki_divergence(&s, &t)?;
    let d = araki_dual_form(&s, &t)?;
    Ok((a - u).abs().max((a - d).abs()).max((u - d).abs()))
}

fn arc_definition(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let arc = random_arc(rng, n)?;
    let psi = random_density(rng, n);
    let mut worst = 0.0f64;
    for &s in &UNIT_GRID {
        for &t in &UNIT_GRID {
            worst = worst.max(arc_residual(&arc, &psi, s, t)?);
        }
    }
    Ok(worst)
}

/// Negative part of the smallest forward difference of the energy along the arc;
/// zero exactly when the energy is strictly increasing on the grid.
fn energy_increasing(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let arc = random_arc(rng, n)?;
    if arc.generator().centered(arc.rho()).hs_norm() < 0.1 {
        return Ok(0.0);
    }
    let e = grid(-1.0, 1.0, 20).into_iter().map(|t| energy_along(&arc, t)).collect::<Result<Vec<_>>>()?;
    let min_diff = e.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Ok((f64::MIN_POSITIVE - min_diff).max(0.0))
}

fn tangent_line(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let arc = random_arc(rng, n)?;
    let ts = grid(0.0, 1.0, 10);
    let phi = ts.iter().map(|&t| potential(&arc, t)).collect::<Result<Vec<_>>>()?;
    let slope = ts.iter().map(|&t| energy_along(&arc, t)).collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (i, &t) in ts.iter().enumerate() {
        for (j, &u) in ts.iter().enumerate() {
            let gap = phi[j] - phi[i] - slope[i] * (u - t);
            worst = worst.max(0.0 - gap);
        }
    }
    Ok(worst)
}

fn legendre_identity(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let arc = random_arc(rng, n)?;
    let mut worst = 0.0f64;
    for t0 in [0.25, 0.5, 0.75] {
        let alpha = energy_along(&arc, t0)?;
        let expected = alpha * t0 - potential(&arc, t0)?;
        worst = worst.max((legendre_dual(&arc, alpha)? - expected).abs());
    }
    Ok(worst)
}

fn potential_is_zeta(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let arc = random_arc(rng, n)?;
    let mut worst = 0.0f64;
    for t in grid(-1.0, 1.0, 8) {
        worst = worst.max((potential(&arc, t)? - log_partition(&arc, t)?).abs());
    }
    Ok(worst)
}

fn metric_pair(rng: &mut Pcg64, n: usize) -> (MetricContext, HermitianMatrix, HermitianMatrix) {
    let ctx = MetricContext::new(random_density(rng, n));
    let h = random_hermitian(rng, n);
    let k = random_hermitian(rng, n);
    (ctx, h, k)
}

fn metric_quadrature(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let (ctx, h, k) = metric_pair(rng, n);
    Ok((km_inner(&ctx, &h, &k) - km_inner_quadrature(&ctx, &h, &k, 64)?).abs())
}

fn metric_eguchi(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let (ctx, h, k) = metric_pair(rng, n);
    Ok((km_inner(&ctx, &h, &k) - eguchi_fd_inner(&ctx, &h, &k, 1e-3)?).abs())
}

/// Errors below this level are rounding, not truncation.
pub const EGUCHI_NOISE_FLOOR: f64 = 1e-11;

/// `|p − 2|` for the observed orders `p = log₂(e(δ)/e(δ/2))` over two halvings
/// of the step from `1e-3`. Pairs with an error under [`EGUCHI_NOISE_FLOOR`]
/// are skipped.
fn metric_eguchi_order(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let (ctx, h, k) = metric_pair(rng, n);
    let exact = km_inner(&ctx, &h, &k);
    let errs = [1e-3, 5e-4, 2.5e-4]
        .iter()
        .map(|&s| Ok((eguchi_fd_inner(&ctx, &h, &k, s)? - exact).abs()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(errs
        .windows(2)
        .filter(|w| w[1] > EGUCHI_NOISE_FLOOR)
        .map(|w| ((w[0] / w[1]).log2() - 2.0).abs())
        .fold(0.0, f64::max))
}

fn metric_pauli(_: &mut Pcg64, _: usize) -> Result<f64> {
    let ctx = MetricContext::new(DensityMatrix::diagonal(&[0.75, 0.25])?);
    let mut x = CMatrix::zeros(2, 2);
    x[(0, 1)] = Complex64::new(1.0, 0.0);
    x[(1, 0)] = Complex64::new(1.0, 0.0);
    let x = HermitianMatrix::new(x)?;
    Ok((km_inner(&ctx, &x, &x) - 1.0 / 3f64.ln()).abs())
}

fn divergence_derivative(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let arc = random_arc(rng, n)?;
    let psi = random_density(rng, n);
    let eps = 1e-4;
    let plus = umegaki_divergence(&psi, &arc.evaluate(eps)?.state)?;
    let minus = umegaki_divergence(&psi, &arc.evaluate(-eps)?.state)?;
    let expected = arc.energy(arc.rho()) - arc.energy(&psi);
    Ok(((plus - minus) / (2.0 * eps) - expected).abs())
}

fn additivity(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let rho = random_density(rng, n);
    let h = random_hermitian(rng, n);
    let k = random_hermitian(rng, n);
    compose_arcs(&rho, &h, &k)
}

fn kms(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let g = build_standard_form(&random_density(rng, n))?;
    let x = random_hermitian(rng, n);
    let y = random_hermitian(rng, n);
    let t = rng.random_range(-2.0..2.0);
    Ok(kms_boundary_check(&g, &x, &y, t))
}

fn random_vector(rng: &mut Pcg64, n: usize) -> ConeVector {
    let m = gaussian_matrix(rng, n);
    let scale = 1.0 / m.norm();
    ConeVector::from_matrix(m.scale(scale))
}

fn j_involution(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let v = random_vector(rng, n);
    Ok(modular_conjugate(&modular_conjugate(&v)).distance(&v))
}

fn delta_fixes_omega(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let g = build_standard_form(&random_density(rng, n))?;
    let omega = g.omega();
    let mut worst = 0.0f64;
    for z in [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, rng.random_range(-3.0..3.0))] {
        worst = worst.max(apply_modular_power(&g, z, &omega).distance(&omega));
    }
    Ok(worst)
}

fn s_adjoint(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let g = build_standard_form(&random_density(rng, n))?;
    let x = gaussian_matrix(rng, n);
    let x = x.scale(1.0 / x.norm());
    Ok(g.tomita(&g.apply_to_omega(&x)).distance(&g.apply_to_omega(&x.adjoint())))
}

fn cone_j_fixed(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let g = build_standard_form(&random_density(rng, n))?;
    let x = gaussian_matrix(rng, n);
    let x = x.scale(1.0 / x.norm());
    let v = ConeVector::from_matrix(&x * g.rho_sqrt() * x.adjoint());
    Ok(modular_conjugate(&v).distance(&v))
}

fn rn_setup(rng: &mut Pcg64, n: usize) -> Result<(crate::standard_form::GnsSpace, ConeVector)> {
    let g = build_standard_form(&random_density(rng, n))?;
    let phi = vector_of_state(&random_density(rng, n));
    Ok((g, phi))
}

fn rn_commutant(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let (g, phi) = rn_setup(rng, n)?;
    let b = commutant_rn(&g, &phi)?;
    Ok(g.omega().right_mul(&b).distance(&phi))
}

fn rn_algebra(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let (g, phi) = rn_setup(rng, n)?;
    let a = algebra_rn(&g, &phi)?;
    let b = commutant_rn(&g, &phi)?;
    Ok(g.apply_to_omega(&a).distance(&phi).max(hs_norm(&(&a - conjugate_commutant(&b)))))
}

fn rn_state(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let (g, phi) = rn_setup(rng, n)?;
    let a = algebra_rn(&g, &phi)?;
    let sigma = state_of_vector(&phi)?;
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let x = gaussian_matrix(rng, n);
        let x = x.scale(1.0 / x.norm());
        let lhs = g.vector_state(&(a.adjoint() * &x * &a));
        worst = worst.max((lhs - sigma.expectation_complex(&x)).norm());
    }
    Ok(worst)
}

/// Compares the majorization constant with `‖a′‖²` and with the ratio
/// `ω_Φ(x*x)/ω(x*x)` at its maximizer, and checks random `x` stay below it.
fn rn_majorization(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let (g, phi) = rn_setup(rng, n)?;
    let lambda = majorization_bound(&g, &phi);
    let b = commutant_rn(&g, &phi)?;
    let ratio = |x: &CMatrix| phi.left_mul(x).norm().powi(2) / g.apply_to_omega(x).norm().powi(2);
    let spec = spectral_decompose(&HermitianMatrix::hermitian_part(&(&b * b.adjoint())));
    let v = spec.eigenvectors.column(n - 1).into_owned();
    let mut u = CMatrix::zeros(n, 1);
    u[(0, 0)] = Complex64::new(1.0, 0.0);
    let x_opt = &u * v.adjoint() * g.rho_inv_sqrt();
    let mut worst = (op_norm(&b).powi(2) - lambda).abs().max((ratio(&x_opt) - lambda).abs() / lambda.max(1.0));
    for _ in 0..5 {
        let x = gaussian_matrix(rng, n);
        worst = worst.max((ratio(&x) - lambda).max(0.0) / lambda.max(1.0));
    }
    Ok(worst)
}

fn random_model(rng: &mut Pcg64, n: usize, orthonormalize: bool) -> Result<SubmanifoldModel> {
    let rho = random_density(rng, n);
    let m = rng.random_range(1..=3usize.min(n * n - 1));
    let gens = (0..m).map(|_| random_hermitian(rng, n)).collect();
    SubmanifoldModel::new(rho, gens, orthonormalize)
}

fn random_theta(rng: &mut Pcg64, m: usize, scale: f64) -> ThetaPoint {
    ThetaPoint((0..m).map(|_| rng.random_range(-scale..scale)).collect())
}

fn shifted(theta: &ThetaPoint, i: usize, d: f64) -> ThetaPoint {
    let mut t = theta.clone();
    t.0[i] += d;
    t
}

fn flat_gradient(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let model = random_model(rng, n, false)?;
    let theta = random_theta(rng, model.num_params(), 1.0);
    let eta = dual_coords(&model, &theta)?;
    let d = 1e-4;
    let mut worst = 0.0f64;
    for i in 0..model.num_params() {
        let fd = (potential_theta(&model, &shifted(&theta, i, d))? - potential_theta(&model, &shifted(&theta, i, -d))?)
            / (2.0 * d);
        worst = worst.max((fd - eta.0[i]).abs());
    }
    Ok(worst)
}

fn flat_hessian(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let model = random_model(rng, n, false)?;
    let theta = random_theta(rng, model.num_params(), 1.0);
    let g = metric_at(&model, &theta)?;
    let d = 1e-4;
    let mut worst = 0.0f64;
    for j in 0..model.num_params() {
        let up = dual_coords(&model, &shifted(&theta, j, d))?;
        let down = dual_coords(&model, &shifted(&theta, j, -d))?;
        for i in 0..model.num_params() {
            worst = worst.max(((up.0[i] - down.0[i]) / (2.0 * d) - g[(i, j)]).abs());
        }
    }
    Ok(worst)
}

fn newton_round_trip(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let model = random_model(rng, n, true)?;
    let target = random_theta(rng, model.num_params(), 1.0);
    let eta = dual_coords(&model, &target)?;
    Ok(solve_theta(&model, &eta)?.max_abs_diff(&target))
}

fn scalar_benchmark(_: &mut Pcg64, _: usize) -> Result<f64> {
    let model =
        SubmanifoldModel::new(DensityMatrix::maximally_mixed(2), vec![HermitianMatrix::from_diagonal(&[1.0, -1.0])], false)?;
    let theta = solve_theta(&model, &EtaPoint(vec![0.5]))?;
    Ok((theta.0[0] - 0.5f64.atanh()).abs())
}

fn pythagorean(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let model = random_model(rng, n, false)?;
    let theta = random_theta(rng, model.num_params(), 1.0);
    let arc = model.arc(&theta)?;
    let direction = random_hermitian(rng, n);
    let mut worst = 0.0f64;
    for &s in &UNIT_GRID {
        let gs = arc.evaluate(s)?.state;
        let psi = equal_energy_state(&gs, arc.generator(), &direction, 0.5)?;
        for &t in &UNIT_GRID {
            worst = worst.max(pythagorean_residual(&model, &psi, &theta, s, t)?);
        }
    }
    Ok(worst)
}

/// `‖h_c‖` over generators whose Kubo-Mori norm vanishes (`≤ 1e-12`); zero
/// when none does. Generators are random unit-norm matrices, exact multiples
/// of the identity, and multiples of the identity perturbed at scale `1e-9`.
fn nondegenerate(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let ctx = MetricContext::new(random_density(rng, n));
    let c = rng.random_range(-1.0..1.0);
    let id = HermitianMatrix::identity(n).scale(c);
    let hs = [random_hermitian(rng, n), id.clone(), id.add_scaled(1e-9, &random_hermitian(rng, n))];
    let mut worst = 0.0f64;
    for h in &hs {
        if km_inner(&ctx, h, h) <= 1e-12 {
            worst = worst.max(h.centered(ctx.rho()).hs_norm());
        }
    }
    Ok(worst)
}

/// Relative violation of `km(h, h) ≥ p_min ‖h_c‖²` for `h = cI + δk` with
/// δ from `1` down to `1e-12`.
fn metric_lower_bound(rng: &mut Pcg64, n: usize) -> Result<f64> {
    let ctx = MetricContext::new(random_density(rng, n));
    let mut worst = 0.0f64;
    for e in 0..=12 {
        let c = rng.random_range(-1.0..1.0);
        let h = HermitianMatrix::identity(n).scale(c).add_scaled(10f64.powi(-e), &random_hermitian(rng, n));
        let hc = h.centered(ctx.rho()).hs_norm().powi(2);
        if hc > 0.0 {
            worst = worst.max(1.0 - km_inner(&ctx, &h, &h) / (ctx.min_log_mean() * hc));
        }
    }
    Ok(worst)
}
