//! The `modman` command line.
//!
//! Inputs omitted on the command line are drawn at random from `--seed` and
//! `--dim`. Exit codes: 0 success, 1 verify failure or numerical failure,
//! 2 input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand_pcg::Pcg64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arcs::{energy_along, potential, ExponentialArc};
use crate::divergence::{araki_divergence, araki_dual_form, umegaki_divergence};
use crate::error::{Error, Result};
use crate::io::{parse_vector, read_density, read_hermitian, read_model, scalars_csv, table_csv, MatrixJson, TableRow};
use crate::km_metric::{eguchi_fd_inner, km_inner, km_inner_quadrature, t_vector_of_generator, MetricContext};
use crate::matfun::{DensityMatrix, HermitianMatrix};
use crate::random::{random_density, random_hermitian, rng_for};
use crate::standard_form::{build_standard_form, kms_boundary_check};
use crate::submanifold::{
    dual_coords, dual_potential, e_geodesic, m_geodesic, metric_at, potential_theta, solve_theta_with, state_at,
    EtaPoint, SolveOptions, SubmanifoldModel, ThetaPoint,
};
use crate::verify::{checks, run_verify, VerifyConfig, VerifyReport};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 64;
const DEFAULT_DIM: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeodesicKind {
    /// Straight line in θ.
    E,
    /// Straight line in the state (mixture).
    M,
}

#[derive(Debug, Parser)]
#[command(name = "modman", version, about = "Modular theory and quantum information geometry in finite dimension")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Matrix dimension for random instances, 2 to 64.
    #[arg(long, global = true)]
    pub dim: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Trials per verify check.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,

    /// Tolerance override: `VALUE` for all checks, or `NAME=VALUE`.
    #[arg(long, global = true)]
    pub tol: Vec<String>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Araki, Umegaki and dual-form relative entropy D(σ‖τ).
    Divergence {
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        tau: Option<PathBuf>,
    },
    /// Tabulate an exponential arc γ_t = exp(log ρ + t h − ζ(t)).
    Arc {
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(long)]
        generator: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Kubo-Mori product of two generators, computed four ways.
    Metric {
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(long)]
        h: Option<PathBuf>,
        #[arg(long)]
        k: Option<PathBuf>,
        /// Finite-difference step of the divergence derivative.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Gauss-Legendre nodes of the integral form.
        #[arg(long, default_value_t = 64)]
        nodes: usize,
    },
    /// Evaluate a submanifold at θ: state, η, potentials, metric.
    Model {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Comma-separated θ; zero by default.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        /// Number of generators of a random model.
        #[arg(long, default_value_t = 2)]
        params: usize,
    },
    /// Find θ with η(θ) equal to the given expectations.
    Solve {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Comma-separated η.
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long, default_value_t = 2)]
        params: usize,
    },
    /// Tabulate an e- or m-geodesic between two parameter points.
    Geodesic {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, value_enum, default_value_t = GeodesicKind::E)]
        kind: GeodesicKind,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 2)]
        params: usize,
    },
    /// KMS boundary residual |ω(τ_{t−i}(x) y) − ω(y τ_t(x))|.
    Kms {
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(long)]
        x: Option<PathBuf>,
        #[arg(long)]
        y: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
    },
    /// Run the seeded property suite and report per-check residuals.
    Verify,
}

/// A command's result before rendering.
#[derive(Debug)]
pub enum Output {
    Record(Value),
    Table { meta: Value, rows: Vec<TableRow> },
    Report(VerifyReport),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Record(v), Format::Json) => pretty(v),
            (Output::Record(v), Format::Csv) => scalars_csv(v),
            (Output::Table { meta, rows }, Format::Json) => {
                let mut v = meta.clone();
                v["rows"] = serde_json::to_value(rows).expect("rows serialize");
                pretty(&v)
            }
            (Output::Table { rows, .. }, Format::Csv) => table_csv(rows),
            (Output::Report(r), Format::Json) => pretty(r),
            (Output::Report(r), Format::Csv) => {
                let mut out = String::from("name,anchor,criterion,trials,max_residual,tolerance,errors,pass\n");
                for c in &r.checks {
                    out.push_str(&format!(
                        "{},{},{},{},{:e},{:e},{},{}\n",
                        c.name, c.anchor, c.criterion, c.trials, c.max_residual, c.tolerance, c.errors, c.pass
                    ));
                }
                out
            }
        }
    }

    /// 1 for a failed verify report, else 0.
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Report(r) if !r.all_pass => 1,
            _ => 0,
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

struct Tolerances {
    global: Option<f64>,
    named: BTreeMap<String, f64>,
}

fn parse_tol(value: &str) -> Result<f64> {
    let v: f64 = value.trim().parse().map_err(|_| Error::Input(format!("bad tolerance {value:?}")))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Input(format!("tolerance must be positive, got {value}")))
    }
}

fn parse_tolerances(items: &[String]) -> Result<Tolerances> {
    let mut t = Tolerances { global: None, named: BTreeMap::new() };
    for item in items {
        match item.split_once('=') {
            Some((name, v)) => {
                t.named.insert(name.trim().to_string(), parse_tol(v)?);
            }
            None => t.global = Some(parse_tol(item)?),
        }
    }
    Ok(t)
}

struct Env {
    dim: usize,
    rng: Pcg64,
}

impl Env {
    fn density(&mut self, path: &Option<PathBuf>) -> Result<DensityMatrix> {
        match path {
            Some(p) => read_density(p),
            None => Ok(random_density(&mut self.rng, self.dim)),
        }
    }

    fn hermitian(&mut self, path: &Option<PathBuf>) -> Result<HermitianMatrix> {
        match path {
            Some(p) => read_hermitian(p),
            None => Ok(random_hermitian(&mut self.rng, self.dim)),
        }
    }

    fn model(&mut self, path: &Option<PathBuf>, params: usize) -> Result<SubmanifoldModel> {
        match path {
            Some(p) => read_model(p),
            None => {
                if params == 0 || params >= self.dim * self.dim {
                    return Err(Error::Input(format!("--params must be in [1, {}]", self.dim * self.dim - 1)));
                }
                let rho = random_density(&mut self.rng, self.dim);
                let gens = (0..params).map(|_| random_hermitian(&mut self.rng, self.dim)).collect();
                SubmanifoldModel::new(rho, gens, true)
            }
        }
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

fn theta_arg(model: &SubmanifoldModel, s: Option<&str>) -> Result<ThetaPoint> {
    let v = match s {
        Some(s) => parse_vector(s)?,
        None => vec![0.0; model.num_params()],
    };
    same_dim(model.num_params(), v.len())?;
    Ok(ThetaPoint(v))
}

fn grid(t_min: f64, t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !t_min.is_finite() || !t_max.is_finite() || t_min > t_max {
        return Err(Error::Input("grid needs t_min ≤ t_max and steps ≥ 1".into()));
    }
    Ok((0..=steps).map(|i| t_min + (t_max - t_min) * i as f64 / steps as f64).collect())
}

fn row(t: f64, quantity: impl Into<String>, value: f64) -> TableRow {
    TableRow { t, quantity: quantity.into(), value }
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<Output> {
    let dim = cli.dim.unwrap_or(DEFAULT_DIM);
    if !(MIN_DIM..=MAX_DIM).contains(&dim) {
        return Err(Error::Input(format!("--dim must be in [{MIN_DIM}, {MAX_DIM}], got {dim}")));
    }
    let tols = parse_tolerances(&cli.tol)?;
    let mut env = Env { dim, rng: rng_for(cli.seed, 0) };
    match &cli.command {
        Command::Divergence { sigma, tau } => {
            let s = env.density(sigma)?;
            let t = env.density(tau)?;
            same_dim(s.dim(), t.dim())?;
            let araki = araki_divergence(&s, &t)?;
            Ok(Output::Record(json!({
                "dim": s.dim(),
                "divergence": araki,
                "araki": araki,
                "umegaki": umegaki_divergence(&s, &t)?,
                "dual_form": araki_dual_form(&s, &t)?,
            })))
        }
        Command::Arc { rho, generator, t_min, t_max, steps } => {
            let rho = env.density(rho)?;
            let h = env.hermitian(generator)?;
            same_dim(rho.dim(), h.dim())?;
            let arc = ExponentialArc::new(rho, h)?;
            let mut rows = Vec::new();
            for t in grid(*t_min, *t_max, *steps)? {
                let point = arc.evaluate(t)?;
                rows.push(row(t, "zeta", point.log_partition));
                rows.push(row(t, "energy", energy_along(&arc, t)?));
                rows.push(row(t, "potential", potential(&arc, t)?));
                rows.push(row(t, "divergence_to_rho", umegaki_divergence(&point.state, arc.rho())?));
            }
            Ok(Output::Table { meta: json!({ "dim": arc.dim() }), rows })
        }
        Command::Metric { rho, h, k, step, nodes } => {
            let rho = env.density(rho)?;
            let h = env.hermitian(h)?;
            let k = env.hermitian(k)?;
            same_dim(rho.dim(), h.dim())?;
            same_dim(rho.dim(), k.dim())?;
            if *nodes == 0 {
                return Err(Error::Input("--nodes must be positive".into()));
            }
            let ctx = MetricContext::new(rho);
            let t_form = t_vector_of_generator(&ctx, &h).inner(&t_vector_of_generator(&ctx, &k)).re;
            Ok(Output::Record(json!({
                "dim": ctx.dim(),
                "km_inner": km_inner(&ctx, &h, &k),
                "t_operator": t_form,
                "quadrature": km_inner_quadrature(&ctx, &h, &k, *nodes)?,
                "eguchi": eguchi_fd_inner(&ctx, &h, &k, *step)?,
                "step": step,
                "nodes": nodes,
            })))
        }
        Command::Model { model, theta, params } => {
            let model = env.model(model, *params)?;
            let theta = theta_arg(&model, theta.as_deref())?;
            let eta = dual_coords(&model, &theta)?;
            let g = metric_at(&model, &theta)?;
            let m = model.num_params();
            let metric: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| g[(i, j)]).collect()).collect();
            Ok(Output::Record(json!({
                "dim": model.dim(),
                "theta": theta.0,
                "eta": eta.0,
                "potential": potential_theta(&model, &theta)?,
                "dual_potential": umegaki_divergence(&state_at(&model, &theta)?, model.rho())?,
                "metric": metric,
                "state": MatrixJson::from_matrix(state_at(&model, &theta)?.as_matrix()),
            })))
        }
        Command::Solve { model, eta, params } => {
            let model = env.model(model, *params)?;
            let target = EtaPoint(parse_vector(eta)?);
            same_dim(model.num_params(), target.0.len())?;
            let mut opts = SolveOptions::default();
            if let Some(t) = tols.global {
                opts.tol = t;
            }
            let theta = solve_theta_with(&model, &target, &opts)?;
            let reached = dual_coords(&model, &theta)?;
            Ok(Output::Record(json!({
                "dim": model.dim(),
                "theta": theta.0,
                "eta": reached.0,
                "residual": reached.max_abs_diff(&target),
                "dual_potential": dual_potential(&model, &target)?,
            })))
        }
        Command::Geodesic { model, from, to, kind, steps, params } => {
            let model = env.model(model, *params)?;
            let a = theta_arg(&model, from.as_deref())?;
            let b = theta_arg(&model, Some(to))?;
            let (sa, sb) = (state_at(&model, &a)?, state_at(&model, &b)?);
            let mut rows = Vec::new();
            for t in grid(0.0, 1.0, *steps)? {
                let state = match kind {
                    GeodesicKind::E => e_geodesic(&model, &a, &b, t)?,
                    GeodesicKind::M => m_geodesic(&sa, &sb, t)?,
                };
                for (i, h) in model.generators().iter().enumerate() {
                    rows.push(row(t, format!("eta.{i}"), state.expectation(h)));
                }
                rows.push(row(t, "divergence_to_rho", umegaki_divergence(&state, model.rho())?));
            }
            let kind = match kind {
                GeodesicKind::E => "e",
                GeodesicKind::M => "m",
            };
            Ok(Output::Table { meta: json!({ "dim": model.dim(), "kind": kind, "from": a.0, "to": b.0 }), rows })
        }
        Command::Kms { rho, x, y, t } => {
            if !t.is_finite() {
                return Err(Error::Input("--t must be finite".into()));
            }
            let rho = env.density(rho)?;
            let x = env.hermitian(x)?;
            let y = env.hermitian(y)?;
            same_dim(rho.dim(), x.dim())?;
            same_dim(rho.dim(), y.dim())?;
            let g = build_standard_form(&rho)?;
            Ok(Output::Record(json!({ "dim": rho.dim(), "t": t, "residual": kms_boundary_check(&g, &x, &y, *t) })))
        }
        Command::Verify => {
            let dims = match cli.dim {
                Some(n) => vec![n],
                None => (2..=8).collect(),
            };
            let known = checks();
            if let Some(name) = tols.named.keys().find(|n| !known.iter().any(|c| c.name == n.as_str())) {
                return Err(Error::Input(format!("unknown check {name:?} in --tol")));
            }
            let mut cfg = VerifyConfig::new(cli.seed, cli.trials, dims).threads_from_env();
            cfg.tol = tols.global;
            cfg.tol_overrides = tols.named;
            Ok(Output::Report(run_verify(&cfg)?))
        }
    }
}

/// Parses `args`, runs the command, writes the output and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let text = output.render(cli.format);
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            output.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input() {
                2
            } else {
                1
            }
        }
    }
}

