//! The `hspec` command line: spec-file ingestion, one subcommand per library
//! operation, and the case-study runner.

mod cases;
pub mod document;

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arithmetic::{
    independence_by_coordinate, strongest_coordinate, ArithmeticError, RelationReport, DEFAULT_BOUND,
    DEFAULT_TOLERANCE,
};
use crate::model::{simultaneous_diagonalize, ModelError, OperatorSpec};
use crate::operator::{
    apply, endpoint_ratio, near_extremizer, norm_ratio_experiment, random_gaussians, sharpness_experiment,
    single_ratio, OperatorError,
};
use crate::spectra::{
    annulus_analytic, operator_norm_grid, resolve_grid, rotational_invariance_check, spectrum_frequency_grid,
    spectrum_torus, truncation_convergence, Extent, GridPlan, ResolvedGrid, SpectraError, SpectrumApprox,
    TorusSampler,
};
use crate::symbols::{matrix_symbol, norm_bound, SymbolData, SymbolError};
pub use cases::{run_case_study, CaseParams, CASE_NAMES};
use document::{cloud_csv, cloud_json, complex_json, digest_hex, finite, read_spec, ResultDocument, SpecInput};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Validation { path: PathBuf, source: ModelError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error("{0}")]
    Flag(String),
    #[error("unknown case study \"{0}\" (expected one of: {list})", list = CASE_NAMES.join(", "))]
    UnknownCase(String),
}

#[derive(Debug, Parser)]
#[command(name = "hspec", version, about = "Spectra, symbols and norms of discrete Hausdorff operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Point clouds and truncation tables only.
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Grid,
    Torus,
    Analytic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Φ(s), φ(s) and φ*(s) at one frequency.
    Symbol(SymbolArgs),
    /// Approximate the spectrum as a point cloud.
    Spectrum(SpectrumArgs),
    /// N_p bound, and for p = 2 the symbol supremum.
    Norm(NormArgs),
    /// Integer-relation check of log|a(k)| per eigenvalue coordinate.
    Relations(RelationsArgs),
    /// Rotational-invariance check of a spectrum cloud.
    Invariance(InvarianceArgs),
    /// Distances between successive truncation spectra against the tail bound.
    Truncate(TruncateArgs),
    /// Apply the operator to test functions and measure norm ratios.
    Apply(ApplyArgs),
    /// Norm-sharpness ratio for a one-dimensional operator with dilations x ↦ kx.
    Sharpness(SharpnessArgs),
    /// Run a named case study and check its assertions.
    Case(CaseArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Truncation order used when the spec file names a generator.
    #[arg(long, default_value_t = 10)]
    pub n: u64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value = "auto", value_parser = parse_extent)]
    pub span: Extent,
    #[arg(long, default_value = "auto", value_parser = parse_extent)]
    pub step: Extent,
}

impl GridArgs {
    fn plan(&self) -> GridPlan {
        GridPlan {
            span: self.span,
            step: self.step,
            ..GridPlan::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    /// Total torus samples (lattice plus uniform); `1e6` notation is accepted.
    #[arg(long, default_value_t = 1_000_000, value_parser = parse_count)]
    pub samples: usize,
}

impl SamplerArgs {
    pub fn sampler(&self, seed: u64) -> Result<TorusSampler, CliError> {
        torus_sampler(self.samples, seed)
    }
}

#[derive(Debug, Clone, Args)]
pub struct RelationArgs {
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: u32,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SymbolArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Frequency s, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_real)]
    pub s: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = Method::Grid)]
    pub method: Method,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[command(flatten)]
    pub relation: RelationArgs,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Exponent p in [1, ∞]; `inf` is accepted.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct RelationsArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub relation: RelationArgs,
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    /// Angles in radians (`pi` allowed); 8 seeded random angles by default.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_real)]
    pub angles: Option<Vec<f64>>,
    /// Pass threshold; 3·resolution by default.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TruncateArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Orders, as a list `5,6,7` or a range `5..10`.
    #[arg(long, default_value = "5..10", value_parser = parse_orders)]
    pub orders: Orders,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[command(flatten)]
    pub relation: RelationArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionKind {
    /// Seeded random Gaussians.
    Gaussian,
    /// x^{−1/p} on (t, 1/t), one dimension only.
    NearExtremizer,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = FunctionKind::Gaussian)]
    pub function: FunctionKind,
    #[arg(long, default_value_t = 20)]
    pub gaussians: usize,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub t: f64,
    /// Slack added to the symbol supremum when checking ratios.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Points at which Hf is evaluated for the first function, `x1,x2;y1,y2`.
    #[arg(long, value_delimiter = ';', allow_hyphen_values = true, value_parser = parse_list)]
    pub x: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    /// Exponent p in [1, ∞]; 1 and `inf` use the exact endpoint identities.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Cutoff parameters t in (0, 1).
    #[arg(long, default_value = "1e-2,1e-4,1e-6,1e-8", value_delimiter = ',', value_parser = parse_real)]
    pub t: Vec<f64>,
    /// Coefficients `k:c` of the dilations x ↦ kx.
    #[arg(long, default_value = "1:1,2:1", value_delimiter = ',', value_parser = parse_coeff)]
    pub coeffs: Vec<(u64, f64)>,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    pub name: String,
    /// Operator for pantograph-classify (two-term annulus by default).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub params: CaseParams,
}

pub fn parse_extent(s: &str) -> Result<Extent, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Extent::Auto);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(Extent::Fixed(v)),
        _ => Err(format!("expected `auto` or a positive number, got `{s}`")),
    }
}

/// A sample count, written as an integer or in exponent notation (`1e6`).
pub fn parse_count(s: &str) -> Result<usize, String> {
    s.parse::<usize>().or_else(|_| match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= usize::MAX as f64 => Ok(x as usize),
        _ => Err(format!("`{s}` is not a whole number")),
    })
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let lower = body.to_ascii_lowercase();
    let value = if let Some(mult) = lower.strip_suffix("pi") {
        let m = mult.trim_end_matches('*');
        if m.is_empty() {
            PI
        } else {
            m.parse::<f64>().map_err(|_| format!("bad number `{s}`"))? * PI
        }
    } else {
        body.parse::<f64>().map_err(|_| format!("bad number `{s}`"))?
    };
    Ok(sign * value)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_real).collect()
}

/// Truncation orders given as `a..b` or `a,b,c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orders(pub Vec<u64>);

pub fn parse_orders(s: &str) -> Result<Orders, String> {
    let bad = || format!("expected `a..b` or a comma list of orders, got `{s}`");
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok(Orders((a..=b).collect()));
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()
        .map(Orders)
}

/// One `k:c` pair.
pub fn parse_coeff(pair: &str) -> Result<(u64, f64), String> {
    let (k, c) = pair
        .split_once(':')
        .ok_or_else(|| format!("expected `k:c`, got `{pair}`"))?;
    let k: u64 = k.trim().parse().map_err(|_| format!("bad index `{k}`"))?;
    Ok((k, parse_real(c)?))
}

pub fn torus_sampler(total: usize, seed: u64) -> Result<TorusSampler, CliError> {
    if total < 10 {
        return Err(CliError::Flag(format!("--samples {total} is too small")));
    }
    let random_points = (total / 100).clamp(1, 10_000);
    Ok(TorusSampler {
        lattice_points: total - random_points,
        random_points,
        seed,
    })
}

/// `count` seeded angles, uniform in `(0, 2π)`.
pub fn random_angles(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.0..2.0 * PI)).collect()
}

pub(crate) fn relation_json(r: &RelationReport) -> Value {
    json!({
        "verdict": r.verdict,
        "relation": r.relation,
        "residual": finite(r.residual),
        "search_bound": r.search_bound,
    })
}

pub(crate) fn grid_json(g: &ResolvedGrid) -> Value {
    json!({
        "basis": g.basis,
        "span": g.span,
        "step": g.step,
        "per_axis": g.per_axis,
        "points": g.len(),
    })
}

pub(crate) fn sampler_json(s: &TorusSampler) -> Value {
    json!({
        "kind": "kronecker+uniform",
        "lattice_points": s.lattice_points,
        "random_points": s.random_points,
        "seed": s.seed,
    })
}

pub(crate) fn approx_summary(a: &SpectrumApprox) -> Value {
    json!({
        "method": a.method,
        "sample_count": a.sample_count,
        "distinct_points": a.points.len(),
        "resolution": finite(a.resolution),
        "resolution_note": "covering-radius estimate, not a certificate",
        "min_modulus": finite(a.min_modulus()),
        "max_modulus": finite(a.max_modulus()),
        "annulus": a.annulus,
    })
}

/// Strongest per-coordinate independence verdict of a finite spec.
pub(crate) fn strongest_relation(spec: &OperatorSpec, bound: u32, tol: f64) -> Result<(usize, RelationReport), CliError> {
    let diag = simultaneous_diagonalize(spec)?;
    Ok(strongest_coordinate(spec, &diag, bound, tol)?)
}

/// What a command produced: the bytes to emit and whether every check held.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn json(doc: &ResultDocument) -> Self {
        Self {
            text: doc.to_json(),
            passed: true,
        }
    }
}

struct Context {
    seed: u64,
    format: Format,
}

impl Context {
    fn csv_unsupported(&self, op: &str) -> Result<(), CliError> {
        if self.format == Format::Csv {
            return Err(CliError::Flag(format!(
                "--format csv applies to point clouds and truncation tables, not to `{op}`"
            )));
        }
        Ok(())
    }
}

fn load(args: &SpecArgs) -> Result<(SpecInput, OperatorSpec), CliError> {
    let input = read_spec(&args.spec)?;
    let op = input.spec.operator(args.n)?;
    Ok((input, op))
}

fn base_doc(op: &str, input: &SpecInput, ctx: &Context) -> ResultDocument {
    let mut doc = ResultDocument::new(op, input.digest(), ctx.seed);
    doc.param("spec", input.path.display().to_string());
    if input.spec.is_generator() {
        doc.param("generator", true);
    }
    doc
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = Context {
        seed: cli.seed,
        format: cli.format,
    };
    match &cli.command {
        Command::Symbol(a) => symbol_cmd(a, &ctx),
        Command::Spectrum(a) => spectrum_cmd(a, &ctx),
        Command::Norm(a) => norm_cmd(a, &ctx),
        Command::Relations(a) => relations_cmd(a, &ctx),
        Command::Invariance(a) => invariance_cmd(a, &ctx),
        Command::Truncate(a) => truncate_cmd(a, &ctx),
        Command::Apply(a) => apply_cmd(a, &ctx),
        Command::Sharpness(a) => sharpness_cmd(a, &ctx),
        Command::Case(a) => {
            ctx.csv_unsupported("case")?;
            let input = a.spec.as_deref().map(read_spec).transpose()?;
            let (doc, passed) = run_case_study(&a.name, &a.params, input.as_ref(), ctx.seed)?;
            Ok(Outcome {
                text: doc.to_json(),
                passed,
            })
        }
    }
}

fn symbol_cmd(a: &SymbolArgs, ctx: &Context) -> Result<Outcome, CliError> {
    ctx.csv_unsupported("symbol")?;
    let (input, spec) = load(&a.spec)?;
    let data = SymbolData::from_spec(&spec)?;
    let eval = matrix_symbol(&data, &a.s)?;
    let mut doc = base_doc("symbol", &input, ctx);
    doc.param("s", a.s.clone());
    doc.output("matrix", serde_json::to_value(&eval).expect("serializable")["matrix"].clone())
        .output("scalar", eval.scalar.map(complex_json))
        .output("conjugate_scalar", eval.conjugate_scalar.map(complex_json))
        .output("matrix_norm", eval.norm())
        .output("n2", spec.n2());
    Ok(Outcome::json(&doc))
}

/// Computes a spectrum approximation and records how it was obtained.
fn compute_spectrum(
    a: &SpectrumArgs,
    spec: &OperatorSpec,
    doc: &mut ResultDocument,
    seed: u64,
) -> Result<SpectrumApprox, CliError> {
    let data = SymbolData::from_spec(spec)?;
    doc.param(
        "method",
        match a.method {
            Method::Grid => "grid",
            Method::Torus => "torus",
            Method::Analytic => "analytic",
        },
    );
    match a.method {
        Method::Grid => {
            doc.param("span_requested", extent_json(a.grid.span))
                .param("step_requested", extent_json(a.grid.step));
            let grid = resolve_grid(&data, &a.grid.plan())?;
            doc.param("grid", grid_json(&grid));
            Ok(spectrum_frequency_grid(&data, &grid))
        }
        Method::Torus | Method::Analytic => {
            let (coord, relation) = strongest_relation(spec, a.relation.bound, a.relation.tol)?;
            doc.param("bound", a.relation.bound)
                .param("tolerance", a.relation.tol)
                .output("relation", relation_json(&relation))
                .output("relation_coordinate", coord);
            if a.method == Method::Torus {
                let sampler = a.sampler.sampler(seed)?;
                doc.param("sampler", sampler_json(&sampler));
                Ok(spectrum_torus(&data, &relation, &sampler)?)
            } else {
                Ok(annulus_analytic(&data, &relation)?)
            }
        }
    }
}

fn extent_json(e: Extent) -> Value {
    match e {
        Extent::Auto => json!("auto"),
        Extent::Fixed(v) => json!(v),
    }
}

fn spectrum_cmd(a: &SpectrumArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let (input, spec) = load(&a.spec)?;
    let mut doc = base_doc("spectrum", &input, ctx);
    let approx = compute_spectrum(a, &spec, &mut doc, ctx.seed)?;
    if ctx.format == Format::Csv {
        return Ok(Outcome {
            text: cloud_csv(&approx.points),
            passed: true,
        });
    }
    doc.output("summary", approx_summary(&approx))
        .output("points", cloud_json(&approx.points));
    Ok(Outcome::json(&doc))
}

fn norm_cmd(a: &NormArgs, ctx: &Context) -> Result<Outcome, CliError> {
    ctx.csv_unsupported("norm")?;
    if !(a.p >= 1.0) {
        return Err(OperatorError::BadExponent(a.p).into());
    }
    let (input, spec) = load(&a.spec)?;
    let mut doc = base_doc("norm", &input, ctx);
    doc.param("p", finite(a.p));
    doc.output("n_p", norm_bound(&spec, a.p));
    if a.p == 2.0 {
        let data = SymbolData::from_spec(&spec)?;
        let grid = resolve_grid(&data, &a.grid.plan())?;
        let est = operator_norm_grid(&data, &grid);
        doc.param("grid", grid_json(&grid))
            .output("symbol_sup", est.sup)
            .output("symbol_argmax", est.argmax);
    }
    Ok(Outcome::json(&doc))
}

fn relations_cmd(a: &RelationsArgs, ctx: &Context) -> Result<Outcome, CliError> {
    ctx.csv_unsupported("relations")?;
    let (input, spec) = load(&a.spec)?;
    let diag = simultaneous_diagonalize(&spec)?;
    let reports = independence_by_coordinate(&spec, &diag, a.relation.bound, a.relation.tol)?;
    let (coord, best) = strongest_coordinate(&spec, &diag, a.relation.bound, a.relation.tol)?;
    let mut doc = base_doc("relations", &input, ctx);
    doc.param("bound", a.relation.bound)
        .param("tolerance", a.relation.tol)
        .param(
            "path",
            if spec.entries().iter().all(|e| e.exact_eigenvalues.is_some()) {
                "exact"
            } else {
                "numeric"
            },
        )
        .output("coordinates", reports.iter().map(relation_json).collect::<Vec<_>>())
        .output("strongest_coordinate", coord)
        .output("verdict", json!(best.verdict));
    Ok(Outcome::json(&doc))
}

fn invariance_cmd(a: &InvarianceArgs, ctx: &Context) -> Result<Outcome, CliError> {
    ctx.csv_unsupported("invariance")?;
    let (input, spec) = load(&a.spectrum.spec)?;
    let mut doc = base_doc("invariance", &input, ctx);
    let approx = compute_spectrum(&a.spectrum, &spec, &mut doc, ctx.seed)?;
    let angles = a.angles.clone().unwrap_or_else(|| random_angles(8, ctx.seed));
    let report = rotational_invariance_check(&approx, &angles, a.threshold)?;
    doc.param("angles", angles)
        .output("summary", approx_summary(&approx))
        .output("verdict", if report.passed { "Pass" } else { "Fail" })
        .output("tolerance", report.tolerance)
        .output(
            "distances",
            report
                .distances
                .iter()
                .map(|(t, d)| json!({"angle": t, "distance": d}))
                .collect::<Vec<_>>(),
        );
    Ok(Outcome::json(&doc))
}

fn truncate_cmd(a: &TruncateArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let input = read_spec(&a.spec)?;
    let sampler = a.sampler.sampler(ctx.seed)?;
    let steps = truncation_convergence(input.spec.family(), &a.orders.0, &sampler, a.relation.bound, a.relation.tol)?;
    if ctx.format == Format::Csv {
        let mut text = String::from("order,distance,bound,resolution,within_bound\n");
        for s in &steps {
            text.push_str(&format!(
                "{},{:e},{:e},{:e},{}\n",
                s.order, s.distance, s.bound, s.resolution, s.within_bound
            ));
        }
        return Ok(Outcome {
            text,
            passed: true,
        });
    }
    let mut doc = base_doc("truncate", &input, ctx);
    doc.param("orders", a.orders.0.clone())
        .param("sampler", sampler_json(&sampler))
        .param("bound", a.relation.bound)
        .param("tolerance", a.relation.tol)
        .output("steps", serde_json::to_value(&steps).expect("serializable"))
        .output("all_within_bound", steps.iter().all(|s| s.within_bound));
    Ok(Outcome::json(&doc))
}

fn apply_cmd(a: &ApplyArgs, ctx: &Context) -> Result<Outcome, CliError> {
    ctx.csv_unsupported("apply")?;
    let (input, spec) = load(&a.spec)?;
    let mut doc = base_doc("apply", &input, ctx);
    let functions = match a.function {
        FunctionKind::Gaussian => {
            doc.param("function", "gaussian").param("count", a.gaussians);
            random_gaussians(spec.dimension(), a.gaussians, ctx.seed)
        }
        FunctionKind::NearExtremizer => {
            if spec.dimension() != 1 {
                return Err(CliError::Flag("near-extremizer needs a one-dimensional spec".into()));
            }
            doc.param("function", "near-extremizer")
                .param("p", a.p)
                .param("t", a.t);
            vec![near_extremizer(a.p, a.t)]
        }
    };
    doc.param("tolerance", a.tol);
    if functions.is_empty() {
        return Err(CliError::Flag("--gaussians must be at least 1".into()));
    }
    if let Some(points) = &a.x {
        let values: Vec<Value> = points
            .iter()
            .map(|x| {
                if x.len() != spec.dimension() {
                    return Err(CliError::Flag(format!(
                        "point {x:?} has {} coordinates, expected {}",
                        x.len(),
                        spec.dimension()
                    )));
                }
                Ok(json!({"x": x, "value": complex_json(apply(&spec, &functions[0], x))}))
            })
            .collect::<Result<_, _>>()?;
        doc.output("values", values);
    }
    if a.function == FunctionKind::NearExtremizer {
        let data = SymbolData::from_spec(&spec)?;
        let sup = operator_norm_grid(&data, &resolve_grid(&data, &GridPlan::default())?).sup;
        let ratio = single_ratio(&spec, &functions[0])?;
        doc.output("ratio", ratio)
            .output("symbol_sup", sup)
            .output("fraction_of_sup", ratio / sup);
    } else {
        let report = norm_ratio_experiment(&spec, &functions, a.tol)?;
        doc.output("report", serde_json::to_value(&report).expect("serializable"));
    }
    Ok(Outcome::json(&doc))
}

fn sharpness_cmd(a: &SharpnessArgs, ctx: &Context) -> Result<Outcome, CliError> {
    ctx.csv_unsupported("sharpness")?;
    let params = json!({"p": finite(a.p), "t": a.t, "coeffs": a.coeffs});
    let mut doc = ResultDocument::new("sharpness", digest_hex(params.to_string().as_bytes()), ctx.seed);
    doc.param("p", finite(a.p))
        .param("t", a.t.clone())
        .param("coefficients", json!(a.coeffs));
    if a.p == 1.0 || a.p == f64::INFINITY {
        let ratio = endpoint_ratio(a.p, &a.coeffs)?;
        doc.output("ratio", ratio).output("endpoint", true);
        return Ok(Outcome::json(&doc));
    }
    let mut rows = Vec::with_capacity(a.t.len());
    let mut ratios = Vec::with_capacity(a.t.len());
    let mut limit = f64::NAN;
    for &t in &a.t {
        let r = sharpness_experiment(a.p, &a.coeffs, t)?;
        limit = r.limit;
        ratios.push(r.ratio);
        rows.push(json!({"t": t, "ratio": r.ratio, "h": r.h_values}));
    }
    // t is listed from large to small, so ratios should increase
    let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
    let last = ratios.last().copied().unwrap_or(f64::NAN);
    doc.output("rows", rows)
        .output("limit", finite(limit))
        .output("monotone_increasing", monotone)
        .output("final_relative_gap", finite((limit - last) / limit));
    Ok(Outcome::json(&doc))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Entry point of the `hspec` binary. Exit code 1 means a case-study
/// assertion failed, 2 means the command could not run.
/// Process exit status: 0 on success, 1 when a case assertion failed, 2 on error.
pub fn exit_status(result: &Result<bool, CliError>) -> u8 {
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(_) => 2,
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| emit(&o.text, cli.out.as_deref()).map(|_| o.passed));
    match &result {
        Ok(false) => eprintln!("hspec: case-study assertion failed"),
        Err(e) => eprintln!("hspec: {e}"),
        Ok(true) => {}
    }
    ExitCode::from(exit_status(&result))
}
