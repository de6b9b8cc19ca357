//! `psnlab`: construct, verify, bound, tabulate, certify, and cross-check
//! polytopes whose k-skeletons match products of simplices.
//!
//! Every command prints one JSON envelope to stdout: the echoed job, the
//! result payload, an exact-arithmetic flag, the tool version, and the wall
//! time. Rationals are serialized as "p/q" strings, so output parses back
//! losslessly. Exit codes: 0 computed/PASS, 2 verification FAIL, 3 retry
//! cap hit during construction, 4 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use psn_core::bounds::{bound_report, BoundReport};
use psn_core::constructions::{
    cyclic_polytope, minkowski_simple, minkowski_tight, product_of_cyclics, reflect_construct,
    CyclicSpec, MinkowskiSpec, ReflectSpec,
};
use psn_core::deformed::{certify_plan, ppsn_plan, upper_bound_defp, CertifyReport, DeformedPlan};
use psn_core::hull::{verify_k_skeleton, verify_k_skeleton_by_enumeration, SkeletonReport};
use psn_core::obstructions::{brute_chromatic, KneserGraphDesc};
use psn_core::prodsimplex::{minimal_nonfaces, ProductShape};
use psn_core::{Error as CoreError, LabeledVPolytope};

// ---------------------------------------------------------------------------
// Failure handling: every error carries the exit code it maps to.

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::RetryCapExceeded { .. } => 3,
            _ => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::input(e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Command line surface.

#[derive(Parser)]
#[command(name = "psnlab", version, about = "polytope skeleton toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polytope or a projection plan and emit it as JSON.
    Construct(ConstructArgs),
    /// Check that a polytope file carries the k-skeleton of a product.
    Verify(VerifyArgs),
    /// Lower and upper bounds for one (k, shape) instance, with witnesses.
    Bound(BoundArgs),
    /// Bounds for a whole range of k, as an aligned table plus JSON.
    Table(TableArgs),
    /// Run the positive-spanning certificate on a projection plan.
    Certify(CertifyArgs),
    /// Brute-force cross-checks: exact chromatic numbers and, with an input
    /// file, full hull enumeration against the certificate verifier.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Moment-curve points; needs -d and -n.
    Cyclic,
    /// Product of cyclic polytopes carrying the k-skeleton; needs -k, --shape.
    ProductCyclic,
    /// Reflection doubling for shapes (1, n); needs -k and -n.
    Reflect,
    /// Power-sum Minkowski embedding in dimension 2k+2r; needs -k, --shape.
    Minkowski,
    /// Dimension-tight Minkowski sum in 2k+r+1; needs -k, --shape.
    MinkowskiTight,
    /// Deformed-product projection plan; needs -k, --shape, optional -d.
    Deformed,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Cyclic => "cyclic",
            Method::ProductCyclic => "product-cyclic",
            Method::Reflect => "reflect",
            Method::Minkowski => "minkowski",
            Method::MinkowskiTight => "minkowski-tight",
            Method::Deformed => "deformed",
        }
    }
}

/// Comma list "a,b,c". A newtype rather than a bare Vec so clap treats the
/// whole list as one argument value.
#[derive(Clone, Debug)]
struct Shape(Vec<usize>);

impl std::str::FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("bad shape entry {part:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Shape)
    }
}

/// Inclusive "a..b" range for table rows.
fn parse_k_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let lo = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, Serialize)]
struct Caps {
    retries: u32,
    points: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { retries: 60, points: 10_000 }
    }
}

/// "retries=N,points=M", either key optional. The points cap rejects
/// oversized instances up front; the retries cap is echoed with the job
/// (library retry budgets are fixed at build time).
fn parse_caps(s: &str) -> Result<Caps, String> {
    let mut caps = Caps::default();
    for item in s.split(',') {
        let (key, value) = item.split_once('=').ok_or_else(|| format!("expected key=value, got {item:?}"))?;
        match key.trim() {
            "retries" => caps.retries = value.trim().parse().map_err(|e| format!("retries: {e}"))?,
            "points" => caps.points = value.trim().parse().map_err(|e| format!("points: {e}"))?,
            other => return Err(format!("unknown cap {other:?}")),
        }
    }
    if caps.retries == 0 || caps.points == 0 {
        return Err("caps must be positive".into());
    }
    Ok(caps)
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(short)]
    k: Option<usize>,
    #[arg(long)]
    shape: Option<Shape>,
    #[arg(short)]
    d: Option<usize>,
    #[arg(short)]
    n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_caps)]
    caps: Option<Caps>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Polytope JSON: either a bare labeled point set or a construct envelope.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    shape: Shape,
    #[arg(short)]
    k: usize,
    /// The polytope is a projection of a combinatorial product, so a PASS
    /// certifies skeleton equivalence rather than containment.
    #[arg(long)]
    projection: bool,
    /// Use full face enumeration instead of per-face LP certificates.
    #[arg(long)]
    enumerate: bool,
    /// Also run the other verification method and fail on any disagreement.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_caps)]
    caps: Option<Caps>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    shape: Shape,
    #[arg(short)]
    k: usize,
    /// Cross-check the lower bound against the exact chromatic number of
    /// the non-face Kneser graph; fail on inconsistency.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_caps)]
    caps: Option<Caps>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    shape: Shape,
    /// Inclusive range a..b; defaults to 0..n.
    #[arg(long, value_parser = parse_k_range)]
    k_range: Option<(usize, usize)>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_caps)]
    caps: Option<Caps>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    shape: Shape,
    #[arg(short)]
    k: usize,
    /// Target dimension; defaults to the planner's upper bound.
    #[arg(short)]
    d: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_caps)]
    caps: Option<Caps>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    shape: Shape,
    #[arg(short)]
    k: usize,
    /// Optional polytope file: verify it by both methods and compare.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_caps)]
    caps: Option<Caps>,
}

// ---------------------------------------------------------------------------
// Envelope.

#[derive(Serialize)]
struct JobEcho {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_range: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    projection: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumerate: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    caps: Option<Caps>,
}

impl JobEcho {
    fn new(command: &'static str) -> Self {
        JobEcho {
            command,
            method: None,
            shape: None,
            k: None,
            d: None,
            n: None,
            k_range: None,
            input: None,
            projection: None,
            enumerate: None,
            oracle: None,
            caps: None,
        }
    }
}

#[derive(Serialize)]
struct ResultEnvelope<T: Serialize> {
    job: JobEcho,
    result: T,
    exact: bool,
    version: &'static str,
    wall_ms: u128,
}

fn emit<T: Serialize>(job: JobEcho, result: T, started: Instant, out: Option<&Path>) -> Result<(), Failure> {
    let envelope = ResultEnvelope {
        job,
        result,
        exact: true,
        version: env!("CARGO_PKG_VERSION"),
        wall_ms: started.elapsed().as_millis(),
    };
    let mut text = serde_json::to_string_pretty(&envelope)?;
    text.push('\n');
    print!("{text}");
    if let Some(path) = out {
        fs::write(path, &text)?;
    }
    Ok(())
}

fn build_shape(parts: &[usize]) -> Result<ProductShape, Failure> {
    Ok(ProductShape::new(parts.to_vec())?)
}

fn check_points_cap(points: usize, caps: Caps) -> Result<(), Failure> {
    if points > caps.points {
        return Err(Failure::input(format!(
            "instance has {points} points, over the cap of {} (raise with --caps points=M)",
            caps.points
        )));
    }
    Ok(())
}

fn require<T>(value: Option<T>, what: &str, method: Method) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::input(format!("--method {} requires {what}", method.name())))
}

// ---------------------------------------------------------------------------
// construct

#[derive(Serialize)]
struct ConstructResult {
    method: &'static str,
    dim: usize,
    points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attempts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polytope: Option<LabeledVPolytope>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plan: Option<DeformedPlan>,
}

impl ConstructResult {
    fn points(method: Method, p: LabeledVPolytope) -> Self {
        ConstructResult {
            method: method.name(),
            dim: p.ambient_dim(),
            points: p.len(),
            lambda: None,
            attempts: None,
            certificates: None,
            feasible: None,
            max_k: None,
            polytope: Some(p),
            plan: None,
        }
    }
}

fn cmd_construct(args: ConstructArgs) -> Result<i32, Failure> {
    let started = Instant::now();
    let caps = args.caps.unwrap_or_default();
    let mut job = JobEcho::new("construct");
    job.method = Some(args.method.name());
    job.shape = args.shape.as_ref().map(|s| s.0.clone());
    job.k = args.k;
    job.d = args.d;
    job.n = args.n;
    job.caps = args.caps;

    let result = match args.method {
        Method::Cyclic => {
            let d = require(args.d, "-d", args.method)?;
            let n = require(args.n, "-n", args.method)?;
            check_points_cap(n, caps)?;
            let spec = CyclicSpec::with_integer_params(d, n)?;
            ConstructResult::points(args.method, cyclic_polytope(&spec))
        }
        Method::ProductCyclic => {
            let k = require(args.k, "-k", args.method)?;
            let shape = build_shape(&require(args.shape.clone(), "--shape", args.method)?.0)?;
            check_points_cap(shape.vertex_count(), caps)?;
            let (p, dim) = product_of_cyclics(k, &shape);
            let mut res = ConstructResult::points(args.method, p);
            res.dim = dim;
            res
        }
        Method::Reflect => {
            let k = require(args.k, "-k", args.method)?;
            let n = require(args.n, "-n", args.method)?;
            check_points_cap(2 * (n + 1), caps)?;
            let spec = ReflectSpec::with_integer_params(k, n, None)?;
            let (p, lambda) = reflect_construct(&spec)?;
            let mut res = ConstructResult::points(args.method, p);
            res.lambda = Some(lambda.to_string());
            res
        }
        Method::Minkowski => {
            let k = require(args.k, "-k", args.method)?;
            let shape = build_shape(&require(args.shape.clone(), "--shape", args.method)?.0)?;
            check_points_cap(shape.vertex_count(), caps)?;
            let spec = MinkowskiSpec::with_defaults(k, shape.clone())?;
            let p = minkowski_simple(k, &shape, &spec.index_sets())?;
            ConstructResult::points(args.method, p)
        }
        Method::MinkowskiTight => {
            let k = require(args.k, "-k", args.method)?;
            let shape = build_shape(&require(args.shape.clone(), "--shape", args.method)?.0)?;
            check_points_cap(shape.vertex_count(), caps)?;
            let spec = MinkowskiSpec::with_defaults(k, shape)?;
            let built = minkowski_tight(&spec)?;
            let mut res = ConstructResult::points(args.method, built.polytope);
            res.attempts = Some(built.attempts);
            res.certificates = Some(built.certificates.len());
            res
        }
        Method::Deformed => {
            let k = require(args.k, "-k", args.method)?;
            let shape = build_shape(&require(args.shape.clone(), "--shape", args.method)?.0)?;
            let d = match args.d {
                Some(d) => d,
                None => upper_bound_defp(k, &shape)?,
            };
            job.d = Some(d);
            let verdict = ppsn_plan(k, &shape, d)?;
            ConstructResult {
                method: args.method.name(),
                dim: d,
                points: shape.vertex_count(),
                lambda: None,
                attempts: None,
                certificates: None,
                feasible: Some(verdict.feasible),
                max_k: Some(verdict.max_k),
                polytope: None,
                plan: verdict.plan,
            }
        }
    };
    emit(job, result, started, args.out.as_deref())?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify

/// Accepts either a bare polytope or a construct envelope wrapping one.
fn load_polytope(path: &Path) -> Result<LabeledVPolytope, Failure> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let node = if let Some(result) = value.get("result") {
        result.get("polytope").unwrap_or(result)
    } else {
        value.get("polytope").unwrap_or(&value)
    };
    if node.get("points").is_none() {
        return Err(Failure::input(format!(
            "{} carries no polytope payload",
            path.display()
        )));
    }
    Ok(serde_json::from_value(node.clone())?)
}

#[derive(Serialize)]
struct VerifyResult {
    report: SkeletonReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_report: Option<SkeletonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Failure> {
    let started = Instant::now();
    let caps = args.caps.unwrap_or_default();
    let mut job = JobEcho::new("verify");
    job.shape = Some(args.shape.0.clone());
    job.k = Some(args.k);
    job.input = Some(args.input.display().to_string());
    job.projection = Some(args.projection);
    job.enumerate = Some(args.enumerate);
    job.oracle = Some(args.oracle);
    job.caps = args.caps;

    let shape = build_shape(&args.shape.0)?;
    let p = load_polytope(&args.input)?;
    check_points_cap(p.len(), caps)?;

    let report = if args.enumerate {
        verify_k_skeleton_by_enumeration(&p, &shape, args.k)?
    } else {
        verify_k_skeleton(&p, &shape, args.k, args.projection)?
    };
    let mut result = VerifyResult { report, oracle_report: None, oracle_agrees: None };
    if args.oracle {
        let other = if args.enumerate {
            verify_k_skeleton(&p, &shape, args.k, args.projection)?
        } else {
            verify_k_skeleton_by_enumeration(&p, &shape, args.k)?
        };
        result.oracle_agrees = Some(other.passed() == result.report.passed());
        result.oracle_report = Some(other);
    }
    let ok = result.report.passed() && result.oracle_agrees.unwrap_or(true);
    emit(job, result, started, args.out.as_deref())?;
    Ok(if ok { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// bound

#[derive(Serialize)]
struct BoundResult {
    report: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_chromatic: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_projection_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_consistent: Option<bool>,
}

/// Exact chromatic number of the non-face Kneser graph, and the projection
/// bound n - chi + 1 it induces. The constructed bound must dominate it.
fn chromatic_cross_check(shape: &ProductShape, k: usize, lower: i64) -> Result<(Option<usize>, Option<i64>, bool), Failure> {
    let z = minimal_nonfaces(shape, k)?;
    if z.is_empty() {
        return Ok((None, None, true));
    }
    let desc = KneserGraphDesc::new(z)?;
    let chi = brute_chromatic(&desc.to_mask_graph()?)?;
    let oracle = shape.dim() as i64 - chi as i64 + 1;
    Ok((Some(chi), Some(oracle), oracle <= lower))
}

fn cmd_bound(args: BoundArgs) -> Result<i32, Failure> {
    let started = Instant::now();
    let mut job = JobEcho::new("bound");
    job.shape = Some(args.shape.0.clone());
    job.k = Some(args.k);
    job.oracle = Some(args.oracle);
    job.caps = args.caps;

    let shape = build_shape(&args.shape.0)?;
    let report = bound_report(&shape, args.k)?;
    let mut result = BoundResult {
        report,
        oracle_chromatic: None,
        oracle_projection_bound: None,
        oracle_consistent: None,
    };
    let mut ok = true;
    if args.oracle {
        let (chi, oracle, consistent) =
            chromatic_cross_check(&shape, args.k, result.report.lower.value)?;
        result.oracle_chromatic = chi;
        result.oracle_projection_bound = oracle;
        result.oracle_consistent = Some(consistent);
        ok = consistent;
    }
    emit(job, result, started, args.out.as_deref())?;
    Ok(if ok { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// table

#[derive(Serialize)]
struct TableRow {
    k: usize,
    lower: i64,
    upper: usize,
    tight: bool,
    curve: psn_core::obstructions::CurveClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    rs: Option<i64>,
}

#[derive(Serialize)]
struct TableResult {
    shape: Vec<usize>,
    rows: Vec<TableRow>,
}

fn cmd_table(args: TableArgs) -> Result<i32, Failure> {
    let started = Instant::now();
    let shape = build_shape(&args.shape.0)?;
    let n = shape.dim();
    let (lo, hi) = args.k_range.unwrap_or((0, n));

    let mut job = JobEcho::new("table");
    job.shape = Some(args.shape.0.clone());
    job.k_range = Some(format!("{lo}..{hi}"));
    job.caps = args.caps;

    // The published equal-factor curve applies when all parts agree and
    // there are at least two of them.
    let parts = shape.parts();
    let equal_parts = parts.len() >= 2 && parts.iter().all(|&p| p == parts[0]);

    let mut rows = Vec::new();
    for k in lo..=hi {
        let report = bound_report(&shape, k)?;
        let rs = if equal_parts {
            psn_core::obstructions::rs_bound(parts[0], parts.len(), k).ok()
        } else {
            None
        };
        rows.push(TableRow {
            k,
            lower: report.lower.value,
            upper: report.upper.value,
            tight: report.tight,
            curve: report.lower.curve,
            rs,
        });
    }

    eprintln!("shape {:?}", args.shape.0);
    if equal_parts {
        eprintln!("{:>4} {:>6} {:>6} {:>6} {:>6} {:>6}", "k", "lower", "upper", "tight", "curve", "rs");
    } else {
        eprintln!("{:>4} {:>6} {:>6} {:>6} {:>6}", "k", "lower", "upper", "tight", "curve");
    }
    for row in &rows {
        let tight = if row.tight { "yes" } else { "no" };
        let curve = format!("{:?}", row.curve);
        match row.rs {
            Some(rs) => eprintln!(
                "{:>4} {:>6} {:>6} {:>6} {:>6} {:>6}",
                row.k, row.lower, row.upper, tight, curve, rs
            ),
            None => eprintln!(
                "{:>4} {:>6} {:>6} {:>6} {:>6}",
                row.k, row.lower, row.upper, tight, curve
            ),
        }
    }

    let result = TableResult { shape: args.shape.0.clone(), rows };
    emit(job, result, started, args.out.as_deref())?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// certify

#[derive(Serialize)]
struct CertifyResult {
    d: usize,
    feasible: bool,
    max_k: i64,
    report: CertifyReport,
}

fn cmd_certify(args: CertifyArgs) -> Result<i32, Failure> {
    let started = Instant::now();
    let shape = build_shape(&args.shape.0)?;
    let d = match args.d {
        Some(d) => d,
        None => upper_bound_defp(args.k, &shape)?,
    };

    let mut job = JobEcho::new("certify");
    job.shape = Some(args.shape.0.clone());
    job.k = Some(args.k);
    job.d = Some(d);
    job.caps = args.caps;

    let verdict = ppsn_plan(args.k, &shape, d)?;
    let plan = verdict
        .plan
        .ok_or_else(|| Failure::input("planner produced no concrete plan at this dimension"))?;
    let report = certify_plan(&plan, args.k)?;
    let ok = report.passed;
    let result = CertifyResult { d, feasible: verdict.feasible, max_k: verdict.max_k, report };
    emit(job, result, started, args.out.as_deref())?;
    Ok(if ok { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// oracle

#[derive(Serialize)]
struct OracleResult {
    nonface_members: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_chromatic: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    projection_bound: Option<i64>,
    lower_bound: i64,
    chromatic_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_report: Option<SkeletonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumeration_report: Option<SkeletonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verifiers_agree: Option<bool>,
}

fn cmd_oracle(args: OracleArgs) -> Result<i32, Failure> {
    let started = Instant::now();
    let caps = args.caps.unwrap_or_default();
    let mut job = JobEcho::new("oracle");
    job.shape = Some(args.shape.0.clone());
    job.k = Some(args.k);
    job.input = args.input.as_ref().map(|p| p.display().to_string());
    job.caps = args.caps;

    let shape = build_shape(&args.shape.0)?;
    let lower = psn_core::obstructions::best_lower_bound(&shape, args.k)?.value;
    let z = minimal_nonfaces(&shape, args.k)?;
    let members = z.len();
    let (chi, oracle, consistent) = chromatic_cross_check(&shape, args.k, lower)?;

    let mut result = OracleResult {
        nonface_members: members,
        brute_chromatic: chi,
        projection_bound: oracle,
        lower_bound: lower,
        chromatic_consistent: consistent,
        certificate_report: None,
        enumeration_report: None,
        verifiers_agree: None,
    };
    let mut ok = consistent;
    if let Some(input) = &args.input {
        let p = load_polytope(input)?;
        check_points_cap(p.len(), caps)?;
        let cert = verify_k_skeleton(&p, &shape, args.k, true)?;
        let enumerated = verify_k_skeleton_by_enumeration(&p, &shape, args.k)?;
        let agree = cert.passed() == enumerated.passed();
        ok = ok && agree;
        result.certificate_report = Some(cert);
        result.enumeration_report = Some(enumerated);
        result.verifiers_agree = Some(agree);
    }
    emit(job, result, started, args.out.as_deref())?;
    Ok(if ok { 0 } else { 2 })
}

// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Table(args) => cmd_table(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(4);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
