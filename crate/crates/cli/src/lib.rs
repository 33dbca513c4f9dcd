//! Command-line driver: `build`, `verify`, `trace` and `bench` over the
//! structured determinant families.
//!
//! Exit codes: 0 when every executed check passed, 1 on a check failure,
//! 2 on a usage or input error.

pub mod grid;
pub mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detident_core::arith::parse_rational;
use detident_core::families::{build, closed_form_det, verify_identity_with, SizeGuard};
use detident_core::random::{random_assignment, seeded_rng};
use detident_core::{
    run_engine, AnyMatrix, AnyScalar, Assignment, Engine, FamilyKind, FamilySpec, Rational, TraceOptions,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use grid::{parse_range, GridPoint, GridSpec, NChoice, ValueMode};
use report::{micros, PointRecord, RunReport, Status, Timings};

#[derive(Debug, Parser)]
#[command(name = "detident", version, about = "Exact determinant identities for structured matrix families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one family matrix.
    Build(BuildArgs),
    /// Compare closed form and elimination over a parameter grid.
    Verify(GridArgs),
    /// Replay a reduction engine and print its trace and certificate.
    Trace(TraceArgs),
    /// Time closed form against elimination over a numeric grid.
    Bench(GridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct ValueArgs {
    /// Keep X1..Xm as indeterminates.
    #[arg(long, conflicts_with = "values")]
    pub symbolic: bool,
    /// Explicit values, e.g. 1/2,3,-7/5.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
    /// Seed for random rational values (used without --symbolic/--values).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random draws per grid point.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub family: FamilyKind,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[command(flatten)]
    pub values: ValueArgs,
    /// Largest matrix side, both modes.
    #[arg(long)]
    pub max_size: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub family: FamilyKind,
    /// Single value, inclusive range `a..b`, or list `a,b,c`.
    #[arg(long)]
    pub m: String,
    #[arg(long, conflicts_with = "n_offset")]
    pub n: Option<String>,
    /// n relative to l (binomial-power) or to m (binomial-pascal).
    #[arg(long)]
    pub n_offset: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[command(flatten)]
    pub values: ValueArgs,
    /// Largest matrix side, both modes.
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Include wall times in the report (makes it non-reproducible).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    /// thm1, cor2, thm3-m, thm3-l or pascal.
    #[arg(long)]
    pub engine: Engine,
    /// Optional; must match the engine's family.
    #[arg(long)]
    pub family: Option<FamilyKind>,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[command(flatten)]
    pub values: ValueArgs,
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Keep a matrix snapshot at every stage regardless of size.
    #[arg(long)]
    pub full_snapshots: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    fn usage(e: impl ToString) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// What a command produced: the report body, a one-line summary for
/// stderr, and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub summary: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    let (outcome, output) = match command {
        Command::Build(a) => (cmd_build(a)?, &a.output),
        Command::Verify(a) => (cmd_verify(a)?, &a.output),
        Command::Trace(a) => (cmd_trace(a)?, &a.output),
        Command::Bench(a) => (cmd_bench(a)?, &a.output),
    };
    emit(&outcome.body, output)?;
    Ok(outcome)
}

fn emit(body: &str, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout().write_all(body.as_bytes()).map_err(|source| CliError::Io {
            path: "stdout".into(),
            source,
        }),
    }
}

fn guard(max_size: Option<usize>) -> SizeGuard {
    match max_size {
        Some(max) => SizeGuard {
            symbolic: max,
            numeric: max,
        },
        None => SizeGuard::default(),
    }
}

fn parse_values(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|v| parse_rational(v.trim()).map_err(CliError::usage))
        .collect()
}

fn value_mode(v: &ValueArgs) -> Result<ValueMode, CliError> {
    if v.symbolic {
        return Ok(ValueMode::Symbolic);
    }
    if let Some(s) = &v.values {
        return Ok(ValueMode::Explicit(parse_values(s)?));
    }
    if v.trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    Ok(ValueMode::Random {
        seed: v.seed,
        trials: v.trials,
    })
}

/// A single spec from point flags; random values use the first draw of
/// the seeded stream.
fn point_spec(
    kind: FamilyKind,
    m: usize,
    n: Option<usize>,
    l: Option<usize>,
    values: &ValueArgs,
) -> Result<FamilySpec, CliError> {
    let shape = match kind {
        FamilyKind::PowerDerivative => FamilySpec::power_derivative(m, Assignment::Symbolic),
        FamilyKind::PowerDerivativeShifted => FamilySpec::shifted(m, Assignment::Symbolic),
        FamilyKind::BinomialPower => {
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::usage(format!("{kind} needs {flag}")));
            FamilySpec::binomial_power(m, need(n, "--n")?, need(l, "--l")?, Assignment::Symbolic)
        }
        FamilyKind::BinomialPascal => {
            let n = n.ok_or_else(|| CliError::usage(format!("{kind} needs --n")))?;
            FamilySpec::pascal(n, m)
        }
    };
    shape.validate().map_err(CliError::usage)?;
    if kind == FamilyKind::BinomialPascal {
        return Ok(shape);
    }
    let assignment = match value_mode(values)? {
        ValueMode::Symbolic => Assignment::Symbolic,
        ValueMode::Explicit(xs) => Assignment::Numeric(xs),
        ValueMode::Random { seed, .. } => {
            Assignment::Numeric(random_assignment(&mut seeded_rng(seed), shape.variable_count(), true))
        }
    };
    let spec = shape.with_assignment(assignment);
    spec.validate().map_err(CliError::usage)?;
    Ok(spec)
}

pub fn cmd_build(a: &BuildArgs) -> Result<Outcome, CliError> {
    let spec = point_spec(a.family, a.m, a.n, a.l, &a.values)?;
    guard(a.max_size).check(&spec).map_err(CliError::usage)?;
    let matrix = build(&spec).map_err(CliError::usage)?;
    let body = match a.output.format {
        Format::Json => format!("{}\n", matrix.to_json()),
        Format::Text => format!("{matrix}\n"),
    };
    let (r, c) = matrix.shape();
    Ok(Outcome {
        body,
        summary: format!("build {spec}: {r}x{c} over {}", matrix.kind().as_str()),
        passed: true,
    })
}

fn grid_spec(a: &GridArgs) -> Result<GridSpec, CliError> {
    let n = match (&a.n, &a.n_offset) {
        (Some(n), _) => Some(NChoice::Absolute(parse_range(n).map_err(CliError::usage)?)),
        (None, Some(o)) => Some(NChoice::Offset(parse_range(o).map_err(CliError::usage)?)),
        (None, None) => None,
    };
    let grid = GridSpec {
        kind: a.family,
        m: parse_range(&a.m).map_err(CliError::usage)?,
        n,
        l: a.l.as_deref().map(parse_range).transpose().map_err(CliError::usage)?,
        values: value_mode(&a.values)?,
        guard: guard(a.max_size),
    };
    grid.validate().map_err(CliError::usage)?;
    Ok(grid)
}

fn skipped(point: &GridPoint, reason: &str) -> PointRecord {
    PointRecord {
        index: point.index,
        trial: point.trial,
        params: point.params.clone(),
        spec: None,
        verdict: Status::Skipped,
        det_closed_form: None,
        det_oracle: None,
        reason: Some(reason.to_string()),
        wall_time: None,
    }
}

fn errored(point: &GridPoint, spec: &FamilySpec, reason: String) -> PointRecord {
    PointRecord {
        spec: Some(spec.to_json()),
        verdict: Status::Error,
        reason: Some(reason),
        ..skipped(point, "")
    }
}

fn verify_point(point: &GridPoint, guard: &SizeGuard, timings: bool) -> PointRecord {
    let spec = match &point.spec {
        Ok(spec) => spec,
        Err(reason) => return skipped(point, reason),
    };
    let start = Instant::now();
    match verify_identity_with(spec, guard) {
        Ok(r) => PointRecord {
            index: point.index,
            trial: point.trial,
            params: point.params.clone(),
            spec: Some(spec.to_json()),
            verdict: if r.equal { Status::Equal } else { Status::Mismatch },
            det_closed_form: Some(r.det_closed_form.to_string()),
            det_oracle: Some(r.det_oracle.to_string()),
            reason: None,
            wall_time: timings.then(|| Timings {
                closed_form_us: None,
                oracle_us: None,
                total_us: micros(start.elapsed()),
            }),
        },
        Err(e) => errored(point, spec, e.to_string()),
    }
}

fn oracle_det(spec: &FamilySpec) -> Result<AnyScalar, String> {
    let e = |e: &dyn ToString| e.to_string();
    Ok(match build(spec).map_err(|x| e(&x))? {
        AnyMatrix::Int(m) => AnyScalar::Int(m.det_bareiss().map_err(|x| e(&x))?),
        AnyMatrix::Rat(m) => AnyScalar::Rat(m.det_bareiss().map_err(|x| e(&x))?),
        AnyMatrix::Poly(m) => AnyScalar::Poly(m.det_bareiss().map_err(|x| e(&x))?),
    })
}

fn bench_point(point: &GridPoint, timings: bool) -> (PointRecord, u64, u64) {
    let spec = match &point.spec {
        Ok(spec) => spec,
        Err(reason) => return (skipped(point, reason), 0, 0),
    };
    let t0 = Instant::now();
    let closed = closed_form_det(spec).map_err(|e| e.to_string());
    let closed_us = micros(t0.elapsed());
    let t1 = Instant::now();
    let oracle = oracle_det(spec);
    let oracle_us = micros(t1.elapsed());
    let record = match (closed, oracle) {
        (Ok(cf), Ok(or)) => PointRecord {
            index: point.index,
            trial: point.trial,
            params: point.params.clone(),
            spec: Some(spec.to_json()),
            verdict: if cf == or { Status::Equal } else { Status::Mismatch },
            det_closed_form: Some(cf.to_string()),
            det_oracle: Some(or.to_string()),
            reason: None,
            wall_time: timings.then_some(Timings {
                closed_form_us: Some(closed_us),
                oracle_us: Some(oracle_us),
                total_us: closed_us + oracle_us,
            }),
        },
        (Err(e), _) | (_, Err(e)) => errored(point, spec, e),
    };
    (record, closed_us, oracle_us)
}

/// Pascal points draw no values, so their reports carry no seed.
fn seed_of(grid: &GridSpec) -> Option<u64> {
    match grid.values {
        ValueMode::Random { seed, .. } if grid.kind != FamilyKind::BinomialPascal => Some(seed),
        _ => None,
    }
}

fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => report.to_jsonl(),
        Format::Text => report.to_text(),
    }
}

/// Points run in parallel; `collect` keeps grid order.
pub fn cmd_verify(a: &GridArgs) -> Result<Outcome, CliError> {
    let grid = grid_spec(a)?;
    let start = Instant::now();
    let records: Vec<PointRecord> = grid
        .points()
        .par_iter()
        .map(|p| verify_point(p, &grid.guard, a.timings))
        .collect();
    let report = RunReport::new("verify", a.family.name(), seed_of(&grid), records);
    Ok(Outcome {
        body: render(&report, a.output.format),
        summary: format!("{} in {:.2?}", report.summary_line(), start.elapsed()),
        passed: report.summary.passed(),
    })
}

pub fn cmd_bench(a: &GridArgs) -> Result<Outcome, CliError> {
    if a.values.symbolic {
        return Err(CliError::usage("bench needs numeric values; drop --symbolic"));
    }
    let grid = grid_spec(a)?;
    let results: Vec<(PointRecord, u64, u64)> = grid.points().par_iter().map(|p| bench_point(p, a.timings)).collect();
    let closed_us: u64 = results.iter().map(|r| r.1).sum();
    let oracle_us: u64 = results.iter().map(|r| r.2).sum();
    let records = results.into_iter().map(|r| r.0).collect();
    let report = RunReport::new("bench", a.family.name(), seed_of(&grid), records);
    Ok(Outcome {
        body: render(&report, a.output.format),
        summary: format!(
            "{}; closed form {:.3} ms, elimination {:.3} ms (summed over points)",
            report.summary_line(),
            closed_us as f64 / 1000.0,
            oracle_us as f64 / 1000.0
        ),
        passed: report.summary.passed(),
    })
}

pub fn cmd_trace(a: &TraceArgs) -> Result<Outcome, CliError> {
    let kind = a.engine.family();
    if let Some(family) = a.family {
        if family != kind {
            return Err(CliError::usage(format!("engine {} reduces {kind}, not {family}", a.engine)));
        }
    }
    let spec = point_spec(kind, a.m, a.n, a.l, &a.values)?;
    guard(a.max_size).check(&spec).map_err(CliError::usage)?;
    let options = TraceOptions {
        full_snapshots: a.full_snapshots,
    };
    let reduction = run_engine(a.engine, &spec, options).map_err(CliError::usage)?;
    let valid = reduction.check().map_err(CliError::usage)?;
    let closed = closed_form_det(&spec).map_err(CliError::usage)?;
    let total = reduction.total();
    let matches = total == closed;
    let doc = json!({
        "engine": a.engine.name(),
        "spec": spec.to_json(),
        "certificate_valid": valid,
        "closed_form": closed.to_string(),
        "matches_closed_form": matches,
        "reduction": reduction.to_json(),
    });
    let body = match a.output.format {
        Format::Json => format!("{doc}\n"),
        Format::Text => trace_text(&doc),
    };
    Ok(Outcome {
        body,
        summary: format!(
            "trace {} {spec}: {} stages, total {total}, certificate {}",
            a.engine,
            reduction.stage_count(),
            if valid { "valid" } else { "INVALID" }
        ),
        passed: valid && matches,
    })
}

fn trace_text(doc: &Value) -> String {
    let mut out = format!("engine {}  spec {}\n", doc["engine"].as_str().unwrap_or(""), doc["spec"]);
    let red = &doc["reduction"];
    for (i, stage) in red["trace"].as_array().into_iter().flatten().enumerate() {
        let mut line = format!(
            "{i:>4}  {:<10} {:<28} {}",
            stage["step_label"].as_str().unwrap_or(""),
            stage["context"].as_str().unwrap_or(""),
            stage["op"].as_str().unwrap_or("")
        );
        if let Some(f) = stage["factor"].as_str() {
            line.push_str(&format!("  factor {f}"));
        }
        if stage.get("sign_delta").is_some() {
            line.push_str("  sign -1");
        }
        out.push_str(&line);
        out.push('\n');
    }
    let cert = &red["certificate"];
    let factors: Vec<&str> = cert["factors"]
        .as_array()
        .into_iter()
        .flatten()
        .filter_map(|f| f["value"].as_str())
        .collect();
    out.push_str(&format!("sign {}\nfactors [{}]\n", cert["sign"], factors.join(", ")));
    out.push_str(&format!(
        "total {}\nclosed form {}\ncertificate {}\n",
        cert["total"].as_str().unwrap_or(""),
        doc["closed_form"].as_str().unwrap_or(""),
        if doc["certificate_valid"] == json!(true) { "valid" } else { "INVALID" }
    ));
    out
}
