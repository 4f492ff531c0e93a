//! Command-line front end.
//!
//! [`run`] takes the argument list and the value of `REVOLVE_DEFAULT_TOL`
//! and writes to the given streams, so tests can drive it in process.

mod render;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use revolve_core::expr::{is_identifier, parse_constant, Bindings, Curve, ExprError};
use revolve_core::kepler::{KeplerCurve, KeplerError, ReferenceVolumes};
use revolve_core::monotone::{
    check_lemma1, partition, validate_revolution_hypotheses, MonotoneError, MonotonePartition,
};
use revolve_core::numerics::{Interval, NumericsError, RootResult, Tolerances};
use revolve_core::volume::{solve, Axis, CurveRole, Method, VolumeError, VolumeProblem};

pub const TOLERANCE_ENV: &str = "REVOLVE_DEFAULT_TOL";

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_HYPOTHESIS: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "revolve", version, about = "Volumes of solids of revolution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a volume of revolution.
    Volume(VolumeArgs),
    /// Split a curve into strictly monotone pieces.
    Partition(ProblemArgs),
    /// Check the hypotheses of the piecewise-monotone volume formula.
    Verify(ProblemArgs),
    /// Evaluate the curve x = y - eps*sin(y) and its inverse.
    Kepler(KeplerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Shorthand for --format json.
    #[arg(long)]
    pub json: bool,
    /// Write samples of the curve to this CSV file.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Number of CSV sample intervals; the file gets one more row.
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Overrides REVOLVE_DEFAULT_TOL.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub residual_tol: Option<f64>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Grid cells for the sign-change scan.
    #[arg(long)]
    pub grid_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Curve expression, e.g. "x/pi + sin(x)".
    #[arg(long)]
    pub curve: String,
    /// Free variable of the curve.
    #[arg(long = "var", default_value = "x")]
    pub variable: String,
    /// Interval endpoints; constant expressions such as 2*pi are accepted.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, required = true)]
    pub interval: Vec<String>,
    /// Parameter binding, repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    #[value(alias = "x-axis")]
    X,
    #[value(alias = "y-axis")]
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoleArg {
    #[value(name = "y-of-x")]
    YOfX,
    #[value(name = "x-of-y")]
    XOfY,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Shell,
    Disk,
    Theorem1,
    Theorem2,
    Theorem3,
    Piecewise,
    All,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = AxisArg::Y)]
    pub axis: AxisArg,
    /// Defaults to y-of-x for variable x and x-of-y for variable y.
    #[arg(long, value_enum)]
    pub role: Option<RoleArg>,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct KeplerArgs {
    /// Eccentricity in (0, 1).
    #[arg(long)]
    pub eps: String,
    /// Evaluate x = y - eps*sin(y) at these y, repeatable.
    #[arg(long, value_name = "Y", allow_hyphen_values = true)]
    pub forward: Vec<String>,
    /// Solve y - eps*sin(y) = x for these x, repeatable.
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub invert: Vec<String>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Input(#[from] ExprError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Monotone(#[from] MonotoneError),
    #[error(transparent)]
    Kepler(#[from] KeplerError),
    #[error("{0}")]
    Io(#[from] io::Error),
}

fn numerics_code(e: &NumericsError) -> u8 {
    match e {
        NumericsError::InvalidInterval { .. } | NumericsError::InvalidTolerances(_) => EXIT_USAGE,
        NumericsError::NonFiniteEvaluation { .. } => EXIT_HYPOTHESIS,
        NumericsError::NoSignChange { .. }
        | NumericsError::MaxIterExceeded { .. }
        | NumericsError::DivergedWithoutBracket { .. } => EXIT_CONVERGENCE,
    }
}

fn monotone_code(e: &MonotoneError) -> u8 {
    match e {
        MonotoneError::Numerics(n) => numerics_code(n),
        _ => EXIT_HYPOTHESIS,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Volume(VolumeError::Numerics(n)) => numerics_code(n),
            CliError::Volume(VolumeError::Monotone(m)) => monotone_code(m),
            CliError::Volume(VolumeError::IncompatibleMethod { .. }) => EXIT_USAGE,
            CliError::Volume(_) => EXIT_HYPOTHESIS,
            CliError::Monotone(m) => monotone_code(m),
            CliError::Kepler(KeplerError::Eccentricity(_)) => EXIT_USAGE,
            CliError::Kepler(KeplerError::Numerics(n)) => numerics_code(n),
            CliError::Kepler(KeplerError::Expr(_)) => EXIT_USAGE,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_USAGE => "usage",
            EXIT_HYPOTHESIS => "hypothesis",
            _ => "convergence",
        }
    }
}

// ---------------------------------------------------------------------------
// Input handling

fn tolerances(args: &ToleranceArgs, env: Option<&str>) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    if let Some(text) = env.filter(|s| !s.trim().is_empty()) {
        tol.rel_tol = text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{TOLERANCE_ENV}={text:?} is not a number")))?;
    }
    let overrides = [
        (&mut tol.abs_tol, args.abs_tol),
        (&mut tol.rel_tol, args.rel_tol),
        (&mut tol.residual_tol, args.residual_tol),
    ];
    for (slot, value) in overrides {
        if let Some(v) = value {
            *slot = v;
        }
    }
    tol.max_depth = args.max_depth.unwrap_or(tol.max_depth);
    tol.max_iter = args.max_iter.unwrap_or(tol.max_iter);
    tol.grid_n = args.grid_n.unwrap_or(tol.grid_n);
    tol.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(tol)
}

fn bindings(params: &[String], variable: &str) -> Result<Bindings, CliError> {
    let mut out = Bindings::new();
    for p in params {
        let (name, value) = p
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param {p:?}: expected NAME=VALUE")))?;
        let name = name.trim();
        if !is_identifier(name) {
            return Err(CliError::Usage(format!(
                "--param {p:?}: {name:?} is not a usable name"
            )));
        }
        if name == variable {
            return Err(CliError::Usage(format!(
                "--param {p:?}: {name} is the curve variable"
            )));
        }
        if out.get(name).is_ok() {
            return Err(CliError::Usage(format!("--param {name} given twice")));
        }
        out.set(name, parse_constant(value)?);
    }
    Ok(out)
}

fn interval(ends: &[String]) -> Result<Interval, CliError> {
    let lo = parse_constant(&ends[0])?;
    let hi = parse_constant(&ends[1])?;
    Interval::new(lo, hi)
        .map_err(|_| CliError::Usage(format!("interval [{lo}, {hi}] must satisfy lo < hi")))
}

struct Problem {
    curve: Curve,
    interval: Interval,
    tol: Tolerances,
}

fn problem(args: &ProblemArgs, env: Option<&str>) -> Result<Problem, CliError> {
    if !is_identifier(&args.variable) {
        return Err(CliError::Usage(format!(
            "{:?} is not a usable variable name",
            args.variable
        )));
    }
    let params = bindings(&args.params, &args.variable)?;
    let curve = Curve::parse(&args.curve, &args.variable, &params)?;
    let unused: Vec<&str> = params
        .iter()
        .map(|(n, _)| n)
        .filter(|n| !curve.expr().parameters().contains(*n))
        .collect();
    if !unused.is_empty() {
        return Err(CliError::Usage(format!(
            "unknown parameter(s) {}",
            unused.join(", ")
        )));
    }
    Ok(Problem {
        curve,
        interval: interval(&args.interval)?,
        tol: tolerances(&args.tol, env)?,
    })
}

fn write_csv(
    path: &Path,
    samples: u32,
    span: Interval,
    f: impl Fn(f64) -> Result<f64, CliError>,
) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    for i in 0..=samples {
        let t = if i == samples {
            span.hi
        } else {
            span.lo + span.width() * f64::from(i) / f64::from(samples)
        };
        writeln!(
            out,
            "{},{}",
            render::significant(t, 15),
            render::significant(f(t)?, 15)
        )?;
    }
    out.flush()?;
    Ok(())
}

fn curve_csv(output: &OutputArgs, p: &Problem) -> Result<(), CliError> {
    match &output.csv {
        Some(path) => write_csv(path, output.samples, p.interval, |t| {
            p.curve.eval(t).map_err(|e| MonotoneError::from(e).into())
        }),
        None => Ok(()),
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::from)?;
    writeln!(out, "{text}")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Subcommands

fn volume(args: &VolumeArgs, env: Option<&str>, out: &mut dyn Write) -> Result<u8, CliError> {
    let p = problem(&args.problem, env)?;
    let role = match (args.role, args.problem.variable.as_str()) {
        (Some(RoleArg::YOfX), _) | (None, "x") => CurveRole::YOfX,
        (Some(RoleArg::XOfY), _) | (None, "y") => CurveRole::XOfY,
        (None, other) => {
            return Err(CliError::Usage(format!(
                "--role is required for variable {other}"
            )));
        }
    };
    let axis = match args.axis {
        AxisArg::X => Axis::X,
        AxisArg::Y => Axis::Y,
    };
    let method = match args.method {
        MethodArg::Shell => Method::Shell,
        MethodArg::Disk => Method::Disk,
        MethodArg::Theorem1 => Method::Theorem1,
        MethodArg::Theorem2 => Method::Theorem2,
        MethodArg::Theorem3 => Method::Theorem3,
        MethodArg::Piecewise => Method::Piecewise,
        MethodArg::All => Method::All,
    };
    curve_csv(&args.problem.output, &p)?;
    let report = solve(&VolumeProblem {
        curve: p.curve,
        role,
        interval: p.interval,
        axis,
        method,
        tol: p.tol,
    })?;
    match args.problem.output.format() {
        Format::Json => emit_json(out, &report)?,
        Format::Text => render::volume(out, &report)?,
    }
    Ok(if report.converged {
        EXIT_OK
    } else {
        EXIT_CONVERGENCE
    })
}

#[derive(Debug, Serialize)]
pub struct PartitionOutput {
    pub partition: MonotonePartition,
    pub f_a: f64,
    pub f_b: f64,
    /// Lemma 1 verdict; null when its preconditions do not hold.
    pub lemma1: Option<bool>,
    pub lemma1_detail: Option<String>,
}

fn partition_cmd(
    args: &ProblemArgs,
    env: Option<&str>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let p = problem(args, env)?;
    curve_csv(&args.output, &p)?;
    let part = partition(&p.curve, p.interval, &p.tol)?;
    let f_a = p.curve.eval(p.interval.lo).map_err(MonotoneError::from)?;
    let f_b = p.curve.eval(p.interval.hi).map_err(MonotoneError::from)?;
    let (lemma1, lemma1_detail) = match check_lemma1(&part, f_a, f_b) {
        Ok(v) => (Some(v), None),
        Err(MonotoneError::PreconditionViolated(why)) => (None, Some(why)),
        Err(e) => return Err(e.into()),
    };
    let report = PartitionOutput {
        partition: part,
        f_a,
        f_b,
        lemma1,
        lemma1_detail,
    };
    match args.output.format() {
        Format::Json => emit_json(out, &report)?,
        Format::Text => render::partition(out, &report)?,
    }
    Ok(EXIT_OK)
}

fn verify(args: &ProblemArgs, env: Option<&str>, out: &mut dyn Write) -> Result<u8, CliError> {
    let p = problem(args, env)?;
    curve_csv(&args.output, &p)?;
    let report = validate_revolution_hypotheses(&p.curve, p.interval, &p.tol);
    match args.output.format() {
        Format::Json => emit_json(out, &report)?,
        Format::Text => render::hypotheses(out, &report)?,
    }
    Ok(if report.satisfied {
        EXIT_OK
    } else {
        EXIT_HYPOTHESIS
    })
}

#[derive(Debug, Serialize)]
pub struct ForwardPoint {
    pub y: f64,
    pub x: f64,
}

#[derive(Debug, Serialize)]
pub struct InversePoint {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Serialize)]
pub struct KeplerOutput {
    pub eps: f64,
    pub forward: Vec<ForwardPoint>,
    pub inverse: Vec<InversePoint>,
    pub reference_volumes: ReferenceVolumes,
}

fn kepler(args: &KeplerArgs, env: Option<&str>, out: &mut dyn Write) -> Result<u8, CliError> {
    let tol = tolerances(&args.tol, env)?;
    let k = KeplerCurve::new(parse_constant(&args.eps)?)?;
    let forward = args
        .forward
        .iter()
        .map(|s| {
            let y = parse_constant(s)?;
            Ok(ForwardPoint { y, x: k.forward(y) })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let inverse = args
        .invert
        .iter()
        .map(|s| {
            let x = parse_constant(s)?;
            let RootResult {
                root,
                residual,
                iterations,
                ..
            } = k.inverse(x, &tol)?;
            Ok(InversePoint {
                x,
                y: root,
                residual,
                iterations,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if let Some(path) = &args.output.csv {
        let span = Interval::new(0.0, 2.0 * std::f64::consts::PI).expect("valid span");
        write_csv(path, args.output.samples, span, |y| Ok(k.forward(y)))?;
    }
    let report = KeplerOutput {
        eps: k.eccentricity(),
        forward,
        inverse,
        reference_volumes: k.reference_volumes(),
    };
    match args.output.format() {
        Format::Json => emit_json(out, &report)?,
        Format::Text => render::kepler(out, &report)?,
    }
    Ok(EXIT_OK)
}

fn wants_json(command: &Command) -> bool {
    let output = match command {
        Command::Volume(a) => &a.problem.output,
        Command::Partition(a) | Command::Verify(a) => &a.output,
        Command::Kepler(a) => &a.output,
    };
    output.format() == Format::Json
}

fn report_error(err: &mut dyn Write, e: &CliError, json: bool) {
    // nothing sensible to do if the diagnostic stream itself fails
    let _ = if json {
        let body = match e {
            CliError::Volume(VolumeError::HypothesisViolation(report)) => serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string(), "hypotheses": report }
            }),
            _ => serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } }),
        };
        writeln!(err, "{body}")
    } else {
        let r = writeln!(err, "error: {e}");
        if let CliError::Volume(VolumeError::HypothesisViolation(report)) = e {
            let _ = render::violations(err, &report.violations);
        }
        r
    };
}

/// Parses `args` (program name first) and runs the subcommand. Returns the
/// process exit code.
pub fn run<I, T>(args: I, env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    let json = wants_json(&cli.command);
    let result = match &cli.command {
        Command::Volume(a) => volume(a, env_tol, out),
        Command::Partition(a) => partition_cmd(a, env_tol, out),
        Command::Verify(a) => verify(a, env_tol, out),
        Command::Kepler(a) => kepler(a, env_tol, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            report_error(err, &e, json);
            e.exit_code()
        }
    }
}
