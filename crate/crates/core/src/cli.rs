//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on numerical failures.
//! Data goes to standard output (or `--output`), diagnostics to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::problems::{builtin, convergence_study, parsed_problem, ProblemError};
use crate::quadrature::{build_rule, Family};
use crate::solver::{solve, ProblemSpec};

#[derive(Debug, Parser)]
#[command(
    name = "fracspec",
    version,
    about = "Spectral collocation for fractional integral equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem and evaluate the approximation on a grid.
    Solve(SolveArgs),
    /// Compare the approximation with the exact solution on a grid.
    Table(SolveArgs),
    /// Error norms over a range of collocation degrees.
    Convergence(ConvergenceArgs),
    /// Dump a quadrature rule.
    Quad(QuadArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Built-in benchmark problem.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3),
          conflicts_with_all = ["alpha", "t_end", "a", "b", "f", "exact"])]
    example: Option<u32>,
    /// Fractional order, 0 < alpha < 1.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Right end of the interval [0, T].
    #[arg(long = "T", allow_hyphen_values = true)]
    t_end: Option<f64>,
    /// Coefficient a(t) in front of the fractional integral.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Coefficient b(t) inside the fractional integral.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Forcing term f(t).
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// Exact solution, if known.
    #[arg(long, allow_hyphen_values = true)]
    exact: Option<String>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write data here instead of standard output.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Collocation degree.
    #[arg(long = "N", default_value_t = 10)]
    n: usize,
    /// Evaluation grid `lo:hi:step`; defaults to eleven points across [0, T].
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long = "N-min", default_value_t = 2)]
    n_min: usize,
    #[arg(long = "N-max", default_value_t = 24)]
    n_max: usize,
    #[arg(long = "N-step", default_value_t = 1)]
    n_step: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleKind {
    /// Gauss–Legendre, N points.
    #[value(alias = "gauss-legendre")]
    Gl,
    /// Gauss–Lobatto–Legendre, N + 1 points.
    #[value(alias = "lobatto")]
    Lgl,
    /// Gauss–Jacobi with weight (1-x)^q1 (1+x)^q2, N points.
    #[value(alias = "jacobi")]
    Gj,
}

#[derive(Debug, Args)]
struct QuadArgs {
    #[arg(long, value_enum)]
    family: RuleKind,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    q1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    q2: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::UnknownProblem(_) | Error::NoExactSolution => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        match e {
            ProblemError::Invalid(inner) => inner.into(),
            parse => CliError::Usage(parse.to_string()),
        }
    }
}

/// Run metadata attached to JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub command: String,
    pub problem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<ExpressionSources>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressionSources {
    pub a: String,
    pub b: String,
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord<R> {
    pub metadata: RunMetadata,
    pub rows: Vec<R>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub t: f64,
    pub approx: f64,
    pub exact: Option<f64>,
    pub abs_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub l2_error: Option<f64>,
    pub linf_error: Option<f64>,
    pub cond_estimate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadRow {
    pub index: usize,
    pub node: f64,
    pub weight: f64,
}

trait CsvRow {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

impl CsvRow for SolutionRow {
    const HEADER: &'static str = "t,approx,exact,abs_error";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.t,
            num(self.approx),
            opt(self.exact),
            opt(self.abs_error)
        )
    }
}

impl CsvRow for ConvergenceRow {
    const HEADER: &'static str = "N,l2_error,linf_error,cond_estimate";
    fn csv(&self) -> String {
        let field = |v: Option<f64>| v.map(num).unwrap_or_else(|| "NaN".into());
        format!(
            "{},{},{},{}",
            self.n,
            field(self.l2_error),
            field(self.linf_error),
            field(self.cond_estimate)
        )
    }
}

impl CsvRow for QuadRow {
    const HEADER: &'static str = "index,node,weight";
    fn csv(&self) -> String {
        format!("{},{},{}", self.index, num(self.node), num(self.weight))
    }
}

/// Parses `lo:hi:step` into grid points. Points are rounded to the number of
/// decimals written in `lo` and `step`, so `0:1:0.1` yields exactly `0.3`.
pub fn parse_points(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo_s, hi_s, step_s] = parts[..] else {
        return Err(format!("--points expects lo:hi:step, got `{text}`"));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("invalid number `{s}` in --points"))
    };
    let (lo, hi, step) = (parse(lo_s)?, parse(hi_s)?, parse(step_s)?);
    if !(step > 0.0) {
        return Err("--points step must be positive".into());
    }
    if hi < lo {
        return Err("--points needs lo <= hi".into());
    }
    let decimals = |s: &str| -> Option<usize> {
        let s = s.trim();
        if s.contains(['e', 'E']) {
            return None;
        }
        Some(s.split_once('.').map_or(0, |(_, frac)| frac.len()))
    };
    let places = decimals(lo_s).zip(decimals(step_s)).map(|(a, b)| a.max(b));
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err("--points describes more than a million points".into());
    }
    Ok((0..count)
        .map(|i| {
            let x = lo + i as f64 * step;
            match places {
                Some(p) => format!("{x:.p$}").parse().unwrap_or(x),
                None => x,
            }
        })
        .collect())
}

fn resolve_problem(args: &ProblemArgs) -> Result<(ProblemSpec<f64>, Option<ExpressionSources>), CliError> {
    if let Some(id) = args.example {
        return Ok((builtin(id)?, None));
    }
    let missing: Vec<&str> = [
        ("--alpha", args.alpha.is_none()),
        ("--T", args.t_end.is_none()),
        ("--a", args.a.is_none()),
        ("--b", args.b.is_none()),
        ("--f", args.f.is_none()),
    ]
    .into_iter()
    .filter_map(|(name, absent)| absent.then_some(name))
    .collect();
    if !missing.is_empty() {
        return Err(CliError::Usage(format!(
            "either --example or all of --alpha --T --a --b --f is required (missing {})",
            missing.join(" ")
        )));
    }
    let (a, b, f) = (
        args.a.clone().unwrap(),
        args.b.clone().unwrap(),
        args.f.clone().unwrap(),
    );
    let problem = parsed_problem(
        args.alpha.unwrap(),
        args.t_end.unwrap(),
        &a,
        &b,
        &f,
        args.exact.as_deref(),
    )?;
    let sources = ExpressionSources {
        a,
        b,
        f,
        exact: args.exact.clone(),
    };
    Ok((problem, Some(sources)))
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn emit<R: CsvRow + Serialize>(
    record: &OutputRecord<R>,
    args: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut buf = Vec::new();
    match args.format {
        Format::Csv => {
            writeln!(buf, "{}", R::HEADER)?;
            for row in &record.rows {
                writeln!(buf, "{}", row.csv())?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, record).map_err(io::Error::other)?;
            writeln!(buf)?;
        }
    }
    match &args.output {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            file.write_all(&buf)?;
            file.flush()?;
        }
        None => stdout.write_all(&buf)?,
    }
    Ok(())
}

fn run_solve(command: &str, args: &SolveArgs, require_exact: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let (problem, sources) = resolve_problem(&args.problem)?;
    if require_exact && problem.exact().is_none() {
        return Err(CliError::Usage(
            "`table` needs an exact solution (--example or --exact)".into(),
        ));
    }
    if args.n == 0 {
        return Err(CliError::Usage("--N must be at least 1".into()));
    }
    let t_end = problem.t_end();
    let points = match &args.points {
        Some(text) => parse_points(text).map_err(CliError::Usage)?,
        None => (0..=10).map(|i| t_end * i as f64 / 10.0).collect(),
    };
    if let Some(bad) = points.iter().find(|&&x| !(0.0..=t_end).contains(&x)) {
        return Err(CliError::Usage(format!(
            "evaluation point {bad} lies outside [0, {t_end}]"
        )));
    }
    let solution = solve(&problem, args.n)?;
    let mut rows = Vec::with_capacity(points.len());
    for &t in &points {
        let approx = solution.eval(t)?;
        let exact = problem.exact().map(|y| y(t));
        rows.push(SolutionRow {
            t,
            approx,
            exact,
            abs_error: exact.map(|e| (approx - e).abs()),
        });
    }
    let record = OutputRecord {
        metadata: RunMetadata {
            command: command.into(),
            problem: problem.name().into(),
            sources,
            alpha: Some(problem.alpha()),
            t_end: Some(t_end),
            n: Some(args.n),
            slope: None,
            timestamp: timestamp(),
        },
        rows,
    };
    emit(&record, &args.output, out)
}

fn run_convergence(args: &ConvergenceArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (problem, sources) = resolve_problem(&args.problem)?;
    if args.n_min == 0 || args.n_step == 0 || args.n_max < args.n_min {
        return Err(CliError::Usage("need 1 <= --N-min <= --N-max and --N-step >= 1".into()));
    }
    let ns: Vec<usize> = (args.n_min..=args.n_max).step_by(args.n_step).collect();
    let report = convergence_study(&problem, &ns)?;
    let mut rows = Vec::with_capacity(report.records.len());
    for rec in &report.records {
        match &rec.outcome {
            Ok(m) => rows.push(ConvergenceRow {
                n: rec.n,
                l2_error: Some(m.l2_error),
                linf_error: Some(m.linf_error),
                cond_estimate: m.cond_estimate.is_finite().then_some(m.cond_estimate),
                failure: None,
            }),
            Err(e) => {
                writeln!(err, "N = {}: {e}", rec.n)?;
                rows.push(ConvergenceRow {
                    n: rec.n,
                    l2_error: None,
                    linf_error: None,
                    cond_estimate: None,
                    failure: Some(e.to_string()),
                });
            }
        }
    }
    match report.slope {
        Some(s) => writeln!(err, "fitted slope of log10(L2 error) vs N: {s:.6}")?,
        None => writeln!(err, "fitted slope of log10(L2 error) vs N: unavailable")?,
    }
    let record = OutputRecord {
        metadata: RunMetadata {
            command: "convergence".into(),
            problem: report.problem.clone(),
            sources,
            alpha: Some(problem.alpha()),
            t_end: Some(problem.t_end()),
            n: None,
            slope: report.slope,
            timestamp: timestamp(),
        },
        rows,
    };
    emit(&record, &args.output, out)
}

fn run_quad(args: &QuadArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let family = match args.family {
        RuleKind::Gl => Family::GaussLegendre,
        RuleKind::Lgl => Family::GaussLobattoLegendre,
        RuleKind::Gj => Family::GaussJacobi {
            q1: args.q1,
            q2: args.q2,
        },
    };
    let rule = build_rule(family, args.n)?;
    let rows = rule
        .iter()
        .enumerate()
        .map(|(index, (node, weight))| QuadRow { index, node, weight })
        .collect();
    let record = OutputRecord {
        metadata: RunMetadata {
            command: "quad".into(),
            problem: format!("{family:?}"),
            sources: None,
            alpha: None,
            t_end: None,
            n: Some(args.n),
            slope: None,
            timestamp: timestamp(),
        },
        rows,
    };
    emit(&record, &args.output, out)
}

/// Runs the tool with explicit output streams; returns the exit code.
pub fn run_with_io<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    1
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => run_solve("solve", args, false, out),
        Command::Table(args) => run_solve("table", args, true, out),
        Command::Convergence(args) => run_convergence(args, out, err),
        Command::Quad(args) => run_quad(args, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the tool against the process's standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}
