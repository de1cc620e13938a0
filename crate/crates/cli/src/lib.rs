//! Command-line front end for `betaorder`.
//!
//! Every verb validates its arguments before computing anything. Exit codes:
//! 0 when the command ran and every check it performed passed, 1 when a check
//! failed (a witness or a violation was found), 2 on usage or domain errors.
//! A verdict of `Incomparable` from `decide` is an answer, not a failure.

mod format;
mod records;

use std::ffi::OsString;
use std::io::{self, Write};

use betaorder::consequences::{
    beta_binomial_identity_check, binomial_monotonicity, exceedance_row, linspace, scan_monotone, Axis, Target,
    SCAN_TOL,
};
use betaorder::orders::{
    decide_beta_order, sample_lines, sample_slopes, verify_st_numeric, CheckConfig, NumericCheckReport, OrderKind,
    TransformTable, DEFAULT_SEED,
};
use betaorder::{BetaParams, Continuous, GammaParams, GridPolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use format::g17;
pub use records::{ReportRow, ScanRow, VerifyRow};

const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "betaorder", version, about = "Transform orders between Beta laws and their consequences")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, global = true, value_enum, default_value = "json")]
    output: Output,
    /// Zero tolerance; defaults to 1e-9 for verify, 1e-10 for scan and 1e-12
    /// for identity.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 2049)]
    grid_points: usize,
    /// Lines (or slopes) sampled by verify.
    #[arg(long, global = true, default_value_t = 200)]
    lines: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Closed-form verdict for P relative to Q.
    Decide {
        #[arg(long, value_parser = parse_order)]
        order: OrderKind,
        #[arg(long, value_parser = parse_beta)]
        p: BetaParams,
        #[arg(long, value_parser = parse_beta)]
        q: BetaParams,
    },
    /// Numerical check of "P below Q" in the given order.
    Verify {
        #[arg(long, value_parser = parse_order)]
        order: OrderKind,
        #[arg(long, value_parser = parse_beta)]
        p: BetaParams,
        #[arg(long, value_parser = parse_beta, required_unless_present = "gamma", conflicts_with = "gamma")]
        q: Option<BetaParams>,
        /// Compare with Gamma(a, θ), `a` taken from P.
        #[arg(long, value_name = "THETA")]
        gamma: Option<f64>,
    },
    /// Exceedance probabilities along one parameter axis.
    Scan {
        #[arg(long, value_enum, required_unless_present = "binomial")]
        target: Option<ScanTarget>,
        #[arg(long, value_enum, requires = "target", requires = "fixed", requires = "values")]
        axis: Option<ScanAxis>,
        /// Value of the shape parameter that is held fixed.
        #[arg(long)]
        fixed: Option<f64>,
        /// `lo:hi:n` or a comma-separated list.
        #[arg(long)]
        values: Option<String>,
        /// Scan the binomial tail sequences for this `n` instead.
        #[arg(long, value_name = "N", conflicts_with_all = ["target", "axis", "fixed", "values"])]
        binomial: Option<u64>,
        #[arg(long, value_enum, default_value = "first", requires = "binomial")]
        sequence: Sequence,
    },
    /// Largest error of the Beta-Binomial tail identity.
    Identity {
        #[arg(long)]
        n: u64,
        /// Defaults to every `k < n`.
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 101)]
        p_points: usize,
    },
    /// Exceedance table over a parameter grid.
    Report {
        /// `lo:hi:n` or a comma-separated list, used for both shapes.
        #[arg(long)]
        grid: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanTarget {
    Mean,
    Mode,
    Antimode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanAxis {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sequence {
    /// `P(B >= k+1)` at `p = k/(n-1)`.
    First,
    /// `P(B >= k)` at `p = k/(n+1)`.
    Second,
}

fn parse_order(s: &str) -> Result<OrderKind, String> {
    s.parse().map_err(|e: betaorder::Error| e.to_string())
}

fn parse_beta(s: &str) -> Result<BetaParams, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    BetaParams::new(num(a)?, num(b)?).map_err(|e| e.to_string())
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("{s:?}: {e}"))
}

/// `lo:hi:n` (inclusive, evenly spaced) or `v1,v2,...`.
fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [lo, hi, n] => {
            let n: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
            let (lo, hi) = (num(lo)?, num(hi)?);
            if n == 0 || !(lo <= hi) {
                return Err(format!("empty range {s:?}"));
            }
            linspace(lo, hi, n)
        }
        [list] => list.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err(format!("expected lo:hi:n or a comma-separated list, got {s:?}")),
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(format!("no usable values in {s:?}"));
    }
    Ok(values)
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<betaorder::Error> for Failure {
    fn from(e: betaorder::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

/// Runs the command line with standard output and error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let rendered = e.render().to_string();
            let line = rendered.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            let _ = writeln!(err, "betaorder: {line}");
            return 2;
        }
    };
    match execute(&cli, out) {
        Ok(passed) => i32::from(!passed),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "betaorder: {msg}");
            2
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "betaorder: {e}");
            2
        }
    }
}

/// Whether every check performed by the verb passed.
fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, Failure> {
    let c = &cli.common;
    if c.grid_points == 0 {
        return Err(Failure::Usage("--grid-points must be positive".into()));
    }
    if c.lines == 0 {
        return Err(Failure::Usage("--lines must be positive".into()));
    }
    if let Some(tol) = c.tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be a finite non-negative number, got {tol}")));
        }
    }
    match &cli.verb {
        Verb::Decide { order, p, q } => {
            let verdict = decide_beta_order(*order, p, q);
            emit(out, c.output, &verdict, &["relation", "result"], std::iter::once(verdict))?;
            Ok(true)
        }
        Verb::Verify { order, p, q, gamma } => {
            let config = CheckConfig {
                grid: GridPolicy {
                    points: c.grid_points,
                    zero_tol: c.tol.unwrap_or(GridPolicy::default().zero_tol),
                    ..GridPolicy::default()
                },
                lines: c.lines,
                seed: c.seed,
            };
            let report = match (q, gamma) {
                (Some(q), _) => verify(*order, p, q, &config)?,
                (None, Some(theta)) => verify(*order, p, &GammaParams::new(p.a(), *theta)?, &config)?,
                (None, None) => unreachable!("clap requires --q or --gamma"),
            };
            let row = VerifyRow::new(&report, c.seed, c.lines);
            #[derive(Serialize)]
            struct VerifyOutput<'a> {
                seed: u64,
                lines: usize,
                #[serde(flatten)]
                report: &'a NumericCheckReport,
            }
            let json = VerifyOutput { seed: c.seed, lines: c.lines, report: &report };
            emit(out, c.output, &json, VerifyRow::HEADER, std::iter::once(row))?;
            Ok(report.consistent)
        }
        Verb::Scan { target, axis, fixed, values, binomial, sequence } => {
            let tol = c.tol.unwrap_or(SCAN_TOL);
            let report = if let Some(n) = binomial {
                let (first, second) = binomial_monotonicity(*n, tol)?;
                match sequence {
                    Sequence::First => first,
                    Sequence::Second => second,
                }
            } else {
                let (Some(target), Some(axis), Some(fixed), Some(values)) = (target, axis, fixed, values) else {
                    return Err(Failure::Usage(
                        "scan needs --target, --axis, --fixed and --values, or --binomial".into(),
                    ));
                };
                let values = parse_values(values).map_err(Failure::Usage)?;
                let target = match target {
                    ScanTarget::Mean => Target::MeanExceedance,
                    ScanTarget::Mode => Target::ModeExceedance,
                    ScanTarget::Antimode => Target::AntimodeExceedance,
                };
                let axis = match axis {
                    ScanAxis::A => Axis::A,
                    ScanAxis::B => Axis::B,
                };
                scan_monotone(axis, *fixed, &values, target, tol)?
            };
            emit(out, c.output, &report, ScanRow::HEADER, ScanRow::from_report(&report))?;
            Ok(report.is_monotone())
        }
        Verb::Identity { n, k, p_points } => {
            let tol = c.tol.unwrap_or(IDENTITY_TOL);
            if *p_points < 2 {
                return Err(Failure::Usage("--p-points must be at least 2".into()));
            }
            let ks: Vec<u64> = match k {
                Some(k) => vec![*k],
                None => (0..*n).collect(),
            };
            if ks.is_empty() {
                return Err(Failure::Usage("--n must be positive".into()));
            }
            let grid = linspace(0.0, 1.0, *p_points);
            let mut max_error = 0.0f64;
            for &k in &ks {
                max_error = max_error.max(beta_binomial_identity_check(*n, k, &grid)?);
            }
            #[derive(Serialize)]
            struct IdentityRow {
                n: u64,
                k: Option<u64>,
                p_points: usize,
                max_error: f64,
                tol: f64,
                passed: bool,
            }
            let row = IdentityRow { n: *n, k: *k, p_points: *p_points, max_error, tol, passed: max_error <= tol };
            emit(out, c.output, &row, &["n", "k", "p_points", "max_error", "tol", "passed"], std::iter::once(&row))?;
            Ok(row.passed)
        }
        Verb::Report { grid } => {
            let values = parse_values(grid).map_err(Failure::Usage)?;
            let mut rows = Vec::with_capacity(values.len() * values.len());
            for &a in &values {
                for &b in &values {
                    rows.push(exceedance_row(&BetaParams::new(a, b)?)?);
                }
            }
            #[derive(Serialize)]
            struct ReportOutput<'a> {
                rows: &'a [betaorder::consequences::ExceedanceRow],
            }
            emit(out, c.output, &ReportOutput { rows: &rows }, ReportRow::HEADER, rows.iter().map(ReportRow::from))?;
            Ok(true)
        }
    }
}

fn verify<G: Continuous>(
    order: OrderKind,
    p: &BetaParams,
    g: &G,
    config: &CheckConfig,
) -> Result<NumericCheckReport, Failure> {
    Ok(match order {
        OrderKind::StochasticDominance => verify_st_numeric(p, g, &config.grid)?,
        OrderKind::StarShaped => {
            TransformTable::new(p, g, &config.grid)?.star_report(&sample_slopes(p, g, config.lines, config.seed)?)
        }
        OrderKind::ConvexTransform => {
            TransformTable::new(p, g, &config.grid)?.convex_report(&sample_lines(p, g, config.lines, config.seed)?)
        }
    })
}

/// Writes `json` as one JSON object, or `rows` as CSV under `header`.
///
/// The header is written explicitly so that an empty table still has one.
fn emit<J, R, I>(out: &mut dyn Write, output: Output, json: &J, header: &[&str], rows: I) -> Result<(), Failure>
where
    J: Serialize,
    R: Serialize,
    I: IntoIterator<Item = R>,
{
    match output {
        Output::Json => format::write_json(out, json)?,
        Output::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(header)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
