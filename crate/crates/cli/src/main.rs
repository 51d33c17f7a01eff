//! `mixvol`: exact mixed volumes, mixed discriminants and log-concavity
//! checks from the command line.
//!
//! Exit status: 0 when the verdict holds (or the command just computes a
//! value), 3 when it fails or a search finds violations, 1 on bad input,
//! 2 on internal errors.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use mixvol_core::bodies::Body;
use mixvol_core::inequalities::{
    af_check_discriminants, af_check_volumes, gromov_concavity, gromov_triple_check, minkowski_sequence_check,
    segment_concavity, vdw_check, Certificate, Report, Verdict, DEFAULT_DIAGNOSTIC_DIGITS,
};
use mixvol_core::json::{self, PolynomialJson, ReportJson};
use mixvol_core::mixed::{
    box_volume_polynomial, mixed_discriminant, mixed_volume, volume_polynomial, volume_polynomial_interpolated,
    BodyTuple, VolumePolynomial,
};
use mixvol_core::numerics::{permanent, Matrix, SymMatrix};
use mixvol_core::rational::{display_with_approx, parse as parse_rational, to_decimal, Rational};
use mixvol_core::search::{search, verify_finding, SearchConfig, SearchMode, SearchSpace, SearchTarget};
use serde_json::{json, Value};

const EXIT_FAILS: u8 = 3;
const EXIT_INPUT: u8 = 1;
const EXIT_INTERNAL: u8 = 2;

#[derive(Parser)]
#[command(name = "mixvol", version, about = "Exact mixed volumes and log-concavity checks")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for internal parallelism (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Polarization,
    Permanent,
    Interpolation,
}

#[derive(Subcommand)]
enum Command {
    /// Permanent of a square matrix
    Perm { input: Option<PathBuf> },
    /// Mixed volume V(A_1, ..., A_n) of n bodies in R^n
    Mixvol { input: Option<PathBuf> },
    /// Mixed discriminant of n symmetric n x n matrices
    Mixdisc { input: Option<PathBuf> },
    /// Coefficients V_I of Vol(l_1 A_1 + ... + l_k A_k)
    Volpoly {
        input: Option<PathBuf>,
        /// Shorthand for --route interpolation
        #[arg(long)]
        interpolate: bool,
        #[arg(long, value_enum, default_value_t = Route::Polarization)]
        route: Route,
    },
    /// Alexandrov-Fenchel inequality V(A_1,A_2,...)^2 >= V(A_1,A_1,...) V(A_2,A_2,...)
    AfCheck {
        input: Option<PathBuf>,
        /// Read symmetric matrices and check mixed discriminants instead
        #[arg(long)]
        discriminants: bool,
    },
    /// Log-concavity along segments parallel to the simplex edges
    SegmentConcavity { input: Option<PathBuf> },
    /// Concavity of log V_I on the whole discrete simplex
    GromovCheck { input: Option<PathBuf> },
    /// V(1,2,3)^3 >= V(1,1,2) V(2,2,3) V(3,3,1) for three bodies in R^3
    TripleCheck { input: Option<PathBuf> },
    /// Log-concavity of V(A,..,A,B,..,B) with a Brunn-Minkowski root diagnostic
    BmCheck {
        input: Option<PathBuf>,
        /// Decimal digits for the (non-authoritative) root diagnostic
        #[arg(long, default_value_t = DEFAULT_DIAGNOSTIC_DIGITS)]
        precision: u32,
    },
    /// Van der Waerden bound for a doubly stochastic matrix
    VdwCheck { input: Option<PathBuf> },
    /// Search box families for violations
    Search {
        /// Comma-separated side values, e.g. 0,1/3,1,5
        #[arg(long, default_value = "0,1/3,1,5")]
        grid: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value = "triple-inequality")]
        target: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_evaluations: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-check findings (JSON lines from `search --format json`)
    Verify { input: Option<PathBuf> },
}

/// Errors that are the caller's fault.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_error(e: mixvol_core::Error) -> anyhow::Error {
    use mixvol_core::Error as E;
    match e {
        E::Singular => anyhow::Error::new(e),
        other => InputError(other.to_string()).into(),
    }
}

fn read_input(path: &Option<PathBuf>) -> anyhow::Result<String> {
    let mut s = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            s = std::fs::read_to_string(p).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
        }
        _ => {
            io::stdin().read_to_string(&mut s).map_err(|e| InputError(format!("stdin: {e}")))?;
        }
    }
    Ok(s)
}

fn bodies(path: &Option<PathBuf>) -> anyhow::Result<Vec<Body>> {
    json::parse_bodies(&read_input(path)?).map_err(input_error)
}

fn matrix(path: &Option<PathBuf>) -> anyhow::Result<Matrix> {
    json::parse_matrix(&read_input(path)?).map_err(input_error)
}

fn sym_matrices(path: &Option<PathBuf>) -> anyhow::Result<Vec<SymMatrix>> {
    json::parse_sym_matrices(&read_input(path)?).map_err(input_error)
}

fn polynomial(path: &Option<PathBuf>) -> anyhow::Result<VolumePolynomial> {
    json::parse_polynomial(&read_input(path)?).map_err(input_error)
}

struct Out {
    format: Format,
    stdout: io::StdoutLock<'static>,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) -> anyhow::Result<()> {
        quiet_pipe(writeln!(self.stdout, "{}", s.as_ref()))
    }

    fn json(&mut self, v: &impl serde::Serialize) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(v)?;
        text.push('\n');
        quiet_pipe(self.stdout.write_all(text.as_bytes()))
    }

    fn value(&mut self, name: &str, r: &Rational) -> anyhow::Result<u8> {
        match self.format {
            Format::Text => self.line(display_with_approx(r))?,
            Format::Json => self.json(&json!({ name: r.to_string(), "approx": to_decimal(r, 12) }))?,
        }
        Ok(0)
    }

    fn report(&mut self, r: &Report) -> anyhow::Result<u8> {
        match self.format {
            Format::Json => self.json(&ReportJson::from(r))?,
            Format::Text => {
                self.line(format!("verdict: {}", r.verdict.as_str()))?;
                self.line(format!("checked: {}", r.checked_count))?;
                for c in &r.certificates {
                    self.certificate("violation", c)?;
                }
                if r.verdict != Verdict::Fails {
                    if let Some(c) = &r.tightest {
                        self.certificate("tightest", c)?;
                    }
                }
            }
        }
        Ok(verdict_code(r.verdict))
    }

    fn certificate(&mut self, label: &str, c: &Certificate) -> anyhow::Result<()> {
        self.line(format!("{label} at {}: {}", c.center, c.comparison))?;
        let support: Vec<String> = c.support.iter().map(|(i, w)| format!("{i} x {w}")).collect();
        self.line(format!("  support: {}", support.join(", ")))?;
        self.line(format!("  lhs: {}", display_with_approx(&c.lhs)))?;
        self.line(format!("  rhs: {}", display_with_approx(&c.rhs)))
    }
}

/// A reader that stops early (`| head`) should not turn a verdict into an
/// internal error.
fn quiet_pipe(r: io::Result<()>) -> anyhow::Result<()> {
    match r {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Fails => EXIT_FAILS,
        Verdict::Holds | Verdict::Vacuous => 0,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    let mut out = Out { format: cli.format, stdout: io::stdout().lock() };
    match cli.command {
        Command::Perm { input } => {
            let p = permanent(&matrix(&input)?).map_err(input_error)?;
            out.value("permanent", &p)
        }
        Command::Mixvol { input } => {
            let v = mixed_volume(&bodies(&input)?).map_err(input_error)?;
            out.value("mixed_volume", &v)
        }
        Command::Mixdisc { input } => {
            let ms = sym_matrices(&input)?;
            let d = mixed_discriminant(&ms).map_err(input_error)?;
            out.value("mixed_discriminant", &d)
        }
        Command::Volpoly { input, interpolate, route } => {
            let route = if interpolate { Route::Interpolation } else { route };
            let bodies = bodies(&input)?;
            let vp = match route {
                Route::Permanent => {
                    let rows = bodies
                        .iter()
                        .map(|b| match b {
                            Body::Box(bx) => Ok(bx.lengths()),
                            other => Err(InputError(format!("the permanent route needs boxes, got a {}", other.kind()))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let m = Matrix::from_rows(rows).map_err(input_error)?;
                    box_volume_polynomial(&m)
                }
                Route::Polarization => BodyTuple::new(bodies).and_then(|t| volume_polynomial(&t)),
                Route::Interpolation => BodyTuple::new(bodies).and_then(|t| volume_polynomial_interpolated(&t)),
            }
            .map_err(input_error)?;
            match out.format {
                Format::Json => out.json(&PolynomialJson::from_polynomial(&vp))?,
                Format::Text => {
                    for (i, v) in vp.iter() {
                        out.line(format!("{i}: {}", display_with_approx(v)))?;
                    }
                }
            }
            Ok(0)
        }
        Command::AfCheck { input, discriminants } => {
            let report = if discriminants {
                let ms = sym_matrices(&input)?;
                af_check_discriminants(&ms)
            } else {
                af_check_volumes(&bodies(&input)?)
            }
            .map_err(input_error)?;
            out.report(&report)
        }
        Command::SegmentConcavity { input } => out.report(&segment_concavity(&polynomial(&input)?)),
        Command::GromovCheck { input } => out.report(&gromov_concavity(&polynomial(&input)?)),
        Command::TripleCheck { input } => out.report(&gromov_triple_check(&bodies(&input)?).map_err(input_error)?),
        Command::BmCheck { input, precision } => {
            let bs = bodies(&input)?;
            let [a, b] = <[Body; 2]>::try_from(bs).map_err(|_| InputError("bm-check needs exactly two bodies".into()))?;
            if a.dim() != b.dim() {
                return Err(InputError("bm-check bodies must share a dimension".into()).into());
            }
            let m = minkowski_sequence_check(&a, &b, a.dim(), precision).map_err(input_error)?;
            let d = &m.diagnostic;
            match out.format {
                Format::Json => {
                    let mut v = serde_json::to_value(ReportJson::from(&m.report))?;
                    v["sequence"] = Value::from(m.sequence.iter().map(|r| r.to_string()).collect::<Vec<_>>());
                    v["diagnostic"] = json!({
                        "authoritative": false,
                        "digits": d.digits,
                        "sum_root": to_decimal(&d.sum_root, d.digits as usize + 1),
                        "roots_sum": to_decimal(&d.roots_sum, d.digits as usize + 1),
                        "holds": d.holds,
                    });
                    out.json(&v)?;
                }
                Format::Text => {
                    out.report(&m.report)?;
                    for (j, v) in m.sequence.iter().enumerate() {
                        out.line(format!("V_{j} = {}", display_with_approx(v)))?;
                    }
                    out.line(format!(
                        "root diagnostic ({} digits, non-authoritative): {} >= {}: {}",
                        d.digits,
                        to_decimal(&d.sum_root, 16),
                        to_decimal(&d.roots_sum, 16),
                        if d.holds { "holds" } else { "fails" }
                    ))?;
                }
            }
            Ok(verdict_code(m.report.verdict))
        }
        Command::VdwCheck { input } => {
            let o = vdw_check(&matrix(&input)?).map_err(input_error)?;
            match out.format {
                Format::Json => out.json(&json!({
                    "verdict": if o.holds { "holds" } else { "fails" },
                    "permanent": o.permanent.to_string(),
                    "bound": o.bound.to_string(),
                    "margin": o.margin.to_string(),
                    "margin_approx": to_decimal(&o.margin, 12),
                }))?,
                Format::Text => {
                    out.line(format!("verdict: {}", if o.holds { "holds" } else { "fails" }))?;
                    out.line(format!("permanent: {}", display_with_approx(&o.permanent)))?;
                    out.line(format!("bound: {}", display_with_approx(&o.bound)))?;
                    out.line(format!("margin: {}", display_with_approx(&o.margin)))?;
                }
            }
            Ok(if o.holds { 0 } else { EXIT_FAILS })
        }
        Command::Search { grid, n, k, mode, target, max_evaluations, seed } => {
            let grid = grid
                .split(',')
                .map(|s| parse_rational(s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(input_error)?;
            let space = SearchSpace::new(n, k, grid).map_err(input_error)?;
            let mode: SearchMode = mode.parse().map_err(input_error)?;
            let target: SearchTarget = target.parse().map_err(input_error)?;
            let config = SearchConfig { mode, seed, max_evaluations, target };
            let outcome = search(&space, &config).map_err(input_error)?;
            match out.format {
                Format::Json => quiet_pipe(json::write_search_jsonl(&outcome, &mut out.stdout))?,
                Format::Text => {
                    for f in &outcome.findings {
                        let rows: Vec<String> = f
                            .side_matrix
                            .to_rows()
                            .iter()
                            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                            .collect();
                        out.line(format!(
                            "ratio {} sides [{}]: {}",
                            display_with_approx(&f.violation_ratio),
                            rows.join(","),
                            f.certificate.comparison
                        ))?;
                    }
                    out.line(format!(
                        "evaluations: {}, findings: {}, best ratio: {}",
                        outcome.evaluations,
                        outcome.findings.len(),
                        outcome.best_ratio().map_or("none".into(), display_with_approx)
                    ))?;
                }
            }
            Ok(if outcome.findings.is_empty() { 0 } else { EXIT_FAILS })
        }
        Command::Verify { input } => {
            let text = read_input(&input)?;
            let findings = json::read_findings(&text).map_err(input_error)?;
            let results: Vec<bool> = findings.iter().map(verify_finding).collect();
            let failed = results.iter().filter(|ok| !**ok).count();
            match out.format {
                Format::Json => out.json(&json!({
                    "verdict": if failed == 0 { "holds" } else { "fails" },
                    "checked": results.len(),
                    "failed": failed,
                    "results": results,
                }))?,
                Format::Text => {
                    for (i, ok) in results.iter().enumerate() {
                        out.line(format!("finding {}: {}", i + 1, if *ok { "verified" } else { "MISMATCH" }))?;
                    }
                    out.line(format!("verified {} of {}", results.len() - failed, results.len()))?;
                }
            }
            Ok(if failed == 0 { 0 } else { EXIT_FAILS })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::from(EXIT_INTERNAL)
            }
        }
    }
}
