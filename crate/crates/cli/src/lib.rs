//! Command-line front end for `conegap`. [`run`] takes the arguments and
//! output streams so it can be driven from tests.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conegap::contraction::{diameter_upper, power_iterate_with_rate, PowerStep};
use conegap::gauge::{remark_row, remark_sequences, RemarkRow, SequenceTriple};
use conegap::geometry::region_mod_bounds;
use conegap::sampling::sampled_diameter;
use conegap::{
    certify_with, check_condition, contraction_coefficient, delta, diameter_bounds, e_region,
    inequality_report, theta_sigma, CertifyOptions, ComplexMatrix, ConditionReport, ConePoint,
    DiameterBounds, MetricValue, Part, PowerResult, Region, ThetaSigma,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

mod input;

pub use input::{parse_vector, read_matrix, read_rows, read_vectors};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONDITION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}, column {col}: {msg}")]
    Syntax {
        path: String,
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("{path}: row {row}, column {col}: {msg}")]
    At {
        path: String,
        row: usize,
        col: usize,
        msg: String,
    },

    #[error("{path}: {msg}")]
    Shape { path: String, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] conegap::Error),

    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(conegap::Error::ConditionFails) => EXIT_CONDITION,
            _ => EXIT_INPUT,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got '{s}'")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Stopping tolerance for power iteration
    #[arg(long, global = true, default_value = "1e-9", value_parser = positive_f64)]
    pub tol: f64,

    /// Grid size for diameter estimates, or random pairs for `diam`
    #[arg(long, global = true, default_value = "256", value_parser = positive_usize)]
    pub samples: usize,

    #[arg(long, global = true, default_value = "10000", value_parser = positive_usize)]
    pub max_iter: usize,

    /// Cross-check against the eigenvalues of the characteristic polynomial
    #[arg(long, global = true)]
    pub oracle: bool,

    /// Seed for all random sampling
    #[arg(long, global = true, default_value = "0")]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(
    name = "conegap",
    version,
    about = "Projective metrics and certified spectral gaps on the cone C+^n"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether a matrix maps the cone into its interior (exit 2 if not)
    Check { file: PathBuf },
    /// Full spectral gap certificate
    Certify { file: PathBuf },
    /// Pairwise projective distances between vectors
    Delta { file: PathBuf },
    /// Bounds on the image diameter plus a seeded Monte-Carlo estimate
    Diam { file: PathBuf },
    /// Power iteration with certified error bounds per step
    Power {
        file: PathBuf,
        /// Starting vector, e.g. `1,0` or `1+2i,1`; defaults to all ones
        #[arg(long)]
        x0: Option<String>,
    },
    /// Compare the projective distance with the hyperbolic gauge for a pair
    Compare { file: PathBuf },
    /// Disks of the exclusion region of a pair, for plotting
    Region { file: PathBuf },
    /// Growth table for the three-vector sequences in C+^3
    DemoRemark {
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        k: Vec<u32>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code: 0 on success, 2 if the cone condition fails, 1 on input or
/// usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Check { file } => cmd_check(&read_matrix(file)?, cfg, out),
        Command::Certify { file } => cmd_certify(&read_matrix(file)?, cfg, out, err),
        Command::Delta { file } => cmd_delta(file, cfg, out),
        Command::Diam { file } => cmd_diam(&read_matrix(file)?, cfg, out),
        Command::Power { file, x0 } => cmd_power(&read_matrix(file)?, x0.as_deref(), cfg, out),
        Command::Compare { file } => cmd_compare(file, cfg, out),
        Command::Region { file } => cmd_region(file, cfg, out),
        Command::DemoRemark { k } => cmd_demo_remark(k, cfg, out),
    }
}

fn json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Two-column `key,value` CSV for object-shaped results.
fn pairs(out: &mut dyn Write, items: &[(&str, String)]) -> Result<(), CliError> {
    let rows: Vec<Vec<String>> = items
        .iter()
        .map(|(k, v)| vec![k.to_string(), v.clone()])
        .collect();
    table(out, &["key", "value"], &rows)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn violation_text(r: &ConditionReport) -> String {
    r.first_violation
        .map(|v| {
            v.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_default()
}

/// Emits the condition report and returns exit 2 if it fails.
fn condition_gate(
    a: &ComplexMatrix,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<Option<i32>, CliError> {
    let report = check_condition(a);
    if report.holds {
        return Ok(None);
    }
    emit_condition(&report, cfg, out)?;
    Ok(Some(EXIT_CONDITION))
}

fn emit_condition(
    report: &ConditionReport,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match cfg.format {
        Format::Json => json(out, report),
        Format::Csv => pairs(
            out,
            &[
                ("holds", report.holds.to_string()),
                ("margin", report.margin.to_string()),
                ("violation", violation_text(report)),
            ],
        ),
    }
}

fn cmd_check(a: &ComplexMatrix, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = check_condition(a);
    emit_condition(&report, cfg, out)?;
    Ok(if report.holds {
        EXIT_OK
    } else {
        EXIT_CONDITION
    })
}

fn cmd_certify(
    a: &ComplexMatrix,
    cfg: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let opts = CertifyOptions {
        samples: cfg.samples,
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        oracle: cfg.oracle,
        x0: None,
    };
    let cert = certify_with(a, &opts)?;
    if let Some(o) = cert.oracle.filter(|o| !o.pass) {
        writeln!(
            err,
            "warning: oracle ratio {} exceeds the certified coefficient",
            o.ratio
        )?;
    }
    match cfg.format {
        Format::Json => json(out, &cert)?,
        Format::Csv => {
            let b = cert.delta_diam;
            let ts = cert.theta_sigma;
            let l = cert.leading.as_ref();
            pairs(
                out,
                &[
                    ("holds", cert.condition.holds.to_string()),
                    ("violation", violation_text(&cert.condition)),
                    ("delta1", opt(b.map(|b| b.delta1))),
                    ("delta2_estimate", opt(b.map(|b| b.delta2.estimate))),
                    ("delta2_upper", opt(b.map(|b| b.delta2.upper))),
                    ("diameter_lower", opt(b.map(|b| b.lower))),
                    ("diameter_upper", opt(b.map(|b| b.upper))),
                    ("theta", opt(ts.map(|t| t.theta))),
                    ("sigma", opt(ts.map(|t| t.sigma))),
                    ("theta_sigma_bound", opt(ts.map(|t| t.bound))),
                    ("delta_up", opt(cert.delta_up)),
                    ("contraction", opt(cert.contraction)),
                    ("k", cert.k.to_string()),
                    ("lambda_re", opt(l.map(|l| l.lambda.re))),
                    ("lambda_im", opt(l.map(|l| l.lambda.im))),
                    ("residual", opt(l.map(|l| l.residual))),
                    ("iterations", opt(l.map(|l| l.iterations))),
                    ("error_bound", opt(l.map(|l| l.error_bound))),
                    ("oracle_ratio", opt(cert.oracle.map(|o| o.ratio))),
                    ("oracle_pass", opt(cert.oracle.map(|o| o.pass))),
                ],
            )?
        }
    }
    Ok(if cert.holds() {
        EXIT_OK
    } else {
        EXIT_CONDITION
    })
}

fn cmd_delta(
    file: &std::path::Path,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let points = read_vectors(file, 2)?
        .into_iter()
        .map(ConePoint::new)
        .collect::<Result<Vec<_>, _>>()?;
    let mut d = vec![vec![MetricValue::ZERO; points.len()]; points.len()];
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let v = delta(&points[i], &points[j])?;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                delta: &'a [Vec<MetricValue>],
            }
            json(out, &Out { delta: &d })?
        }
        Format::Csv => {
            let header: Vec<String> = (1..=points.len()).map(|j| format!("v{j}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = d
                .iter()
                .map(|r| r.iter().map(|v| v.to_string()).collect())
                .collect();
            table(out, &header, &rows)?
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DiamOut {
    bounds: DiameterBounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_sigma: Option<ThetaSigma>,
    delta_up: f64,
    contraction: f64,
    sampled: Sampled,
}

#[derive(Serialize)]
struct Sampled {
    pairs: usize,
    seed: u64,
    max: f64,
}

fn cmd_diam(a: &ComplexMatrix, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(code) = condition_gate(a, cfg, out)? {
        return Ok(code);
    }
    let bounds = diameter_bounds(a, cfg.samples)?;
    let ts = theta_sigma(a);
    let up = diameter_upper(&bounds, ts.as_ref());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let d = DiamOut {
        bounds,
        theta_sigma: ts,
        delta_up: up,
        contraction: contraction_coefficient(up)?,
        sampled: Sampled {
            pairs: cfg.samples,
            seed: cfg.seed,
            max: sampled_diameter(a, cfg.samples, &mut rng)?,
        },
    };
    match cfg.format {
        Format::Json => json(out, &d)?,
        Format::Csv => pairs(
            out,
            &[
                ("delta1", d.bounds.delta1.to_string()),
                ("delta2_estimate", d.bounds.delta2.estimate.to_string()),
                ("delta2_upper", d.bounds.delta2.upper.to_string()),
                ("lower", d.bounds.lower.to_string()),
                ("upper", d.bounds.upper.to_string()),
                ("theta_sigma_bound", opt(ts.map(|t| t.bound))),
                ("delta_up", d.delta_up.to_string()),
                ("contraction", d.contraction.to_string()),
                ("sampled_max", d.sampled.max.to_string()),
            ],
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PowerOut<'a> {
    contraction: f64,
    #[serde(flatten)]
    result: &'a PowerResult,
    trace: &'a [PowerStep],
}

fn cmd_power(
    a: &ComplexMatrix,
    x0: Option<&str>,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if let Some(code) = condition_gate(a, cfg, out)? {
        return Ok(code);
    }
    let x0 = match x0 {
        Some(s) => parse_vector(s)?,
        None => conegap::ComplexVector::ones(a.dim()),
    };
    let x0 = ConePoint::new(x0)?;
    let bounds = diameter_bounds(a, cfg.samples)?;
    let c = contraction_coefficient(diameter_upper(&bounds, theta_sigma(a).as_ref()))?;
    let p = power_iterate_with_rate(a, &x0, c, cfg.tol, cfg.max_iter)?;
    match cfg.format {
        Format::Json => json(
            out,
            &PowerOut {
                contraction: c,
                result: &p,
                trace: &p.trace,
            },
        )?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = p
                .trace
                .iter()
                .enumerate()
                .map(|(m, s)| {
                    vec![
                        (m + 1).to_string(),
                        s.delta.to_string(),
                        s.error_bound.to_string(),
                    ]
                })
                .collect();
            table(out, &["step", "delta", "error_bound"], &rows)?
        }
    }
    Ok(EXIT_OK)
}

fn pair(file: &std::path::Path) -> Result<(ConePoint, ConePoint), CliError> {
    let mut v = read_vectors(file, 2)?;
    if v.len() != 2 {
        return Err(CliError::Shape {
            path: file.display().to_string(),
            msg: format!("expected exactly 2 vectors, found {}", v.len()),
        });
    }
    let y = ConePoint::new(v.pop().expect("two vectors"))?;
    let x = ConePoint::new(v.pop().expect("two vectors"))?;
    Ok((x, y))
}

fn cmd_compare(
    file: &std::path::Path,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (x, y) = pair(file)?;
    let r = inequality_report(&x, &y)?;
    match cfg.format {
        Format::Json => json(out, &r)?,
        Format::Csv => pairs(
            out,
            &[
                ("delta", r.delta.to_string()),
                ("dc_lower", r.dc.lower.to_string()),
                ("dc_upper", r.dc.upper.to_string()),
                ("dtilde_lower", r.dtilde.lower.to_string()),
                ("dtilde_upper", r.dtilde.upper.to_string()),
                ("half_delta_ok", r.checks.half_delta_ok.to_string()),
                ("exp_bound_ok", r.checks.exp_bound_ok.to_string()),
                (
                    "finiteness_consistent",
                    r.checks.finiteness_consistent.to_string(),
                ),
                (
                    "delta_exceeds_dc",
                    serde_json::to_value(r.delta_exceeds_dc)?
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                ),
            ],
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RegionOut {
    delta: MetricValue,
    inner_modulus: f64,
    outer_modulus: MetricValue,
    #[serde(flatten)]
    region: Region,
}

fn cmd_region(
    file: &std::path::Path,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (x, y) = pair(file)?;
    let region = e_region(&x, &y)?.simplified();
    let (a, b) = region_mod_bounds(&region);
    let r = RegionOut {
        delta: delta(&x, &y)?,
        inner_modulus: a,
        outer_modulus: b,
        region,
    };
    match cfg.format {
        Format::Json => json(out, &r)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .region
                .parts
                .iter()
                .filter_map(|p| match p {
                    Part::Disk(d) => Some(vec![
                        d.center.re.to_string(),
                        d.center.im.to_string(),
                        d.radius.to_string(),
                    ]),
                    _ => None,
                })
                .collect();
            table(out, &["center_re", "center_im", "radius"], &rows)?
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RemarkOut {
    #[serde(flatten)]
    row: RemarkRow,
    vectors: SequenceTriple,
}

fn cmd_demo_remark(ks: &[u32], cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    if ks.contains(&0) {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let rows = ks
        .iter()
        .map(|&k| {
            Ok(RemarkOut {
                row: remark_row(k)?,
                vectors: remark_sequences(k)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match cfg.format {
        Format::Json => json(out, &rows)?,
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let r = &r.row;
                    vec![
                        r.k.to_string(),
                        r.delta_xy.to_string(),
                        r.dc_xy.lower.to_string(),
                        r.dc_xy.upper.to_string(),
                        r.dc_zx.upper.to_string(),
                        r.dc_zy.upper.to_string(),
                        r.k_log2.to_string(),
                        r.linear_growth_certified.to_string(),
                    ]
                })
                .collect();
            table(
                out,
                &[
                    "k",
                    "delta_xy",
                    "dc_xy_lower",
                    "dc_xy_upper",
                    "dc_zx_upper",
                    "dc_zy_upper",
                    "k_log2",
                    "linear_growth_certified",
                ],
                &body,
            )?
        }
    }
    Ok(EXIT_OK)
}
