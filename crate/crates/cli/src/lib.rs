//! Command-line front end for `gbm-core`.
//!
//! Exit codes: 0 success, 1 usage, 2 convergence failure, 3 oracle
//! disagreement.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbm_core::{
    b_second_derivative, critical_angle, gbm_gap, gbm_scan, sign_bracket, wedge_measure,
    wedge_measure_montecarlo, BConjReport64, BShape64, Error, GapReport64, QuadratureConfig64, Strip64,
    Wedge64, MIN_SAMPLES,
};
use serde::Serialize;

use output::{csv_row, to_json, Field, FormatKind, OutputFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONVERGENCE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

/// Header of every gap table, in column order.
pub const GAP_CSV_HEADER: &str = "alpha,eps,lambda,gap,gap_error_bound,predicted,agreement,violated";

/// Quadrature tolerance used on the wedge path of `bconj` at most.
const BCONJ_WEDGE_TOL: f64 = 1e-12;

/// |z| above which `oracle` reports disagreement.
const ORACLE_Z_LIMIT: f64 = 5.0;

#[derive(Debug, Parser)]
#[command(name = "gbm", version, about = "Gaussian Brunn-Minkowski counter-example verifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified gap for one (alpha, eps, lambda) triple.
    Reproduce(ReproduceArgs),
    /// Root of the discriminant sign bracket.
    CriticalAngle(CriticalAngleArgs),
    /// Gap table over a parameter grid, written to a file.
    Scan(ScanArgs),
    /// Second difference of log γ(eᵗK) for a wedge, strip or 1-d halfline.
    Bconj(BconjArgs),
    /// Monte Carlo against quadrature for one wedge.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatKind,
    /// Significant digits in numeric output.
    #[arg(long, default_value_t = OutputFormat::DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u8).range(6..=17))]
    pub precision: u8,
}

impl FormatArgs {
    fn resolve(&self) -> Result<OutputFormat, CliError> {
        OutputFormat::new(self.format, self.precision).map_err(CliError::Usage)
    }
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Interpret angles in degrees.
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct CriticalAngleArgs {
    #[arg(long, default_value_t = 1e-12, allow_hyphen_values = true)]
    pub tol: f64,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Comma-separated angles.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatKind,
    #[arg(long, default_value_t = OutputFormat::DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u8).range(6..=17))]
    pub precision: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Wedge,
    Strip,
    #[value(name = "halfspace1d")]
    Halfspace1d,
}

#[derive(Debug, Args)]
pub struct BconjArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeArg,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// Strip half-width.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    pub h: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub shift: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Convergence(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Convergence(_) => EXIT_CONVERGENCE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Convergence(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::UnsupportedCombination(_) => CliError::Usage(e.to_string()),
            _ => CliError::Convergence(e.to_string()),
        }
    }
}

/// Result of one invocation: exit status and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    let result = match &cli.command {
        Command::Reproduce(a) => cmd_reproduce(a),
        Command::CriticalAngle(a) => cmd_critical_angle(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Bconj(a) => cmd_bconj(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    result.unwrap_or_else(|e| Outcome {
        code: e.code(),
        stdout: String::new(),
        stderr: format!("error: {}\n", e.message()),
    })
}

fn angle(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

fn quadrature_config(tol: f64) -> Result<QuadratureConfig64, CliError> {
    QuadratureConfig64::with_tolerance(tol).map_err(|e| CliError::Usage(e.to_string()))
}

fn gap_fields(r: &GapReport64) -> Vec<Field<'static>> {
    vec![
        Field::Num(r.alpha),
        Field::Num(r.eps),
        Field::Num(r.lambda),
        Field::Num(r.gap),
        Field::Num(r.gap_error_bound),
        Field::Num(r.predicted),
        r.agreement.map_or(Field::Empty, Field::Num),
        Field::Bool(r.violated),
    ]
}

fn gap_csv<'a>(reports: impl IntoIterator<Item = &'a GapReport64>, precision: u8) -> String {
    let mut out = format!("{GAP_CSV_HEADER}\n");
    for r in reports {
        out.push_str(&csv_row(&gap_fields(r), precision));
    }
    out
}

pub fn cmd_reproduce(args: &ReproduceArgs) -> Result<Outcome, CliError> {
    let format = args.format.resolve()?;
    if !(0.0..=1.0).contains(&args.lambda) {
        return Err(CliError::Usage(format!("--lambda must lie in [0, 1], got {}", args.lambda)));
    }
    let cfg = quadrature_config(args.tol)?;
    let report = gbm_gap(angle(args.alpha, args.degrees), args.eps, args.lambda, &cfg)?;
    Ok(Outcome::ok(match format.kind {
        FormatKind::Json => to_json(&report, format.precision),
        FormatKind::Csv => gap_csv([&report], format.precision),
    }))
}

#[derive(Debug, Serialize)]
pub struct CriticalAngleReport {
    pub tol: f64,
    pub root: f64,
    pub bracket_below: f64,
    pub bracket_above: f64,
}

pub fn cmd_critical_angle(args: &CriticalAngleArgs) -> Result<Outcome, CliError> {
    let format = args.format.resolve()?;
    let root = critical_angle(args.tol)?;
    let report = CriticalAngleReport {
        tol: args.tol,
        root,
        bracket_below: sign_bracket(root - args.tol),
        bracket_above: sign_bracket(root + args.tol),
    };
    let p = format.precision;
    Ok(Outcome::ok(match format.kind {
        FormatKind::Json => to_json(&report, p),
        FormatKind::Csv => {
            let mut s = "tol,root,bracket_below,bracket_above\n".to_owned();
            s.push_str(&csv_row(
                &[
                    Field::Num(report.tol),
                    Field::Num(report.root),
                    Field::Num(report.bracket_below),
                    Field::Num(report.bracket_above),
                ],
                p,
            ));
            s
        }
    }))
}

/// Writes `contents` next to `path` and renames into place, so a failed
/// write never leaves a partial file behind.
fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    if path.is_dir() {
        return Err(CliError::Usage(format!("{} is a directory", path.display())));
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Scan cell whose quadrature failed; successful cells serialize as
/// [`GapReport64`].
#[derive(Debug, Serialize)]
struct FailedCell {
    alpha: f64,
    eps: f64,
    lambda: f64,
    error: String,
}

pub fn cmd_scan(args: &ScanArgs) -> Result<Outcome, CliError> {
    let format = OutputFormat::new(args.format, args.precision).map_err(CliError::Usage)?;
    let cfg = quadrature_config(args.tol)?;
    let alphas: Vec<f64> = args.alpha.iter().map(|&a| angle(a, args.degrees)).collect();
    let cells = gbm_scan(&alphas, &args.eps, &args.lambda, &cfg)?;

    let mut stderr = String::new();
    let p = format.precision;
    let body = match format.kind {
        FormatKind::Csv => {
            let mut out = format!("{GAP_CSV_HEADER}\n");
            for cell in &cells {
                match &cell.outcome {
                    Ok(r) => out.push_str(&csv_row(&gap_fields(r), p)),
                    Err(e) => {
                        stderr.push_str(&format!(
                            "warning: cell alpha={} eps={} lambda={}: {e}\n",
                            cell.alpha, cell.eps, cell.lambda
                        ));
                        out.push_str(&csv_row(
                            &[
                                Field::Num(cell.alpha),
                                Field::Num(cell.eps),
                                Field::Num(cell.lambda),
                                Field::Empty,
                                Field::Empty,
                                Field::Empty,
                                Field::Empty,
                                Field::Bool(false),
                            ],
                            p,
                        ));
                    }
                }
            }
            out
        }
        FormatKind::Json => {
            let records: Vec<serde_json::Value> = cells
                .iter()
                .map(|c| match &c.outcome {
                    Ok(r) => serde_json::to_value(r),
                    Err(e) => {
                        stderr.push_str(&format!(
                            "warning: cell alpha={} eps={} lambda={}: {e}\n",
                            c.alpha, c.eps, c.lambda
                        ));
                        serde_json::to_value(FailedCell {
                            alpha: c.alpha,
                            eps: c.eps,
                            lambda: c.lambda,
                            error: e.to_string(),
                        })
                    }
                })
                .collect::<Result<_, _>>()
                .expect("scan records serialize");
            to_json(&records, p)
        }
    };
    write_atomically(&args.out, &body)?;
    stderr.push_str(&format!("wrote {} cells to {}\n", cells.len(), args.out.display()));
    Ok(Outcome {
        code: EXIT_OK,
        stdout: String::new(),
        stderr,
    })
}

fn bconj_shape(args: &BconjArgs) -> Result<BShape64, CliError> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("--shape {:?} requires --{flag}", args.shape).to_lowercase()))
    };
    Ok(match args.shape {
        ShapeArg::Wedge => BShape64::Wedge(Wedge64::new(
            angle(need(args.alpha, "alpha")?, args.degrees),
            need(args.eps, "eps")?,
        )?),
        ShapeArg::Strip => BShape64::Strip(Strip64::new(need(args.c, "c")?)?),
        ShapeArg::Halfspace1d => {
            let eps = need(args.eps, "eps")?;
            if !(eps >= 0.0) || !eps.is_finite() {
                return Err(CliError::Usage(format!("--eps must be finite and non-negative, got {eps}")));
            }
            BShape64::Halfspace1d { eps }
        }
    })
}

fn bconj_csv(r: &BConjReport64, p: u8) -> String {
    let mut s = "shape,alpha,shift,halfwidth,eps,t0,step,second_derivative,fd_error_bound,log_concave_locally\n"
        .to_owned();
    let mut fields = match &r.shape {
        BShape64::Wedge(w) => vec![
            Field::Text("wedge"),
            Field::Num(w.alpha()),
            Field::Num(w.shift()),
            Field::Empty,
            Field::Empty,
        ],
        BShape64::Strip(st) => vec![
            Field::Text("strip"),
            Field::Empty,
            Field::Empty,
            Field::Num(st.halfwidth()),
            Field::Empty,
        ],
        BShape64::Halfspace1d { eps } => vec![
            Field::Text("halfspace_1d"),
            Field::Empty,
            Field::Empty,
            Field::Empty,
            Field::Num(*eps),
        ],
    };
    fields.extend([
        Field::Num(r.t0),
        Field::Num(r.step),
        Field::Num(r.second_derivative),
        Field::Num(r.fd_error_bound),
        Field::Bool(r.log_concave_locally),
    ]);
    s.push_str(&csv_row(&fields, p));
    s
}

pub fn cmd_bconj(args: &BconjArgs) -> Result<Outcome, CliError> {
    let format = args.format.resolve()?;
    let shape = bconj_shape(args)?;
    let tol = match shape {
        BShape64::Wedge(_) => args.tol.min(BCONJ_WEDGE_TOL),
        _ => args.tol,
    };
    let cfg = quadrature_config(tol)?;
    let report = b_second_derivative(&shape, args.t0, args.h, &cfg)?;
    Ok(Outcome::ok(match format.kind {
        FormatKind::Json => to_json(&report, format.precision),
        FormatKind::Csv => bconj_csv(&report, format.precision),
    }))
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub alpha: f64,
    pub shift: f64,
    pub samples: u64,
    pub seed: u64,
    pub montecarlo_mean: f64,
    pub montecarlo_std_error: f64,
    pub quadrature_value: f64,
    pub quadrature_error_bound: f64,
    pub z_score: f64,
    pub agree: bool,
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<Outcome, CliError> {
    let format = args.format.resolve()?;
    if args.n < MIN_SAMPLES {
        return Err(CliError::Usage(format!("--n must be at least {MIN_SAMPLES}, got {}", args.n)));
    }
    let cfg = quadrature_config(args.tol)?;
    let wedge = Wedge64::new(angle(args.alpha, args.degrees), args.shift)?;
    let quad = wedge_measure(&wedge, &cfg)?;
    let mc = wedge_measure_montecarlo(&wedge, args.n, args.seed)?;
    let z = mc.z_score(quad.value, quad.error_bound);
    let report = OracleReport {
        alpha: wedge.alpha(),
        shift: wedge.shift(),
        samples: mc.samples,
        seed: mc.seed,
        montecarlo_mean: mc.mean,
        montecarlo_std_error: mc.std_error,
        quadrature_value: quad.value,
        quadrature_error_bound: quad.error_bound,
        z_score: z,
        agree: z.abs() <= ORACLE_Z_LIMIT,
    };
    let p = format.precision;
    let stdout = match format.kind {
        FormatKind::Json => to_json(&report, p),
        FormatKind::Csv => {
            let mut s = "alpha,shift,samples,seed,montecarlo_mean,montecarlo_std_error,quadrature_value,quadrature_error_bound,z_score,agree\n".to_owned();
            s.push_str(&csv_row(
                &[
                    Field::Num(report.alpha),
                    Field::Num(report.shift),
                    Field::Int(report.samples),
                    Field::Int(report.seed),
                    Field::Num(report.montecarlo_mean),
                    Field::Num(report.montecarlo_std_error),
                    Field::Num(report.quadrature_value),
                    Field::Num(report.quadrature_error_bound),
                    Field::Num(report.z_score),
                    Field::Bool(report.agree),
                ],
                p,
            ));
            s
        }
    };
    Ok(Outcome {
        code: if report.agree { EXIT_OK } else { EXIT_DISAGREEMENT },
        stdout,
        stderr: String::new(),
    })
}
