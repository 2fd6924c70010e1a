//! Command-line front end. [`run`] parses arguments, executes one job and
//! returns the exit code with everything destined for stdout and stderr, so
//! the binary is a thin wrapper and tests can drive it in-process.

mod inputs;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::coeff::CountSamples;
use crate::genfun::{
    dt_from_pt, dt_zero, macmahon, n_table_from_json, rational_from_periodic, reduce_dt, series_csv,
    toda_assemble, toda_json, DTSeries, TruncSeries,
};
use crate::grading::{Slope, SlopeInterval};
use crate::hall::{element_json, epsilon_eta, model_window, n_invariants, HallAlgebra, ModelFamily};
use crate::lab::{self, is_capability_error, Identity, LabConfig, VerificationReport, SCHEMA};
use crate::model::{BuildOptions, Model};
use crate::series::GradedRing;

pub use inputs::parse_window;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
}

fn cfg_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "hallcalc", version, about = "Finite-field Hall algebras, identity verifiers and DT/PT generating functions")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Primes used to fit symbolic tables.
    #[arg(long, global = true, value_delimiter = ',')]
    sample_primes: Option<Vec<u64>>,
    /// Extra prime every fitted table must reproduce.
    #[arg(long, global = true)]
    holdout_prime: Option<u64>,
    /// Per-vertex dimension limit replacing the default for the field size.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Lift every enumeration limit.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Record wall-clock durations in reports (breaks byte-identical output).
    #[arg(long, global = true)]
    timings: bool,
    /// Seed for randomized batteries.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an identity verifier (or `all`) on a model.
    Verify(VerifyArgs),
    /// Generating-function computations.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Hall algebra computations on a model.
    #[command(subcommand)]
    Hall(HallCmd),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Identity name, or `all`.
    identity: String,
    #[arg(long)]
    model: PathBuf,
    /// `all`, `points:N`, `box:a,b`, inline JSON or a JSON file.
    #[arg(long, default_value = "all")]
    window: String,
    /// Slope interval for `hn` and `grinah`: `all`, `[a,b]` or a slope.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    interval: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    /// MacMahon function coefficients.
    Macmahon {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `M(-q)^chi`.
    Dt0 {
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Divide every column of a DT series by `M(-q)^chi`.
    Reduce {
        #[arg(long)]
        dt: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply every column of a PT series by `M(-q)^chi`.
    DtFromPt {
        #[arg(long)]
        pt: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract the Laurent polynomials `L_beta` from PT series and an N-table.
    Toda {
        #[arg(long)]
        n_table: PathBuf,
        /// Pairing of each class coordinate with the divisor.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        pt: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed form of `sum n a_(n mod d) q^n` and its `q <-> 1/q` verdict.
    Rational {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        table: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum HallCmd {
    /// Product of two named elements.
    Mul {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value = "all")]
        window: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integration map applied to a named element.
    Integrate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long, default_value = "all")]
        window: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `log 1_SS(mu)`, its regularity and N-invariants, fitted over the
    /// sample primes.
    Epsilon {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
        #[arg(long, default_value = "all")]
        window: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Isomorphism classes with automorphism counts.
    Classes {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the job.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    if let Some(n) = cli.global.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let mut out = Outcome::default();
    match execute(&cli, &mut out) {
        Ok(code) => out.code = code,
        Err(e) => {
            out.stderr.push_str(&format!("error: {e}\n"));
            out.code = 2;
        }
    }
    out
}

fn build_options(g: &GlobalOpts) -> BuildOptions {
    BuildOptions {
        allow_large: g.allow_large,
        max_dim: g.max_dim,
    }
}

fn samples(g: &GlobalOpts) -> Result<CountSamples, CliError> {
    let mut s = CountSamples::default();
    if let Some(p) = &g.sample_primes {
        s.primes = p.clone();
    }
    if let Some(h) = g.holdout_prime {
        s.holdout = h;
    }
    if s.primes.is_empty() || s.primes.contains(&s.holdout) {
        return Err(cfg_err("need at least one sample prime and a distinct holdout prime"));
    }
    Ok(s)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Writes to `--out` when given (and notes the path on stdout), otherwise
/// to stdout.
fn emit(out: &mut Outcome, path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            write_file(p, text)?;
            out.stdout.push_str(&format!("wrote {}\n", p.display()));
        }
        None => out.stdout.push_str(text),
    }
    Ok(())
}

fn write_file(p: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| cfg_err(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(p, text).map_err(|e| cfg_err(format!("{}: {e}", p.display())))
}

fn execute(cli: &Cli, out: &mut Outcome) -> Result<i32, CliError> {
    match &cli.command {
        Command::Verify(a) => verify(&cli.global, a, out),
        Command::Series(s) => series(s, out).map(|_| 0),
        Command::Hall(h) => hall(&cli.global, h, out).map(|_| 0),
    }
}

fn verify(g: &GlobalOpts, a: &VerifyArgs, out: &mut Outcome) -> Result<i32, CliError> {
    let spec = inputs::load_spec(&a.model)?;
    let cfg = LabConfig {
        samples: samples(g)?,
        build: build_options(g),
        interval: SlopeInterval::parse(&a.interval).map_err(cfg_err)?,
        seed: g.seed,
        timings: g.timings,
    };
    let window = parse_window(&a.window, None)?;
    if a.identity == "all" {
        let mut reports: Vec<VerificationReport> = Vec::new();
        let mut skipped = Vec::new();
        for id in Identity::ALL {
            match lab::run(id, &spec, window.as_ref(), &cfg) {
                Ok(r) => reports.push(r),
                Err(e) if is_capability_error(&e) || id.is_symbolic() && too_large(&e) => {
                    skipped.push(json!({"identity": id.name(), "reason": e.to_string()}));
                }
                Err(e) => return Err(cfg_err(format!("{id}: {e}"))),
            }
        }
        let mut summary = String::new();
        for r in &reports {
            summary.push_str(&r.summary());
            summary.push('\n');
        }
        for s in &skipped {
            summary.push_str(&format!(
                "{}: skipped ({})\n",
                s["identity"].as_str().unwrap_or_default(),
                s["reason"].as_str().unwrap_or_default()
            ));
        }
        let batch = json!({
            "schema": SCHEMA,
            "model_fingerprint": spec.fingerprint(),
            "reports": reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
            "skipped": skipped,
        });
        finish_verify(out, &a.out, &pretty(&batch), &summary);
        return Ok(lab::exit_code(&reports));
    }
    let id: Identity = a.identity.parse().map_err(cfg_err)?;
    let r = lab::run(id, &spec, window.as_ref(), &cfg).map_err(cfg_err)?;
    finish_verify(out, &a.out, &r.to_pretty(), &format!("{}\n", r.summary()));
    Ok(lab::exit_code(std::slice::from_ref(&r)))
}

/// Symbolic identities enumerate the model at every sample prime; in a batch
/// a model too large at the bigger primes skips them instead of aborting.
fn too_large(e: &lab::LabError) -> bool {
    matches!(
        e,
        lab::LabError::Hall(crate::hall::HallError::Model(crate::model::ModelError::TooLarge { .. }))
    )
}

fn finish_verify(out: &mut Outcome, path: &Option<PathBuf>, json: &str, summary: &str) {
    match path {
        Some(p) => match write_file(p, json) {
            Ok(()) => out.stdout.push_str(summary),
            Err(e) => {
                out.stderr.push_str(&format!("error: {e}\n"));
                out.stdout.push_str(summary);
            }
        },
        None => {
            out.stdout.push_str(json);
            out.stderr.push_str(summary);
        }
    }
}

fn series_text(s: &TruncSeries, f: Format) -> Result<String, CliError> {
    match f {
        Format::Csv => series_csv(s).map_err(cfg_err),
        Format::Json => Ok(pretty(&serde_json::to_value(s).expect("series serializes"))),
    }
}

fn dt_text(s: &DTSeries, f: Format) -> Result<String, CliError> {
    match f {
        Format::Csv => s.to_csv().map_err(cfg_err),
        Format::Json => Ok(pretty(&s.to_json())),
    }
}

fn load_dt(p: &Path) -> Result<DTSeries, CliError> {
    DTSeries::from_json(&inputs::read_file(p)?).map_err(|e| cfg_err(format!("{}: {e}", p.display())))
}

fn series(cmd: &SeriesCmd, out: &mut Outcome) -> Result<(), CliError> {
    match cmd {
        SeriesCmd::Macmahon { order, format, out: o } => {
            let t = series_text(&macmahon(*order), *format)?;
            emit(out, o, &t)
        }
        SeriesCmd::Dt0 { chi, order, format, out: o } => {
            let t = series_text(&dt_zero(*chi, *order), *format)?;
            emit(out, o, &t)
        }
        SeriesCmd::Reduce { dt, chi, format, out: o } => {
            let dt = load_dt(dt)?;
            let order = dt.columns.values().map(|s| s.upper - s.lower).max().unwrap_or(0).max(0);
            let red = reduce_dt(&dt, &dt_zero(*chi, order as usize)).map_err(cfg_err)?;
            let t = dt_text(&red, *format)?;
            emit(out, o, &t)
        }
        SeriesCmd::DtFromPt { pt, chi, format, out: o } => {
            let t = dt_text(&dt_from_pt(&load_dt(pt)?, *chi), *format)?;
            emit(out, o, &t)
        }
        SeriesCmd::Toda { n_table, h, pt, out: o } => {
            let n = n_table_from_json(&inputs::read_file(n_table)?).map_err(cfg_err)?;
            let h = inputs::parse_ints(h)?;
            let cols = toda_assemble(&n, &h, &load_dt(pt)?).map_err(cfg_err)?;
            emit(out, o, &pretty(&json!({"columns": toda_json(&cols)})))
        }
        SeriesCmd::Rational { d, table, out: o } => {
            let a = inputs::parse_rationals(table)?;
            let r = rational_from_periodic(*d, &a).map_err(cfg_err)?;
            emit(out, o, &pretty(&r.to_json()))
        }
    }
}

fn hall(g: &GlobalOpts, cmd: &HallCmd, out: &mut Outcome) -> Result<(), CliError> {
    let opts = build_options(g);
    match cmd {
        HallCmd::Mul { model, left, right, window, out: o } => {
            let m = Model::build(&inputs::load_spec(model)?, &opts).map_err(cfg_err)?;
            let alg = HallAlgebra::new(&m).map_err(cfg_err)?;
            let w = parse_window(window, Some(&m))?.unwrap_or_else(|| model_window(&m));
            alg.check_window(&w).map_err(cfg_err)?;
            let a = inputs::element(&alg, &w, left)?;
            let b = inputs::element(&alg, &w, right)?;
            emit(out, o, &pretty(&element_json(&m, &alg.mul(&a, &b))))
        }
        HallCmd::Integrate { model, element, window, out: o } => {
            let m = Model::build(&inputs::load_spec(model)?, &opts).map_err(cfg_err)?;
            let alg = HallAlgebra::new(&m).map_err(cfg_err)?;
            let w = parse_window(window, Some(&m))?.unwrap_or_else(|| model_window(&m));
            alg.check_window(&w).map_err(cfg_err)?;
            let f = inputs::element(&alg, &w, element)?;
            emit(out, o, &pretty(&alg.integrate(&f).to_json()))
        }
        HallCmd::Epsilon { model, slope, window, out: o } => {
            let (spec, _) = lab::symbolic_spec(&inputs::load_spec(model)?);
            let fam = ModelFamily::build(&spec, &samples(g)?, &opts).map_err(cfg_err)?;
            let mu = Slope::parse(slope).map_err(cfg_err)?;
            let w = parse_window(window, Some(fam.base()))?.unwrap_or_else(|| model_window(fam.base()));
            let ee = epsilon_eta(&fam, &mu, &w).map_err(cfg_err)?;
            let n = if ee.regular {
                n_invariants(&fam, &ee.eta).map_err(cfg_err)?.to_json()
            } else {
                Value::Null
            };
            let v = json!({
                "schema": SCHEMA,
                "model_fingerprint": fam.base().fingerprint(),
                "slope": mu,
                "regular": ee.regular,
                "witness": ee.witness.map(|(g, label, order)| json!({"degree": g, "class_label": label, "order_at_one": order})),
                "epsilon": fam.to_json(&ee.epsilon),
                "eta": fam.to_json(&ee.eta),
                "n_table": n,
            });
            emit(out, o, &pretty(&v))
        }
        HallCmd::Classes { model, out: o } => {
            let m = Model::build(&inputs::load_spec(model)?, &opts).map_err(cfg_err)?;
            let mut rows = Vec::new();
            for d in m.degrees() {
                for c in m.iso_classes(&d).map_err(cfg_err)? {
                    rows.push(json!({"degree": c.degree, "class_label": c.label, "aut_order": c.aut_order.to_string()}));
                }
            }
            emit(out, o, &pretty(&json!({"model_fingerprint": m.fingerprint(), "classes": rows})))
        }
    }
}
