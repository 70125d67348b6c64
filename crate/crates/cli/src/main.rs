//! `flatdisk`: reproducible verification runs and sweeps.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or a run aborts,
//! 2 on usage errors and invalid parameters.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flatdisk::exponents::{derive_ledger, ExponentPair};
use flatdisk::field::{parse_modulus, Field};
use flatdisk::normlab::{EstimatorConfig, LpExponent};
use flatdisk::report::Report;
use flatdisk::suite::{self, SweepKind};
use flatdisk::varieties::VarietyKind;
use flatdisk::Error;

#[derive(Parser)]
#[command(name = "flatdisk", version, about = "Finite-field restriction laboratory for the flat disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here; the summary then goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall time in the report (reports are then no longer byte-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and identity checks.
    #[command(subcommand)]
    Verify(Verify),
    /// Operator-norm experiments.
    #[command(subcommand)]
    Norms(Norms),
    /// Kakeya maximal function examples and ratios.
    Kakeya {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value = "2")]
        r: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exponent ledger and pair checks.
    #[command(subcommand)]
    Exponents(Exponents),
    /// One measurement per q, with a max/min summary row.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepChoice,
        /// Comma-separated field orders.
        #[arg(long, value_delimiter = ',', required = true)]
        qs: Vec<u32>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "6")]
        r: String,
        #[arg(long, default_value = "2")]
        p: String,
        /// Largest accepted max/min ratio for opnorm sweeps.
        #[arg(long, default_value_t = 2.0)]
        max_spread: f64,
        #[command(flatten)]
        est: EstimatorArgs,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum SweepChoice {
    Opnorm,
    Decay,
    Kakeya,
}

#[derive(Subcommand)]
enum Verify {
    /// Closed form of the surface-measure transform against brute force.
    Oracle {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Gauss sum squares and the completed-square identity.
    Gauss {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,9,11,13,25,27,49")]
        qs: Vec<u32>,
    },
    /// Kernel sup-norms, decompositions and decay.
    Kernels {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Fast transforms against the quadratic-time definitions.
    Transform {
        #[command(flatten)]
        field: FieldArgs,
        /// Ambient dimension.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Plancherel, inversion, convolution, adjointness and RR* on random inputs.
    Identities {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum Norms {
    /// Lower bound for the extension constant R*(2 -> r).
    Extension {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_enum, default_value_t = VarietyChoice::FlatDisk)]
        variety: VarietyChoice,
        /// Source exponent; only 2 is supported by the estimator.
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value = "6")]
        r: String,
        #[command(flatten)]
        est: EstimatorArgs,
    },
    /// Structured probes against their closed forms.
    Probes {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Single pair; the default is a 3x3 grid including the sharp L2 pair.
        #[arg(long, requires = "r")]
        p: Option<String>,
        #[arg(long, requires = "p")]
        r: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum VarietyChoice {
    FlatDisk,
    Paraboloid,
}

#[derive(Subcommand)]
enum Exponents {
    /// Re-derive the flat-disk exponent ledger.
    Derive,
    /// Necessary conditions and conjectured region for one pair.
    Check {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: String,
        #[arg(long)]
        r: String,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field order q = p^ell; the default modulus is used.
    #[arg(long, conflicts_with_all = ["char_p", "ell", "modulus"])]
    q: Option<u32>,
    /// Characteristic, when giving the field explicitly.
    #[arg(long = "char")]
    char_p: Option<u32>,
    #[arg(long, requires = "char_p")]
    ell: Option<u32>,
    /// Irreducible modulus coefficients, constant term first, comma-separated.
    #[arg(long, requires = "char_p")]
    modulus: Option<String>,
}

#[derive(Args)]
struct EstimatorArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

impl EstimatorArgs {
    fn config(&self) -> EstimatorConfig {
        EstimatorConfig { restarts: self.restarts, iters: self.iters, tol: self.tol, seed: self.seed }
    }
}

impl FieldArgs {
    fn build(&self) -> flatdisk::Result<Arc<Field>> {
        let f = match (self.q, self.char_p) {
            (Some(q), _) => Field::with_order(q)?,
            (None, Some(p)) => {
                let modulus = self.modulus.as_deref().map(parse_modulus).transpose()?;
                Field::new(p, self.ell.unwrap_or(1), modulus.as_deref())?
            }
            (None, None) => Field::with_order(3)?,
        };
        Ok(Arc::new(f))
    }
}

fn lp(s: &str) -> flatdisk::Result<LpExponent> {
    s.parse()
}

fn run(cmd: &Command) -> flatdisk::Result<(Report, Option<String>)> {
    let mut ledger_csv = None;
    let rep = match cmd {
        Command::Verify(v) => match v {
            Verify::Oracle { field, d } => suite::verify_oracle(field.build()?, *d)?,
            Verify::Gauss { qs } => suite::verify_gauss(qs)?,
            Verify::Kernels { field, d } => suite::verify_kernels(field.build()?, *d)?,
            Verify::Transform { field, n, trials, seed, tol } => {
                suite::verify_transform(field.build()?, *n, *trials, *seed, *tol)?
            }
            Verify::Identities { field, d, trials, seed, tol } => {
                suite::verify_identities(field.build()?, *d, *trials, *seed, *tol)?
            }
        },
        Command::Norms(n) => match n {
            Norms::Extension { field, d, variety, p, r, est } => {
                if lp(p)? != LpExponent::int(2) {
                    return Err(Error::Domain(format!("the estimator bounds R*(2 -> r); got p = {p}")));
                }
                let kind = match variety {
                    VarietyChoice::FlatDisk => VarietyKind::FlatDisk,
                    VarietyChoice::Paraboloid => VarietyKind::Paraboloid,
                };
                suite::norms_extension(field.build()?, kind, *d, lp(r)?, &est.config())?
            }
            Norms::Probes { field, d, p, r, tol } => {
                let pairs = match (p, r) {
                    (Some(p), Some(r)) => vec![(lp(p)?, lp(r)?)],
                    _ => suite::probe_grid(*d),
                };
                suite::norms_probes(field.build()?, *d, &pairs, *tol)?
            }
        },
        Command::Kakeya { field, d, p, r, seed } => suite::kakeya(field.build()?, *d, lp(p)?, lp(r)?, *seed)?,
        Command::Exponents(e) => match e {
            Exponents::Derive => {
                ledger_csv = Some(derive_ledger()?.to_csv()?);
                suite::exponents_derive()?
            }
            Exponents::Check { n, p, r } => suite::exponents_check(*n, &ExponentPair::parse(p, r)?)?,
        },
        Command::Sweep { kind, qs, d, r, p, max_spread, est } => {
            let kind = match kind {
                SweepChoice::Opnorm => SweepKind::Opnorm { r: lp(r)?, cfg: est.config() },
                SweepChoice::Decay => SweepKind::Decay,
                SweepChoice::Kakeya => SweepKind::Kakeya { p: lp(p)?, r: lp(r)?, seed: est.seed },
            };
            suite::sweep(&kind, qs, *d, *max_spread)?
        }
    };
    Ok((rep, ledger_csv))
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::InvalidField(_) | Error::Domain(_) | Error::Parse(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (mut report, ledger_csv) = match run(&cli.command) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if is_usage(&e) { 2 } else { 1 });
        }
    };
    if cli.out.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    let body = match cli.out.format {
        Format::Json => report.to_json(),
        Format::Csv => ledger_csv.map(Ok).unwrap_or_else(|| report.to_csv()),
    };
    let body = match body {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &cli.out.out {
        Some(path) => {
            if let Err(e) = fs::write(path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
            print!("{}", report.summary());
        }
        None => {
            print!("{body}");
            eprint!("{}", report.summary());
        }
    }
    ExitCode::from(if report.pass { 0 } else { 1 })
}
