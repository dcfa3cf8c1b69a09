//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed operation (invalid certificate,
//! construction or arithmetic failure), 2 parse or usage error,
//! 3 unsupported σ order.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use thiserror::Error;

use crate::decompose::{verify_certificate, CertificateError, CertificateJson, DecomposeError, Decomposer};
use crate::field::{AutField, FieldError, GaloisField, RationalFunctionField};
use crate::series::{SeriesError, SkewRing};
use crate::text::{format_series, parse_series, TextError};
use crate::trace::{reduced_trace, TraceError};

/// A coefficient field chosen at run time.
#[derive(Clone, Debug)]
pub enum AnyField {
    Gf(GaloisField),
    Qt(RationalFunctionField),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("certificate does not verify")]
    Invalid,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Decompose(DecomposeError::UnsupportedOrder(_)) => 3,
            CliError::Decompose(_) | CliError::Series(_) | CliError::Invalid => 1,
            _ => 2,
        }
    }
}

fn bad_field(msg: String) -> CliError {
    CliError::Usage(msg)
}

/// Parses `--field` and `--sigma`.
///
/// Fields: `gf(p^m)` or `gf(p^m);poly=c0,c1,…,cm` (ascending, monic), and
/// `qt`. Automorphisms: `frob` or `frob^e` over `gf`; `shift` (`t ↦ t + 1`)
/// or `scale:q` (`t ↦ q·t`, `q` an integer or `a/b`) over `qt`.
pub fn parse_field(field: &str, sigma: &str) -> Result<AnyField, CliError> {
    let field = field.trim();
    let sigma = sigma.trim();
    if field == "qt" {
        return match sigma {
            "shift" => Ok(AnyField::Qt(RationalFunctionField::shift())),
            s => match s.strip_prefix("scale:") {
                Some(q) => {
                    let q = BigRational::from_str(q.trim())
                        .map_err(|_| bad_field(format!("bad scale factor {q:?}")))?;
                    Ok(AnyField::Qt(RationalFunctionField::scale(q)?))
                }
                None => Err(bad_field(format!("unknown automorphism {s:?} for qt (use shift or scale:q)"))),
            },
        };
    }
    let body = field
        .strip_prefix("gf(")
        .ok_or_else(|| bad_field(format!("unknown field {field:?} (use gf(p^m) or qt)")))?;
    let (size, poly) = match body.split_once(')') {
        Some((size, rest)) => (size, rest),
        None => return Err(bad_field(format!("missing ')' in {field:?}"))),
    };
    let (p, m) = size
        .split_once('^')
        .ok_or_else(|| bad_field(format!("expected p^m in {field:?}")))?;
    let p: u64 = p.trim().parse().map_err(|_| bad_field(format!("bad characteristic {p:?}")))?;
    let m: usize = m.trim().parse().map_err(|_| bad_field(format!("bad degree {m:?}")))?;
    let e: u64 = match sigma {
        "frob" => 1,
        s => s
            .strip_prefix("frob^")
            .and_then(|e| e.trim().parse().ok())
            .ok_or_else(|| bad_field(format!("unknown automorphism {s:?} for gf (use frob or frob^e)")))?,
    };
    let k = if poly.is_empty() {
        GaloisField::new(p, m, e)?
    } else {
        let list = poly
            .strip_prefix(";poly=")
            .ok_or_else(|| bad_field(format!("unexpected {poly:?} after gf(p^m)")))?;
        let modulus = list
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|_| bad_field(format!("bad coefficient {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if modulus.len() != m + 1 {
            return Err(bad_field(format!("gf({p}^{m}) needs {} polynomial coefficients", m + 1)));
        }
        GaloisField::with_modulus(p, modulus, e)?
    };
    Ok(AnyField::Gf(k))
}

macro_rules! with_field {
    ($any:expr, $k:ident => $body:expr) => {
        match $any {
            AnyField::Gf($k) => $body,
            AnyField::Qt($k) => $body,
        }
    };
}

#[derive(Parser, Debug)]
#[command(name = "skewcomm", version, about = "Two-commutator factorizations in skew Laurent series rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct FieldArgs {
    /// Coefficient field: gf(p^m), gf(p^m);poly=c0,...,cm, or qt.
    #[arg(long)]
    field: String,
    /// Automorphism: frob, frob^e, shift, or scale:q.
    #[arg(long)]
    sigma: String,
    /// Relative precision for series written without O(x^N).
    #[arg(long, default_value_t = 32, allow_negative_numbers = true)]
    prec: i64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Op {
    Add,
    Sub,
    Mul,
    Inv,
    Comm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor a series as [p1,q1]·[p2,q2] and print the certificate JSON.
    Decompose {
        #[command(flatten)]
        field: FieldArgs,
        series: String,
    },
    /// Re-check a certificate file.
    Verify { path: PathBuf },
    /// Print the reduced trace of a series (finite σ order only).
    Trace {
        #[command(flatten)]
        field: FieldArgs,
        series: String,
    },
    /// Evaluate one arithmetic operation on parsed series.
    Eval {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        op: Op,
        #[arg(num_args = 1..=2, required = true)]
        operands: Vec<String>,
    },
}

fn decompose_cmd<F: AutField>(k: F, prec: i64, src: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let dec = Decomposer::new(k.clone())?;
    let f = parse_series(dec.ring(), src, prec)?;
    let cert = dec.decompose(&f)?;
    write!(out, "{}", cert.to_json(&k)).expect("stdout");
    Ok(())
}

fn verify_cmd<F: AutField>(k: F, json: &CertificateJson, out: &mut dyn Write) -> Result<(), CliError> {
    let d = SkewRing::new(k);
    let cert = json.to_certificate(&d)?;
    if verify_certificate(&d, &cert)? {
        writeln!(out, "valid").expect("stdout");
        Ok(())
    } else {
        Err(CliError::Invalid)
    }
}

fn trace_cmd<F: AutField>(k: F, prec: i64, src: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let d = SkewRing::new(k);
    let f = parse_series(&d, src, prec)?;
    let t = reduced_trace(&d, &f)?;
    writeln!(out, "{}", format_series(d.field(), &t)).expect("stdout");
    Ok(())
}

fn eval_cmd<F: AutField>(k: F, prec: i64, op: Op, operands: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let d = SkewRing::new(k);
    let args = operands
        .iter()
        .map(|s| parse_series(&d, s, prec))
        .collect::<Result<Vec<_>, _>>()?;
    let arity = if matches!(op, Op::Inv) { 1 } else { 2 };
    if args.len() != arity {
        return Err(CliError::Usage(format!("--op {op:?} takes {arity} operand(s)").to_lowercase()));
    }
    let r = match op {
        Op::Add => d.add(&args[0], &args[1]),
        Op::Sub => d.sub(&args[0], &args[1]),
        Op::Mul => d.mul(&args[0], &args[1]),
        Op::Comm => d.commutator(&args[0], &args[1]),
        Op::Inv => d.inverse(&args[0])?,
    };
    writeln!(out, "{}", format_series(d.field(), &r)).expect("stdout");
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose { field, series } => {
            with_field!(parse_field(&field.field, &field.sigma)?, k => decompose_cmd(k, field.prec, &series, out))
        }
        Command::Verify { path } => {
            let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?;
            let json = CertificateJson::parse(&text)?;
            with_field!(parse_field(&json.field, &json.sigma)?, k => verify_cmd(k, &json, out))
        }
        Command::Trace { field, series } => {
            with_field!(parse_field(&field.field, &field.sigma)?, k => trace_cmd(k, field.prec, &series, out))
        }
        Command::Eval { field, op, operands } => {
            with_field!(parse_field(&field.field, &field.sigma)?, k => eval_cmd(k, field.prec, op, &operands, out))
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                write!(out, "{text}").ok();
            } else {
                write!(err, "{text}").ok();
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            e.exit_code()
        }
    }
}
