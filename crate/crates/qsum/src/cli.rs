//! The `qsum` command line: list/describe the identity registry,
//! evaluate one identity at explicit parameters, run verification
//! sweeps, and run limit studies.
//!
//! Exit codes are exhaustive and disjoint: 0 success/pass, 1
//! mathematical failure (pole, divergence, residual above tolerance),
//! 2 usage error (unknown name, malformed parameter, bad precision).
//! Parameters are parsed as decimal strings at full context precision —
//! never through machine floats — with an optional imaginary part, e.g.
//! `a=0.2+0.1i`.
//!
//! All JSON output comes from [`crate::report`], so it is byte-identical
//! to what the C ABI produces for the same inputs.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};

use crate::arith::{make_context, Complex, PrecisionContext};
use crate::error::{Error, Result};
use crate::identities::{describe, IdentityCase, IdentityId};
use crate::report::{self, Evaluation};
use crate::series::SeriesStatus;
use crate::verifier::Profile;

#[derive(Parser)]
#[command(
    name = "qsum",
    version,
    about = "High-precision evaluation and verification of q-series summation identities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    Lhs,
    Rhs,
    Both,
}

impl From<Side> for report::Side {
    fn from(s: Side) -> Self {
        match s {
            Side::Lhs => report::Side::Lhs,
            Side::Rhs => report::Side::Rhs,
            Side::Both => report::Side::Both,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// List every identity in the registry
    List {
        /// Emit a JSON array instead of text
        #[arg(long)]
        json: bool,
    },
    /// Show an identity's sides, parameters, and domain
    Describe {
        /// Identity name (see `list`)
        id: String,
        /// Emit JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an identity at explicit parameters
    Eval {
        /// Identity name (see `list`)
        id: String,
        /// Parameter assignments, e.g. --param q=0.3 a=0.2 s=2.1 t=3.7
        #[arg(long = "param", value_name = "NAME=VALUE", num_args = 1.., action = ArgAction::Append)]
        params: Vec<String>,
        /// Which side(s) to evaluate
        #[arg(long, value_enum, default_value_t = Side::Both)]
        side: Side,
        /// Working precision in decimal digits (also via QSUM_DIGITS)
        #[arg(long, env = "QSUM_DIGITS", default_value_t = 50)]
        digits: u32,
        /// Emit JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Verify an identity (or all of them) over a seeded parameter sweep
    Verify {
        /// Identity name, or "all"
        id: String,
        /// Sample points per identity
        #[arg(long, default_value_t = 25)]
        count: usize,
        /// Seed for reproducible sampling
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Working precision in decimal digits (also via QSUM_DIGITS)
        #[arg(long, env = "QSUM_DIGITS", default_value_t = 50)]
        digits: u32,
        /// Draw parameters with small imaginary parts instead of real ones
        #[arg(long)]
        complex: bool,
        /// Write the JSON report to this file
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Write a CSV (one row per case) to this file
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        /// Print the JSON report to stdout
        #[arg(long)]
        json: bool,
        /// Record wall-clock seconds in the report (makes output non-reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// Run a limit study along a registered edge
    Limits {
        /// Edge name: thm2:prop41, prop41:cor42, cor42:quintuple, q4f3:f43
        edge: String,
        /// Comma-separated values for the varying parameter
        #[arg(long, value_name = "V1,V2,...")]
        schedule: Option<String>,
        /// Working precision in decimal digits (also via QSUM_DIGITS)
        #[arg(long, env = "QSUM_DIGITS", default_value_t = 50)]
        digits: u32,
        /// Write the JSON report to this file
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Print the JSON report to stdout
        #[arg(long)]
        json: bool,
        /// Record wall-clock seconds in the report (makes output non-reproducible)
        #[arg(long)]
        timing: bool,
    },
}

/// Parses the command line and runs it; returns the process exit code.
/// (clap itself exits with code 2 on malformed invocations.)
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::List { json } => cmd_list(json),
        Cmd::Describe { id, json } => cmd_describe(&id, json),
        Cmd::Eval {
            id,
            params,
            side,
            digits,
            json,
        } => cmd_eval(&id, &params, side, digits, json),
        Cmd::Verify {
            id,
            count,
            seed,
            digits,
            complex,
            out,
            csv,
            json,
            timing,
        } => cmd_verify(&id, count, seed, digits, complex, out, csv, json, timing),
        Cmd::Limits {
            edge,
            schedule,
            digits,
            out,
            json,
            timing,
        } => cmd_limits(&edge, schedule.as_deref(), digits, out, json, timing),
    }
}

fn cmd_list(json: bool) -> Result<i32> {
    if json {
        println!("{}", report::list_json());
    } else {
        let width = IdentityId::ALL
            .iter()
            .map(|id| id.name().len())
            .max()
            .unwrap_or(0);
        for id in IdentityId::ALL {
            let s = describe(id);
            println!("{:width$}  {}", id.name(), s.title);
        }
    }
    Ok(0)
}

fn cmd_describe(id: &str, json: bool) -> Result<i32> {
    let id = IdentityId::from_name(id)?;
    if json {
        println!("{}", report::describe_json(id));
    } else {
        let s = describe(id);
        println!("{}  {}", id.name(), s.title);
        println!("  series:      {}", s.lhs);
        println!("  closed form: {}", s.rhs);
        println!("  parameters:");
        for p in s.params {
            println!("    {:3} {}", p.name, p.about);
        }
        println!("  domain:");
        for d in s.domain {
            println!("    - {d}");
        }
    }
    Ok(0)
}

fn parse_params(tokens: &[String], ctx: &PrecisionContext) -> Result<BTreeMap<String, Complex>> {
    let mut map = BTreeMap::new();
    for t in tokens {
        let (name, value) = t
            .split_once('=')
            .ok_or_else(|| Error::Param(format!("expected NAME=VALUE, got `{t}`")))?;
        if name.is_empty() {
            return Err(Error::Param(format!("empty parameter name in `{t}`")));
        }
        let v = Complex::parse(value, ctx)
            .map_err(|_| Error::Param(format!("cannot parse value of `{name}`: `{value}`")))?;
        if map.insert(name.to_string(), v).is_some() {
            return Err(Error::Param(format!("duplicate parameter `{name}`")));
        }
    }
    Ok(map)
}

fn cmd_eval(id: &str, params: &[String], side: Side, digits: u32, json: bool) -> Result<i32> {
    let ctx = make_context(digits)?;
    let id = IdentityId::from_name(id)?;
    let case = IdentityCase::new(id, parse_params(params, &ctx)?)?;
    let sig = digits as usize;

    let eval = Evaluation::compute(&case, side.into(), &ctx)?;
    let exit = if eval.clean(&ctx) { 0 } else { 1 };

    if json {
        println!("{}", eval.to_json(&case, &ctx));
    } else {
        println!("identity: {}", id.name());
        println!("digits:   {digits}");
        if let Some(l) = &eval.lhs {
            println!(
                "series:   {}  [{}; {} terms; tail <= {}]",
                l.value.to_decimal(sig, &ctx),
                l.status.as_str(),
                l.terms_used,
                l.tail_estimate.to_decimal(3, &ctx),
            );
            if l.status != SeriesStatus::Converged {
                println!("notice:   series did not converge: {}", l.status.as_str());
            }
        }
        if let Some(r) = &eval.rhs {
            println!("closed:   {}", r.to_decimal(sig, &ctx));
        }
        if let Some(r) = &eval.residual {
            println!("residual: {}", r.to_decimal(5, &ctx));
            if r.gt(ctx.cmp_tol()) {
                println!(
                    "notice:   residual above comparison tolerance {}",
                    ctx.cmp_tol().to_decimal(3, &ctx)
                );
            }
        }
    }
    Ok(exit)
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Param(format!("cannot write {}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    id: &str,
    count: usize,
    seed: u64,
    digits: u32,
    complex: bool,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
    json: bool,
    timing: bool,
) -> Result<i32> {
    let ctx = make_context(digits)?;
    let profile = if complex {
        Profile::Complex
    } else {
        Profile::Real
    };
    let reports = report::run_verify(id, count, seed, profile, timing, &ctx)?;

    let json_text = report::reports_json(&reports);
    if json {
        println!("{json_text}");
    }
    if let Some(path) = &out {
        write_file(path, &json_text)?;
    }
    if let Some(path) = &csv {
        let mut text = String::new();
        for (i, r) in reports.iter().enumerate() {
            if i > 0 {
                text.push('\n');
            }
            text.push_str(&r.to_csv());
        }
        write_file(path, &text)?;
    }

    let mut all_pass = true;
    for r in &reports {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        let max = r.max_residual.as_deref().unwrap_or("n/a");
        let mut line = format!(
            "{:20} {}  ({} cases, max residual {})",
            r.id, verdict, r.count, max
        );
        if !r.flags.is_empty() {
            line.push_str(&format!("  [{}]", r.flags.join("; ")));
        }
        if !json {
            println!("{line}");
        }
        all_pass &= r.pass;
    }
    if !json && reports.len() > 1 {
        println!("overall: {}", if all_pass { "PASS" } else { "FAIL" });
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_limits(
    edge: &str,
    schedule: Option<&str>,
    digits: u32,
    out: Option<PathBuf>,
    json: bool,
    timing: bool,
) -> Result<i32> {
    let ctx = make_context(digits)?;
    let report = report::run_limits(edge, schedule, timing, &ctx)?;

    if json {
        println!("{}", report.to_json());
    } else {
        println!("edge:    {}  (varying {})", report.edge, report.varying);
        let fixed_line = report
            .fixed
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        println!("fixed:   {fixed_line}");
        if report.schedule.is_empty() {
            println!("check:   single substitution");
            println!("gap:     {}", report.gaps[0]);
        } else {
            println!("{:>24}  gap", report.varying);
            for (v, gp) in report.schedule.iter().zip(report.gaps.iter()) {
                println!("{v:>24}  {gp}");
            }
            println!(
                "monotone decreasing: {}",
                if report.monotone_decreasing {
                    "yes"
                } else {
                    "no"
                }
            );
        }
        println!("{}", if report.pass { "PASS" } else { "FAIL" });
    }
    if let Some(path) = &out {
        write_file(path, &report.to_json())?;
    }
    Ok(if report.pass { 0 } else { 1 })
}
