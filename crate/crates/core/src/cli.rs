//! Command-line front end: argument parsing, dispatch and JSON output.
//!
//! Exit codes: [`EXIT_OK`] on success or a passing check, [`EXIT_FAILED`]
//! when a check fails, [`EXIT_USAGE`] for malformed input and
//! [`EXIT_NON_GENERIC`] when every retried parameter point is non-generic.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::branching::{Builder, Constructor};
use crate::error::{Error, Result};
use crate::params::{make_params, random_params, Family, ParamPoint, ALL_FAMILIES};
use crate::partition::{
    enumerate_bounded, enumerate_subpartitions, is_horizontal_strip, predecessors, Partition,
};
use crate::scalar::GaussRational;
use crate::verify::{
    degeneration_check, oracle_points, CauchySession, CheckReport, OrthogonalitySession,
    PieriSession, ProductKind, DEFAULT_HALVINGS,
};

type G = GaussRational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NON_GENERIC: i32 = 3;

/// Seeds tried, starting from `--seed`, before giving up on non-generic
/// random points.
pub const SEED_ATTEMPTS: u64 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "symhyper",
    version,
    about = "Symmetric hypergeometric orthogonal polynomials via branching rules"
)]
struct Cli {
    /// Write the JSON output to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monomial-symmetric expansion of P_λ in n variables.
    Build(BuildArgs),
    /// Pieri coefficient C^{μ,n}_{λ,r}.
    Pieri(PieriArgs),
    /// Branching coefficients B^0..B^d of λ ∈ Λ_{n+1} over μ ∈ Λ_n.
    Branch(BranchArgs),
    /// Run a verification suite; one JSON report per line.
    Verify(VerifyArgs),
    /// Partitions in the n^m box, or of length ≤ n and size ≤ max-size.
    ListPartitions(ListArgs),
}

#[derive(Args, Debug)]
struct PointArgs {
    /// aw, whittaker, wilson, chahn, jacobi, laguerre or hermite.
    #[arg(long)]
    family: Family,
    /// Inline JSON object or a path to a JSON file; values are "p/q"
    /// strings or {"re": "p/q", "im": "r/s"}.
    #[arg(long)]
    params: Option<String>,
    /// Seed of a random generic point, used when --params is absent.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Comma-separated parts; `-` is the empty partition.
    #[arg(long, value_parser = parse_partition)]
    lambda: Partition,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug)]
struct PieriArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_parser = parse_partition)]
    lambda: Partition,
    #[arg(long, value_parser = parse_partition)]
    mu: Partition,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
}

#[derive(Args, Debug)]
struct BranchArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Partition with at most n+1 parts.
    #[arg(long, value_parser = parse_partition)]
    lambda: Partition,
    /// Partition with at most n parts.
    #[arg(long, value_parser = parse_partition)]
    mu: Partition,
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum CheckName {
    Cauchy,
    ColumnRow,
    Degeneration,
    Orthogonality,
    PieriClosure,
    ProductFormula,
    /// Every check, in name order.
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    check: CheckName,
    /// Restrict to one family; default is every family the check supports.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_parser = parse_partition)]
    lambda: Option<Partition>,
    #[arg(long)]
    r: Option<usize>,
    /// Largest |λ| enumerated when --lambda is absent.
    #[arg(long, default_value_t = 2)]
    max_size: u32,
    /// Fixed parameter point (requires --family); disables seed retries.
    #[arg(long, requires = "family")]
    params: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Corrupt one coefficient in every check, which must then fail.
    #[arg(long)]
    falsify: bool,
    /// Keep `elapsed_ms` in the reports (output is then not deterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("shape").required(true).args(["m", "max_size"]))]
struct ListArgs {
    #[arg(long)]
    n: usize,
    /// Box height: at most m parts, each at most n.
    #[arg(long)]
    m: Option<usize>,
    /// Length at most n and size at most this.
    #[arg(long)]
    max_size: Option<u32>,
}

/// Exit code and text produced by one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// `-` is the empty partition; otherwise comma-separated parts.
pub fn parse_partition(s: &str) -> std::result::Result<Partition, String> {
    let s = s.trim();
    if s == "-" || s.is_empty() {
        return Ok(Partition::empty());
    }
    let parts = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad part {p:?}: {e}"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Partition::new(parts).map_err(|e| e.to_string())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonGenericParameters(_) => EXIT_NON_GENERIC,
        Error::NotSymmetric(_) | Error::PoleAtZero(_) | Error::NonzeroImaginary(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

fn load_params(family: Family, params: &str) -> Result<ParamPoint<G>> {
    let text = if params.trim_start().starts_with('{') {
        params.to_string()
    } else {
        fs::read_to_string(params)
            .map_err(|e| Error::Parse(format!("cannot read {params}: {e}")))?
    };
    let raw: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("parameter JSON: {e}")))?;
    make_params(family, &raw)
}

fn point(args: &PointArgs) -> Result<ParamPoint<G>> {
    match &args.params {
        Some(p) => load_params(args.family, p),
        None => Ok(random_params(args.family, args.seed)),
    }
}

fn require_fits(lam: &Partition, n: usize, what: &str) -> Result<()> {
    if lam.fits(n) {
        Ok(())
    } else {
        Err(Error::InvalidPartition(format!(
            "{what} = {lam} has more than {n} parts"
        )))
    }
}

fn build(args: &BuildArgs) -> Result<Value> {
    require_fits(&args.lambda, args.n, "lambda")?;
    let p = Constructor::new(point(&args.point)?).build(&args.lambda, args.n)?;
    Ok(p.to_json())
}

fn pieri(args: &PieriArgs) -> Result<Value> {
    require_fits(&args.lambda, args.n, "lambda")?;
    require_fits(&args.mu, args.n, "mu")?;
    if args.r == 0 || args.r > args.n {
        return Err(Error::InvalidParameters(format!(
            "r = {} must lie in 1..={}",
            args.r, args.n
        )));
    }
    let params = point(&args.point)?;
    let c = PieriSession::new(&params)?.coeff(&args.lambda, &args.mu, args.n, args.r)?;
    Ok(json!({
        "family": params.family().name(),
        "lambda": args.lambda,
        "mu": args.mu,
        "n": args.n,
        "r": args.r,
        "coeff": c.to_json(),
    }))
}

fn branch(args: &BranchArgs) -> Result<Value> {
    require_fits(&args.lambda, args.n + 1, "lambda")?;
    require_fits(&args.mu, args.n, "mu")?;
    let coeffs =
        Builder::new(point(&args.point)?)?.branch_coeffs(&args.lambda, &args.mu, args.n)?;
    Ok(json!({
        "lambda": args.lambda,
        "mu": args.mu,
        "coeffs": coeffs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
    }))
}

fn list_partitions(args: &ListArgs) -> Value {
    let parts = match (args.m, args.max_size) {
        (Some(m), _) => enumerate_subpartitions(m, args.n as u32),
        (None, Some(k)) => enumerate_bounded(args.n, k),
        (None, None) => unreachable!("clap requires one of --m, --max-size"),
    };
    json!({ "partitions": parts })
}

fn families_for(check: CheckName) -> Vec<Family> {
    match check {
        CheckName::Cauchy | CheckName::ColumnRow | CheckName::PieriClosure => ALL_FAMILIES.to_vec(),
        CheckName::Orthogonality => vec![Family::Hermite, Family::Laguerre, Family::Jacobi],
        CheckName::ProductFormula => vec![Family::AskeyWilson, Family::Hermite],
        CheckName::Degeneration => ALL_FAMILIES
            .iter()
            .copied()
            .filter(|f| *f != Family::AskeyWilson)
            .collect(),
        CheckName::All => Vec::new(),
    }
}

/// Runs `run` at the fixed point, or at random points from successive
/// seeds until one is generic.
fn with_points(
    args: &VerifyArgs,
    family: Family,
    run: &mut dyn FnMut(&ParamPoint<G>) -> Result<Vec<CheckReport>>,
) -> Result<Vec<CheckReport>> {
    if let Some(p) = &args.params {
        return run(&load_params(family, p)?);
    }
    let mut last = None;
    for seed in args.seed..args.seed + SEED_ATTEMPTS {
        match run(&random_params(family, seed)) {
            Ok(reports) => return Ok(reports.into_iter().map(|r| r.with_seed(seed)).collect()),
            Err(e @ Error::NonGenericParameters(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn lambdas(args: &VerifyArgs, n: usize) -> Vec<Partition> {
    match &args.lambda {
        Some(l) => vec![l.clone()],
        None => enumerate_bounded(n, args.max_size)
            .into_iter()
            .filter(|l| !l.is_empty())
            .collect(),
    }
}

fn range_or(v: Option<usize>, default: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    match v {
        Some(v) => vec![v],
        None => default.collect(),
    }
}

fn run_check(check: CheckName, family: Family, args: &VerifyArgs) -> Result<Vec<CheckReport>> {
    let falsify = args.falsify;
    match check {
        CheckName::Cauchy => {
            let sizes: Vec<(usize, usize)> = match (args.m, args.n) {
                (Some(m), Some(n)) => vec![(m, n)],
                (m, n) => {
                    let ms = range_or(m, 1..=2);
                    let ns = range_or(n, 1..=2);
                    ms.iter()
                        .flat_map(|&m| ns.iter().map(move |&n| (m, n)))
                        .collect()
                }
            };
            with_points(args, family, &mut |p| {
                let mut session = CauchySession::new(p)?;
                sizes
                    .iter()
                    .map(|&(m, n)| session.check(m, n, falsify))
                    .collect()
            })
        }
        CheckName::ColumnRow => with_points(args, family, &mut |p| {
            range_or(args.m, 1..=3)
                .into_iter()
                .map(|m| crate::verify::column_row_check(p, m, falsify))
                .collect()
        }),
        CheckName::PieriClosure => with_points(args, family, &mut |p| {
            let mut session = PieriSession::new(p)?;
            let mut out = Vec::new();
            for n in range_or(args.n, 1..=2) {
                for lam in lambdas(args, n) {
                    require_fits(&lam, n, "lambda")?;
                    for r in range_or(args.r, 1..=n) {
                        out.push(session.check(n, &lam, r, falsify)?);
                    }
                }
            }
            Ok(out)
        }),
        CheckName::Orthogonality => {
            let run = |p: &ParamPoint<G>| -> Result<Vec<CheckReport>> {
                let mut session = OrthogonalitySession::new(p)?;
                let mut out = Vec::new();
                for n in range_or(args.n, 2..=2) {
                    for lam in lambdas(args, n) {
                        require_fits(&lam, n, "lambda")?;
                        out.push(session.check(n, &lam, falsify)?);
                    }
                }
                Ok(out)
            };
            match &args.params {
                Some(p) => run(&load_params(family, p)?),
                None => {
                    let mut out = Vec::new();
                    for p in oracle_points(family) {
                        out.extend(run(&p)?);
                    }
                    Ok(out)
                }
            }
        }
        CheckName::ProductFormula => {
            let kind = match family {
                Family::AskeyWilson => ProductKind::Macdonald,
                Family::Hermite => ProductKind::Jack,
                f => {
                    return Err(Error::UnsupportedFamily(format!(
                        "product formulas exist for aw and hermite, not {}",
                        f.name()
                    )))
                }
            };
            with_points(args, family, &mut |p| {
                let mut out = Vec::new();
                for n in range_or(args.n, 1..=1) {
                    for lam in enumerate_subpartitions(n + 1, 3) {
                        for mu in predecessors(&lam, n) {
                            if is_horizontal_strip(&lam, &mu) {
                                out.push(crate::verify::product_formula_check(
                                    kind, p, &lam, &mu, n, falsify,
                                )?);
                            }
                        }
                    }
                }
                Ok(out)
            })
        }
        CheckName::Degeneration => with_points(args, family, &mut |p| {
            let mut out = Vec::new();
            for n in range_or(args.n, 1..=2) {
                for lam in lambdas(args, n) {
                    require_fits(&lam, n, "lambda")?;
                    out.push(degeneration_check(p, &lam, n, DEFAULT_HALVINGS, falsify)?);
                }
            }
            Ok(out)
        }),
        CheckName::All => unreachable!("expanded by the caller"),
    }
}

fn report_line(report: &CheckReport, timings: bool) -> String {
    let mut v = report.to_json();
    if !timings {
        if let Value::Object(o) = &mut v {
            o.remove("elapsed_ms");
        }
    }
    v.to_string()
}

fn verify(args: &VerifyArgs, out: &mut String) -> Result<bool> {
    let checks = match args.check {
        CheckName::All => CheckName::value_variants()
            .iter()
            .copied()
            .filter(|c| *c != CheckName::All)
            .collect(),
        c => vec![c],
    };
    let mut passed = true;
    for check in checks {
        let supported = families_for(check);
        let families = match args.family {
            Some(f) if supported.contains(&f) => vec![f],
            Some(f) if args.check != CheckName::All => {
                return Err(Error::UnsupportedFamily(format!(
                    "{} is not covered by this check",
                    f.name()
                )))
            }
            Some(_) => continue,
            None => supported,
        };
        for family in families {
            for report in run_check(check, family, args)? {
                passed &= report.passed;
                out.push_str(&report_line(&report, args.timings));
                out.push('\n');
            }
        }
    }
    Ok(passed)
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut stdout = String::new();
    let result = match &cli.command {
        Command::Build(a) => build(a).map(|v| (v, true)),
        Command::Pieri(a) => pieri(a).map(|v| (v, true)),
        Command::Branch(a) => branch(a).map(|v| (v, true)),
        Command::ListPartitions(a) => Ok((list_partitions(a), true)),
        Command::Verify(a) => verify(a, &mut stdout).map(|ok| (Value::Null, ok)),
    };
    let (code, stderr) = match result {
        Ok((value, ok)) => {
            if !value.is_null() {
                stdout.push_str(&value.to_string());
                stdout.push('\n');
            }
            (if ok { EXIT_OK } else { EXIT_FAILED }, String::new())
        }
        Err(e) => (exit_code(&e), format!("error: {e}\n")),
    };
    if let Some(path) = &cli.output {
        if let Err(e) = fs::write(path, &stdout) {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            };
        }
        stdout.clear();
    }
    Outcome {
        code,
        stdout,
        stderr,
    }
}
