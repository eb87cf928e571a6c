//! Command-line front end for `lucaslp-core`.
//!
//! Exit codes: 0 when every checked property holds, 1 when a counterexample
//! or a predicted-vs-oracle disagreement was found, 2 on usage errors.

pub mod report;

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lucaslp_core::identities::{
    sweep_catalan, sweep_general_catalan, sweep_lucas_catalan, sweep_shift, IdentitySweep,
};
use lucaslp_core::lp::{
    corollary1_counterexample, crossval_grid, enumerate_valid_b, evaluate_cell, lp_scan,
    GridSummary, DEFAULT_DIGIT_BOUND,
};
use lucaslp_core::sequences::{alpha, default_scan_limit, period_mod};
use lucaslp_core::special::{apery, apery_mod, omega_table, omega_table_mod};
use lucaslp_core::{
    AffineIndexMap, Error as CoreError, Family, LinearRecurrence, Prime, Reading, SequenceSpec,
    TheoremTarget,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub use report::{format_report, Agreement, AgreementGroup, Format, Report, ReportError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping worker threads (0 or unset: automatic).
pub const THREADS_ENV: &str = "LUCASLP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "lucaslp", version, about = "Lucas-property checks for linear recurrences modulo primes")]
struct Cli {
    /// Output format for the report.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Brute-force LP check of one sequence.
    LpCheck(LpCheckArgs),
    /// Evaluate a closed-form LP condition and compare with the oracle.
    Theorem(TheoremArgs),
    /// List the offsets b for which A(a·n + b) is LP with the prime.
    EnumerateB(EnumerateArgs),
    /// Rank of apparition of a prime in the Fibonacci sequence.
    Alpha(AlphaArgs),
    /// Preperiod and period of a recurrence modulo a prime.
    Period(PeriodArgs),
    /// Exact residual sweeps for the Catalan-type and shift identities.
    Identity(IdentityArgs),
    /// Apéry numbers or ω(n), exactly and optionally modulo a prime.
    Special(SpecialArgs),
    /// Grid sweep of a closed-form condition against the oracle.
    Crossval(CrossvalArgs),
    /// Smallest prime at which A(a·n + b) fails the oracle.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpecKind {
    FibAffine,
    LucasAffine,
    GeneralAffine,
    Power,
    Apery,
    Omega,
    Table,
}

#[derive(Debug, Args)]
struct LpCheckArgs {
    #[arg(value_enum)]
    spec: SpecKind,
    #[arg(long, default_value_t = 1)]
    a: u64,
    #[arg(long, default_value_t = 0)]
    b: u64,
    /// Recurrence as A0,A1,u,v.
    #[arg(long, allow_hyphen_values = true)]
    rec: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    base: Option<i64>,
    /// Comma-separated table values S(0),S(1),…
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value_t = DEFAULT_DIGIT_BOUND)]
    digits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReadingArg {
    AsProved,
    AsStated,
}

impl From<ReadingArg> for Reading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::AsProved => Reading::AsProved,
            ReadingArg::AsStated => Reading::AsStated,
        }
    }
}

#[derive(Debug, Args)]
struct TheoremArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    which: u8,
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    prime: u64,
    #[arg(long, allow_hyphen_values = true)]
    rec: Option<String>,
    #[arg(long, value_enum, default_value = "as-proved")]
    reading: ReadingArg,
    #[arg(long, default_value_t = DEFAULT_DIGIT_BOUND)]
    digits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Fib,
    Lucas,
    General,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    rec: Option<String>,
    #[arg(long)]
    a: u64,
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value_t = DEFAULT_DIGIT_BOUND)]
    digits: u32,
}

#[derive(Debug, Args)]
struct AlphaArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long)]
    scan_limit: Option<u64>,
}

#[derive(Debug, Args)]
struct PeriodArgs {
    #[arg(long)]
    prime: u64,
    /// Defaults to the Fibonacci recurrence 0,1,1,1.
    #[arg(long, allow_hyphen_values = true)]
    rec: Option<String>,
    #[arg(long)]
    scan_limit: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdentityKind {
    Catalan,
    LucasCatalan,
    General,
    Shift,
}

#[derive(Debug, Args)]
struct IdentityArgs {
    #[arg(long, value_enum)]
    which: IdentityKind,
    /// Largest n (largest n + r for the shift identity). Defaults to 200 for
    /// the Fibonacci/Lucas forms and 60 otherwise.
    #[arg(long)]
    n_max: Option<u64>,
    /// Single recurrence for general/shift; without it the standard set is used.
    #[arg(long, allow_hyphen_values = true)]
    rec: Option<String>,
    /// Number of random recurrences added to the standard set.
    #[arg(long, default_value_t = 20)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpecialSeq {
    Apery,
    Omega,
}

#[derive(Debug, Args)]
struct SpecialArgs {
    #[arg(long, value_enum)]
    seq: SpecialSeq,
    /// Values are listed for 0..=n.
    #[arg(long)]
    n: u64,
    #[arg(long)]
    prime: Option<u64>,
    /// With --prime, also run the LP oracle at this digit bound.
    #[arg(long)]
    digits: Option<u32>,
}

#[derive(Debug, Args)]
struct CrossvalArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    which: u8,
    #[arg(long, default_value_t = 13)]
    prime_max: u64,
    #[arg(long, default_value_t = 1)]
    a_min: u64,
    #[arg(long, default_value_t = 12)]
    a_max: u64,
    #[arg(long, default_value_t = 0)]
    b_min: u64,
    #[arg(long, default_value_t = 12)]
    b_max: u64,
    #[arg(long, default_value_t = DEFAULT_DIGIT_BOUND)]
    digits: u32,
    /// Theorem 2 only; both readings are swept when omitted.
    #[arg(long, value_enum)]
    reading: Option<ReadingArg>,
    /// Theorem 3 only, repeatable; defaults to the standard recurrence set.
    #[arg(long, allow_hyphen_values = true)]
    rec: Vec<String>,
}

#[derive(Debug, Args)]
struct CounterexampleArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long, default_value_t = 50)]
    prime_bound: u64,
    #[arg(long, value_enum, default_value = "fib")]
    family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    rec: Option<String>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Usage(String),
}

/// The recurrences used by the cross-validation of the general condition.
pub fn theorem3_recurrence_set() -> Vec<LinearRecurrence> {
    vec![
        LinearRecurrence::fibonacci(),
        LinearRecurrence::lucas(),
        LinearRecurrence::pell(),
        LinearRecurrence::new(1, 2, 1, 1),
        LinearRecurrence::new(2, 1, 3, 2),
    ]
}

/// Fibonacci, Lucas and Pell followed by `random` seeded recurrences with
/// every parameter in `[-5, 5]`.
pub fn identity_recurrence_set(random: usize, seed: u64) -> Vec<LinearRecurrence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        LinearRecurrence::fibonacci(),
        LinearRecurrence::lucas(),
        LinearRecurrence::pell(),
    ];
    for _ in 0..random {
        out.push(LinearRecurrence::new(
            rng.gen_range(-5..=5),
            rng.gen_range(-5..=5),
            rng.gen_range(-5..=5),
            rng.gen_range(-5..=5),
        ));
    }
    out
}

fn prime(n: u64) -> Result<Prime, CliError> {
    Ok(Prime::new(n)?)
}

fn parse_rec(s: Option<&str>, what: &str) -> Result<LinearRecurrence, CliError> {
    match s {
        Some(text) => Ok(text.parse()?),
        None => Err(CliError::Usage(format!("{what} requires --rec A0,A1,u,v"))),
    }
}

fn family(arg: FamilyArg, rec: Option<&str>) -> Result<Family, CliError> {
    Ok(match arg {
        FamilyArg::Fib => Family::Fibonacci,
        FamilyArg::Lucas => Family::Lucas,
        FamilyArg::General => Family::General(parse_rec(rec, "--family general")?),
    })
}

fn exit_for(found: bool) -> i32 {
    if found {
        EXIT_FOUND
    } else {
        EXIT_OK
    }
}

fn lp_check(args: &LpCheckArgs) -> Result<(Report, i32), CliError> {
    let p = prime(args.prime)?;
    let map = || AffineIndexMap::new(args.a, args.b);
    let spec = match args.spec {
        SpecKind::FibAffine => SequenceSpec::FibAffine(map()?),
        SpecKind::LucasAffine => SequenceSpec::LucasAffine(map()?),
        SpecKind::GeneralAffine => {
            SequenceSpec::GeneralAffine(parse_rec(args.rec.as_deref(), "general-affine")?, map()?)
        }
        SpecKind::Power => SequenceSpec::Power(
            args.base.ok_or_else(|| CliError::Usage("power requires --base".into()))?,
        ),
        SpecKind::Apery => SequenceSpec::Apery,
        SpecKind::Omega => SequenceSpec::Omega,
        SpecKind::Table => {
            let text =
                args.values.as_deref().ok_or_else(|| CliError::Usage("table requires --values".into()))?;
            let values = text
                .split(',')
                .map(|t| t.trim().parse::<BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("bad --values entry: {e}")))?;
            if values.is_empty() {
                return Err(CliError::Usage("table must be non-empty".into()));
            }
            SequenceSpec::Table(values)
        }
    };
    let scan = lp_scan(&spec, p, args.digits)?;
    let mut report = Report::new("lp-check")
        .input("spec", spec.to_string())
        .input("prime", p)
        .input("digits", args.digits);
    let holds = scan.verdict.holds;
    report.push(&scan.verdict);
    Ok((report, exit_for(!holds)))
}

fn theorem(args: &TheoremArgs) -> Result<(Report, i32), CliError> {
    let p = prime(args.prime)?;
    let map = AffineIndexMap::new(args.a, args.b)?;
    let target = match args.which {
        1 => TheoremTarget::Theorem1,
        2 => TheoremTarget::Theorem2(args.reading.into()),
        _ => TheoremTarget::Theorem3(parse_rec(args.rec.as_deref(), "--which 3")?),
    };
    let cell = evaluate_cell(&target, p, map, args.digits)?;
    let summary = GridSummary::from_cells(target.to_string(), std::slice::from_ref(&cell));
    let mut report = Report::new("theorem")
        .input("which", args.which)
        .input("a", args.a)
        .input("b", args.b)
        .input("prime", p)
        .input("digits", args.digits);
    if args.which == 2 {
        report = report.input("reading", Reading::from(args.reading).to_string());
    }
    if let TheoremTarget::Theorem3(rec) = target {
        report = report.input("rec", rec.to_string());
    }
    let mut row = report::to_value(&cell);
    row["condition"] = json!(target.to_string());
    report.push(row);
    report.agreement = Some(Agreement::new(vec![AgreementGroup::from(&summary)]));
    Ok((report, exit_for(!summary.agrees())))
}

fn enumerate_b(args: &EnumerateArgs) -> Result<(Report, i32), CliError> {
    let p = prime(args.prime)?;
    let fam = family(args.family, args.rec.as_deref())?;
    AffineIndexMap::new(args.a, 0)?;
    let result = enumerate_valid_b(fam, args.a, p, args.digits)?;
    let mut report = Report::new("enumerate-b")
        .input("family", fam.to_string())
        .input("a", args.a)
        .input("prime", p)
        .input("digits", args.digits);
    for e in &result.entries {
        report.push(json!({
            "b": e.b,
            "modulus": result.modulus,
            "oracle": e.oracle,
            "identically_zero": e.identically_zero,
            "predicted": e.predicted,
            "valid": e.oracle && !e.identically_zero,
        }));
    }
    let disagreements: Vec<Value> = result.disagreements().map(report::to_value).collect();
    let mut extra = BTreeMap::new();
    extra.insert("modulus".to_string(), json!(result.modulus));
    extra.insert("preperiod".to_string(), json!(result.preperiod));
    extra.insert("valid".to_string(), json!(result.valid));
    let found = !disagreements.is_empty();
    report.agreement = Some(Agreement::new(vec![AgreementGroup {
        label: fam.target().to_string(),
        checked: result.entries.len() as u64,
        vacuous: result.entries.iter().filter(|e| e.identically_zero).count() as u64,
        vacuous_mismatches: result
            .entries
            .iter()
            .filter(|e| e.identically_zero && e.predicted != e.oracle)
            .count() as u64,
        disagreements,
        extra,
    }]));
    Ok((report, exit_for(found)))
}

fn alpha_cmd(args: &AlphaArgs) -> Result<(Report, i32), CliError> {
    let p = prime(args.prime)?;
    let limit = args.scan_limit.unwrap_or_else(|| default_scan_limit(p));
    let rank = alpha(p, limit)?;
    let mut report = Report::new("alpha").input("prime", p).input("scan_limit", limit);
    report.push(json!({ "prime": p, "alpha": rank }));
    Ok((report, EXIT_OK))
}

fn period_cmd(args: &PeriodArgs) -> Result<(Report, i32), CliError> {
    let p = prime(args.prime)?;
    let rec = match &args.rec {
        Some(text) => text.parse()?,
        None => LinearRecurrence::fibonacci(),
    };
    let limit = args.scan_limit.unwrap_or_else(|| default_scan_limit(p));
    let info = period_mod(&rec, p, limit)?;
    let mut report = Report::new("period")
        .input("prime", p)
        .input("rec", rec.to_string())
        .input("scan_limit", limit);
    report.push(json!({ "rec": rec.to_string(), "prime": p, "preperiod": info.preperiod, "period": info.period }));
    Ok((report, EXIT_OK))
}

fn sweep_row(identity: &str, rec: Option<&LinearRecurrence>, sweep: &IdentitySweep) -> Value {
    let mut row = json!({
        "identity": identity,
        "checked": sweep.checked,
        "all_zero": sweep.all_zero(),
        "nonzero": sweep.nonzero,
    });
    if let Some(rec) = rec {
        row["rec"] = json!(rec.to_string());
    }
    row
}

fn identity(args: &IdentityArgs) -> Result<(Report, i32), CliError> {
    let (name, default_max) = match args.which {
        IdentityKind::Catalan => ("catalan", 200),
        IdentityKind::LucasCatalan => ("lucas-catalan", 200),
        IdentityKind::General => ("general", 60),
        IdentityKind::Shift => ("shift", 60),
    };
    let n_max = args.n_max.unwrap_or(default_max);
    let mut report = Report::new("identity").input("which", name).input("n_max", n_max);
    let mut found = false;
    match args.which {
        IdentityKind::Catalan | IdentityKind::LucasCatalan => {
            let sweep = if args.which == IdentityKind::Catalan {
                sweep_catalan(n_max)
            } else {
                sweep_lucas_catalan(n_max)
            };
            found |= !sweep.all_zero();
            report.push(sweep_row(name, None, &sweep));
        }
        IdentityKind::General | IdentityKind::Shift => {
            let recs = match &args.rec {
                Some(text) => vec![text.parse()?],
                None => {
                    report = report.input("random", args.random).input("seed", args.seed);
                    identity_recurrence_set(args.random, args.seed)
                }
            };
            for rec in &recs {
                let sweep = if args.which == IdentityKind::General {
                    sweep_general_catalan(rec, n_max)
                } else {
                    sweep_shift(rec, n_max)
                };
                found |= !sweep.all_zero();
                report.push(sweep_row(name, Some(rec), &sweep));
            }
        }
    }
    Ok((report, exit_for(found)))
}

fn special(args: &SpecialArgs) -> Result<(Report, i32), CliError> {
    let p = args.prime.map(prime).transpose()?;
    let (name, spec) = match args.seq {
        SpecialSeq::Apery => ("apery", SequenceSpec::Apery),
        SpecialSeq::Omega => ("omega", SequenceSpec::Omega),
    };
    let len = args.n as usize + 1;
    let exact: Vec<String> = match args.seq {
        SpecialSeq::Apery => (0..=args.n).map(|n| apery(n).to_string()).collect(),
        SpecialSeq::Omega => omega_table(len).iter().map(ToString::to_string).collect(),
    };
    let residues: Option<Vec<u64>> = p.map(|p| match args.seq {
        SpecialSeq::Apery => (0..=args.n).map(|n| apery_mod(n, p)).collect(),
        SpecialSeq::Omega => omega_table_mod(len, p),
    });
    let mut report = Report::new("special").input("seq", name).input("n", args.n);
    if let Some(p) = p {
        report = report.input("prime", p);
    }
    for (n, value) in exact.iter().enumerate() {
        let mut row = json!({ "n": n, "value": value });
        if let Some(r) = &residues {
            row["residue"] = json!(r[n]);
        }
        report.push(row);
    }
    let mut found = false;
    match (p, args.digits) {
        (Some(p), Some(digits)) => {
            report = report.input("digits", digits);
            let verdict = lp_scan(&spec, p, digits)?.verdict;
            found = !verdict.holds;
            report.push(&verdict);
        }
        (None, Some(_)) => return Err(CliError::Usage("--digits requires --prime".into())),
        _ => {}
    }
    Ok((report, exit_for(found)))
}

fn crossval(args: &CrossvalArgs) -> Result<(Report, i32), CliError> {
    if args.a_min == 0 || args.a_min > args.a_max || args.b_min > args.b_max {
        return Err(CliError::Usage("need 1 ≤ a-min ≤ a-max and b-min ≤ b-max".into()));
    }
    let primes = Prime::up_to(args.prime_max);
    let targets: Vec<TheoremTarget> = match args.which {
        1 => vec![TheoremTarget::Theorem1],
        2 => match args.reading {
            Some(r) => vec![TheoremTarget::Theorem2(r.into())],
            None => vec![
                TheoremTarget::Theorem2(Reading::AsProved),
                TheoremTarget::Theorem2(Reading::AsStated),
            ],
        },
        _ => {
            let recs = if args.rec.is_empty() {
                theorem3_recurrence_set()
            } else {
                args.rec.iter().map(|t| t.parse()).collect::<Result<Vec<_>, _>>()?
            };
            recs.into_iter().map(TheoremTarget::Theorem3).collect()
        }
    };
    let mut report = Report::new("crossval")
        .input("which", args.which)
        .input("prime_max", args.prime_max)
        .input("a_min", args.a_min)
        .input("a_max", args.a_max)
        .input("b_min", args.b_min)
        .input("b_max", args.b_max)
        .input("digits", args.digits);
    let mut groups = Vec::new();
    for target in &targets {
        let cells = crossval_grid(
            target,
            &primes,
            args.a_min..=args.a_max,
            args.b_min..=args.b_max,
            args.digits,
        )?;
        let label = target.to_string();
        for cell in &cells {
            let mut row = report::to_value(cell);
            row["group"] = json!(label);
            report.push(row);
        }
        groups.push(AgreementGroup::from(&GridSummary::from_cells(label, &cells)));
    }
    let agreement = Agreement::new(groups);
    let found = agreement.total_disagreements > 0;
    report.agreement = Some(agreement);
    Ok((report, exit_for(found)))
}

fn counterexample(args: &CounterexampleArgs) -> Result<(Report, i32), CliError> {
    let fam = family(args.family, args.rec.as_deref())?;
    let map = AffineIndexMap::new(args.a, args.b)?;
    let mut report = Report::new("counterexample")
        .input("family", fam.to_string())
        .input("a", args.a)
        .input("b", args.b)
        .input("prime_bound", args.prime_bound);
    match corollary1_counterexample(fam, map, args.prime_bound) {
        Ok((_, verdict)) => {
            report.push(&verdict);
            Ok((report, EXIT_FOUND))
        }
        Err(CoreError::NotFoundWithinBound { bound }) => {
            report.push(json!({ "found": false, "prime_bound": bound }));
            Ok((report, EXIT_OK))
        }
        Err(e) => Err(e.into()),
    }
}

fn dispatch(cli: &Cli) -> Result<(Report, i32), CliError> {
    match &cli.command {
        Command::LpCheck(a) => lp_check(a),
        Command::Theorem(a) => theorem(a),
        Command::EnumerateB(a) => enumerate_b(a),
        Command::Alpha(a) => alpha_cmd(a),
        Command::Period(a) => period_cmd(a),
        Command::Identity(a) => identity(a),
        Command::Special(a) => special(a),
        Command::Crossval(a) => crossval(a),
        Command::Counterexample(a) => counterexample(a),
    }
}

/// Runs the CLI on `argv` (including the program name), writing the report
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
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
                    EXIT_USAGE
                }
            };
        }
    };
    let result = dispatch(&cli).and_then(|(report, code)| {
        let text = format_report(&report, cli.format)?;
        Ok((text, code))
    });
    match result {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Applies [`THREADS_ENV`] to the global rayon pool. Must run before any
/// parallel work.
pub fn configure_threads() {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}
