//! Command-line front end for the hyperbolic-sieve factorization toolkit.
//!
//! Subcommands: `factor`, `sieve card|enum`, `mcss export|verify|solve`,
//! `bench`. All big integers cross the wire as decimal strings. Exit codes:
//! 0 success, 1 usage or input error, 2 algorithmic sentinel (bound too
//! small, or the input is likely prime).

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use hyperfactor::fermat::{factor_auto, factor_with_lambda, FactorReport, FermatConfig, FermatOutcome};
use hyperfactor::mcss::{
    build_exact_instance, build_max_instance, from_json, reconstruct_offset, size_guidance_met,
    solve_small, to_json, verify_selection, McssMode, Selection,
};
use hyperfactor::num::{ceil_sqrt, is_square, next_prime_u64};
use hyperfactor::sieve::{sieve_cardinality, sieve_enumerate, FactoredModulus};
use hyperfactor::tradeoff::factor_tradeoff;
use hyperfactor::{Budgets, Error};

#[derive(Parser)]
#[command(
    name = "hyperfactor",
    about = "Hyperbolic-sieve factorization toolkit",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Factor an odd number with the sieve-improved scans.
    Factor(FactorArgs),
    /// Sieve-set cardinalities and residue streams.
    #[command(subcommand)]
    Sieve(SieveCommand),
    /// Multiple-choice subset-sum reductions.
    #[command(subcommand)]
    Mcss(McssCommand),
    /// Time both algorithms across controlled divisor differences (CSV).
    Bench(BenchArgs),
}

#[derive(Args)]
struct FactorArgs {
    /// The odd composite to factor (decimal).
    #[arg(long)]
    n: String,
    /// Search bound; required for the fermat and tradeoff algorithms.
    #[arg(long)]
    lambda: Option<String>,
    /// Left multiplier of the linear combination.
    #[arg(long, default_value = "1")]
    a: String,
    /// Right multiplier of the linear combination.
    #[arg(long, default_value = "1")]
    b: String,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// Tune the modulus with small prime powers.
    #[arg(long)]
    tuned: bool,
    /// Parallel scan shards; counts are approximate beyond 1.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algo {
    Auto,
    Fermat,
    Tradeoff,
}

#[derive(Subcommand)]
enum SieveCommand {
    /// Closed-form cardinality of the sieve set modulo m.
    Card(SieveArgs),
    /// Stream the sieve-set residues modulo m.
    Enum(SieveArgs),
}

#[derive(Args)]
struct SieveArgs {
    #[arg(long)]
    n: String,
    /// Modulus value; factored by trial division.
    #[arg(long)]
    m: String,
    #[arg(long, default_value = "1")]
    k: String,
    /// Also run the brute-force enumeration and print both.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum McssCommand {
    /// Build an instance and write the JSON document.
    Export(McssExportArgs),
    /// Check a selection against an instance document.
    Verify(McssVerifyArgs),
    /// Enumerate satisfying (exact) or optimal (max) selections.
    Solve(McssSolveArgs),
}

#[derive(Args)]
struct McssExportArgs {
    #[arg(long)]
    n: String,
    /// Instance flavor: exact target or capacity maximization.
    #[arg(long, value_enum, default_value_t = McssKind::Exact)]
    mode: McssKind,
    /// First sub-modulus (exact mode), decimal value.
    #[arg(long)]
    u: Option<String>,
    /// Second sub-modulus (exact mode), decimal value.
    #[arg(long)]
    v: Option<String>,
    /// Modulus (max mode), decimal value.
    #[arg(long)]
    m: Option<String>,
    /// Residue bound (max mode); defaults to ceil(sqrt(N)).
    #[arg(long)]
    bound: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum McssKind {
    Exact,
    Max,
}

#[derive(Args)]
struct McssVerifyArgs {
    /// Path of the instance document.
    #[arg(long)]
    instance: String,
    /// Comma-separated weight indices, one per class.
    #[arg(long)]
    selection: String,
}

#[derive(Args)]
struct McssSolveArgs {
    #[arg(long)]
    instance: String,
    /// Print at most this many selections.
    #[arg(long, default_value_t = 16)]
    limit: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Divisor differences to target, comma separated.
    #[arg(long, default_value = "1000,10000,100000")]
    deltas: String,
    /// Semiprimes per difference.
    #[arg(long, default_value_t = 3)]
    count: usize,
    /// Smaller prime is drawn near 10^digits.
    #[arg(long, default_value_t = 7)]
    digits: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    tuned: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap distinguishes --help/--version from real errors
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let budgets = match budgets_from_env() {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match run(cli, budgets) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// `HYPERFACTOR_*` environment overrides for the enumeration budgets.
fn budgets_from_env() -> Result<Budgets, String> {
    let mut budgets = Budgets::default();
    let read = |name: &str, slot: &mut u64| -> Result<(), String> {
        if let Ok(text) = std::env::var(name) {
            *slot = text
                .parse()
                .map_err(|_| format!("{name} must be an integer, got '{text}'"))?;
        }
        Ok(())
    };
    read("HYPERFACTOR_ENUM_BUDGET", &mut budgets.enumeration)?;
    read("HYPERFACTOR_FACTOR_BUDGET", &mut budgets.per_factor)?;
    read("HYPERFACTOR_MEET_BUDGET", &mut budgets.meet_elements)?;
    read("HYPERFACTOR_SOLVE_SELECTIONS", &mut budgets.solve_selections)?;
    read("HYPERFACTOR_SOLVE_MODULUS", &mut budgets.solve_modulus)?;
    Ok(budgets)
}

fn parse_big(name: &str, text: &str) -> Result<BigUint, Error> {
    BigUint::parse_bytes(text.as_bytes(), 10)
        .ok_or_else(|| Error::InvalidInput(format!("--{name} must be a decimal integer, got '{text}'")))
}

fn run(cli: Cli, budgets: Budgets) -> Result<u8, Error> {
    match cli.command {
        Command::Factor(args) => cmd_factor(args, cli.output, budgets),
        Command::Sieve(cmd) => cmd_sieve(cmd, cli.output, budgets),
        Command::Mcss(cmd) => cmd_mcss(cmd, cli.output, budgets),
        Command::Bench(args) => cmd_bench(args, budgets),
    }
}

fn cmd_factor(args: FactorArgs, output: Output, budgets: Budgets) -> Result<u8, Error> {
    let n = parse_big("n", &args.n)?;
    if n < BigUint::from(9u32) {
        return Err(Error::InvalidInput("N must be at least 9".into()));
    }
    if (&n % 2u32).is_zero() {
        return Err(Error::InvalidInput("N must be odd".into()));
    }
    let config = FermatConfig {
        a: parse_big("a", &args.a)?,
        b: parse_big("b", &args.b)?,
        tuned: args.tuned,
        workers: args.workers.max(1),
        budgets,
    };
    let lambda = args.lambda.as_deref().map(|t| parse_big("lambda", t)).transpose()?;

    let started = Instant::now();
    let outcome = match args.algo {
        Algo::Auto => match factor_auto(&n, &config) {
            Ok(report) => FermatOutcome::Factored(report),
            Err(Error::LikelyPrime(_)) => {
                return sentinel(output, &n, "no factor found - N likely prime", started)
            }
            Err(e) => return Err(e),
        },
        Algo::Fermat => {
            let lambda = lambda.ok_or_else(|| {
                Error::InvalidInput("--lambda is required for --algo fermat".into())
            })?;
            factor_with_lambda(&n, &lambda, &config)?
        }
        Algo::Tradeoff => {
            let lambda = lambda.ok_or_else(|| {
                Error::InvalidInput("--lambda is required for --algo tradeoff".into())
            })?;
            factor_tradeoff(&n, &lambda, &config)?
        }
    };
    let seconds = started.elapsed().as_secs_f64();

    match outcome {
        FermatOutcome::Factored(report) => {
            print_report(output, &n, &report, seconds);
            Ok(0)
        }
        FermatOutcome::LambdaTooSmall { square_tests } => {
            match output {
                Output::Text => {
                    println!("lambda too small: no candidate produced a factor ({square_tests} square tests, {seconds:.3} s)")
                }
                Output::Json => println!(
                    "{}",
                    serde_json::json!({
                        "status": "lambda-too-small",
                        "n": n.to_string(),
                        "square_tests": square_tests.to_string(),
                        "seconds": seconds,
                    })
                ),
            }
            Ok(2)
        }
    }
}

fn sentinel(output: Output, n: &BigUint, message: &str, started: Instant) -> Result<u8, Error> {
    let seconds = started.elapsed().as_secs_f64();
    match output {
        Output::Text => println!("{message} ({seconds:.3} s)"),
        Output::Json => println!(
            "{}",
            serde_json::json!({
                "status": "likely-prime",
                "n": n.to_string(),
                "seconds": seconds,
            })
        ),
    }
    Ok(2)
}

fn print_report(output: Output, n: &BigUint, report: &FactorReport, seconds: f64) {
    match output {
        Output::Text => {
            println!("{} = {} * {}", n, report.divisor, report.cofactor);
            if let (Some(z), Some(y)) = (&report.z, &report.y) {
                println!("z = {z}, y = {y}");
            }
            if report.gcd_hit {
                println!("found by the gcd screen");
            }
            println!(
                "modulus = {} ({}), square tests = {}, time = {seconds:.3} s",
                report.modulus_used.value(),
                report.modulus_used.describe(),
                report.square_tests
            );
        }
        Output::Json => {
            println!(
                "{}",
                serde_json::json!({
                    "status": "factored",
                    "n": n.to_string(),
                    "divisor": report.divisor.to_string(),
                    "cofactor": report.cofactor.to_string(),
                    "z": report.z.as_ref().map(|z| z.to_string()),
                    "y": report.y.as_ref().map(|y| y.to_string()),
                    "square_tests": report.square_tests.to_string(),
                    "modulus": report.modulus_used.value().to_string(),
                    "modulus_factors": report.modulus_used.describe(),
                    "gcd_hit": report.gcd_hit,
                    "seconds": seconds,
                })
            );
        }
    }
}

fn cmd_sieve(cmd: SieveCommand, output: Output, budgets: Budgets) -> Result<u8, Error> {
    let (args, enumerate) = match &cmd {
        SieveCommand::Card(a) => (a, false),
        SieveCommand::Enum(a) => (a, true),
    };
    let n = parse_big("n", &args.n)?;
    let m_value = parse_big("m", &args.m)?;
    let k = parse_big("k", &args.k)?;
    let modulus = FactoredModulus::factor_value(&m_value, budgets.enumeration)?;

    let enum_modulus = || -> Result<u64, Error> {
        m_value
            .to_u64()
            .filter(|&m| m <= budgets.enumeration)
            .ok_or(Error::BudgetExceeded {
                what: "sieve enumeration modulus",
                requested: m_value.to_u64().unwrap_or(u64::MAX),
                limit: budgets.enumeration,
            })
    };

    if enumerate {
        let m_u64 = enum_modulus()?;
        let k_u64 = (&k % m_u64).to_u64().unwrap();
        let residues = sieve_enumerate(&n, m_u64, k_u64, budgets.enumeration)?;
        match output {
            Output::Text => {
                let mut line = String::new();
                for (i, r) in residues.iter().enumerate() {
                    if i > 0 {
                        line.push(' ');
                    }
                    let _ = write!(line, "{r}");
                }
                println!("{line}");
            }
            Output::Json => println!(
                "{}",
                serde_json::json!({
                    "n": n.to_string(),
                    "m": m_value.to_string(),
                    "k": k.to_string(),
                    "residues": residues.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                })
            ),
        }
        return Ok(0);
    }

    let formula = sieve_cardinality(&n, &modulus, &k)?;
    let oracle = if args.oracle {
        let m_u64 = enum_modulus()?;
        let k_u64 = (&k % m_u64).to_u64().unwrap();
        Some(sieve_enumerate(&n, m_u64, k_u64, budgets.enumeration)?.len())
    } else {
        None
    };
    match output {
        Output::Text => match oracle {
            Some(o) => println!("formula={formula} oracle={o}"),
            None => println!("{formula}"),
        },
        Output::Json => println!(
            "{}",
            serde_json::json!({
                "n": n.to_string(),
                "m": m_value.to_string(),
                "k": k.to_string(),
                "cardinality": formula.to_string(),
                "oracle": oracle.map(|o| o.to_string()),
            })
        ),
    }
    Ok(0)
}

fn cmd_mcss(cmd: McssCommand, output: Output, budgets: Budgets) -> Result<u8, Error> {
    match cmd {
        McssCommand::Export(args) => {
            let n = parse_big("n", &args.n)?;
            let instance = match args.mode {
                McssKind::Exact => {
                    let (Some(u_text), Some(v_text)) = (args.u.as_deref(), args.v.as_deref())
                    else {
                        return Err(Error::InvalidInput(
                            "exact mode requires --u and --v".into(),
                        ));
                    };
                    let u = FactoredModulus::factor_value(&parse_big("u", u_text)?, budgets.enumeration)?;
                    let v = FactoredModulus::factor_value(&parse_big("v", v_text)?, budgets.enumeration)?;
                    if !size_guidance_met(&n, &u, &v) {
                        eprintln!(
                            "warning: sub-moduli at or below sqrt(N); expect spurious solutions"
                        );
                    }
                    build_exact_instance(&n, &u, &v, &budgets)?
                }
                McssKind::Max => {
                    let Some(m_text) = args.m.as_deref() else {
                        return Err(Error::InvalidInput("max mode requires --m".into()));
                    };
                    let m = FactoredModulus::factor_value(&parse_big("m", m_text)?, budgets.enumeration)?;
                    let bound = match args.bound.as_deref() {
                        Some(text) => parse_big("bound", text)?,
                        None => ceil_sqrt(&n),
                    };
                    build_max_instance(&n, &m, &BigUint::one(), &bound, &budgets)?
                }
            };
            let text = to_json(&instance);
            match args.out {
                Some(path) => std::fs::write(&path, &text)
                    .map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}")))?,
                None => println!("{text}"),
            }
            Ok(0)
        }
        McssCommand::Verify(args) => {
            let instance = load_instance(&args.instance)?;
            let choices: Vec<usize> = args
                .selection
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse()
                        .map_err(|_| Error::Selection(format!("'{part}' is not a valid index")))
                })
                .collect::<Result<_, _>>()?;
            let verdict = verify_selection(&instance, &Selection { choices })?;
            match output {
                Output::Text => println!(
                    "{} (sum = {}, residue = {})",
                    if verdict.satisfied { "satisfied" } else { "violated" },
                    verdict.total,
                    verdict.residue
                ),
                Output::Json => println!(
                    "{}",
                    serde_json::json!({
                        "satisfied": verdict.satisfied,
                        "sum": verdict.total.to_string(),
                        "residue": verdict.residue.to_string(),
                    })
                ),
            }
            Ok(0)
        }
        McssCommand::Solve(args) => {
            let instance = load_instance(&args.instance)?;
            let solutions = solve_small(&instance, &budgets)?;
            let shown = solutions.len().min(args.limit);
            let mut rows = Vec::new();
            for selection in solutions.iter().take(shown) {
                let offset = match instance.mode {
                    McssMode::Exact { .. } => {
                        Some(reconstruct_offset(&instance, selection, &budgets)?)
                    }
                    McssMode::Max { .. } => None,
                };
                // an offset that passes the square test factors n
                let factor = offset.as_ref().and_then(|z| {
                    let l = ceil_sqrt(&(4u32 * &instance.n));
                    let s = z + &l;
                    is_square(&(&s * &s - 4u32 * &instance.n)).and_then(|y| {
                        let g = (&s - &y).gcd(&instance.n);
                        (!g.is_one() && g < instance.n).then_some(g)
                    })
                });
                rows.push((selection, offset, factor));
            }
            match output {
                Output::Text => {
                    println!("{} solution(s)", solutions.len());
                    for (selection, offset, factor) in &rows {
                        let mut line = format!("selection {:?}", selection.choices);
                        if let Some(z) = offset {
                            let _ = write!(line, " offset {z}");
                        }
                        if let Some(g) = factor {
                            let _ = write!(line, " factor {g} * {}", &instance.n / g);
                        }
                        println!("{line}");
                    }
                }
                Output::Json => println!(
                    "{}",
                    serde_json::json!({
                        "solutions": solutions.len().to_string(),
                        "shown": rows.iter().map(|(s, offset, factor)| {
                            serde_json::json!({
                                "selection": s.choices,
                                "offset": offset.as_ref().map(|z| z.to_string()),
                                "factor": factor.as_ref().map(|g| g.to_string()),
                            })
                        }).collect::<Vec<_>>(),
                    })
                ),
            }
            Ok(0)
        }
    }
}

fn load_instance(path: &str) -> Result<hyperfactor::McssInstance, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    from_json(&text)
}

/// Deterministic semiprime timing harness. One CSV row per run and
/// algorithm: algo, divisor difference, n, modulus, candidates, seconds.
fn cmd_bench(args: BenchArgs, budgets: Budgets) -> Result<u8, Error> {
    let deltas: Vec<u64> = args
        .deltas
        .split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad delta '{part}'")))
        })
        .collect::<Result<_, _>>()?;
    let base = 10u64.pow(args.digits.clamp(3, 9));
    let mut state = args.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next_rand = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };

    println!("algo,delta,n,modulus,candidates,seconds");
    for &delta in &deltas {
        for _ in 0..args.count {
            let p = next_prime_u64(base + next_rand() % base);
            let q = next_prime_u64(p + delta);
            let n = BigUint::from(p) * q;
            let diff = q - p;
            // exact sufficient bound from the known divisor pair
            let lambda = hyperfactor::fermat::lambda_bound(
                &n,
                &BigUint::one(),
                &BigUint::one(),
                Some(&[BigUint::from(p), BigUint::from(q)]),
            )?
            .smallest_sufficient();
            let config = FermatConfig {
                tuned: args.tuned,
                budgets,
                ..FermatConfig::default()
            };
            for algo in ["fermat", "tradeoff"] {
                let started = Instant::now();
                let outcome = match algo {
                    "fermat" => factor_with_lambda(&n, &lambda, &config)?,
                    _ => factor_tradeoff(&n, &lambda, &config)?,
                };
                let seconds = started.elapsed().as_secs_f64();
                match outcome {
                    FermatOutcome::Factored(report) => {
                        debug_assert_eq!(&report.divisor * &report.cofactor, n);
                        println!(
                            "{algo},{diff},{n},{},{},{seconds:.6}",
                            report.modulus_used.value(),
                            report.square_tests
                        );
                    }
                    FermatOutcome::LambdaTooSmall { square_tests } => {
                        println!("{algo},{diff},{n},,{square_tests},{seconds:.6}");
                    }
                }
            }
        }
    }
    Ok(0)
}
