//! Command-line front end. Results go to stdout as canonical JSON (or CSV for
//! the tables); diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 not found or exhausted, 2 invalid input,
//! 3 verification discrepancy.

use std::ffi::OsString;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{make_field, squarefree_witness, FieldSpec};
use crate::census::{
    construct_verified, discrepancy_report, exhaustive_pointless_search, missed_csv, missed_genera,
    summary_csv, table_small_primes, table_summary, CensusConfig, Mode, Rule, SearchOutcome,
    SummaryRow,
};
use crate::constructions::{
    amplify_quadratic_factor, double_curve, explore_factor_2g, standard_poly, Method,
    DEFAULT_VERIFY_BUDGET,
};
use crate::curve::HyperellipticCurve;
use crate::error::Error;
use crate::json::{
    canonical, certificate_claim_from_json, certificate_to_json, count_to_json, curve_from_json,
    curve_to_json, is_certificate, parse, CertificateClaim,
};

/// Overrides the largest `q` for which point counts are verified.
pub const VERIFY_BUDGET_ENV: &str = "POINTLESS_VERIFY_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DISCREPANCY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "pointless",
    version,
    about = "Pointless and maximal hyperelliptic curves over odd finite fields"
)]
struct Cli {
    /// Maximum worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format; csv applies to `census` and `table`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Faithful,
    Verified,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Faithful => Mode::Faithful,
            ModeArg::Verified => Mode::Verified,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FactorMode {
    Amplify,
    Explore,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a certified pointless curve of the given genus.
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        genus: u64,
        /// Restrict to these rules (comma separated); doubling is always tried.
        #[arg(long, value_delimiter = ',')]
        rules: Option<Vec<String>>,
    },
    /// Count rational points on the smooth model.
    Count {
        /// Curve JSON, `@path`, or `-` for stdin.
        #[arg(long)]
        curve: String,
    },
    /// Quadratic twist by the canonical nonsquare.
    Twist {
        #[arg(long)]
        curve: String,
    },
    /// `y^2 = f(x^2)` of a pointless curve.
    Double {
        #[arg(long)]
        curve: String,
    },
    /// Missed genera for one prime.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Faithful)]
        mode: ModeArg,
        /// Rules in cascade order (comma separated).
        #[arg(long, value_delimiter = ',')]
        rules: Option<Vec<String>>,
        /// Replace the genus bound.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Missed-genera tables: 1 lists every missed genus for p <= 23,
    /// 2 summarizes 23 < p < max-p.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        figure: u8,
        #[arg(long, value_enum, default_value_t = ModeArg::Faithful)]
        mode: ModeArg,
        #[arg(long, default_value_t = 100)]
        max_p: u64,
        /// Emit the faithful-versus-verified discrepancy report instead.
        #[arg(long)]
        discrepancy: bool,
    },
    /// Exhaustive search for a pointless curve of the given genus.
    Exhaustive {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        genus: u64,
        /// Maximum number of monic candidates.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Recompute every claim of a certificate or curve.
    Verify {
        /// Certificate or curve JSON, `@path`, or `-` for stdin.
        #[arg(long)]
        input: String,
    },
    /// Experimental genus 2g-1 and 2g constructions from the factors of f.
    FactorExplore {
        #[arg(long)]
        curve: String,
        #[arg(long, value_enum, default_value_t = FactorMode::Both)]
        mode: FactorMode,
        /// Number of auxiliary polynomials the 2g search may try.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
}

/// A failed command with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Verification(_) => EXIT_DISCREPANCY,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::invalid(e.to_string())
    }
}

/// Successful output plus its exit code (0 or 1).
struct Output {
    code: i32,
    text: String,
}

impl Output {
    fn ok(value: &Value) -> Output {
        Output {
            code: EXIT_OK,
            text: canonical(value) + "\n",
        }
    }
}

type CmdResult = std::result::Result<Output, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match verify_budget() {
        Ok(budget) => with_threads(cli.threads, || dispatch(&cli, budget)),
        Err(f) => Err(f),
    };
    match result {
        Ok(o) => {
            if let Err(e) = out.write_all(o.text.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INVALID;
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn verify_budget() -> std::result::Result<u64, Failure> {
    match std::env::var(VERIFY_BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::invalid(format!(
                "{VERIFY_BUDGET_ENV}={v:?} is not a non-negative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_VERIFY_BUDGET),
    }
}

fn with_threads(threads: Option<usize>, f: impl FnOnce() -> CmdResult + Send) -> CmdResult {
    match threads {
        None => f(),
        Some(0) => Err(Failure::invalid("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::invalid(e.to_string()))?
            .install(f),
    }
}

fn dispatch(cli: &Cli, budget: u64) -> CmdResult {
    match &cli.command {
        Command::Construct { p, r, genus, rules } => {
            construct(*p, *r, *genus, rules.as_deref(), budget)
        }
        Command::Count { curve } => {
            let c = read_curve(curve)?;
            Ok(Output::ok(&count_to_json(&c.count_points())))
        }
        Command::Twist { curve } => Ok(Output::ok(&curve_to_json(
            &read_curve(curve)?.quadratic_twist(),
        ))),
        Command::Double { curve } => {
            let c = read_curve(curve)?;
            if !c.is_pointless() {
                return Err(Failure::invalid("input curve is not pointless"));
            }
            Ok(Output::ok(&curve_to_json(&double_curve(&c, budget)?)))
        }
        Command::Census {
            p,
            mode,
            rules,
            bound,
        } => {
            let mut config = config_for(*mode, rules.as_deref(), budget)?;
            config.bound_override = *bound;
            let row = missed_genera(*p, &config)?;
            Ok(match cli.format {
                Format::Json => Output::ok(&serde_json::to_value(&row).expect("row serializes")),
                Format::Csv => Output {
                    code: EXIT_OK,
                    text: missed_csv(std::slice::from_ref(&row)),
                },
            })
        }
        Command::Table {
            figure,
            mode,
            max_p,
            discrepancy,
        } => {
            if *discrepancy {
                return discrepancy_table(*figure, *max_p, budget);
            }
            table(
                *figure,
                config_for(*mode, None, budget)?,
                *max_p,
                cli.format,
            )
        }
        Command::Exhaustive {
            p,
            r,
            genus,
            budget: search,
        } => exhaustive(*p, *r, *genus, *search),
        Command::Verify { input } => verify(&read_input(input)?, budget),
        Command::FactorExplore {
            curve,
            mode,
            budget: search,
        } => factor_explore(&read_curve(curve)?, *mode, *search, budget),
    }
}

fn read_input(arg: &str) -> std::result::Result<Value, Failure> {
    let text = if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{path}: {e}")))?
    } else {
        arg.to_string()
    };
    Ok(parse(&text)?)
}

fn read_curve(arg: &str) -> std::result::Result<HyperellipticCurve, Failure> {
    Ok(curve_from_json(&read_input(arg)?)?)
}

fn parse_rules(names: Option<&[String]>) -> std::result::Result<Option<Vec<Rule>>, Failure> {
    names
        .map(|names| {
            names
                .iter()
                .map(|n| {
                    Rule::parse(n.trim())
                        .ok_or_else(|| Failure::invalid(format!("unknown rule {n:?}")))
                })
                .collect()
        })
        .transpose()
}

fn config_for(
    mode: ModeArg,
    rules: Option<&[String]>,
    budget: u64,
) -> std::result::Result<CensusConfig, Failure> {
    let mut config = match mode {
        ModeArg::Faithful => CensusConfig::faithful(),
        ModeArg::Verified => CensusConfig::verified(),
    };
    if let Some(rules) = parse_rules(rules)? {
        config.rules = rules;
    }
    config.verify_budget = budget;
    Ok(config)
}

fn construct(p: u64, r: u32, genus: u64, rules: Option<&[String]>, budget: u64) -> CmdResult {
    let field = make_field(p, r)?;
    let rules = parse_rules(rules)?.unwrap_or_else(|| Rule::ALL.to_vec());
    match construct_verified(genus, &field, &rules, budget) {
        Some(cert) => Ok(Output::ok(&certificate_to_json(&cert))),
        None => Ok(Output {
            code: EXIT_NOT_FOUND,
            text: canonical(&json!({ "found": false, "genus": genus, "p": p, "r": r })) + "\n",
        }),
    }
}

fn table(figure: u8, config: CensusConfig, max_p: u64, format: Format) -> CmdResult {
    if figure == 1 {
        let rows = table_small_primes(&config)?;
        return Ok(match format {
            Format::Csv => Output {
                code: EXIT_OK,
                text: missed_csv(&rows),
            },
            Format::Json => Output::ok(&serde_json::to_value(&rows).expect("rows serialize")),
        });
    }
    let rows: Vec<SummaryRow> = table_summary(max_p, &config)?
        .into_iter()
        .filter(|r| r.p > 23)
        .collect();
    Ok(match format {
        Format::Csv => Output {
            code: EXIT_OK,
            text: summary_csv(&rows),
        },
        Format::Json => Output::ok(&serde_json::to_value(&rows).expect("rows serialize")),
    })
}

fn discrepancy_table(figure: u8, max_p: u64, budget: u64) -> CmdResult {
    let primes: Vec<u64> = crate::arith::odd_primes(3, if figure == 1 { 24 } else { max_p })
        .into_iter()
        .filter(|&p| figure == 1 || p > 23)
        .collect();
    let verified = CensusConfig {
        verify_budget: budget,
        ..CensusConfig::verified()
    };
    let report = discrepancy_report(&primes, &CensusConfig::faithful(), &verified)?;
    Ok(Output::ok(
        &serde_json::to_value(&report).expect("report serializes"),
    ))
}

fn exhaustive(p: u64, r: u32, genus: u64, search: Option<u128>) -> CmdResult {
    let field = make_field(p, r)?;
    Ok(match exhaustive_pointless_search(&field, genus, search)? {
        SearchOutcome::Found(c) => {
            let mut v = curve_to_json(&c);
            v["N"] = json!(c.count_points().total());
            Output::ok(&v)
        }
        SearchOutcome::Exhausted => Output {
            code: EXIT_NOT_FOUND,
            text: canonical(&json!({ "exhausted": true, "genus": genus, "p": p, "r": r })) + "\n",
        },
    })
}

/// One recomputed claim.
fn check(
    checks: &mut serde_json::Map<String, Value>,
    name: &str,
    claimed: Value,
    computed: Value,
) -> bool {
    let ok = claimed == computed;
    checks.insert(
        name.into(),
        json!({ "claimed": claimed, "computed": computed, "ok": ok }),
    );
    ok
}

fn verify(input: &Value, budget: u64) -> CmdResult {
    if !is_certificate(input) {
        let curve = curve_from_json(input)?;
        let n = curve.count_points();
        let q = curve.field().q();
        let report = json!({
            "genus": curve.genus(),
            "squarefree": true,
            "count": count_to_json(&n),
            "pointless": n.total() == 0,
            "maximal": n.total() == 2 * q + 2,
            "ok": true,
        });
        return Ok(Output::ok(&report));
    }
    let claim = certificate_claim_from_json(input)?;
    let (report, ok) = verify_certificate(&claim, budget);
    let mut out = Output::ok(&report);
    if !ok {
        out.code = EXIT_DISCREPANCY;
    }
    Ok(out)
}

fn verify_certificate(claim: &CertificateClaim, budget: u64) -> (Value, bool) {
    let field: &FieldSpec = &claim.field;
    let q = field.q();
    let mut checks = serde_json::Map::new();
    let mut ok = true;

    let witness = squarefree_witness(&claim.f).ok().flatten();
    ok &= check(
        &mut checks,
        "squarefree",
        json!(true),
        json!(witness.is_none() && claim.f.deg().unwrap_or(0) >= 3),
    );
    if let Some(w) = &witness {
        checks.insert("gcd_witness".into(), json!(w.to_string()));
    }
    let curve = HyperellipticCurve::new(claim.f.clone()).ok();
    let genus = claim.f.deg().map(|d| (d.max(1) as u64 - 1) / 2);
    if let Some(g) = claim.genus {
        ok &= check(&mut checks, "genus", json!(g), json!(genus));
    }
    if let Some(t) = &claim.twist_f {
        // The maximal model must be a nonsquare multiple of f.
        let ratio = match (t.deg() == claim.f.deg(), claim.f.deg()) {
            (true, Some(_)) => field.div(t.leading_coefficient(), claim.f.leading_coefficient()),
            _ => None,
        };
        let is_twist = ratio.is_some_and(|c| !field.is_square(c) && claim.f.scale(c) == *t);
        ok &= check(&mut checks, "twist_relation", json!(true), json!(is_twist));
        if let (Some(l), Some(g)) = (claim.params.l, claim.genus) {
            if matches!(
                claim.method,
                Method::Modp | Method::ModpPrime | Method::Relprime | Method::QMinusA
            ) {
                let expected = standard_poly(g, field, l).ok();
                ok &= check(
                    &mut checks,
                    "construction_poly",
                    json!(true),
                    json!(expected.as_ref() == Some(t)),
                );
            }
        }
        if q <= budget {
            if let Ok(max) = HyperellipticCurve::new(t.clone()) {
                ok &= check(
                    &mut checks,
                    "twist_N",
                    json!(2 * q + 2),
                    json!(max.count_points().total()),
                );
            }
        }
    }
    if let Some(g) = claim.genus {
        ok &= check(
            &mut checks,
            "params",
            json!(true),
            json!(claim.params.is_consistent(g, field)),
        );
    }
    match (&curve, q <= budget) {
        (Some(c), true) => {
            let n = c.count_points().total();
            let claimed = claim.n.unwrap_or(0);
            ok &= check(&mut checks, "N", json!(claimed), json!(n));
        }
        (_, false) => {
            checks.insert("N".into(), json!({ "skipped": true, "budget": budget }));
        }
        (None, true) => {}
    }
    (
        json!({ "checks": checks, "method": claim.method, "ok": ok }),
        ok,
    )
}

fn factor_explore(
    curve: &HyperellipticCurve,
    mode: FactorMode,
    search: u64,
    budget: u64,
) -> CmdResult {
    if !curve.is_pointless() {
        return Err(Failure::invalid("input curve is not pointless"));
    }
    let mut report = json!({ "experimental": true, "genus": curve.genus() });
    let mut found = false;
    let mut record = |key: &str, result: crate::Result<Option<HyperellipticCurve>>| match result {
        Ok(Some(c)) => {
            found = true;
            let mut v = curve_to_json(&c);
            v["N"] = json!(c.count_points().total());
            v["genus"] = json!(c.genus());
            report[key] = v;
        }
        Ok(None) => report[key] = Value::Null,
        Err(Error::Verification(m)) => report[key] = json!({ "discrepancy": m }),
        Err(e) => report[key] = json!({ "error": e.to_string() }),
    };
    if matches!(mode, FactorMode::Amplify | FactorMode::Both) {
        record("genus_2g_minus_1", amplify_quadratic_factor(curve, budget));
    }
    if matches!(mode, FactorMode::Explore | FactorMode::Both) {
        record("genus_2g", explore_factor_2g(curve, search));
    }
    let discrepancy = report
        .as_object()
        .unwrap()
        .values()
        .any(|v| v.get("discrepancy").is_some());
    let code = if discrepancy {
        EXIT_DISCREPANCY
    } else if found {
        EXIT_OK
    } else {
        EXIT_NOT_FOUND
    };
    Ok(Output {
        code,
        text: canonical(&report) + "\n",
    })
}
