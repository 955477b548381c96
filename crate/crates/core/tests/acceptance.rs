//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Run with
//! `cargo test --release --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pointless::algebra::{extract_quadratic_factor, is_squarefree, make_field, FieldSpec, Poly};
use pointless::arith::{gcd, odd_primes};
use pointless::census::{
    construct_verified, enumerate_pointless, exhaustive_pointless_search, genus_bound, missed_csv,
    missed_genera, summary_csv, table_small_primes, table_summary, CensusConfig, Rule,
    SearchOutcome, SummaryRow,
};
use pointless::constructions::{
    amplify_quadratic_factor, double_curve, lemma_params, modp_prime_singular, rr_classify,
    standard_poly, Certificate, DEFAULT_VERIFY_BUDGET,
};
use pointless::curve::HyperellipticCurve;
use pointless::Error;

const FIGURE1: &str = include_str!("fixtures/figure1.csv");
const FIGURE2: &str = include_str!("fixtures/figure2.csv");

/// Wall-clock limits per criterion; exceeding one fails the criterion.
const LIMIT_FIGURE1: Duration = Duration::from_secs(60);
const LIMIT_FIGURE2: Duration = Duration::from_secs(600);
const LIMIT_Q_MINUS_4: Duration = Duration::from_secs(60);
const LIMIT_SMALL_GENUS: Duration = Duration::from_secs(300);

/// Random curves per field for the twist-duality suite.
const DUALITY_SAMPLES: usize = 1000;
const DUALITY_SEED: u64 = 0x7715_7d0a;

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.detail = format!("{} [{:.2}s", o.detail, elapsed.as_secs_f64());
    if let Some(limit) = limit {
        o.detail += &format!(", limit {}s", limit.as_secs());
        if elapsed > limit {
            o.pass = false;
            o.detail += ", over time";
        }
    }
    o.detail += "]";
    o
}

fn first_difference(expected: &str, actual: &str) -> String {
    expected
        .lines()
        .zip(actual.lines())
        .find(|(e, a)| e != a)
        .map(|(e, a)| format!("expected `{e}`, got `{a}`"))
        .unwrap_or_else(|| "line count differs".into())
}

fn figure1() -> Outcome {
    let rows = table_small_primes(&CensusConfig::faithful()).unwrap();
    let csv = missed_csv(&rows);
    let pass = csv == FIGURE1;
    let detail = if pass {
        "8 rows match; p=23 has 30 missed genera, largest 241".to_string()
    } else {
        first_difference(FIGURE1, &csv)
    };
    Outcome { pass, detail }
}

fn figure2() -> Outcome {
    let rows: Vec<SummaryRow> = table_summary(100, &CensusConfig::faithful())
        .unwrap()
        .into_iter()
        .filter(|r| r.p > 23)
        .collect();
    let csv = summary_csv(&rows);
    let pass = csv == FIGURE2;
    let detail = if pass {
        format!("{} triples match", rows.len())
    } else {
        first_difference(FIGURE2, &csv)
    };
    Outcome { pass, detail }
}

/// `x^{2p-6} - x^{p-5} + 1` over `F_p`; the exponents are positive from p = 7.
fn q_minus_4() -> Outcome {
    let expected: BTreeSet<u64> = [11, 61].into();
    let singular: BTreeSet<u64> = odd_primes(7, 200)
        .into_iter()
        .filter(|&p| {
            let f = make_field(p, 1).unwrap();
            let poly =
                Poly::from_terms(&f, &[(2 * p as usize - 6, 1), (p as usize - 5, -1), (0, 1)]);
            !is_squarefree(&poly).unwrap()
        })
        .collect();
    Outcome {
        pass: singular == expected,
        detail: format!(
            "non-squarefree for p in {singular:?}, expected {expected:?} (7 <= p < 200)"
        ),
    }
}

fn small_genus() -> Outcome {
    let mut found = Vec::new();
    let mut wrong = Vec::new();
    for (p, r) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
        let field = make_field(p, r).unwrap();
        let q = field.q();
        match exhaustive_pointless_search(&field, 2, None).unwrap() {
            SearchOutcome::Found(c) => {
                if q >= 13 || c.count_points().total() != 0 || c.genus() != 2 {
                    wrong.push(q);
                }
                found.push(q);
            }
            SearchOutcome::Exhausted => {
                if q < 13 {
                    wrong.push(q);
                }
            }
        }
    }
    Outcome {
        pass: wrong.is_empty(),
        detail: format!("found for q in {found:?}; exhausted otherwise; wrong: {wrong:?}"),
    }
}

fn random_squarefree(field: &FieldSpec, rng: &mut ChaCha8Rng) -> HyperellipticCurve {
    let q = field.q() as usize;
    loop {
        let degree = rng.gen_range(3..=10);
        let mut coeffs: Vec<_> = (0..degree)
            .map(|_| field.from_code(rng.gen_range(0..q)).unwrap())
            .collect();
        coeffs.push(field.from_code(rng.gen_range(1..q)).unwrap());
        if let Ok(c) = HyperellipticCurve::new(Poly::new(field.clone(), coeffs)) {
            return c;
        }
    }
}

fn twist_duality() -> Outcome {
    let orders: Vec<(u64, u32)> = (3..=49u64)
        .filter_map(|q| {
            odd_primes(3, 50)
                .into_iter()
                .find_map(|p| (1..=4u32).find(|&r| p.pow(r) == q).map(|r| (p, r)))
        })
        .collect();
    let failures: Vec<String> = orders
        .par_iter()
        .flat_map_iter(|&(p, r)| {
            let field = make_field(p, r).unwrap();
            let q = field.q();
            let mut rng = ChaCha8Rng::seed_from_u64(DUALITY_SEED ^ q);
            (0..DUALITY_SAMPLES)
                .filter_map(|_| {
                    let c = random_squarefree(&field, &mut rng);
                    let n = c.count_points().total() + c.quadratic_twist().count_points().total();
                    (n != 2 * q + 2).then(|| format!("q={q} f={}", c.f()))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let qs: Vec<u64> = orders.iter().map(|&(p, r)| p.pow(r)).collect();
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{DUALITY_SAMPLES} curves for each q in {qs:?}; {} violations (tolerance 0){}",
            failures.len(),
            failures
                .first()
                .map(|f| format!("; first: {f}"))
                .unwrap_or_default()
        ),
    }
}

#[derive(Default)]
struct Agreement {
    checked: usize,
    agree: usize,
    criterion_only: usize,
    oracle_only: usize,
}

impl Agreement {
    fn record(&mut self, criterion: bool, oracle: bool) {
        self.checked += 1;
        match (criterion, oracle) {
            (a, b) if a == b => self.agree += 1,
            (true, false) => self.criterion_only += 1,
            _ => self.oracle_only += 1,
        }
    }

    fn merge(mut self, other: Agreement) -> Agreement {
        self.checked += other.checked;
        self.agree += other.agree;
        self.criterion_only += other.criterion_only;
        self.oracle_only += other.oracle_only;
        self
    }
}

/// `true` when the `l = 1` trinomial of genus `g` has a repeated factor.
fn oracle_singular(g: u64, field: &FieldSpec) -> bool {
    !is_squarefree(&standard_poly(g, field, 1).unwrap()).unwrap()
}

fn criterion_agreement() -> (Outcome, Outcome) {
    let (lemma, rr) = odd_primes(3, 50)
        .par_iter()
        .map(|&p| {
            let field = make_field(p, 1).unwrap();
            let mut lemma = Agreement::default();
            let mut rr = Agreement::default();
            for g in 2..genus_bound(p) {
                let (j, _, _) = lemma_params(g, p);
                if 2 * g + 2 < p {
                    continue;
                }
                let oracle = oracle_singular(g, &field);
                if j > 0 {
                    match modp_prime_singular(g, &field) {
                        Ok(s) => lemma.record(s, oracle),
                        Err(Error::Precondition(_)) => {}
                        Err(e) => panic!("p={p} g={g}: {e}"),
                    }
                }
                if gcd(g + 1, (p - 1) / 2) == 1 {
                    if let Ok(s) = rr_classify(g, p) {
                        rr.record(s, oracle);
                    }
                }
            }
            (lemma, rr)
        })
        .reduce(
            || (Agreement::default(), Agreement::default()),
            |a, b| (a.0.merge(b.0), a.1.merge(b.1)),
        );
    let describe = |a: &Agreement| {
        format!(
            "{}/{} agree; criterion-only singular {}, oracle-only singular {} (tolerance 0)",
            a.agree, a.checked, a.criterion_only, a.oracle_only
        )
    };
    (
        Outcome {
            pass: lemma.agree == lemma.checked,
            detail: describe(&lemma),
        },
        Outcome {
            pass: rr.agree == rr.checked && rr.checked > 0,
            detail: describe(&rr),
        },
    )
}

fn verified_certificates(max_q: u64) -> Vec<Certificate> {
    let mut certs: Vec<Certificate> = odd_primes(3, max_q + 1)
        .par_iter()
        .flat_map_iter(|&p| {
            missed_genera(p, &CensusConfig::verified())
                .unwrap()
                .certificates
                .into_values()
        })
        .collect();
    // Prime powers up to max_q run the verified cascade directly.
    {
        let (p, r) = (3u64, 2u32);
        let field = make_field(p, r).unwrap();
        let q = field.q();
        let rules = [Rule::Modp, Rule::ModpPrime, Rule::Relprime];
        certs.extend(
            (2..(q + 1) * (q - 2) / 2)
                .into_par_iter()
                .filter_map(|g| construct_verified(g, &field, &rules, DEFAULT_VERIFY_BUDGET))
                .collect::<Vec<_>>(),
        );
    }
    certs
}

fn doubling_chains() -> Outcome {
    let certs = verified_certificates(13);
    let failures: Vec<String> = certs
        .par_iter()
        .filter_map(|cert| {
            let g = cert.genus;
            let q = cert.field().q();
            let mut curve = cert.curve.clone();
            for (step, expected) in [2 * g + 1, 4 * g + 3, 8 * g + 7].into_iter().enumerate() {
                match double_curve(&curve, DEFAULT_VERIFY_BUDGET) {
                    Ok(d) if d.genus() == expected && d.count_points().total() == 0 => curve = d,
                    Ok(d) => {
                        return Some(format!(
                            "q={q} g={g} step {}: genus {} N={}",
                            step + 1,
                            d.genus(),
                            d.count_points().total()
                        ))
                    }
                    Err(e) => return Some(format!("q={q} g={g} step {}: {e}", step + 1)),
                }
            }
            None
        })
        .collect();
    let max_genus = certs.iter().map(|c| 8 * c.genus + 7).max().unwrap_or(0);
    Outcome {
        pass: failures.is_empty() && !certs.is_empty(),
        detail: format!(
            "{} starting curves over q in {{3,5,7,9,11,13}}, genera up to {max_genus}; {} failures (tolerance 0){}",
            certs.len(),
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    }
}

fn factor_amplification() -> Outcome {
    let mut qualifying = Vec::new();
    let mut success = None;
    let mut failures = Vec::new();
    for (p, r) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
        let field = make_field(p, r).unwrap();
        let curves = enumerate_pointless(&field, 2, None).unwrap();
        let with_factor: Vec<&HyperellipticCurve> = curves
            .iter()
            .filter(|c| extract_quadratic_factor(c.f()).unwrap().is_some())
            .collect();
        qualifying.push((field.q(), with_factor.len()));
        if field.q() > 5 {
            continue;
        }
        for c in with_factor {
            match amplify_quadratic_factor(c, DEFAULT_VERIFY_BUDGET) {
                Ok(Some(out)) if out.genus() == 3 && out.count_points().total() == 0 => {
                    success.get_or_insert_with(|| {
                        format!("q={}: y^2 = {} -> y^2 = {}", field.q(), c.f(), out.f())
                    });
                }
                other => failures.push(format!("q={} f={}: {other:?}", field.q(), c.f())),
            }
        }
    }
    Outcome {
        pass: success.is_some() && failures.is_empty(),
        detail: format!(
            "curves with an irreducible quadratic factor per q: {qualifying:?}; {} amplification failures; example {}",
            failures.len(),
            success.unwrap_or_else(|| "none".into())
        ),
    }
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored.
    let (lemma, rr) = criterion_agreement();
    let results = [
        (
            "1 figure 1 reproduction",
            timed(Some(LIMIT_FIGURE1), figure1),
        ),
        (
            "2 figure 2 reproduction",
            timed(Some(LIMIT_FIGURE2), figure2),
        ),
        (
            "3 genus q-4 singular primes",
            timed(Some(LIMIT_Q_MINUS_4), q_minus_4),
        ),
        (
            "4 small-genus exhaustive cross-check",
            timed(Some(LIMIT_SMALL_GENUS), small_genus),
        ),
        ("5 twist duality", timed(None, twist_duality)),
        ("6a modp' criterion vs gcd oracle", lemma),
        ("6b rr_classify vs gcd oracle", rr),
        ("7 doubling chains", timed(None, doubling_chains)),
        ("8 factor amplification", timed(None, factor_amplification)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
