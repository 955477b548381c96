//! Missed-genera census: for each odd prime `p`, the genera below
//! `(p+1)(p-2)/2` that the trinomial constructions plus doubling fail to
//! reach, and an exhaustive search used to cross-check small cases.
//!
//! Two modes run the same rule cascade. *Faithful* mode fires a rule when its
//! arithmetic condition holds. *Verified* mode fires a rule only when the
//! corresponding construction passes the gcd squarefree test (and a point
//! count when `q` is within the budget).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{make_field, squarefree_witness, FieldElement, FieldSpec, Poly};
use crate::arith::{is_prime, odd_primes};
use crate::constructions::{
    double_certificate, modp_l, modp_prime_singular, q_minus_a_exists, relprime_exists,
    standard_poly, try_modp, try_modp_prime, try_q_minus_a, try_relprime, Certificate, Method,
    Params, DEFAULT_VERIFY_BUDGET,
};
use crate::curve::HyperellipticCurve;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Faithful,
    Verified,
}

/// A direct construction rule of the cascade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "modp")]
    Modp,
    #[serde(rename = "modp_prime")]
    ModpPrime,
    #[serde(rename = "relprime")]
    Relprime,
    #[serde(rename = "q_minus_a")]
    QMinusA,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::Modp, Rule::ModpPrime, Rule::Relprime, Rule::QMinusA];

    pub fn method(self) -> Method {
        match self {
            Rule::Modp => Method::Modp,
            Rule::ModpPrime => Method::ModpPrime,
            Rule::Relprime => Method::Relprime,
            Rule::QMinusA => Method::QMinusA,
        }
    }

    pub fn parse(name: &str) -> Option<Rule> {
        Rule::ALL
            .into_iter()
            .find(|r| r.method().to_string() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    pub mode: Mode,
    /// Applied in order; the first rule that fires wins.
    pub rules: Vec<Rule>,
    pub bound_override: Option<u64>,
    /// Largest `q` for which verified mode also counts points.
    pub verify_budget: u64,
}

impl CensusConfig {
    pub fn faithful() -> CensusConfig {
        CensusConfig {
            mode: Mode::Faithful,
            rules: vec![Rule::Modp, Rule::ModpPrime, Rule::Relprime],
            bound_override: None,
            verify_budget: DEFAULT_VERIFY_BUDGET,
        }
    }

    pub fn verified() -> CensusConfig {
        CensusConfig {
            mode: Mode::Verified,
            ..CensusConfig::faithful()
        }
    }

    pub fn bound(&self, p: u64) -> u64 {
        self.bound_override.unwrap_or_else(|| genus_bound(p))
    }
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig::faithful()
    }
}

/// Missed genera for one prime. `missed` lies in `[2, bound)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub p: u64,
    pub missed: Vec<u64>,
    pub count: usize,
    pub largest: u64,
    /// Rule (or doubling) that reached each obtained genus.
    #[serde(skip)]
    pub methods: BTreeMap<u64, Method>,
    /// Certificates for obtained genera (verified mode only).
    #[serde(skip)]
    pub certificates: BTreeMap<u64, Certificate>,
}

/// `(p, |missed|, max missed)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub p: u64,
    pub count: usize,
    pub largest: u64,
}

impl From<&CensusRow> for SummaryRow {
    fn from(row: &CensusRow) -> Self {
        SummaryRow {
            p: row.p,
            count: row.count,
            largest: row.largest,
        }
    }
}

/// Every genus `g >= (p+1)(p-2)/2` is reachable.
pub fn genus_bound(p: u64) -> u64 {
    (p + 1) * (p - 2) / 2
}

/// How a genus was reached directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub method: Method,
    pub params: Params,
    /// Present in verified mode.
    pub certificate: Option<Certificate>,
}

fn faithful_rule(rule: Rule, g: u64, field: &FieldSpec) -> Option<Params> {
    let p = field.p();
    match rule {
        Rule::Modp => modp_l(g, field).map(|l| Params {
            l: Some(l),
            a: Some(g % p),
            ..Params::default()
        }),
        // j = 0 leaves the criterion undefined; it does not fire.
        Rule::ModpPrime => matches!(modp_prime_singular(g, field), Ok(false)).then(|| Params {
            l: Some(1),
            ..Params::default()
        }),
        Rule::Relprime => relprime_exists(g, p).then(|| Params {
            p_prime: Some((p - 1) / 2),
            ..Params::default()
        }),
        Rule::QMinusA => {
            (g < field.q() && q_minus_a_exists(field.q() - g, field)).then(|| Params {
                offset: Some(field.q() - g),
                ..Params::default()
            })
        }
    }
}

fn verified_rule(rule: Rule, g: u64, field: &FieldSpec, budget: u64) -> Option<Certificate> {
    match rule {
        Rule::Modp => try_modp(g, field, budget),
        Rule::ModpPrime => try_modp_prime(g, field, budget),
        Rule::Relprime => try_relprime(g, field, budget),
        Rule::QMinusA => try_q_minus_a(g, field, budget),
    }
}

fn prime_field(p: u64) -> Result<FieldSpec> {
    make_field(p, 1)
}

/// First enabled rule that reaches genus `g` over `F_p`.
pub fn direct_obtainable(g: u64, p: u64, config: &CensusConfig) -> Result<Option<Derivation>> {
    let field = prime_field(p)?;
    Ok(direct_on_field(g, &field, config))
}

fn direct_on_field(g: u64, field: &FieldSpec, config: &CensusConfig) -> Option<Derivation> {
    config.rules.iter().find_map(|&rule| match config.mode {
        Mode::Faithful => faithful_rule(rule, g, field).map(|params| Derivation {
            method: rule.method(),
            params,
            certificate: None,
        }),
        Mode::Verified => verified_rule(rule, g, field, config.verify_budget).map(|c| Derivation {
            method: c.method,
            params: c.params.clone(),
            certificate: Some(c),
        }),
    })
}

/// Verified cascade over any odd `F_q`: the first enabled rule that certifies
/// genus `g`, else for odd `g` the doubling of a certificate for `(g - 1)/2`.
pub fn construct_verified(
    g: u64,
    field: &FieldSpec,
    rules: &[Rule],
    verify_budget: u64,
) -> Option<Certificate> {
    if g < 2 {
        return None;
    }
    let direct = rules
        .iter()
        .find_map(|&rule| verified_rule(rule, g, field, verify_budget));
    direct.or_else(|| {
        if g.is_multiple_of(2) {
            return None;
        }
        let base = construct_verified((g - 1) / 2, field, rules, verify_budget)?;
        double_certificate(&base, verify_budget)
            .map_err(|e| {
                log::warn!(
                    "double: genus {} -> {g} over F_{}: {e}",
                    base.genus,
                    field.q()
                )
            })
            .ok()
    })
}

/// One ascending pass over `[2, bound)`; `g` is obtained directly or, for
/// odd `g`, by doubling an obtained `(g - 1)/2 >= 2`.
pub fn missed_genera(p: u64, config: &CensusConfig) -> Result<CensusRow> {
    missed_genera_with(p, config, true)
}

/// As [`missed_genera`], with the doubling closure optionally disabled.
pub fn missed_genera_with(p: u64, config: &CensusConfig, doubling: bool) -> Result<CensusRow> {
    let field = prime_field(p)?;
    let bound = config.bound(p);
    let mut missed = Vec::new();
    let mut methods = BTreeMap::new();
    let mut certificates: BTreeMap<u64, Certificate> = BTreeMap::new();
    for g in 2..bound {
        if let Some(d) = direct_on_field(g, &field, config) {
            methods.insert(g, d.method);
            if let Some(c) = d.certificate {
                certificates.insert(g, c);
            }
            continue;
        }
        let base = (g - 1) / 2;
        if doubling && g % 2 == 1 && base >= 2 && methods.contains_key(&base) {
            match config.mode {
                Mode::Faithful => {
                    methods.insert(g, Method::Double);
                    continue;
                }
                Mode::Verified => {
                    match double_certificate(&certificates[&base], config.verify_budget) {
                        Ok(c) => {
                            methods.insert(g, Method::Double);
                            certificates.insert(g, c);
                            continue;
                        }
                        Err(e) => log::warn!("double: genus {base} -> {g} over F_{p} failed: {e}"),
                    }
                }
            }
        }
        missed.push(g);
    }
    Ok(CensusRow {
        p,
        count: missed.len(),
        largest: missed.last().copied().unwrap_or(0),
        missed,
        methods,
        certificates,
    })
}

/// Odd primes shown in full in the small-prime table.
pub const SMALL_PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// Full rows for `p <= 23`.
pub fn table_small_primes(config: &CensusConfig) -> Result<Vec<CensusRow>> {
    SMALL_PRIMES
        .par_iter()
        .map(|&p| missed_genera(p, config))
        .collect()
}

/// `(p, count, largest)` for every odd prime `p < max_p`.
pub fn table_summary(max_p: u64, config: &CensusConfig) -> Result<Vec<SummaryRow>> {
    odd_primes(3, max_p)
        .par_iter()
        .map(|&p| missed_genera(p, config).map(|row| SummaryRow::from(&row)))
        .collect()
}

/// `p,missed` with the genera joined by `;`.
pub fn missed_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from("p,missed\n");
    for row in rows {
        let list: Vec<String> = row.missed.iter().map(u64::to_string).collect();
        writeln!(out, "{},{}", row.p, list.join(";")).unwrap();
    }
    out
}

/// `p,count,largest`.
pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("p,count,largest\n");
    for row in rows {
        writeln!(out, "{},{},{}", row.p, row.count, row.largest).unwrap();
    }
    out
}

/// Default cap on the number of monic candidates an exhaustive search visits.
pub const DEFAULT_SEARCH_BUDGET: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(HyperellipticCurve),
    Exhausted,
}

/// Enumeration of `f = c m`, `c` the canonical nonsquare and `m` monic of
/// degree `2g + 2`, in canonical order of `(m_0, ..., m_{2g+1})`.
///
/// Scaling `f` by a nonzero square gives an isomorphic curve, and a pointless
/// curve needs even degree with nonsquare leading coefficient, so this
/// family contains a model of every pointless genus-`g` curve.
struct Enumerator {
    field: FieldSpec,
    degree: usize,
    elements: Vec<FieldElement>,
    chi: Vec<i8>,
    nonsquare: FieldElement,
    /// Evaluation points other than 0, in canonical order.
    points: Vec<FieldElement>,
}

impl Enumerator {
    fn new(field: &FieldSpec, g: u64, budget: Option<u128>) -> Result<Enumerator> {
        if g < 1 {
            return Err(Error::Precondition("genus must be at least 1".into()));
        }
        let degree = 2 * g as usize + 2;
        let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
        let needed = (field.q() as u128)
            .checked_pow(degree as u32)
            .unwrap_or(u128::MAX);
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let elements: Vec<FieldElement> = field.elements_canonical().collect();
        Ok(Enumerator {
            field: field.clone(),
            degree,
            chi: field.character_table(),
            nonsquare: field.canonical_nonsquare(),
            points: elements[1..].to_vec(),
            elements,
        })
    }

    fn q(&self) -> usize {
        self.elements.len()
    }

    /// `m` with `chi(m(x)) = +1` everywhere makes `c m` nonsquare everywhere.
    fn passes(&self, m: &[FieldElement]) -> bool {
        let f = &self.field;
        self.points.iter().all(|&x| {
            let v = m
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c));
            self.chi[v.code()] == 1
        })
    }

    fn curve(&self, m: &[FieldElement]) -> Option<HyperellipticCurve> {
        let poly = Poly::new(self.field.clone(), m.to_vec()).scale(self.nonsquare);
        HyperellipticCurve::new(poly).ok()
    }

    /// Hits within the block where `(m_0, m_1)` has canonical index `block`.
    /// Stops at the first hit when `first_only`.
    fn scan_block(&self, block: usize, first_only: bool) -> Vec<HyperellipticCurve> {
        let q = self.q();
        let (m0, m1) = (self.elements[block / q], self.elements[block % q]);
        let mut hits = Vec::new();
        // m(0) = m_0 must already be a nonzero square.
        if self.chi[m0.code()] != 1 {
            return hits;
        }
        let mut digits = vec![0usize; self.degree - 2];
        let mut m = vec![FieldElement::ZERO; self.degree + 1];
        m[0] = m0;
        m[1] = m1;
        m[self.degree] = FieldElement::ONE;
        loop {
            if self.passes(&m) {
                if let Some(c) = self.curve(&m) {
                    hits.push(c);
                    if first_only {
                        return hits;
                    }
                }
            }
            // Odometer: the highest-degree free coefficient varies fastest.
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    return hits;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < q {
                    m[pos + 2] = self.elements[digits[pos]];
                    break;
                }
                digits[pos] = 0;
                m[pos + 2] = self.elements[0];
            }
        }
    }

    fn blocks(&self) -> std::ops::Range<usize> {
        0..self.q() * self.q()
    }
}

/// First pointless squarefree genus-`g` curve in canonical order, or
/// `Exhausted`. Blocks are scanned in parallel; the lowest-index hit wins.
pub fn exhaustive_pointless_search(
    field: &FieldSpec,
    g: u64,
    budget: Option<u128>,
) -> Result<SearchOutcome> {
    let e = Enumerator::new(field, g, budget)?;
    let hit = e
        .blocks()
        .into_par_iter()
        .find_map_first(|b| e.scan_block(b, true).into_iter().next());
    Ok(hit.map_or(SearchOutcome::Exhausted, SearchOutcome::Found))
}

/// Every pointless squarefree curve of the enumerated family, canonical order.
pub fn enumerate_pointless(
    field: &FieldSpec,
    g: u64,
    budget: Option<u128>,
) -> Result<Vec<HyperellipticCurve>> {
    let e = Enumerator::new(field, g, budget)?;
    let blocks: Vec<Vec<HyperellipticCurve>> = e
        .blocks()
        .into_par_iter()
        .map(|b| e.scan_block(b, false))
        .collect();
    Ok(blocks.into_iter().flatten().collect())
}

/// One `(p, g, rule)` where the two modes disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub p: u64,
    pub genus: u64,
    pub rule: Rule,
    pub faithful: bool,
    pub verified: bool,
    /// The trinomial the rule's construction uses, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
    /// `gcd(f, f')` when the polynomial is not squarefree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gcd_witness: Option<String>,
}

/// Genera missed in one mode but not the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDifference {
    pub p: u64,
    pub missed_only_faithful: Vec<u64>,
    pub missed_only_verified: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub rules: Vec<Discrepancy>,
    pub rows: Vec<RowDifference>,
}

impl DiscrepancyReport {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.rows.is_empty()
    }
}

fn rule_polynomial(rule: Rule, g: u64, field: &FieldSpec) -> Option<Poly> {
    let l = match rule {
        Rule::Modp => modp_l(g, field)?,
        _ => 1,
    };
    standard_poly(g, field, l).ok()
}

/// Compares every enabled rule of `faithful` against the same rule in
/// `verified` for each genus below the bound, and the resulting rows.
pub fn discrepancy_report(
    primes: &[u64],
    faithful: &CensusConfig,
    verified: &CensusConfig,
) -> Result<DiscrepancyReport> {
    if let Some(&p) = primes.iter().find(|&&p| p < 3 || !is_prime(p)) {
        return Err(Error::InvalidCharacteristic(p));
    }
    let per_prime: Vec<(Vec<Discrepancy>, Option<RowDifference>)> = primes
        .par_iter()
        .map(|&p| -> Result<_> {
            let field = prime_field(p)?;
            let mut found = Vec::new();
            for g in 2..faithful.bound(p) {
                for &rule in &faithful.rules {
                    let f_fires = faithful_rule(rule, g, &field).is_some();
                    let v_fires = verified_rule(rule, g, &field, verified.verify_budget).is_some();
                    if f_fires == v_fires {
                        continue;
                    }
                    let poly = rule_polynomial(rule, g, &field);
                    let witness = poly
                        .as_ref()
                        .and_then(|f| squarefree_witness(f).ok().flatten())
                        .map(|w| w.to_string());
                    found.push(Discrepancy {
                        p,
                        genus: g,
                        rule,
                        faithful: f_fires,
                        verified: v_fires,
                        polynomial: poly.map(|f| f.to_string()),
                        gcd_witness: witness,
                    });
                }
            }
            let a = missed_genera(p, faithful)?;
            let b = missed_genera(p, verified)?;
            let only = |x: &CensusRow, y: &CensusRow| -> Vec<u64> {
                x.missed
                    .iter()
                    .filter(|g| !y.missed.contains(g))
                    .copied()
                    .collect()
            };
            let diff = RowDifference {
                p,
                missed_only_faithful: only(&a, &b),
                missed_only_verified: only(&b, &a),
            };
            let diff = (!diff.missed_only_faithful.is_empty()
                || !diff.missed_only_verified.is_empty())
            .then_some(diff);
            Ok((found, diff))
        })
        .collect::<Result<_>>()?;
    let mut report = DiscrepancyReport::default();
    for (found, diff) in per_prime {
        report.rules.extend(found);
        report.rows.extend(diff);
    }
    Ok(report)
}
