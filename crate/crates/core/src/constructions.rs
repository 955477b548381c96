//! Explicit constructions of maximal (`2q + 2`-pointed) curves and their
//! pointless twists, each packaged as a [`Certificate`].
//!
//! Every arithmetic criterion here is treated as a fast path only. A
//! certificate is issued after the construction polynomial passes the gcd
//! squarefree test and, when `q` is within the verification budget, after
//! both the maximal curve and its twist have been counted.

use std::fmt;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    degree_profile, extract_quadratic_factor, is_irreducible, odd_multiplicity_part,
    squarefree_witness, FieldSpec, Poly,
};
use crate::arith::{gcd, is_prime, pow_mod};
use crate::curve::{HyperellipticCurve, PointCount, RationalMap};
use crate::error::{Error, Result};

/// Largest `q` for which certificates are confirmed by point counts.
pub const DEFAULT_VERIFY_BUDGET: u64 = 1 << 16;

/// Which construction produced a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "modp")]
    Modp,
    #[serde(rename = "modp_prime")]
    ModpPrime,
    #[serde(rename = "relprime")]
    Relprime,
    #[serde(rename = "q_minus_a")]
    QMinusA,
    #[serde(rename = "double")]
    Double,
    #[serde(rename = "factor_2g_minus_1")]
    Factor2gMinus1,
    #[serde(rename = "factor_2g")]
    Factor2g,
    #[serde(rename = "exhaustive")]
    Exhaustive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Method::Modp => "modp",
            Method::ModpPrime => "modp_prime",
            Method::Relprime => "relprime",
            Method::QMinusA => "q_minus_a",
            Method::Double => "double",
            Method::Factor2gMinus1 => "factor_2g_minus_1",
            Method::Factor2g => "factor_2g",
            Method::Exhaustive => "exhaustive",
        };
        f.write_str(name)
    }
}

/// Construction parameters; only those the method uses are set.
///
/// `a` is the least residue of `g` mod `p`, `l` the exponent multiplier of
/// the trinomial, `j = (2g + 2) mod (q - 1)`, `k = (2g + 2 - j) / (q - 1)`,
/// `d = gcd(j, q - 1)` and `p_prime = (p - 1) / 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_prime: Option<u64>,
    /// `q - g` for the genus `q - a` family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<u64>,
    /// Genus of the curve a derived construction started from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_genus: Option<u64>,
}

/// `(j, k, d)` for genus `g` over `F_q`.
pub fn lemma_params(g: u64, q: u64) -> (u64, u64, u64) {
    let n = 2 * g + 2;
    let j = n % (q - 1);
    (j, (n - j) / (q - 1), gcd(j, q - 1))
}

impl Params {
    fn with_lemma(mut self, g: u64, q: u64) -> Params {
        let (j, k, d) = lemma_params(g, q);
        self.j = Some(j);
        self.k = Some(k);
        self.d = Some(d);
        self
    }

    /// Checks the stored `j, k, d, a, p_prime` against their definitions.
    pub fn is_consistent(&self, g: u64, field: &FieldSpec) -> bool {
        let (j, k, d) = lemma_params(g, field.q());
        let p = field.p();
        self.j.is_none_or(|v| v == j)
            && self.k.is_none_or(|v| v == k)
            && self.d.is_none_or(|v| v == d)
            && self.a.is_none_or(|v| v == g % p)
            && self.p_prime.is_none_or(|v| v == (p - 1) / 2)
            && self
                .l
                .is_none_or(|l| l >= 1 && 2 * g + 2 > l * (field.q() - 1))
    }
}

/// Which checks a certificate has passed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verified {
    pub squarefree: bool,
    pub count: bool,
}

/// A pointless curve together with how it was built and what was checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub method: Method,
    pub genus: u64,
    pub params: Params,
    /// The maximal model; `curve` is its twist.
    pub construction_poly: Poly,
    /// The pointless curve.
    pub curve: HyperellipticCurve,
    pub verified: Verified,
    /// Point count of `curve`, present when it was counted.
    pub count: Option<PointCount>,
}

impl Certificate {
    pub fn field(&self) -> &FieldSpec {
        self.curve.field()
    }
}

/// Certifies `y^2 = maximal` as a maximal curve and returns its pointless twist.
pub fn certify_maximal(
    method: Method,
    params: Params,
    maximal: Poly,
    verify_budget: u64,
) -> Result<Certificate> {
    let maximal_curve = HyperellipticCurve::new(maximal)?;
    let curve = maximal_curve.quadratic_twist();
    let field = curve.field().clone();
    let (count, counted) = if field.q() <= verify_budget {
        let n_max = maximal_curve.count_points().total();
        let n = curve.count_points();
        if n_max != 2 * field.q() + 2 || n.total() != 0 {
            return Err(Error::Verification(format!(
                "{method}: y^2 = {} has {n_max} points, its twist {}",
                maximal_curve.f(),
                n.total()
            )));
        }
        (Some(n), true)
    } else {
        (None, false)
    };
    Ok(Certificate {
        method,
        genus: curve.genus(),
        params,
        construction_poly: maximal_curve.into_poly(),
        curve,
        verified: Verified {
            squarefree: true,
            count: counted,
        },
        count,
    })
}

/// Certifies an already pointless curve.
pub fn certify_pointless(
    method: Method,
    params: Params,
    curve: HyperellipticCurve,
    verify_budget: u64,
) -> Result<Certificate> {
    let maximal = curve.quadratic_twist().into_poly();
    let cert = certify_maximal(method, params, maximal, verify_budget)?;
    // Twisting twice multiplies by a square; keep the caller's model.
    Ok(Certificate { curve, ..cert })
}

/// `x^{2g+2} - x^{2g+2-l(q-1)} + 1`, which takes the value 1 on all of `F_q`.
pub fn standard_poly(g: u64, field: &FieldSpec, l: u64) -> Result<Poly> {
    let top = 2 * g + 2;
    let step = l.saturating_mul(field.q() - 1);
    if l == 0 || step >= top {
        return Err(Error::Precondition(format!(
            "need 2g+2 > l(q-1) > 0, got 2g+2 = {top}, l = {l}, q = {}",
            field.q()
        )));
    }
    Ok(Poly::from_terms(
        field,
        &[(top as usize, 1), ((top - step) as usize, -1), (0, 1)],
    ))
}

/// Least positive `l = -(2g+2) mod p` with `2g+2 > l(q-1)`.
pub fn modp_l(g: u64, field: &FieldSpec) -> Option<u64> {
    let p = field.p();
    let l = match (p - (2 * g + 2) % p) % p {
        0 => p,
        l => l,
    };
    (2 * g + 2 > l * (field.q() - 1)).then_some(l)
}

fn log_rejection(method: Method, g: u64, field: &FieldSpec, err: &Error) {
    warn!(
        "{method}: genus {g} over F_{}: construction rejected: {err}",
        field.q()
    );
}

/// The `l`-trinomial with `l = -(2g+2) mod p`.
pub fn try_modp(g: u64, field: &FieldSpec, verify_budget: u64) -> Option<Certificate> {
    let l = modp_l(g, field)?;
    let params = Params {
        l: Some(l),
        a: Some(g % field.p()),
        ..Params::default()
    };
    let poly = standard_poly(g, field, l).expect("l in range");
    certify_maximal(Method::Modp, params, poly, verify_budget)
        .map_err(|e| log_rejection(Method::Modp, g, field, &e))
        .ok()
}

/// Predicts whether the `l = 1` trinomial is singular: true iff
/// `(k-j-1)^d = (k-j)^d mod p`.
pub fn modp_prime_singular(g: u64, field: &FieldSpec) -> Result<bool> {
    let q = field.q();
    if 2 * g + 2 < q {
        return Err(Error::Precondition(format!(
            "2g+2 = {} < q = {q}",
            2 * g + 2
        )));
    }
    let (j, k, d) = lemma_params(g, q);
    if j == 0 {
        return Err(Error::DegenerateJ { genus: g, q });
    }
    let p = field.p() as i64;
    let base = (k as i64 - j as i64).rem_euclid(p) as u64;
    let lower = (k as i64 - j as i64 - 1).rem_euclid(p) as u64;
    Ok(pow_mod(lower, d, p as u64) == pow_mod(base, d, p as u64))
}

/// The `l = 1` trinomial, confirmed by gcd regardless of the criterion.
pub fn try_modp_prime(g: u64, field: &FieldSpec, verify_budget: u64) -> Option<Certificate> {
    if 2 * g + 2 < field.q() {
        return None;
    }
    let predicted = modp_prime_singular(g, field);
    let params = Params {
        l: Some(1),
        ..Params::default()
    }
    .with_lemma(g, field.q());
    let poly = standard_poly(g, field, 1).expect("2g+2 >= q");
    match certify_maximal(Method::ModpPrime, params, poly, verify_budget) {
        Ok(cert) => {
            if predicted == Ok(true) {
                debug!(
                    "modp_prime: genus {g} over F_{} predicted singular but squarefree",
                    field.q()
                );
            }
            Some(cert)
        }
        Err(e) => {
            if predicted == Ok(false) {
                warn!(
                    "modp_prime: genus {g} over F_{}: criterion predicted nonsingular",
                    field.q()
                );
            }
            if !matches!(e, Error::NotSquarefree { .. }) {
                log_rejection(Method::ModpPrime, g, field, &e);
            }
            None
        }
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidCharacteristic(p));
    }
    Ok(())
}

/// Classifies repeated roots of `x^{2g+2} - x^{2g+3-p} + 1` over `F_p` when
/// `gcd(g + 1, p') = 1`: repeated iff `g = (p^2-5)/4 + jp/2 mod p p'` and the
/// residue class of `p` mod 8 matches the parity condition on `j` and `k`.
pub fn rr_classify(g: u64, p: u64) -> Result<bool> {
    require_odd_prime(p)?;
    let p_prime = (p - 1) / 2;
    if gcd(g + 1, p_prime) != 1 {
        return Err(Error::Precondition(format!(
            "gcd({}, {p_prime}) != 1",
            g + 1
        )));
    }
    if 2 * g + 2 < p {
        return Err(Error::Precondition(format!(
            "2g+2 = {} < p = {p}",
            2 * g + 2
        )));
    }
    let (j, k, _) = lemma_params(g, p);
    let modulus = p * p_prime;
    let target = ((p * p - 5) / 4 + j / 2 * p) % modulus;
    if g % modulus != target {
        return Ok(false);
    }
    Ok(match p % 8 {
        3 => j % 4 == (2 * k) % 4,
        7 => j % 4 == (2 * k + 2) % 4,
        5 => j % 4 == 2,
        _ => false,
    })
}

/// `gcd(g + 1, (p-1)/2) = 1` and `g >= (p-1)/2`.
pub fn relprime_exists(g: u64, p: u64) -> bool {
    let p_prime = (p - 1) / 2;
    gcd(g + 1, p_prime) == 1 && g >= p_prime
}

/// Verified route for the relatively-prime case: the first squarefree
/// `l`-trinomial, `l = 1, 2, ...`.
pub fn try_relprime(g: u64, field: &FieldSpec, verify_budget: u64) -> Option<Certificate> {
    let p = field.p();
    if !relprime_exists(g, p) {
        return None;
    }
    let q = field.q();
    let p_prime = (p - 1) / 2;
    (1..)
        .take_while(|&l| 2 * g + 2 > l * (q - 1))
        .find_map(|l| {
            let poly = standard_poly(g, field, l).ok()?;
            let params = Params {
                l: Some(l),
                p_prime: Some(p_prime),
                ..Params::default()
            };
            certify_maximal(Method::Relprime, params, poly, verify_budget).ok()
        })
        .or_else(|| {
            warn!("relprime: genus {g} over F_{q}: no squarefree trinomial");
            None
        })
}

/// Criterion for genus `q - a`: `q - a >= (q-1)/2`, `q - a >= 2` and
/// `p` does not divide `(2a-2)^{2a-4} - (2a-3)^{2a-4}`.
pub fn q_minus_a_exists(a: u64, field: &FieldSpec) -> bool {
    let (p, q) = (field.p(), field.q());
    if a < 2 || a + 2 > q || 2 * (q - a) < q - 1 {
        return false;
    }
    let e = 2 * a - 4;
    pow_mod(2 * a - 2, e, p) != pow_mod(2 * a - 3, e, p)
}

/// The `l = 1` trinomial for genus `g = q - a`.
pub fn try_q_minus_a(g: u64, field: &FieldSpec, verify_budget: u64) -> Option<Certificate> {
    let q = field.q();
    if g >= q || !q_minus_a_exists(q - g, field) {
        return None;
    }
    let params = Params {
        l: Some(1),
        offset: Some(q - g),
        ..Params::default()
    }
    .with_lemma(g, q);
    let poly = standard_poly(g, field, 1).ok()?;
    certify_maximal(Method::QMinusA, params, poly, verify_budget)
        .map_err(|e| log_rejection(Method::QMinusA, g, field, &e))
        .ok()
}

fn require_pointless(curve: &HyperellipticCurve) -> Result<()> {
    if curve.is_pointless() {
        Ok(())
    } else {
        Err(Error::NotPointless)
    }
}

/// `y^2 = f(x^2)`: a pointless curve of genus `2g + 1` from a pointless
/// curve of genus `g`.
pub fn double_curve(curve: &HyperellipticCurve, verify_budget: u64) -> Result<HyperellipticCurve> {
    require_pointless(curve)?;
    let f0 = curve.f().coeff(0);
    if f0.is_zero() {
        return Err(Error::Verification("pointless curve with f(0) = 0".into()));
    }
    let doubled = curve.pullback(&RationalMap::square(curve.field()))?;
    if doubled.genus() != 2 * curve.genus() + 1 {
        return Err(Error::Verification(format!(
            "doubling genus {} gave genus {}",
            curve.genus(),
            doubled.genus()
        )));
    }
    if curve.field().q() <= verify_budget && !doubled.is_pointless() {
        return Err(Error::Verification(format!(
            "y^2 = {} is not pointless",
            doubled.f()
        )));
    }
    Ok(doubled)
}

/// Doubles a certified curve.
pub fn double_certificate(cert: &Certificate, verify_budget: u64) -> Result<Certificate> {
    let doubled = double_curve(&cert.curve, verify_budget)?;
    let params = Params {
        base_genus: Some(cert.genus),
        ..Params::default()
    };
    certify_pointless(Method::Double, params, doubled, verify_budget)
}

/// Parametrizes the conic `z^2 = x^2 + bx + c` by lines of slope 1 through a
/// point at infinity: `x = (t^2 - c)/(b - 2t)`, `z = x + t`.
pub fn parametrize_conic(u: &Poly) -> Result<RationalMap> {
    if u.deg() != Some(2) {
        return Err(Error::Precondition(format!(
            "expected a quadratic, got {u}"
        )));
    }
    if !u.is_monic() {
        return Err(Error::Precondition(format!("{u} is not monic")));
    }
    if !is_irreducible(u)? {
        return Err(Error::Reducible);
    }
    let field = u.field();
    let (b, c) = (u.coeff(1), u.coeff(0));
    let numerator = &Poly::monomial(field, field.one(), 2) - &Poly::constant(field, c);
    let denominator = Poly::new(field.clone(), vec![b, field.from_int(-2)]);
    RationalMap::new(numerator, denominator)
}

/// Conic parametrization for any monic squarefree `h` of degree 1 or 2,
/// covering the split cases through a rational root.
fn conic_map(h: &Poly) -> Result<RationalMap> {
    let field = h.field();
    let t2 = Poly::monomial(field, field.one(), 2);
    match h.deg() {
        // z^2 = x - a: x = t^2 + a.
        Some(1) => RationalMap::new(&t2 - &Poly::constant(field, h.coeff(0)), Poly::one(field)),
        Some(2) if is_irreducible(h)? => parametrize_conic(h),
        Some(2) => {
            // z^2 = (x - a)(x - b): lines z = t (x - a) give x = (a t^2 - b)/(t^2 - 1).
            let a = field
                .elements()
                .find(|&x| h.eval(x).is_zero())
                .expect("split quadratic has a root");
            let b = field.sub(field.neg(h.coeff(1)), a);
            RationalMap::new(
                &t2.scale(a) - &Poly::constant(field, b),
                &t2 - &Poly::one(field),
            )
        }
        _ => Err(Error::Precondition(format!("no conic map for {h}"))),
    }
}

/// Genus `2g - 1`: pulls back along the conic of an irreducible quadratic
/// factor of `f`. `None` when `f` has no such factor.
pub fn amplify_quadratic_factor(
    curve: &HyperellipticCurve,
    verify_budget: u64,
) -> Result<Option<HyperellipticCurve>> {
    require_pointless(curve)?;
    let g = curve.genus();
    if g < 2 {
        return Err(Error::Precondition(format!("genus {g} < 2")));
    }
    let Some(u) = extract_quadratic_factor(curve.f())? else {
        return Ok(None);
    };
    let phi = parametrize_conic(&u)?;
    let out = curve.pullback(&phi)?;
    if out.genus() != 2 * g - 1 {
        return Err(Error::Verification(format!(
            "pullback of y^2 = {} along the conic of {u} has genus {} (expected {})",
            curve.f(),
            out.genus(),
            2 * g - 1
        )));
    }
    if curve.field().q() <= verify_budget && !out.is_pointless() {
        return Err(Error::Verification(format!(
            "pullback y^2 = {} along the conic of {u} has {} points",
            out.f(),
            out.count_points().total()
        )));
    }
    Ok(Some(out))
}

/// Experimental search for a pointless curve of genus `2g` built from
/// auxiliary monic squarefree `h` of degree 1 or 2: both the pullback along
/// the conic `z^2 = h(x)` and the third quotient `y^2 = f h` (square part
/// removed) are tried. `search_budget` bounds the number of `h` examined.
pub fn explore_factor_2g(
    curve: &HyperellipticCurve,
    search_budget: u64,
) -> Result<Option<HyperellipticCurve>> {
    require_pointless(curve)?;
    let profile = degree_profile(curve.f())?;
    if profile.keys().all(|&d| d == 2) {
        return Err(Error::Precondition(
            "every irreducible factor of f is quadratic".into(),
        ));
    }
    let field = curve.field();
    let target = 2 * curve.genus();
    let accept = |c: HyperellipticCurve| (c.genus() == target && c.is_pointless()).then_some(c);
    let auxiliaries = field
        .elements_canonical()
        .map(|a| Poly::new(field.clone(), vec![field.neg(a), field.one()]))
        .chain(field.elements_canonical().flat_map(|c| {
            field
                .elements_canonical()
                .map(move |b| Poly::new(field.clone(), vec![c, b, field.one()]))
        }))
        .filter(|h| squarefree_witness(h).is_ok_and(|w| w.is_none()));
    for h in auxiliaries.take(search_budget as usize) {
        let third = odd_multiplicity_part(&(curve.f() * &h))?.odd;
        if let Some(c) = HyperellipticCurve::new(third).ok().and_then(accept) {
            return Ok(Some(c));
        }
        let pulled = conic_map(&h).and_then(|phi| curve.pullback(&phi));
        if let Some(c) = pulled.ok().and_then(accept) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}
