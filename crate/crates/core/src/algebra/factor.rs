//! Squarefree tests, squarefree decomposition, irreducibility and the
//! distinct/equal-degree pieces of Cantor–Zassenhaus.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::field::FieldElement;
use crate::algebra::poly::Poly;
use crate::arith::prime_factors;
use crate::error::{Error, Result};

/// Seed of the pseudorandom stream used by equal-degree splitting.
pub const SPLIT_SEED: u64 = 0x5eed_c0de;

/// True iff `f` has no repeated roots over the algebraic closure, i.e.
/// `f' != 0` and `gcd(f, f')` is constant.
pub fn is_squarefree(f: &Poly) -> Result<bool> {
    Ok(squarefree_witness(f)?.is_none())
}

/// `None` when `f` is squarefree, otherwise `gcd(f, f')` (which is `f` itself
/// up to a unit when `f' = 0`).
pub fn squarefree_witness(f: &Poly) -> Result<Option<Poly>> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let df = f.derivative();
    if df.is_zero() {
        return Ok(Some(f.monic()));
    }
    let g = f.gcd(&df)?;
    Ok((!g.is_constant()).then_some(g))
}

/// Squarefree decomposition of a nonzero polynomial: monic pairwise coprime
/// squarefree factors `s_i` with multiplicities `m_i` such that
/// `f = lc(f) * prod s_i^{m_i}`. Handles `p`-th powers in characteristic `p`.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    if f.is_zero() {
        return Err(Error::Precondition(
            "squarefree decomposition of the zero polynomial".into(),
        ));
    }
    let mut out = Vec::new();
    decompose(&f.monic(), 1, &mut out)?;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.canonical_cmp(&b.0)));
    Ok(out)
}

fn decompose(f: &Poly, scale: usize, out: &mut Vec<(Poly, usize)>) -> Result<()> {
    if f.is_constant() {
        return Ok(());
    }
    let field = f.field().clone();
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c)?;
        let factor = w.exact_div(&y)?;
        if !factor.is_constant() {
            out.push((factor, i * scale));
        }
        c = c.exact_div(&y)?;
        w = y;
        i += 1;
    }
    if !c.is_constant() {
        // What is left has zero derivative: a polynomial in x^p.
        let p = field.p() as usize;
        let coeffs = c
            .coeffs()
            .iter()
            .step_by(p)
            .map(|&a| field.pth_root(a))
            .collect();
        decompose(&Poly::new(field.clone(), coeffs), scale * p, out)?;
    }
    Ok(())
}

/// `f = odd * root^2` with `odd` squarefree and `lc(odd) = lc(f)`, `root` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddPart {
    pub odd: Poly,
    pub root: Poly,
}

/// Keeps each irreducible factor of `f` to multiplicity (original mod 2).
pub fn odd_multiplicity_part(f: &Poly) -> Result<OddPart> {
    let field = f.field();
    let mut odd = Poly::constant(field, f.leading_coefficient());
    let mut root = Poly::one(field);
    for (s, m) in squarefree_decomposition(f)? {
        if m % 2 == 1 {
            odd = &odd * &s;
        }
        root = &root * &s.pow(m / 2);
    }
    Ok(OddPart { odd, root })
}

/// Successive Frobenius images `x^{q^k} mod f` for `k = 1..=n`.
fn frobenius_powers(f: &Poly, n: usize) -> Result<Vec<Poly>> {
    let q = f.field().q();
    let mut out = Vec::with_capacity(n);
    let mut h = Poly::x(f.field()).rem(f)?;
    for _ in 0..n {
        h = h.pow_mod(q, f)?;
        out.push(h.clone());
    }
    Ok(out)
}

/// Rabin's test: `x^{q^n} = x mod f` and `gcd(x^{q^{n/l}} - x, f) = 1` for
/// every prime `l | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = f
        .deg()
        .filter(|&n| n >= 1)
        .ok_or(Error::ConstantPolynomial)?;
    if n == 1 {
        return Ok(true);
    }
    let x = Poly::x(f.field());
    let frob = frobenius_powers(f, n)?;
    if frob[n - 1] != x.rem(f)? {
        return Ok(false);
    }
    for l in prime_factors(n as u64) {
        let h = &frob[n / l as usize - 1];
        if !(h - &x).gcd(f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_squarefree(f: &Poly) -> Result<()> {
    match squarefree_witness(f)? {
        None => Ok(()),
        Some(w) => Err(Error::NotSquarefree {
            witness: w.to_string(),
        }),
    }
}

/// Distinct-degree factorization of a squarefree polynomial: pairs `(d, g_d)`
/// where `g_d` is the monic product of all irreducible factors of degree `d`.
pub fn distinct_degree_factorization(f: &Poly) -> Result<Vec<(usize, Poly)>> {
    require_squarefree(f)?;
    let q = f.field().q();
    let x = Poly::x(f.field());
    let mut rest = f.monic();
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(q, &rest)?;
        let g = rest.gcd(&(&h - &x))?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((d, g));
        }
        d += 1;
    }
    if let Some(n) = rest.deg().filter(|&n| n > 0) {
        out.push((n, rest));
    }
    Ok(out)
}

/// Degree `d` mapped to the total degree of the irreducible factors of degree `d`.
pub fn degree_profile(f: &Poly) -> Result<BTreeMap<usize, usize>> {
    Ok(distinct_degree_factorization(f)?
        .into_iter()
        .map(|(d, g)| (d, g.deg().unwrap_or(0)))
        .collect())
}

/// Splits a monic product of distinct degree-`d` irreducibles into its
/// factors (Cantor–Zassenhaus, odd `q`). Output sorted canonically.
pub fn equal_degree_factorization(g: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    split(&g.monic(), d, rng, &mut out)?;
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

fn split(g: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<()> {
    let n = g.deg().unwrap_or(0);
    if n <= d {
        if n > 0 {
            out.push(g.clone());
        }
        return Ok(());
    }
    let field = g.field().clone();
    let q = field.q();
    loop {
        let coeffs: Vec<FieldElement> = (0..n)
            .map(|_| {
                field
                    .from_code(rng.gen_range(0..q as usize))
                    .expect("below q")
            })
            .collect();
        let a = Poly::new(field.clone(), coeffs);
        if a.is_constant() {
            continue;
        }
        // a^{(q^d - 1)/2} = (a^{1 + q + ... + q^{d-1}})^{(q-1)/2}
        let mut t = a.clone();
        let mut norm = a.clone();
        for _ in 1..d {
            t = t.pow_mod(q, g)?;
            norm = (&norm * &t).rem(g)?;
        }
        let b = &norm.pow_mod((q - 1) / 2, g)? - &Poly::one(&field);
        let h = g.gcd(&b)?;
        let k = h.deg().unwrap_or(0);
        if k > 0 && k < n {
            let other = g.exact_div(&h)?;
            split(&h, d, rng, out)?;
            split(&other, d, rng, out)?;
            return Ok(());
        }
    }
}

/// A monic irreducible quadratic factor of squarefree `f`, the canonically
/// least one if there are several.
pub fn extract_quadratic_factor(f: &Poly) -> Result<Option<Poly>> {
    let ddf = distinct_degree_factorization(f)?;
    let Some((_, g2)) = ddf.into_iter().find(|(d, _)| *d == 2) else {
        return Ok(None);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    Ok(equal_degree_factorization(&g2, 2, &mut rng)?
        .into_iter()
        .next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{make_field, FieldSpec};

    fn fp(p: u64) -> FieldSpec {
        make_field(p, 1).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let f3 = fp(3);
        assert!(!is_squarefree(&Poly::from_ints(&f3, &[0, 0, 1])).unwrap());
        let f5 = fp(5);
        assert!(is_squarefree(&Poly::from_terms(&f5, &[(6, 1), (2, -1), (0, 1)])).unwrap());
        let f11 = fp(11);
        let f = Poly::from_terms(&f11, &[(16, 1), (6, -1), (0, 1)]);
        assert!(!is_squarefree(&f).unwrap());
        assert_eq!(
            is_squarefree(&Poly::constant(&f5, f5.one())).unwrap_err(),
            Error::ConstantPolynomial
        );
        // f' = 0: a p-th power.
        assert!(!is_squarefree(&Poly::from_terms(&f5, &[(10, 1), (5, 2), (0, 1)])).unwrap());
    }

    #[test]
    fn odd_part_examples() {
        let f3 = fp(3);
        // x^2 (x + 1)
        let f = Poly::from_ints(&f3, &[0, 0, 1, 1]);
        let part = odd_multiplicity_part(&f).unwrap();
        assert_eq!(part.odd, Poly::from_ints(&f3, &[1, 1]));
        assert_eq!(part.root, Poly::x(&f3));

        let f5 = fp(5);
        let part = odd_multiplicity_part(&Poly::monomial(&f5, f5.one(), 3)).unwrap();
        assert_eq!(part.odd, Poly::x(&f5));

        let sextic = Poly::from_terms(&f5, &[(6, 1), (2, -1), (0, 1)]);
        assert_eq!(odd_multiplicity_part(&sextic).unwrap().odd, sextic);

        // Leading unit is kept: 2 (x+1)^3 x^5 over F_5 -> 2 (x+1) x.
        let g = &Poly::from_ints(&f5, &[1, 1]).pow(3) * &Poly::monomial(&f5, f5.from_int(2), 5);
        let part = odd_multiplicity_part(&g).unwrap();
        assert_eq!(part.odd, Poly::from_ints(&f5, &[0, 2, 2]));
        assert_eq!(&part.odd * &part.root.pow(2), g);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&Poly::from_ints(&fp(3), &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&Poly::from_ints(&fp(5), &[1, 0, 1])).unwrap());
        assert!(is_irreducible(&Poly::x(&fp(7))).unwrap());
        assert_eq!(
            is_irreducible(&Poly::one(&fp(7))).unwrap_err(),
            Error::ConstantPolynomial
        );
        // x^4 + 1 over F_3 = (x^2 + x + 2)(x^2 + 2x + 2).
        assert!(!is_irreducible(&Poly::from_ints(&fp(3), &[1, 0, 0, 0, 1])).unwrap());
        // x^3 - x - 1 is the Artin–Schreier polynomial over F_3.
        assert!(is_irreducible(&Poly::from_ints(&fp(3), &[-1, -1, 0, 1])).unwrap());
    }

    #[test]
    fn profiles() {
        let f3 = fp(3);
        let u = Poly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(degree_profile(&u).unwrap(), BTreeMap::from([(2, 2)]));
        let xu = &Poly::x(&f3) * &u;
        assert_eq!(
            degree_profile(&xu).unwrap(),
            BTreeMap::from([(1, 1), (2, 2)])
        );
        let f5 = fp(5);
        assert_eq!(
            degree_profile(&Poly::from_ints(&f5, &[1, 0, 1])).unwrap(),
            BTreeMap::from([(1, 2)])
        );
        assert!(matches!(
            degree_profile(&Poly::from_ints(&f3, &[0, 0, 1])),
            Err(Error::NotSquarefree { .. })
        ));
    }

    #[test]
    fn quadratic_factor_examples() {
        let f3 = fp(3);
        let u = Poly::from_ints(&f3, &[1, 0, 1]);
        let xu = &Poly::x(&f3) * &u;
        assert_eq!(extract_quadratic_factor(&xu).unwrap(), Some(u));
        assert_eq!(
            extract_quadratic_factor(&Poly::from_ints(&fp(5), &[1, 0, 1])).unwrap(),
            None
        );
        assert_eq!(extract_quadratic_factor(&Poly::x(&f3)).unwrap(), None);
    }

    #[test]
    fn picks_least_of_several_quadratics() {
        // (x^2 + 1)(x^2 + x + 2)(x^2 + 2x + 2) over F_3.
        let f3 = fp(3);
        let a = Poly::from_ints(&f3, &[1, 0, 1]);
        let b = Poly::from_ints(&f3, &[2, 1, 1]);
        let c = Poly::from_ints(&f3, &[2, 2, 1]);
        let f = &(&a * &b) * &c;
        assert_eq!(extract_quadratic_factor(&f).unwrap(), Some(a.clone()));
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        assert_eq!(
            equal_degree_factorization(&f, 2, &mut rng).unwrap(),
            vec![a, b, c]
        );
    }
}
