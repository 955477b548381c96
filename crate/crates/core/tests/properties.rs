use pointless::algebra::{
    degree_profile, is_squarefree, make_field, odd_multiplicity_part, FieldElement, FieldSpec, Poly,
};
use pointless::census::{exhaustive_pointless_search, SearchOutcome};
use pointless::curve::HyperellipticCurve;
use proptest::prelude::*;

const ORDERS: [(u64, u32); 7] = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (11, 1)];

fn field(i: usize) -> FieldSpec {
    let (p, r) = ORDERS[i];
    make_field(p, r).unwrap()
}

fn poly(field: &FieldSpec, codes: &[usize]) -> Poly {
    let q = field.q() as usize;
    Poly::new(
        field.clone(),
        codes
            .iter()
            .map(|&c| field.from_code(c % q).unwrap())
            .collect(),
    )
}

/// `(field index, coefficient codes)` with a nonzero leading coefficient.
fn field_and_poly(max_len: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..ORDERS.len(), 4..=max_len).prop_flat_map(|(i, len)| {
        let q = field(i).q() as usize;
        (Just(i), prop::collection::vec(0..q, len - 1), 1..q).prop_map(|(i, mut v, lead)| {
            v.push(lead);
            (i, v)
        })
    })
}

/// Every monic polynomial of the given degree.
fn monics(field: &FieldSpec, degree: usize) -> Vec<Poly> {
    let q = field.q() as usize;
    (0..q.pow(degree as u32))
        .map(|mut n| {
            let mut c: Vec<FieldElement> = (0..degree)
                .map(|_| {
                    let e = field.from_code(n % q).unwrap();
                    n /= q;
                    e
                })
                .collect();
            c.push(field.one());
            Poly::new(field.clone(), c)
        })
        .collect()
}

/// `f` is squarefree iff no non-constant `h` has `h^2 | f`.
fn squarefree_by_division(f: &Poly) -> bool {
    let deg = f.deg().unwrap();
    (1..=deg / 2).all(|d| {
        monics(f.field(), d)
            .iter()
            .all(|h| !f.rem(&h.pow(2)).unwrap().is_zero())
    })
}

/// Projective points on the smooth model by direct enumeration of `y`.
fn brute_force_count(f: &Poly) -> u64 {
    let field = f.field();
    let squares =
        |v: FieldElement| field.elements().filter(|&y| field.mul(y, y) == v).count() as u64;
    let affine: u64 = field.elements().map(|x| squares(f.eval(x))).sum();
    let deg = f.deg().unwrap();
    let infinity = if deg % 2 == 1 {
        1
    } else {
        squares(f.leading_coefficient())
    };
    affine + infinity
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn character_is_multiplicative(i in 0..ORDERS.len(), a in 0usize..2000, b in 0usize..2000) {
        let f = field(i);
        let q = f.q() as usize;
        let (a, b) = (f.from_code(a % q).unwrap(), f.from_code(b % q).unwrap());
        prop_assert_eq!(
            f.quadratic_character(f.mul(a, b)),
            f.quadratic_character(a) * f.quadratic_character(b)
        );
        let by_search = f.elements().any(|y| f.mul(y, y) == a);
        prop_assert_eq!(f.quadratic_character(a) >= 0, by_search);
    }

    #[test]
    fn squarefree_agrees_with_division_oracle((i, codes) in field_and_poly(7)) {
        let f = poly(&field(i), &codes);
        prop_assert_eq!(is_squarefree(&f).unwrap(), squarefree_by_division(&f), "{}", f);
    }

    #[test]
    fn odd_part_invariants((i, codes) in field_and_poly(12), extra in prop::collection::vec(0usize..1000, 2..5)) {
        // Multiply in a square so that the odd part is non-trivial.
        let fld = field(i);
        let f = poly(&fld, &codes);
        let g = poly(&fld, &extra);
        let h = if g.is_zero() { f.clone() } else { &f * &g.pow(2) };
        let part = odd_multiplicity_part(&h).unwrap();
        prop_assert_eq!(&(&part.odd * &part.root.pow(2)), &h);
        prop_assert_eq!(part.odd.leading_coefficient(), h.leading_coefficient());
        if part.odd.deg().unwrap_or(0) > 0 {
            prop_assert!(is_squarefree(&part.odd).unwrap());
        }
    }

    #[test]
    fn degree_profile_accounts_for_every_factor((i, codes) in field_and_poly(12)) {
        let f = poly(&field(i), &codes);
        prop_assume!(is_squarefree(&f).unwrap());
        let total: usize = degree_profile(&f).unwrap().values().sum();
        prop_assert_eq!(total, f.deg().unwrap());
    }

    #[test]
    fn twist_duality_and_count_oracle((i, codes) in field_and_poly(9)) {
        let f = poly(&field(i), &codes);
        let Ok(c) = HyperellipticCurve::new(f.clone()) else { return Ok(()); };
        let q = c.field().q();
        let n = c.count_points().total();
        prop_assert_eq!(n, brute_force_count(&f));
        prop_assert_eq!(n + c.quadratic_twist().count_points().total(), 2 * q + 2);
        prop_assert_eq!(c.is_pointless(), c.quadratic_twist().is_maximal());
    }
}

#[test]
fn exhaustive_search_is_deterministic_across_pools() {
    let f = make_field(7, 1).unwrap();
    let reference = exhaustive_pointless_search(&f, 2, None).unwrap();
    for threads in [1, 2, 3, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let got = pool.install(|| exhaustive_pointless_search(&f, 2, None).unwrap());
        assert_eq!(got, reference, "{threads} threads");
    }
    let SearchOutcome::Found(c) = reference else {
        panic!("F_7 has pointless genus-2 curves")
    };
    assert_eq!(brute_force_count(c.f()), 0);
}
