//! Odd finite fields `F_q`, `q = p^r`.
//!
//! Elements are stored as a packed integer code `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`
//! where `(c_0, ..., c_{r-1})` are the coordinates in the basis `1, x, ..., x^{r-1}`
//! of `F_p[x]/(modulus)`. Prime fields use the code directly as the residue.
//! Extension fields multiply through discrete log/antilog tables built once
//! per field.
//!
//! The *canonical order* on elements is lexicographic on the coordinate tuple,
//! `c_0` most significant. It is what [`FieldSpec::canonical_nonsquare`] and the
//! exhaustive search use for tie-breaking.

use std::fmt;
use std::sync::Arc;

use crate::algebra::factor::is_irreducible;
use crate::algebra::poly::Poly;
use crate::arith::{is_prime, pow_mod, prime_factors};
use crate::error::{Error, Result};

/// Default cap on `q`; keeps log tables and exhaustive counts cheap.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// An element of some [`FieldSpec`]. Carries no reference to its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Packed code in `[0, q)`; a dense index usable for lookup tables.
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

/// Field operations accepted by [`FieldSpec::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `a^e` with `e` the integer value of the second operand's code.
    Pow,
    /// Inverse of the first operand; the second is ignored.
    Inv,
}

struct LogTables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

struct Inner {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<LogTables>,
}

/// The field `F_{p^r}` with its deterministic defining modulus.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.r == other.inner.r
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if self.r() > 1 {
            write!(
                f,
                " (p={}, r={}, modulus={:?})",
                self.p(),
                self.r(),
                self.modulus()
            )?;
        }
        Ok(())
    }
}

/// `F_{p^r}` with the default order limit.
pub fn make_field(p: u64, r: u32) -> Result<FieldSpec> {
    FieldSpec::with_limit(p, r, DEFAULT_MAX_ORDER)
}

impl FieldSpec {
    /// Builds `F_{p^r}`, rejecting `q > max_order`.
    ///
    /// For `r = 1` the modulus is the monomial `x`; otherwise it is the
    /// lexicographically least monic irreducible of degree `r`, comparing
    /// coefficient tuples `(c_0, ..., c_{r-1})` with `c_0` first.
    pub fn with_limit(p: u64, r: u32, max_order: u64) -> Result<FieldSpec> {
        if r < 1 {
            return Err(Error::InvalidExtensionDegree(r));
        }
        if p < 3 || p.is_multiple_of(2) || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= max_order && q < 1 << 31)
            .ok_or(Error::FieldTooLarge {
                p,
                r,
                limit: max_order,
            })?;
        let prime = FieldSpec {
            inner: Arc::new(Inner {
                p: p as u32,
                r: 1,
                q: p as u32,
                modulus: vec![0, 1],
                tables: None,
            }),
        };
        if r == 1 {
            return Ok(prime);
        }
        let modulus = least_irreducible(&prime, r as usize);
        let mut inner = Inner {
            p: p as u32,
            r,
            q: q as u32,
            modulus,
            tables: None,
        };
        inner.tables = Some(build_log_tables(&inner));
        Ok(FieldSpec {
            inner: Arc::new(inner),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p as u64
    }

    pub fn r(&self) -> u32 {
        self.inner.r
    }

    pub fn q(&self) -> u64 {
        self.inner.q as u64
    }

    /// Monic modulus over `F_p`, ascending coefficients, length `r + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.r == 1
    }

    /// The prime subfield `F_p`.
    pub fn prime_field(&self) -> FieldSpec {
        if self.is_prime_field() {
            self.clone()
        } else {
            make_field(self.p(), 1).expect("characteristic already validated")
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// Element from its coordinate vector; the vector must have length `r`
    /// with every entry in `[0, p)`.
    pub fn element(&self, coords: &[u64]) -> Result<FieldElement> {
        if coords.len() != self.inner.r as usize {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                self.inner.r,
                coords.len()
            )));
        }
        let p = self.p();
        let mut code = 0u64;
        for &c in coords.iter().rev() {
            if c >= p {
                return Err(Error::InvalidElement(format!(
                    "coordinate {c} not in [0, {p})"
                )));
            }
            code = code * p + c;
        }
        Ok(FieldElement(code as u32))
    }

    /// Element from a packed code; `None` if the code is out of range.
    pub fn from_code(&self, code: usize) -> Option<FieldElement> {
        (code < self.inner.q as usize).then_some(FieldElement(code as u32))
    }

    pub fn coords(&self, a: FieldElement) -> Vec<u64> {
        let p = self.p();
        let mut code = a.0 as u64;
        (0..self.inner.r)
            .map(|_| {
                let c = code % p;
                code /= p;
                c
            })
            .collect()
    }

    /// Position of `a` in the canonical (coordinate-lexicographic) order.
    pub fn canonical_index(&self, a: FieldElement) -> u64 {
        let p = self.p();
        self.coords(a).iter().fold(0, |acc, &c| acc * p + c)
    }

    /// Inverse of [`FieldSpec::canonical_index`].
    pub fn element_at_canonical(&self, index: u64) -> FieldElement {
        let p = self.p();
        let mut coords = vec![0u64; self.inner.r as usize];
        let mut rest = index;
        for c in coords.iter_mut().rev() {
            *c = rest % p;
            rest /= p;
        }
        self.element(&coords).expect("index below q")
    }

    /// All elements, in packed-code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.inner.q).map(FieldElement)
    }

    /// All elements in canonical order.
    pub fn elements_canonical(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q()).map(move |i| self.element_at_canonical(i))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.r == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut scale, mut out) = (a.0, b.0, 1u32, 0u32);
        for _ in 0..self.inner.r {
            out += (x % p + y % p) % p * scale;
            x /= p;
            y /= p;
            scale = scale.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.r == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut scale, mut out) = (a.0, 1u32, 0u32);
        for _ in 0..self.inner.r {
            out += (p - x % p) % p * scale;
            x /= p;
            scale = scale.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.inner.r == 1 {
            let p = self.inner.p;
            return FieldElement(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.inner.tables {
            None => FieldElement((a.0 as u64 * b.0 as u64 % self.inner.p as u64) as u32),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElement::ZERO;
                }
                let order = self.inner.q - 1;
                let e = t.log[a.0 as usize] + t.log[b.0 as usize];
                FieldElement(t.exp[(if e >= order { e - order } else { e }) as usize])
            }
        }
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.inner.tables {
            None => FieldElement(pow_mod(a.0 as u64, e, self.inner.p as u64) as u32),
            Some(t) => {
                let order = (self.inner.q - 1) as u128;
                let idx = t.log[a.0 as usize] as u128 * (e as u128 % order) % order;
                FieldElement(t.exp[idx as usize])
            }
        }
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.q() - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// The unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.q() / self.p())
    }

    /// Checked dispatcher over [`FieldOp`]. For [`FieldOp::Pow`] the exponent
    /// is the packed code of `b`; use [`FieldSpec::pow`] for larger exponents.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement> {
        let q = self.inner.q;
        if a.0 >= q || b.0 >= q {
            return Err(Error::FieldMismatch);
        }
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Div => self.div(a, b).ok_or(Error::DivisionByZero),
            FieldOp::Pow => Ok(self.pow(a, b.0 as u64)),
            FieldOp::Inv => self.inv(a).ok_or(Error::DivisionByZero),
        }
    }

    /// Quadratic character via Euler's criterion: 0, +1 or -1.
    pub fn quadratic_character(&self, a: FieldElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.pow(a, (self.q() - 1) / 2) == FieldElement::ONE {
            1
        } else {
            -1
        }
    }

    /// `chi(code)` for every element, indexed by [`FieldElement::code`].
    pub fn character_table(&self) -> Vec<i8> {
        self.elements()
            .map(|a| self.quadratic_character(a))
            .collect()
    }

    /// Least nonsquare in canonical order.
    pub fn canonical_nonsquare(&self) -> FieldElement {
        self.elements_canonical()
            .find(|&a| self.quadratic_character(a) == -1)
            .expect("odd q has nonsquares")
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        self.quadratic_character(a) >= 0
    }
}

/// Schoolbook product of two coordinate vectors reduced mod the monic modulus.
fn mul_coords(p: u64, modulus: &[u32], a: &[u64], b: &[u64]) -> Vec<u64> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * r - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (r..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus[..r].iter().enumerate() {
            let idx = k - r + i;
            prod[idx] = (prod[idx] + c * (p - m as u64)) % p;
        }
    }
    prod.truncate(r);
    prod
}

fn encode(p: u64, coords: &[u64]) -> u32 {
    coords.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn decode(p: u64, r: usize, mut code: u64) -> Vec<u64> {
    (0..r)
        .map(|_| {
            let c = code % p;
            code /= p;
            c
        })
        .collect()
}

fn build_log_tables(inner: &Inner) -> LogTables {
    let (p, r, q) = (inner.p as u64, inner.r as usize, inner.q as u64);
    let order = q - 1;
    let factors = prime_factors(order);
    let pow_coords = |base: &[u64], mut e: u64| {
        let mut acc = decode(p, r, 1);
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_coords(p, &inner.modulus, &acc, &b);
            }
            b = mul_coords(p, &inner.modulus, &b, &b);
            e >>= 1;
        }
        acc
    };
    let one = decode(p, r, 1);
    let generator = (2..q)
        .map(|code| decode(p, r, code))
        .find(|g| factors.iter().all(|&l| pow_coords(g, order / l) != one))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![0u32; q as usize];
    let mut cur = one;
    for i in 0..order {
        let code = encode(p, &cur);
        exp.push(code);
        log[code as usize] = i as u32;
        cur = mul_coords(p, &inner.modulus, &cur, &generator);
    }
    LogTables { log, exp }
}

fn least_irreducible(prime: &FieldSpec, r: usize) -> Vec<u32> {
    let p = prime.p();
    let total = p.pow(r as u32);
    for index in 0..total {
        // c_0 is the most significant digit of the enumeration index.
        let mut tail = vec![0u64; r];
        let mut rest = index;
        for c in tail.iter_mut().rev() {
            *c = rest % p;
            rest /= p;
        }
        let mut coeffs: Vec<FieldElement> =
            tail.iter().map(|&c| prime.from_int(c as i64)).collect();
        coeffs.push(FieldElement::ONE);
        let candidate = Poly::new(prime.clone(), coeffs);
        if is_irreducible(&candidate).expect("degree >= 2") {
            let mut m: Vec<u32> = tail.iter().map(|&c| c as u32).collect();
            m.push(1);
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
