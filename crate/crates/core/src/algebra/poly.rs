//! Dense univariate polynomials over a [`FieldSpec`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

/// Degree of a polynomial. The zero polynomial has degree `MinusInfinity`,
/// which orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

/// Polynomial with ascending coefficients; the last stored coefficient is
/// always nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

/// Operations accepted by [`poly_arith`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivMod,
    Gcd,
    /// Evaluate the first operand at the given point.
    Eval(FieldElement),
}

/// Result of [`poly_arith`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyValue {
    Poly(Poly),
    DivMod(Poly, Poly),
    Element(FieldElement),
}

/// Checked binary polynomial arithmetic. `Eval` ignores `g`.
pub fn poly_arith(f: &Poly, g: &Poly, op: PolyOp) -> Result<PolyValue> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        PolyOp::Add => PolyValue::Poly(f + g),
        PolyOp::Sub => PolyValue::Poly(f - g),
        PolyOp::Mul => PolyValue::Poly(f * g),
        PolyOp::DivMod => {
            let (quo, rem) = f.div_rem(g)?;
            PolyValue::DivMod(quo, rem)
        }
        PolyOp::Gcd => PolyValue::Poly(f.gcd(g)?),
        PolyOp::Eval(x) => {
            if x.code() >= f.field.q() as usize {
                return Err(Error::FieldMismatch);
            }
            PolyValue::Element(f.eval(x))
        }
    })
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: &FieldSpec) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &FieldSpec, c: FieldElement) -> Poly {
        Poly::new(field.clone(), vec![c])
    }

    pub fn one(field: &FieldSpec) -> Poly {
        Poly::constant(field, field.one())
    }

    /// `c x^n`.
    pub fn monomial(field: &FieldSpec, c: FieldElement, n: usize) -> Poly {
        let mut coeffs = vec![FieldElement::ZERO; n + 1];
        coeffs[n] = c;
        Poly::new(field.clone(), coeffs)
    }

    pub fn x(field: &FieldSpec) -> Poly {
        Poly::monomial(field, field.one(), 1)
    }

    /// Ascending integer coefficients, mapped into the prime subfield.
    pub fn from_ints(field: &FieldSpec, coeffs: &[i64]) -> Poly {
        Poly::new(
            field.clone(),
            coeffs.iter().map(|&c| field.from_int(c)).collect(),
        )
    }

    /// Sparse constructor from `(exponent, integer coefficient)` terms;
    /// repeated exponents are summed.
    pub fn from_terms(field: &FieldSpec, terms: &[(usize, i64)]) -> Poly {
        let top = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![FieldElement::ZERO; top + 1];
        for &(e, c) in terms {
            coeffs[e] = field.add(coeffs[e], field.from_int(c));
        }
        Poly::new(field.clone(), coeffs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Finite degree, or `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElement::ONE
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading_coefficient(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient() == FieldElement::ONE
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        match self.field.inv(self.leading_coefficient()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        let f = &self.field;
        Poly::new(
            f.clone(),
            self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int((i as u64 % f.p()) as i64), c))
            .collect();
        Poly::new(f.clone(), coeffs)
    }

    /// Quotient and remainder; `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if self.field != divisor.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let d = divisor.deg().ok_or(Error::DivisionByZero)?;
        let Some(n) = self.deg().filter(|&n| n >= d) else {
            return Ok((Poly::zero(f), self.clone()));
        };
        let lead_inv = f
            .inv(divisor.leading_coefficient())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![FieldElement::ZERO; n - d + 1];
        for k in (0..=n - d).rev() {
            let c = rem[k + d];
            if c.is_zero() {
                continue;
            }
            let t = f.mul(c, lead_inv);
            quo[k] = t;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    rem[k + i] = f.sub(rem[k + i], f.mul(t, b));
                }
            }
        }
        rem.truncate(d);
        Ok((Poly::new(f.clone(), quo), Poly::new(f.clone(), rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Exact quotient; fails with [`Error::Verification`] if the division
    /// leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (quo, rem) = self.div_rem(divisor)?;
        if !rem.is_zero() {
            return Err(Error::Verification(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(quo)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient-wise comparison in canonical element order, lowest degree
    /// first, after comparing degrees.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let f = &self.field;
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.canonical_index(a).cmp(&f.canonical_index(b)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    /// Coordinate vectors of the coefficients, ascending degree.
    pub fn to_coords(&self) -> Vec<Vec<u64>> {
        self.coeffs.iter().map(|&c| self.field.coords(c)).collect()
    }

    pub fn from_coords(field: &FieldSpec, coords: &[Vec<u64>]) -> Result<Poly> {
        let coeffs = coords
            .iter()
            .map(|c| field.element(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field.clone(), coeffs))
    }

    fn zip_with(
        &self,
        other: &Poly,
        op: impl Fn(FieldElement, FieldElement) -> FieldElement,
    ) -> Poly {
        assert!(
            self.field == other.field,
            "polynomials over different fields"
        );
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        Poly::new(self.field.clone(), coeffs)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.zip_with(rhs, |a, b| self.field.add(a, b))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.zip_with(rhs, |a, b| self.field.sub(a, b))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f.clone(), out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self, self.field)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let field = &self.field;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let coeff = if field.is_prime_field() {
                format!("{}", field.coords(c)[0])
            } else {
                format!("{:?}", field.coords(c))
            };
            match (i, c == FieldElement::ONE) {
                (0, _) => write!(out, "{coeff}")?,
                (1, true) => write!(out, "x")?,
                (1, false) => write!(out, "{coeff}x")?,
                (_, true) => write!(out, "x^{i}")?,
                (_, false) => write!(out, "{coeff}x^{i}")?,
            }
        }
        Ok(())
    }
}
