//! The hyperelliptic model `y^2 = f(x)` over `F_q`.
//!
//! Point counts always refer to the smooth projective model: the number of
//! points above `x = infinity` is read off the degree and leading coefficient
//! of `f`, never from the (singular) projective closure of the plane model.

use rayon::prelude::*;

use crate::algebra::{odd_multiplicity_part, squarefree_witness, FieldElement, FieldSpec, Poly};
use crate::error::{Error, Result};

/// `y^2 = f(x)` with `f` squarefree of degree at least 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    f: Poly,
}

/// Rational points on the smooth model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PointCount {
    pub affine: u64,
    pub at_infinity: u8,
}

impl PointCount {
    pub fn total(&self) -> u64 {
        self.affine + self.at_infinity as u64
    }
}

/// `t -> numerator(t) / denominator(t)` with coprime parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    numerator: Poly,
    denominator: Poly,
}

impl RationalMap {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<RationalMap> {
        if numerator.field() != denominator.field() {
            return Err(Error::FieldMismatch);
        }
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !numerator.gcd(&denominator)?.is_constant() {
            return Err(Error::Precondition(
                "numerator and denominator share a factor".into(),
            ));
        }
        let map = RationalMap {
            numerator,
            denominator,
        };
        if map.degree() == 0 {
            return Err(Error::Precondition("constant map".into()));
        }
        Ok(map)
    }

    pub fn identity(field: &FieldSpec) -> RationalMap {
        RationalMap {
            numerator: Poly::x(field),
            denominator: Poly::one(field),
        }
    }

    /// `t -> t^2`.
    pub fn square(field: &FieldSpec) -> RationalMap {
        RationalMap {
            numerator: Poly::monomial(field, field.one(), 2),
            denominator: Poly::one(field),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn field(&self) -> &FieldSpec {
        self.numerator.field()
    }

    /// `max(deg numerator, deg denominator)`.
    pub fn degree(&self) -> usize {
        self.numerator
            .deg()
            .unwrap_or(0)
            .max(self.denominator.deg().unwrap_or(0))
    }

    /// `denominator^n * g(numerator / denominator)` for `n >= deg g`.
    pub fn homogenize(&self, g: &Poly, n: usize) -> Poly {
        let field = self.field();
        let Some(deg) = g.deg() else {
            return Poly::zero(field);
        };
        assert!(n >= deg, "homogenizing degree below the polynomial degree");
        let mut acc = Poly::constant(field, g.leading_coefficient());
        let mut den_pow = Poly::one(field);
        for k in (0..deg).rev() {
            den_pow = &den_pow * &self.denominator;
            acc = &(&acc * &self.numerator) + &den_pow.scale(g.coeff(k));
        }
        for _ in deg..n {
            acc = &acc * &self.denominator;
        }
        acc
    }
}

/// Checked constructor: `f` must live over `field`, have degree >= 3 and be
/// squarefree.
pub fn new_curve(field: &FieldSpec, f: Poly) -> Result<HyperellipticCurve> {
    if f.field() != field {
        return Err(Error::FieldMismatch);
    }
    HyperellipticCurve::new(f)
}

impl HyperellipticCurve {
    pub fn new(f: Poly) -> Result<HyperellipticCurve> {
        let degree = f.deg().unwrap_or(0);
        if degree < 3 {
            return Err(Error::DegreeTooSmall { degree, minimum: 3 });
        }
        if let Some(w) = squarefree_witness(&f)? {
            return Err(Error::NotSquarefree {
                witness: w.to_string(),
            });
        }
        Ok(HyperellipticCurve { f })
    }

    pub fn field(&self) -> &FieldSpec {
        self.f.field()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn into_poly(self) -> Poly {
        self.f
    }

    /// `floor((deg f - 1) / 2)`.
    pub fn genus(&self) -> u64 {
        (self.degree() as u64 - 1) / 2
    }

    fn degree(&self) -> usize {
        self.f.deg().expect("curve polynomial is nonzero")
    }

    /// Points above `x = infinity`: 1 for odd degree, otherwise 2 or 0 as
    /// the leading coefficient is a square or not.
    pub fn points_at_infinity(&self) -> u8 {
        if self.degree() % 2 == 1 {
            1
        } else if self.field().is_square(self.f.leading_coefficient()) {
            2
        } else {
            0
        }
    }

    /// Exact count: `sum_x (1 + chi(f(x)))` plus the points at infinity.
    pub fn count_points(&self) -> PointCount {
        let field = self.field();
        let q = field.q() as usize;
        let affine_at = |code: usize| {
            let x = field.from_code(code).expect("code below q");
            (1 + field.quadratic_character(self.f.eval(x)) as i64) as u64
        };
        let affine = if q.saturating_mul(self.degree()) >= 1 << 16 {
            (0..q).into_par_iter().map(affine_at).sum()
        } else {
            (0..q).map(affine_at).sum()
        };
        PointCount {
            affine,
            at_infinity: self.points_at_infinity(),
        }
    }

    /// `y^2 = a f(x)` for the canonical nonsquare `a`.
    pub fn quadratic_twist(&self) -> HyperellipticCurve {
        let a = self.field().canonical_nonsquare();
        HyperellipticCurve { f: self.f.scale(a) }
    }

    /// Twist by an arbitrary nonzero scalar.
    pub fn scaled(&self, c: FieldElement) -> Result<HyperellipticCurve> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(HyperellipticCurve { f: self.f.scale(c) })
    }

    pub fn is_pointless(&self) -> bool {
        // Odd degree always has a point at infinity.
        self.points_at_infinity() == 0 && self.count_points().total() == 0
    }

    /// `2q + 2` points.
    pub fn is_maximal(&self) -> bool {
        self.count_points().total() == 2 * self.field().q() + 2
    }

    /// Model of the normalized fibre product with `phi`: substitutes
    /// `x = phi(t)`, clears denominators to even degree and strips square
    /// factors.
    pub fn pullback(&self, phi: &RationalMap) -> Result<HyperellipticCurve> {
        if phi.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        if phi.degree() > 2 {
            return Err(Error::Precondition(format!(
                "pullback map has degree {}, expected at most 2",
                phi.degree()
            )));
        }
        let n = self.degree().div_ceil(2) * 2;
        let cleared = phi.homogenize(&self.f, n);
        if cleared.is_zero() {
            return Err(Error::Precondition(
                "pulled-back polynomial vanishes".into(),
            ));
        }
        let part = odd_multiplicity_part(&cleared)?;
        if &part.odd * &part.root.pow(2) != cleared {
            return Err(Error::Verification(format!(
                "square-class bookkeeping failed for {cleared}"
            )));
        }
        HyperellipticCurve::new(part.odd)
    }
}
