//! The field `ℚ(u)` with `q = u^D`, in canonical reduced form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{fmt_terms, gcd, LaurentPoly};
use crate::error::{Error, Result};

/// An exact scalar `num(u) / den(u)` where `q = u^D`.
///
/// Canonical form: `num/den` is reduced, `den` has lowest exponent 0 and
/// leading coefficient 1, and `D` is the smallest denominator for which
/// the value is a rational function of `u = q^(1/D)`. Two values are equal
/// exactly when their canonical forms are identical, so the derived
/// `PartialEq` and `Hash` are the mathematical ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    d: u32,
    num: LaurentPoly,
    den: LaurentPoly,
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem {
            d: 1,
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(c: BigRational) -> Self {
        FieldElem {
            d: 1,
            num: LaurentPoly::constant(c),
            den: LaurentPoly::one(),
        }
    }

    /// `q^k` for an integer `k`.
    pub fn q_pow(k: i64) -> Self {
        Self::u_monomial(1, k)
    }

    /// `u^k` in the context `q = u^d`.
    pub fn u_monomial(d: u32, k: i64) -> Self {
        Self::from_poly(d, LaurentPoly::monomial(BigRational::one(), k))
    }

    /// The polynomial `p(u)` in the context `q = u^d`.
    pub fn from_poly(d: u32, p: LaurentPoly) -> Self {
        let mut x = FieldElem {
            d,
            num: p,
            den: LaurentPoly::one(),
        };
        x.reduce_d();
        x
    }

    /// `num/den` in the context `q = u^d`, canonicalized.
    pub fn from_parts(d: u32, num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidContext("q-denominator must be positive".into()));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(d, num, den))
    }

    /// `q - q⁻¹`, the ubiquitous Hecke coefficient.
    pub fn q_minus_qinv() -> Self {
        Self::q_pow(1) - Self::q_pow(-1)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Whether the value lies in `ℚ[u, u⁻¹]`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// If the value is `c·q^e` returns `(c, e)` with `e` rational.
    pub fn as_q_monomial(&self) -> Option<(BigRational, BigRational)> {
        if self.den.is_one() && self.num.is_monomial() {
            let (e, c) = &self.num.terms()[0];
            Some((
                c.clone(),
                BigRational::new(BigInt::from(*e), BigInt::from(self.d)),
            ))
        } else {
            None
        }
    }

    fn canonical(d: u32, num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = (num, den);
        if !den.is_monomial() && !num.is_monomial() {
            let g = gcd(&num, &den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let mut x = FieldElem { d, num, den };
        x.normalize_den();
        x.reduce_d();
        x
    }

    fn normalize_den(&mut self) {
        let lo = self.den.min_exp().expect("nonzero denominator");
        if lo != 0 {
            self.num = self.num.shift(-lo);
            self.den = self.den.shift(-lo);
        }
        let lc = self.den.leading_coeff().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    fn reduce_d(&mut self) {
        if self.num.is_zero() {
            self.d = 1;
            return;
        }
        let g = (self.d as i64)
            .gcd(&self.num.exponent_gcd())
            .gcd(&self.den.exponent_gcd());
        if g > 1 {
            self.d /= g as u32;
            self.num = self.num.shrink(g);
            self.den = self.den.shrink(g);
        }
    }

    /// Re-expresses the value in the context `q = u^target`, where `target`
    /// is a multiple of `self.d`. The result is not canonical in `d`.
    fn lifted(&self, target: u32) -> (LaurentPoly, LaurentPoly) {
        let k = (target / self.d) as i64;
        if k == 1 {
            (self.num.clone(), self.den.clone())
        } else {
            (self.num.stretch(k), self.den.stretch(k))
        }
    }

    fn common(a: &Self, b: &Self) -> u32 {
        a.d.lcm(&b.d)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let d = Self::common(self, other);
        if self.d == d && other.d == d && self.den == other.den {
            if self.den.is_one() {
                return Self::from_poly(d, self.num.add(&other.num));
            }
            return Self::canonical(d, self.num.add(&other.num), self.den.clone());
        }
        let (an, ad) = self.lifted(d);
        let (bn, bd) = other.lifted(d);
        if ad.is_one() && bd.is_one() {
            return Self::from_poly(d, an.add(&bn));
        }
        if ad == bd {
            return Self::canonical(d, an.add(&bn), ad);
        }
        let num = an.mul(&bd).add(&bn.mul(&ad));
        Self::canonical(d, num, ad.mul(&bd))
    }

    pub fn neg_ref(&self) -> Self {
        FieldElem {
            d: self.d,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let d = Self::common(self, other);
        let (an, ad) = self.lifted(d);
        let (bn, bd) = other.lifted(d);
        if ad.is_one() && bd.is_one() {
            return Self::from_poly(d, an.mul(&bn));
        }
        // cross-cancel so the product is already reduced
        let (an, bd) = cancel(an, bd);
        let (bn, ad) = cancel(bn, ad);
        let mut x = FieldElem {
            d,
            num: an.mul(&bn),
            den: ad.mul(&bd),
        };
        x.normalize_den();
        x.reduce_d();
        x
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = FieldElem {
            d: self.d,
            num: self.den.clone(),
            den: self.num.clone(),
        };
        x.normalize_den();
        Ok(x)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one());
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let n = k.unsigned_abs() as u32;
        Ok(FieldElem {
            d: base.d,
            num: base.num.pow(n),
            den: base.den.pow(n),
        }
        .renormalized())
    }

    fn renormalized(mut self) -> Self {
        self.normalize_den();
        self.reduce_d();
        self
    }

    /// Exact substitution `u ← u0` (so `q ← u0^D`).
    pub fn evaluate(&self, u0: &BigRational) -> Result<BigRational> {
        let den = self.den.eval(u0).ok_or_else(|| Error::Pole(u0.to_string()))?;
        if den.is_zero() {
            return Err(Error::Pole(u0.to_string()));
        }
        let num = self.num.eval(u0).ok_or_else(|| Error::Pole(u0.to_string()))?;
        Ok(num / den)
    }

    /// Substitution `u ← u0` in the coarser context `q = u^d`, where `d`
    /// must be a multiple of this element's own denominator.
    pub fn evaluate_in(&self, d: u32, u0: &BigRational) -> Result<BigRational> {
        if d == 0 || d % self.d != 0 {
            return Err(Error::InvalidContext(format!(
                "D = {} is not a multiple of {}",
                d, self.d
            )));
        }
        let k = (d / self.d) as i64;
        FieldElem {
            d,
            num: self.num.stretch(k),
            den: self.den.stretch(k),
        }
        .evaluate(u0)
    }
}

fn cancel(n: LaurentPoly, d: LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if n.is_monomial() || d.is_monomial() {
        return (n, d);
    }
    let g = gcd(&n, &d);
    if g.is_constant() {
        (n, d)
    } else {
        (
            n.div_exact(&g).expect("gcd divides"),
            d.div_exact(&g).expect("gcd divides"),
        )
    }
}

impl Default for FieldElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for FieldElem {
    fn from(c: BigRational) -> Self {
        Self::from_rational(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$imp(rhs)
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                (&self).$imp(rhs)
            }
        }
        impl $tr<FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

impl fmt::Display for FieldElem {
    /// Prints in terms of `q` with rational exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d as i64;
        if self.den.is_one() {
            return fmt_terms(f, self.num.terms(), "q", d);
        }
        write!(f, "(")?;
        fmt_terms(f, self.num.terms(), "q", d)?;
        write!(f, ")/(")?;
        fmt_terms(f, self.den.terms(), "q", d)?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i64) -> FieldElem {
        FieldElem::q_pow(k)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn c2_case_one_eigenvalues() {
        let a = (q(1) - q(-1)).try_div(&(FieldElem::one() - q(2))).unwrap();
        assert_eq!(a, -q(-1));
        let b = (q(1) - q(-1)).try_div(&(FieldElem::one() - q(-2))).unwrap();
        assert_eq!(b, q(1));
    }

    #[test]
    fn inverse_law() {
        let x = FieldElem::one() - q(-4);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(FieldElem::one().try_div(&FieldElem::zero()), Err(Error::DivisionByZero)));
        assert!(FieldElem::zero().inv().is_err());
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(q(-1).neg().evaluate(&rat(2, 1)).unwrap(), rat(-1, 2));
        assert_eq!(q(2).evaluate(&rat(3, 2)).unwrap(), rat(9, 4));
        let x = (q(1) - q(-1)).try_div(&(FieldElem::one() - q(-2))).unwrap();
        assert_eq!(x.evaluate(&rat(13, 10)).unwrap(), rat(13, 10));
        // q = u^2 shared by both elements
        let half = FieldElem::u_monomial(2, 1);
        assert_eq!(half.evaluate_in(2, &rat(3, 1)).unwrap(), rat(3, 1));
        assert_eq!(q(1).evaluate_in(2, &rat(3, 1)).unwrap(), rat(9, 1));
        assert!(half.evaluate_in(3, &rat(3, 1)).is_err());
    }

    #[test]
    fn pole_is_reported() {
        let x = FieldElem::one().try_div(&(q(1) - FieldElem::one())).unwrap();
        assert!(matches!(x.evaluate(&rat(1, 1)), Err(Error::Pole(_))));
    }

    #[test]
    fn context_lifting_and_reduction() {
        // u^2 with q = u^3 times u with q = u^3 is q
        let a = FieldElem::u_monomial(3, 2);
        let b = FieldElem::u_monomial(3, 1);
        assert_eq!(&a * &b, q(1));
        // q^(2/3) + q in a mixed context, then subtracting q leaves q^(2/3)
        let s = &a + &q(1);
        assert_eq!(s.d(), 3);
        assert_eq!(&s - &q(1), a);
        // u^6 with D = 6 is canonically q
        assert_eq!(FieldElem::u_monomial(6, 6), q(1));
    }

    #[test]
    fn canonical_denominator() {
        // (q - q^-1) / (q^3 - q) = q^-1 ... reduced: (q^2 - 1)/(q^2 (q^2 - 1)) = q^-2
        let x = (q(1) - q(-1)).try_div(&(q(3) - q(1))).unwrap();
        assert_eq!(x, q(-2));
        assert!(x.is_laurent());
        let y = FieldElem::one().try_div(&(q(2) + FieldElem::from_int(2))).unwrap();
        assert!(y.denom().leading_coeff().unwrap().is_one());
        assert_eq!(y.denom().min_exp(), Some(0));
    }

    #[test]
    fn display_uses_q() {
        assert_eq!(q(-1).neg().to_string(), "-q^-1");
        assert_eq!(FieldElem::u_monomial(3, 2).to_string(), "q^(2/3)");
    }
}
