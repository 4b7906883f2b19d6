//! Exact scalars: rationals, Laurent polynomials in `u`, and the field of
//! Laurent rational functions with `q = u^D`.

mod fast;
mod field;
mod laurent;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use field::FieldElem;
pub use laurent::{gcd as poly_gcd, LaurentPoly};

/// The denominator `D` of a computation: every `q`-exponent `e` that
/// occurs satisfies `e·D ∈ ℤ`, so `q^e = u^{e·D}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QContext {
    d: u32,
}

impl QContext {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidContext("D must be at least 1".into()));
        }
        Ok(QContext { d })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn represents(&self, e: &BigRational) -> bool {
        (e * BigInt::from(self.d)).is_integer()
    }
}

/// Smallest context in which every exponent is an integer power of `u`.
pub fn make_context<'a, I>(exponents: I) -> Result<QContext>
where
    I: IntoIterator<Item = &'a BigRational>,
{
    let mut d = BigInt::one();
    let mut any = false;
    for e in exponents {
        any = true;
        d = d.lcm(e.denom());
    }
    if !any {
        return Err(Error::InvalidContext("empty exponent set".into()));
    }
    let d: u32 = d
        .try_into()
        .map_err(|_| Error::InvalidContext("q-denominator does not fit in 32 bits".into()))?;
    QContext::new(d)
}

/// `q^e` as the monomial `u^{e·D}`.
pub fn q_power(ctx: QContext, e: &BigRational) -> Result<FieldElem> {
    let scaled = e * BigInt::from(ctx.d);
    if !scaled.is_integer() {
        let required = e.denom().lcm(&BigInt::from(ctx.d));
        return Err(Error::NotRepresentable {
            exponent: format_rational(e),
            d: ctx.d,
            required: required.to_string(),
        });
    }
    let k: i64 = scaled
        .to_integer()
        .try_into()
        .map_err(|_| Error::InvalidContext("exponent out of range".into()))?;
    Ok(FieldElem::u_monomial(ctx.d, k))
}

/// Exact substitution `u ← u0`.
pub fn evaluate_numeric(x: &FieldElem, u0: &BigRational) -> Result<BigRational> {
    x.evaluate(u0)
}

/// Parses `"p/q"` or `"p"`; rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse {
        input: s.to_string(),
        position: 0,
        message: "expected an integer or p/q".into(),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Parse {
                input: s.to_string(),
                position: s.find('/').unwrap() + 1,
                message: "bad denominator".into(),
            })?;
            if d.is_zero() {
                return Err(Error::Parse {
                    input: s.to_string(),
                    position: s.find('/').unwrap() + 1,
                    message: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `"p/q"` with `q ≥ 1`.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_of(xs: &[(i64, i64)]) -> u32 {
        let v: Vec<_> = xs.iter().map(|&(n, d)| rat(n, d)).collect();
        make_context(&v).unwrap().d()
    }

    fn brute_lcm(ds: &[i64]) -> i64 {
        (1..).find(|m| ds.iter().all(|d| m % d == 0)).unwrap()
    }

    #[test]
    fn context_examples() {
        assert_eq!(ctx_of(&[(1, 1), (2, 1)]), 1);
        assert_eq!(ctx_of(&[(2, 3), (1, 3)]), 3);
        assert_eq!(brute_lcm(&[35, 35, 35]), 35);
        assert_eq!(ctx_of(&[(9, 35), (3, 35), (12, 35)]), 35);
        assert!(make_context(&[]).is_err());
    }

    #[test]
    fn q_power_examples() {
        let c1 = QContext::new(1).unwrap();
        assert!(q_power(c1, &rat(0, 1)).unwrap().is_one());
        assert_eq!(q_power(c1, &rat(2, 1)).unwrap(), FieldElem::q_pow(2));
        let c3 = QContext::new(3).unwrap();
        let x = q_power(c3, &rat(2, 3)).unwrap();
        assert_eq!(x.d(), 3);
        assert_eq!(x.numer().terms()[0].0, 2);
        match q_power(c1, &rat(1, 2)) {
            Err(Error::NotRepresentable { required, .. }) => assert_eq!(required, "2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("2/3").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4, 1));
        assert!(parse_rational("2/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(4, 2)), "2/1");
    }
}
