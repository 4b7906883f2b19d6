//! Sparse Laurent polynomials in the formal variable `u` with rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A finite sum `Σ c_e u^e` with `e ∈ ℤ` and every stored `c_e ≠ 0`.
///
/// Terms are kept sorted by ascending exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigRational)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigRational, e: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        let mut map: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<i64, BigRational>) -> Self {
        LaurentPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(i64, BigRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == 0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    /// Coefficient of the highest power of `u`.
    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitutes `u ↦ u^k` for `k > 0`.
    pub fn stretch(&self, k: i64) -> Self {
        debug_assert!(k > 0);
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Substitutes `u ↦ u^(1/k)`; every exponent must be divisible by `k`.
    pub(crate) fn shrink(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    debug_assert_eq!(e % k, 0);
                    (e / k, c.clone())
                })
                .collect(),
        }
    }

    /// gcd of all exponents (0 for the zero polynomial or a constant).
    pub fn exponent_gcd(&self) -> i64 {
        self.terms.iter().fold(0i64, |g, (e, _)| g.gcd(e))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        merge(&self.terms, &other.terms, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        merge(&self.terms, &other.terms, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_monomial() {
            let (e, c) = &self.terms[0];
            return LaurentPoly {
                terms: other.terms.iter().map(|(f, d)| (e + f, c * d)).collect(),
            };
        }
        if other.is_monomial() {
            return other.mul(self);
        }
        if let Some(terms) = super::fast::mul(&self.terms, &other.terms) {
            return LaurentPoly { terms };
        }
        let mut map: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                *map.entry(e + f).or_insert_with(BigRational::zero) += c * d;
            }
        }
        Self::from_map(map)
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact substitution `u ← u0`. Returns `None` when a negative power
    /// meets `u0 = 0`.
    pub fn eval(&self, u0: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if u0.is_zero() {
            if self.min_exp().unwrap() < 0 {
                return None;
            }
            return Some(self.coeff(0));
        }
        // Homogeneous Horner in integers: with u0 = a/b, lowest exponent m
        // and highest M, p(u0) = a^m b^-M Σ c_e a^(e-m) b^(M-e).
        let l = self.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let (a, b) = (u0.numer(), u0.denom());
        let m = self.min_exp().unwrap();
        let top = self.max_exp().unwrap();
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        let mut prev = top;
        for (e, c) in self.terms.iter().rev() {
            let gap = (prev - e) as usize;
            acc *= num_traits::pow(a.clone(), gap);
            bpow *= num_traits::pow(b.clone(), gap);
            acc += (c * BigRational::from_integer(l.clone())).to_integer() * &bpow;
            prev = *e;
        }
        let scaled = BigRational::new(acc, l * num_traits::pow(b.clone(), (top - m) as usize));
        Some(scaled * pow_rational(u0, m))
    }

    /// Exact division; `None` if `divisor` does not divide `self` in the
    /// Laurent ring.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.is_monomial() {
            let (e, c) = &divisor.terms[0];
            let inv = c.recip();
            return Some(LaurentPoly {
                terms: self.terms.iter().map(|(f, d)| (f - e, d * &inv)).collect(),
            });
        }
        if let Some(q) = super::fast::div_exact(&self.terms, &divisor.terms) {
            return q.map(|terms| LaurentPoly { terms });
        }
        let (db, cb) = divisor.terms.last().unwrap();
        let min_b = divisor.min_exp().unwrap();
        let floor = self.min_exp().unwrap() - min_b;
        let mut rem: BTreeMap<i64, BigRational> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(i64, BigRational)> = Vec::new();
        while let Some((&dr, cr)) = rem.iter().next_back() {
            let shift = dr - db;
            if shift < floor {
                return None;
            }
            let factor = cr / cb;
            for (e, c) in &divisor.terms {
                let key = e + shift;
                let entry = rem.entry(key).or_insert_with(BigRational::zero);
                *entry -= c * &factor;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((shift, factor));
        }
        quot.reverse();
        Some(LaurentPoly { terms: quot })
    }
}

fn merge(a: &[(i64, BigRational)], b: &[(i64, BigRational)], negate_b: bool) -> LaurentPoly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
            out.push((b[j].0, c));
            j += 1;
        } else {
            let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    LaurentPoly { terms: out }
}

pub(crate) fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

// ---------------------------------------------------------------------------
// gcd over ℚ[u, u⁻¹] via content-stripped integer remainder sequences.

type IntPoly = BTreeMap<u64, BigInt>;

/// Clears denominators and the power of `u`, returning a primitive integer
/// polynomial with positive leading coefficient.
fn to_primitive(p: &LaurentPoly) -> IntPoly {
    let lo = p.min_exp().unwrap_or(0);
    let den_lcm = p
        .terms
        .iter()
        .fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let mut out: IntPoly = p
        .terms
        .iter()
        .map(|(e, c)| ((e - lo) as u64, c.numer() * (&den_lcm / c.denom())))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(p: &mut IntPoly) {
    let mut g = BigInt::zero();
    for c in p.values() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    let neg = p.values().next_back().map(|c| c.is_negative()).unwrap_or(false);
    if g.is_zero() {
        return;
    }
    if neg {
        g = -g;
    }
    if !g.is_one() {
        for c in p.values_mut() {
            *c /= &g;
        }
    }
}

fn strip_u(p: IntPoly) -> IntPoly {
    match p.keys().next() {
        Some(&lo) if lo > 0 => p.into_iter().map(|(e, c)| (e - lo, c)).collect(),
        _ => p,
    }
}

fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (&db, lb) = b.iter().next_back().unwrap();
    let mut r = a.clone();
    while let Some((&dr, lr)) = r.iter().next_back() {
        if dr < db {
            break;
        }
        let shift = dr - db;
        let (q, rem) = lr.div_rem(lb);
        if rem.is_zero() {
            for (e, c) in b {
                let key = e + shift;
                let entry = r.entry(key).or_insert_with(BigInt::zero);
                *entry -= c * &q;
                if entry.is_zero() {
                    r.remove(&key);
                }
            }
        } else {
            let lr = lr.clone();
            for c in r.values_mut() {
                *c *= lb;
            }
            for (e, c) in b {
                let key = e + shift;
                let entry = r.entry(key).or_insert_with(BigInt::zero);
                *entry -= c * &lr;
                if entry.is_zero() {
                    r.remove(&key);
                }
            }
        }
    }
    r
}

/// Greatest common divisor in `ℚ[u, u⁻¹]`, normalized to lowest exponent 0
/// and a primitive integer coefficient vector with positive leading
/// coefficient. The gcd of two zero polynomials is zero.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize_gcd(b);
    }
    if b.is_zero() {
        return normalize_gcd(a);
    }
    if a.is_monomial() || b.is_monomial() {
        return LaurentPoly::one();
    }
    let mut x = to_primitive(a);
    let mut y = to_primitive(b);
    if let Some(h) = super::fast::gcd_modular(&x, &y) {
        return LaurentPoly {
            terms: h
                .into_iter()
                .map(|(e, c)| (e as i64, BigRational::from_integer(c)))
                .collect(),
        };
    }
    if x.keys().next_back() < y.keys().next_back() {
        std::mem::swap(&mut x, &mut y);
    }
    loop {
        if y.len() == 1 {
            // y is a pure power of u (a unit) after stripping.
            return LaurentPoly::one();
        }
        let mut r = strip_u(pseudo_rem(&x, &y));
        if r.is_empty() {
            break;
        }
        make_primitive(&mut r);
        x = std::mem::replace(&mut y, r);
    }
    LaurentPoly {
        terms: y
            .into_iter()
            .map(|(e, c)| (e as i64, BigRational::from_integer(c)))
            .collect(),
    }
}

fn normalize_gcd(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    LaurentPoly {
        terms: to_primitive(p)
            .into_iter()
            .map(|(e, c)| (e as i64, BigRational::from_integer(c)))
            .collect(),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, "u", 1)
    }
}

/// Writes `Σ c u^e` as text in the variable `var`, dividing exponents by
/// `denom` (so `u^3` with `denom = 3` prints as `q`).
pub(crate) fn fmt_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &[(i64, BigRational)],
    var: &str,
    denom: i64,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (e, c)) in terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let exp = BigRational::new(BigInt::from(*e), BigInt::from(denom));
        if exp.is_zero() {
            write!(f, "{}", abs)?;
            continue;
        }
        if !abs.is_one() {
            write!(f, "{}*", abs)?;
        }
        if exp.is_one() {
            write!(f, "{}", var)?;
        } else if exp.is_integer() {
            write!(f, "{}^{}", var, exp)?;
        } else {
            write!(f, "{}^({})", var, exp)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, r(c))))
    }

    #[test]
    fn binomial_gcd_follows_exponent_gcd() {
        let a = poly(&[(0, 1), (12, -1)]);
        let b = poly(&[(0, 1), (18, -1)]);
        assert_eq!(gcd(&a, &b), poly(&[(0, -1), (6, 1)]));
    }

    #[test]
    fn gcd_ignores_powers_of_u() {
        let a = poly(&[(3, 1), (5, -1)]);
        let b = poly(&[(-2, 1), (0, 1)]);
        // u^3 (1 - u^2) and u^-2 (1 + u^2) are coprime
        assert!(gcd(&a, &b).is_one());
        let c = poly(&[(-4, 2), (-2, -2)]);
        assert_eq!(gcd(&a, &c), poly(&[(0, -1), (2, 1)]));
    }

    #[test]
    fn gcd_of_products() {
        let f = poly(&[(0, 1), (1, 1)]);
        let g = poly(&[(0, 2), (1, -3), (2, 1)]);
        let h = poly(&[(0, 5), (3, 1)]);
        let a = f.mul(&g);
        let b = f.mul(&h);
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn exact_division_recovers_factor() {
        let f = poly(&[(-1, 3), (2, 1)]);
        let g = poly(&[(0, 1), (4, -7), (5, 2)]);
        let p = f.mul(&g);
        assert_eq!(p.div_exact(&g).unwrap(), f);
        assert!(poly(&[(0, 1), (1, 1)]).div_exact(&poly(&[(0, 1), (1, -1)])).is_none());
    }

    #[test]
    fn eval_negative_powers() {
        let p = poly(&[(-1, 1), (1, 1)]);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(p.eval(&half).unwrap(), BigRational::new(5.into(), 2.into()));
        assert!(p.eval(&BigRational::zero()).is_none());
    }

    #[test]
    fn eval_matches_termwise_sum() {
        let p = LaurentPoly::from_terms([
            (-3, BigRational::new(2.into(), 3.into())),
            (0, r(-5)),
            (4, BigRational::new((-1).into(), 7.into())),
            (9, r(11)),
        ]);
        for u0 in [BigRational::new(13.into(), 10.into()), BigRational::new((-3).into(), 2.into()), r(2)] {
            let naive = p
                .terms()
                .iter()
                .fold(BigRational::zero(), |acc, (e, c)| acc + c * pow_rational(&u0, *e));
            assert_eq!(p.eval(&u0).unwrap(), naive);
        }
    }
}
