//! Machine-integer fast paths for Laurent polynomial arithmetic.
//!
//! Every routine either returns an exact result or `None`, in which case
//! the caller falls back to arbitrary-precision arithmetic.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer terms `(exponent, coefficient)` sharing one denominator.
pub(crate) struct Small {
    pub den: i64,
    pub terms: Vec<(i64, i64)>,
}

pub(crate) fn to_small(terms: &[(i64, BigRational)]) -> Option<Small> {
    let mut den = BigInt::one();
    for (_, c) in terms {
        if !c.denom().is_one() {
            den = den.lcm(c.denom());
        }
    }
    let den_i = den.to_i64()?;
    let mut out = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        let v = if c.denom().is_one() {
            c.numer().to_i64()?.checked_mul(den_i)?
        } else {
            (c.numer() * (&den / c.denom())).to_i64()?
        };
        out.push((*e, v));
    }
    Some(Small { den: den_i, terms: out })
}

fn ratio(c: i128, den: i128) -> BigRational {
    if den == 1 {
        BigRational::from_integer(BigInt::from(c))
    } else {
        BigRational::new(BigInt::from(c), BigInt::from(den))
    }
}

/// Dense accumulator over an exponent window, or a map when the window is
/// much wider than the number of products.
enum Acc {
    Dense { lo: i64, v: Vec<i128> },
    Sparse(BTreeMap<i64, i128>),
}

impl Acc {
    fn new(lo: i64, hi: i64, products: usize) -> Self {
        let span = (hi - lo + 1) as usize;
        if span <= 4 * products + 64 {
            Acc::Dense { lo, v: vec![0; span] }
        } else {
            Acc::Sparse(BTreeMap::new())
        }
    }

    fn add(&mut self, e: i64, c: i128) {
        match self {
            Acc::Dense { lo, v } => v[(e - *lo) as usize] += c,
            Acc::Sparse(m) => *m.entry(e).or_insert(0) += c,
        }
    }

    fn into_terms(self, den: i128) -> Vec<(i64, BigRational)> {
        match self {
            Acc::Dense { lo, v } => v
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (lo + k as i64, ratio(c, den)))
                .collect(),
            Acc::Sparse(m) => m
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(e, c)| (e, ratio(c, den)))
                .collect(),
        }
    }
}

fn max_abs(t: &[(i64, i64)]) -> u128 {
    t.iter().map(|(_, c)| c.unsigned_abs() as u128).max().unwrap_or(0)
}

/// Product of two nonempty polynomials, if every partial sum fits `i128`.
pub(crate) fn mul(a: &[(i64, BigRational)], b: &[(i64, BigRational)]) -> Option<Vec<(i64, BigRational)>> {
    let sa = to_small(a)?;
    let sb = to_small(b)?;
    let bound = max_abs(&sa.terms)
        .checked_mul(max_abs(&sb.terms))?
        .checked_mul(sa.terms.len().min(sb.terms.len()) as u128)?;
    if bound >= 1u128 << 126 {
        return None;
    }
    let den = (sa.den as i128).checked_mul(sb.den as i128)?;
    let lo = sa.terms[0].0 + sb.terms[0].0;
    let hi = sa.terms.last()?.0 + sb.terms.last()?.0;
    let mut acc = Acc::new(lo, hi, sa.terms.len() * sb.terms.len());
    for &(e, c) in &sa.terms {
        for &(f, d) in &sb.terms {
            acc.add(e + f, c as i128 * d as i128);
        }
    }
    Some(acc.into_terms(den))
}

/// Exact quotient when the divisor has integer coefficients with leading
/// coefficient `±1`. Returns `Some(None)` when the division is certainly
/// not exact and `None` when the fast path does not apply.
pub(crate) fn div_exact(
    a: &[(i64, BigRational)],
    b: &[(i64, BigRational)],
) -> Option<Option<Vec<(i64, BigRational)>>> {
    let sa = to_small(a)?;
    let sb = to_small(b)?;
    if sb.den != 1 {
        return None;
    }
    let (db, lb) = *sb.terms.last()?;
    if lb.abs() != 1 {
        return None;
    }
    let lo_a = sa.terms[0].0;
    let hi_a = sa.terms.last()?.0;
    let lo_b = sb.terms[0].0;
    let span = (hi_a - lo_a + 1) as usize;
    if span > 1 << 22 {
        return None;
    }
    let mut rem = vec![0i128; span];
    for &(e, c) in &sa.terms {
        rem[(e - lo_a) as usize] = c as i128;
    }
    let floor = lo_a - lo_b;
    let mut quot = Vec::new();
    let mut top = hi_a;
    loop {
        while top >= lo_a && rem[(top - lo_a) as usize] == 0 {
            top -= 1;
        }
        if top < lo_a {
            break;
        }
        let shift = top - db;
        if shift < floor {
            return Some(None);
        }
        let f = rem[(top - lo_a) as usize] * lb as i128;
        for &(e, c) in &sb.terms {
            let k = (e + shift - lo_a) as usize;
            rem[k] = rem[k].checked_sub(f.checked_mul(c as i128)?)?;
        }
        quot.push((shift, f));
    }
    quot.reverse();
    let den = sa.den as i128;
    Some(Some(quot.into_iter().map(|(e, c)| (e, ratio(c, den))).collect()))
}

// ---------------------------------------------------------------------------
// Modular gcd for primitive integer polynomials.

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut n = (1u64 << 62) - 1;
        while out.len() < 48 {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn reduce(p_int: &BTreeMap<u64, BigInt>, p: u64) -> Vec<u64> {
    let deg = *p_int.keys().next_back().unwrap() as usize;
    let mut v = vec![0u64; deg + 1];
    let pb = BigInt::from(p);
    for (e, c) in p_int {
        v[*e as usize] = c.mod_floor(&pb).to_u64().unwrap();
    }
    v
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd over `F_p` of dense coefficient vectors.
fn gcd_mod_p(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        let db = b.len() - 1;
        while a.len() >= b.len() {
            let top = a.len() - 1;
            let f = mul_mod(a[top], inv, p);
            if f != 0 {
                let shift = top - db;
                for (k, &c) in b.iter().enumerate() {
                    let s = mul_mod(f, c, p);
                    let x = &mut a[shift + k];
                    *x = if *x >= s { *x - s } else { *x + p - s };
                }
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    let inv = pow_mod(*a.last().unwrap(), p - 2, p);
    a.iter().map(|&c| mul_mod(c, inv, p)).collect()
}

fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn divides(h: &BTreeMap<u64, BigInt>, f: &BTreeMap<u64, BigInt>) -> bool {
    let to_terms = |p: &BTreeMap<u64, BigInt>| -> Vec<(i64, BigRational)> {
        p.iter()
            .map(|(e, c)| (*e as i64, BigRational::from_integer(c.clone())))
            .collect()
    };
    let lp = |p: &BTreeMap<u64, BigInt>| crate::scalar::LaurentPoly::from_terms(to_terms(p));
    lp(f).div_exact(&lp(h)).is_some()
}

/// gcd of two primitive integer polynomials with positive leading
/// coefficients and nonzero constant terms, normalized the same way.
/// `None` if the modular attempt does not settle within the prime budget.
pub(crate) fn gcd_modular(
    f: &BTreeMap<u64, BigInt>,
    g: &BTreeMap<u64, BigInt>,
) -> Option<BTreeMap<u64, BigInt>> {
    let lf = f.values().next_back()?;
    let lg = g.values().next_back()?;
    let c = lf.gcd(lg);
    let mut best = usize::MAX;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut previous: Option<BTreeMap<u64, BigInt>> = None;
    for &p in primes() {
        let pb = BigInt::from(p);
        if (lf % &pb).is_zero() || (lg % &pb).is_zero() {
            continue;
        }
        let h = gcd_mod_p(reduce(f, p), reduce(g, p), p);
        let d = h.len() - 1;
        if d == 0 {
            let mut one = BTreeMap::new();
            one.insert(0, BigInt::one());
            return Some(one);
        }
        if d > best {
            continue;
        }
        let cp = c.mod_floor(&pb).to_u64().unwrap();
        let image: Vec<BigInt> = h.iter().map(|&x| BigInt::from(mul_mod(x, cp, p))).collect();
        if d < best {
            best = d;
            acc = image;
            modulus = pb;
            previous = None;
        } else {
            // CRT: x ≡ acc (mod modulus), x ≡ image (mod p)
            let inv = modulus
                .mod_floor(&pb)
                .to_u64()
                .map(|m| pow_mod(m, p - 2, p))
                .unwrap();
            for (a, b) in acc.iter_mut().zip(&image) {
                let diff = (b - &*a).mod_floor(&pb).to_u64().unwrap();
                let t = mul_mod(diff, inv, p);
                *a += &modulus * BigInt::from(t);
            }
            modulus *= &pb;
        }
        let mut cand: BTreeMap<u64, BigInt> = acc
            .iter()
            .enumerate()
            .map(|(e, x)| (e as u64, symmetric(x, &modulus)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        let content = cand.values().fold(BigInt::zero(), |a, x| a.gcd(x));
        if content.is_zero() {
            continue;
        }
        let sign = if cand.values().next_back().unwrap().is_negative() { -1 } else { 1 };
        let content = content * sign;
        for x in cand.values_mut() {
            *x /= &content;
        }
        if previous.as_ref() == Some(&cand) && divides(&cand, f) && divides(&cand, g) {
            return Some(cand);
        }
        previous = Some(cand);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_primes_are_prime() {
        let ps = primes();
        assert_eq!(ps.len(), 48);
        assert!(ps.iter().all(|&p| p > 1 << 61));
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(2_305_843_009_213_693_953));
    }

    #[test]
    fn gcd_mod_p_of_binomials() {
        let p = primes()[0];
        // u^6 - 1 and u^4 - 1 share u^2 - 1
        let a = vec![p - 1, 0, 0, 0, 0, 0, 1];
        let b = vec![p - 1, 0, 0, 0, 1];
        assert_eq!(gcd_mod_p(a, b, p), vec![p - 1, 0, 1]);
    }
}
