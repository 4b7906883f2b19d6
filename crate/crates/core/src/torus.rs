//! Points of the torus: weights, the Weyl group action, and the sets
//! `Z(t)` and `P(t)`.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::roots::RootSystem;
use crate::scalar::{format_rational, FieldElem};
use crate::weyl::{min_coset_reps, WeylElement};

/// `q^{2e}` as a field element.
pub fn q_two_pow(e: &BigRational) -> FieldElem {
    let two_e = e * BigInt::from(2);
    let d: u32 = two_e.denom().try_into().expect("q-denominator fits in 32 bits");
    let k: i64 = two_e.numer().try_into().expect("exponent fits in 64 bits");
    FieldElem::u_monomial(d, k)
}

/// A point `t` of the torus, stored by its values on the fundamental
/// weights. Real weights also keep `c` with `t(X^{ω_i}) = q^{2c_i}`.
#[derive(Clone, Debug)]
pub struct Weight {
    values: Vec<FieldElem>,
    gamma: Option<Vec<BigRational>>,
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl Eq for Weight {}

impl Hash for Weight {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

/// The real weight `t(X^{ω_i}) = q^{2c_i}`.
pub fn real_weight(rs: &RootSystem, c: &[BigRational]) -> Result<Weight> {
    if c.len() != rs.rank() {
        return Err(Error::Dimension(format!(
            "expected {} exponents, got {}",
            rs.rank(),
            c.len()
        )));
    }
    Ok(Weight::from_gamma(c.to_vec()))
}

impl Weight {
    /// The real weight with exponent vector `c`, in any rank.
    pub fn from_gamma(c: Vec<BigRational>) -> Self {
        Weight {
            values: c.iter().map(q_two_pow).collect(),
            gamma: Some(c),
        }
    }

    /// A weight given by arbitrary nonzero values on the fundamental weights.
    pub fn from_values(values: Vec<FieldElem>) -> Result<Self> {
        if values.iter().any(|v| v.is_zero()) {
            return Err(Error::DivisionByZero);
        }
        Ok(Weight { values, gamma: None })
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[FieldElem] {
        &self.values
    }

    pub fn gamma(&self) -> Option<&[BigRational]> {
        self.gamma.as_deref()
    }

    pub fn is_real(&self) -> bool {
        self.gamma.is_some()
    }

    /// `⟨γ, λ⟩ = Σ λ_i c_i`, so that `t(X^λ) = q^{2⟨γ,λ⟩}`.
    pub fn exponent(&self, lambda: &[i64]) -> Option<BigRational> {
        self.gamma.as_ref().map(|c| {
            c.iter()
                .zip(lambda)
                .fold(BigRational::zero(), |acc, (ci, &l)| acc + ci * BigInt::from(l))
        })
    }

    /// `t(X^λ)`.
    pub fn value(&self, lambda: &[i64]) -> FieldElem {
        if let Some(e) = self.exponent(lambda) {
            return q_two_pow(&e);
        }
        self.value_by_product(lambda)
    }

    /// `t(X^λ)` computed as `Π t(X^{ω_i})^{λ_i}`.
    pub fn value_by_product(&self, lambda: &[i64]) -> FieldElem {
        self.values
            .iter()
            .zip(lambda)
            .fold(FieldElem::one(), |acc, (v, &l)| {
                acc.mul_ref(&v.pow(l).expect("weight values are nonzero"))
            })
    }

    pub fn root_value(&self, rs: &RootSystem, k: usize) -> FieldElem {
        self.value(&rs.positive_roots()[k].omega)
    }

    pub fn simple_value(&self, rs: &RootSystem, i: usize) -> FieldElem {
        self.value(&rs.simple_root(i))
    }

    pub fn root_exponent(&self, rs: &RootSystem, k: usize) -> Option<BigRational> {
        self.exponent(&rs.positive_roots()[k].omega)
    }

    /// `wt`, given `w⁻¹`.
    pub fn act_by_inverse(&self, w_inv: &WeylElement) -> Weight {
        let n = self.rank();
        let m = w_inv.matrix();
        let values = (0..n)
            .map(|i| {
                let col: Vec<i64> = (0..n).map(|r| m[r * n + i]).collect();
                self.value(&col)
            })
            .collect();
        let gamma = self.gamma.as_ref().map(|c| {
            (0..n)
                .map(|i| {
                    (0..n).fold(BigRational::zero(), |acc, j| {
                        acc + &c[j] * BigInt::from(m[j * n + i])
                    })
                })
                .collect()
        });
        Weight { values, gamma }
    }

    /// `s_i t`.
    pub fn reflect(&self, rs: &RootSystem, i: usize) -> Weight {
        self.act_by_inverse(&WeylElement::simple(rs, i))
    }

    pub fn label(&self) -> String {
        match &self.gamma {
            Some(c) => format!(
                "({})",
                c.iter().map(format_rational).collect::<Vec<_>>().join(",")
            ),
            None => format!(
                "[{}]",
                self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
            ),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `(wt)(X^λ) = t(X^{w⁻¹λ})`.
pub fn weyl_act(rs: &RootSystem, w: &WeylElement, t: &Weight) -> Weight {
    t.act_by_inverse(&w.inverse(rs))
}

pub fn weight_value(t: &Weight, lambda: &[i64]) -> FieldElem {
    t.value(lambda)
}

/// `Z(t) = {α > 0 | t(X^α) = 1}` and `P(t) = {α > 0 | t(X^α) = q^{±2}}`.
pub fn zero_pole_sets(rs: &RootSystem, t: &Weight) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let q2 = FieldElem::q_pow(2);
    let qm2 = FieldElem::q_pow(-2);
    let mut z = BTreeSet::new();
    let mut p = BTreeSet::new();
    for k in 0..rs.num_positive() {
        let v = t.root_value(rs, k);
        if v.is_one() {
            z.insert(k);
        } else if v == q2 || v == qm2 {
            p.insert(k);
        }
    }
    (z, p)
}

/// The same sets read off the exponent functional of a real weight.
pub fn zero_pole_sets_by_exponent(
    rs: &RootSystem,
    t: &Weight,
) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    if !t.is_real() {
        return Err(Error::NotReal);
    }
    let mut z = BTreeSet::new();
    let mut p = BTreeSet::new();
    for k in 0..rs.num_positive() {
        let e = t.root_exponent(rs, k).unwrap();
        if e.is_zero() {
            z.insert(k);
        } else if e.abs() == BigRational::from_integer(1.into()) {
            p.insert(k);
        }
    }
    Ok((z, p))
}

/// The orbit `Wt`, one entry per minimal coset representative `w` with
/// `R(w) ∩ Z(t) = ∅`.
pub fn orbit(rs: &RootSystem, t: &Weight, cap: usize) -> Result<Vec<(WeylElement, Weight)>> {
    let (z, _) = zero_pole_sets(rs, t);
    let reps = min_coset_reps(rs, &z, cap)?;
    Ok(reps
        .into_iter()
        .map(|w| {
            let wt = weyl_act(rs, &w, t);
            (w, wt)
        })
        .collect())
}

/// The orbit element with nonnegative exponent on every simple root.
pub fn dominant_rep(rs: &RootSystem, t: &Weight) -> Result<Weight> {
    if !t.is_real() {
        return Err(Error::NotReal);
    }
    let mut cur = t.clone();
    loop {
        let neg = (0..rs.rank()).find(|&i| {
            cur.exponent(&rs.simple_root(i)).unwrap().is_negative()
        });
        match neg {
            Some(i) => cur = cur.reflect(rs, i),
            None => return Ok(cur),
        }
    }
}

/// A weight together with `J ⊆ P(t)` such that `F^(t,J)` is nonempty.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedShape {
    pub t: Weight,
    pub j: BTreeSet<usize>,
}

impl PlacedShape {
    pub fn new(rs: &RootSystem, t: Weight, j: BTreeSet<usize>, cap: usize) -> Result<Self> {
        let tab = crate::calibration::tableaux(rs, &t, &j, cap)?;
        if tab.elements.is_empty() {
            return Err(Error::NotPlacedShape(j_label(rs, &j)));
        }
        Ok(PlacedShape { t, j })
    }
}

/// `{a1, a1+a2}` style label for a root set.
pub fn j_label(rs: &RootSystem, j: &BTreeSet<usize>) -> String {
    format!(
        "{{{}}}",
        j.iter().map(|&k| rs.root_label(k)).collect::<Vec<_>>().join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{CartanKind, Family};
    use crate::scalar::rat;
    use crate::weyl::{enumerate, reflection_subgroup_order};

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(CartanKind::new(f, n).unwrap()).unwrap()
    }

    fn a2_t() -> (RootSystem, Weight) {
        let a2 = rs(Family::A, 2);
        let t = real_weight(&a2, &[rat(2, 3), rat(1, 3)]).unwrap();
        (a2, t)
    }

    #[test]
    fn values_of_example_weight() {
        let (a2, t) = a2_t();
        assert_eq!(t.values()[0], q_two_pow(&rat(2, 3)));
        assert_eq!(t.value(&a2.simple_root(0)), FieldElem::q_pow(2));
        assert!(t.value(&a2.simple_root(1)).is_one());
        assert!(t.value(&[0, 0]).is_one());
        let trivial = real_weight(&a2, &[rat(0, 1), rat(0, 1)]).unwrap();
        assert!(trivial.values().iter().all(|v| v.is_one()));
    }

    #[test]
    fn action_examples() {
        let (a2, t) = a2_t();
        let s1 = WeylElement::simple(&a2, 0);
        let s1t = weyl_act(&a2, &s1, &t);
        assert_eq!(s1t.simple_value(&a2, 0), FieldElem::q_pow(-2));
        assert_eq!(s1t.simple_value(&a2, 1), FieldElem::q_pow(2));
        assert_eq!(weyl_act(&a2, &WeylElement::identity(2), &t), t);
        assert_eq!(dominant_rep(&a2, &s1t).unwrap(), t);
    }

    #[test]
    fn zero_and_pole_examples() {
        let (a2, t) = a2_t();
        let (z, p) = zero_pole_sets(&a2, &t);
        assert_eq!(z, BTreeSet::from([1]));
        assert_eq!(p, BTreeSet::from([0, 2]));
        let g = real_weight(&a2, &[rat(1, 5), rat(1, 7)]).unwrap();
        let (z, p) = zero_pole_sets(&a2, &g);
        assert!(z.is_empty() && p.is_empty());
        let exps: Vec<_> = (0..3).map(|k| g.root_exponent(&a2, k).unwrap()).collect();
        assert_eq!(exps, vec![rat(9, 35), rat(3, 35), rat(12, 35)]);
    }

    #[test]
    fn orbit_examples() {
        let (a2, t) = a2_t();
        let o = orbit(&a2, &t, 100).unwrap();
        assert_eq!(o.len(), 3);
        let g = real_weight(&a2, &[rat(1, 5), rat(1, 7)]).unwrap();
        assert_eq!(orbit(&a2, &g, 100).unwrap().len(), 6);
        let zero = real_weight(&a2, &[rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(orbit(&a2, &zero, 100).unwrap().len(), 1);
    }

    #[test]
    fn value_paths_agree() {
        let b3 = rs(Family::B, 3);
        let t = real_weight(&b3, &[rat(1, 2), rat(-3, 2), rat(2, 3)]).unwrap();
        for lambda in [[1, 0, 0], [-2, 1, 3], [0, -1, 2]] {
            assert_eq!(t.value(&lambda), t.value_by_product(&lambda));
        }
    }

    #[test]
    fn orbit_stabilizer_and_group_action() {
        let grid = [rat(0, 1), rat(1, 2), rat(1, 1), rat(3, 2)];
        for (f, n) in [(Family::A, 2), (Family::C, 2), (Family::G, 2), (Family::B, 3)] {
            let r = rs(f, n);
            let g = enumerate(&r, 1000).unwrap();
            for a in &grid {
                for b in &grid {
                    let mut c = vec![a.clone(), b.clone()];
                    c.resize(n, rat(1, 3));
                    let t = real_weight(&r, &c).unwrap();
                    let (z, p) = zero_pole_sets(&r, &t);
                    assert_eq!(zero_pole_sets_by_exponent(&r, &t).unwrap(), (z.clone(), p));
                    let o = orbit(&r, &t, 1000).unwrap();
                    let stab = reflection_subgroup_order(&r, &z, 1000).unwrap();
                    assert_eq!(o.len() * stab, g.len());
                    let distinct: std::collections::HashSet<_> =
                        o.iter().map(|(_, wt)| wt.clone()).collect();
                    assert_eq!(distinct.len(), o.len());
                    let x = g.element(3.min(g.len() - 1));
                    let y = g.element(g.len() - 2);
                    let lhs = weyl_act(&r, x, &weyl_act(&r, y, &t));
                    let rhs = weyl_act(&r, &x.compose(&r, y), &t);
                    assert_eq!(lhs, rhs);
                    assert_eq!(lhs.value(&[1; 3][..n]), lhs.value_by_product(&[1; 3][..n]));
                }
            }
        }
    }
}
