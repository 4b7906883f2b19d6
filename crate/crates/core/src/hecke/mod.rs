//! Normal-form arithmetic in the affine Hecke algebra.
//!
//! Elements are written `Σ c · T_w X^λ` with `w` an index into an
//! enumerated Weyl group and `λ` in fundamental-weight coordinates.

mod rep;

pub use rep::{
    cyclic_closure, eigenspace, intertwiner_vectors, principal_series, principal_series_analysis,
    principal_series_weight_basis, q_minus_qinv_at, weight_space_analysis, BasisLabel, MatrixRep,
    Subspace, WeightReport, WeightSpace, XMonomials,
};

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::error::Result;
use crate::roots::RootSystem;
use crate::scalar::FieldElem;
use crate::weyl::{enumerate, WeylGroup};

pub type Lambda = Vec<i64>;

/// An element of the lattice algebra `Σ c_λ X^λ`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroupAlgebraElem {
    terms: BTreeMap<Lambda, FieldElem>,
}

impl GroupAlgebraElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(vec![0; n])
    }

    pub fn monomial(lambda: Lambda) -> Self {
        let mut e = Self::zero();
        e.add_term(lambda, FieldElem::one());
        e
    }

    pub fn add_term(&mut self, lambda: Lambda, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(lambda).or_insert_with(FieldElem::zero);
        *slot = slot.add_ref(&c);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> &BTreeMap<Lambda, FieldElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let l = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(l, x.mul_ref(y));
            }
        }
        out
    }

    /// `Σ_{μ ∈ Wλ} X^μ`.
    pub fn orbit_sum(rs: &RootSystem, lambda: &[i64]) -> Self {
        let mut seen = std::collections::BTreeSet::from([lambda.to_vec()]);
        let mut stack = vec![lambda.to_vec()];
        while let Some(mu) = stack.pop() {
            for i in 0..rs.rank() {
                let nu = rs.reflect_weight(i, &mu);
                if seen.insert(nu.clone()) {
                    stack.push(nu);
                }
            }
        }
        let mut e = Self::zero();
        for mu in seen {
            e.add_term(mu, FieldElem::one());
        }
        e
    }
}

/// `Σ c · T_w X^λ` in normal form.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HeckeElem {
    terms: BTreeMap<(usize, Lambda), FieldElem>,
}

impl HeckeElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(w: usize, lambda: Lambda, c: FieldElem) -> Self {
        let mut e = Self::zero();
        e.add_term(w, lambda, c);
        e
    }

    pub fn add_term(&mut self, w: usize, lambda: Lambda, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let key = (w, lambda);
        let slot = self.terms.entry(key.clone()).or_insert_with(FieldElem::zero);
        *slot = slot.add_ref(&c);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, c: &FieldElem) {
        for ((w, l), x) in &other.terms {
            self.add_term(*w, l.clone(), x.mul_ref(c));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &FieldElem::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &FieldElem::from_int(-1));
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut out = Self::zero();
        out.add_assign_scaled(self, c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<(usize, Lambda), FieldElem> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: usize, lambda: &[i64]) -> FieldElem {
        self.terms
            .get(&(w, lambda.to_vec()))
            .cloned()
            .unwrap_or_else(FieldElem::zero)
    }
}

/// The affine Hecke algebra over an enumerated Weyl group, with a memo
/// table for `X^λ T_w` rewrites.
pub struct HeckeAlgebra {
    rs: RootSystem,
    group: WeylGroup,
    qq: FieldElem,
    memo: Mutex<HashMap<(Lambda, usize), HeckeElem>>,
}

/// `(X^λ − X^{s_iλ}) / (1 − X^{−α_i})` as a list of `±X^μ`.
pub fn geometric_terms(rs: &RootSystem, i: usize, lambda: &[i64]) -> Vec<(Lambda, i64)> {
    let k = lambda[i];
    let alpha = rs.simple_root(i);
    let shifted = |j: i64| -> Lambda {
        lambda.iter().zip(&alpha).map(|(l, a)| l + j * a).collect()
    };
    if k >= 1 {
        (0..k).map(|j| (shifted(-j), 1)).collect()
    } else if k <= -1 {
        (1..=-k).map(|j| (shifted(j), -1)).collect()
    } else {
        Vec::new()
    }
}

impl HeckeAlgebra {
    pub fn new(rs: &RootSystem, cap: usize) -> Result<Self> {
        Ok(HeckeAlgebra {
            rs: rs.clone(),
            group: enumerate(rs, cap)?,
            qq: FieldElem::q_minus_qinv(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn one(&self) -> HeckeElem {
        HeckeElem::monomial(0, vec![0; self.rank()], FieldElem::one())
    }

    /// `T_i`.
    pub fn t(&self, i: usize) -> HeckeElem {
        HeckeElem::monomial(self.group.left_mul(i, 0), vec![0; self.rank()], FieldElem::one())
    }

    /// `T_w` for a group index.
    pub fn t_w(&self, w: usize) -> HeckeElem {
        HeckeElem::monomial(w, vec![0; self.rank()], FieldElem::one())
    }

    /// `X^λ`.
    pub fn x(&self, lambda: &[i64]) -> HeckeElem {
        HeckeElem::monomial(0, lambda.to_vec(), FieldElem::one())
    }

    pub fn from_group_algebra(&self, f: &GroupAlgebraElem) -> HeckeElem {
        let mut e = HeckeElem::zero();
        for (l, c) in f.terms() {
            e.add_term(0, l.clone(), c.clone());
        }
        e
    }

    /// `T_i · a`, using `T_iT_w = T_{s_iw}` on ascents and
    /// `T_{s_iw} + (q−q⁻¹)T_w` on descents.
    pub fn left_t(&self, i: usize, a: &HeckeElem) -> HeckeElem {
        let mut out = HeckeElem::zero();
        for ((w, l), c) in a.terms() {
            let sw = self.group.left_mul(i, *w);
            out.add_term(sw, l.clone(), c.clone());
            if self.group.length(sw) < self.group.length(*w) {
                out.add_term(*w, l.clone(), c.mul_ref(&self.qq));
            }
        }
        out
    }

    /// `T_u · a`.
    pub fn left_t_w(&self, u: usize, a: &HeckeElem) -> HeckeElem {
        let mut cur = a.clone();
        for &i in self.group.word(u).iter().rev() {
            cur = self.left_t(i, &cur);
        }
        cur
    }

    /// `X^λ T_i = T_i X^{s_iλ} + (q−q⁻¹)(X^λ − X^{s_iλ})/(1 − X^{−α_i})`.
    pub fn bernstein_commute(&self, i: usize, lambda: &[i64]) -> HeckeElem {
        let si = self.group.left_mul(i, 0);
        let mut out = HeckeElem::monomial(si, self.rs.reflect_weight(i, lambda), FieldElem::one());
        for (mu, sign) in geometric_terms(&self.rs, i, lambda) {
            out.add_term(0, mu, self.qq.mul_ref(&FieldElem::from_int(sign)));
        }
        out
    }

    /// Normal form of `X^λ T_w`.
    pub fn x_times_t(&self, lambda: &[i64], w: usize) -> HeckeElem {
        if w == 0 {
            return self.x(lambda);
        }
        let key = (lambda.to_vec(), w);
        if let Some(e) = self.memo.lock().unwrap().get(&key) {
            return e.clone();
        }
        let i = self.group.word(w)[0];
        let rest = self.group.left_mul(i, w);
        // X^λ T_i T_rest
        let mut out = self.left_t(i, &self.x_times_t(&self.rs.reflect_weight(i, lambda), rest));
        for (mu, sign) in geometric_terms(&self.rs, i, lambda) {
            let c = self.qq.mul_ref(&FieldElem::from_int(sign));
            out.add_assign_scaled(&self.x_times_t(&mu, rest), &c);
        }
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }

    pub fn multiply(&self, a: &HeckeElem, b: &HeckeElem) -> HeckeElem {
        let mut out = HeckeElem::zero();
        for ((u, l), c) in a.terms() {
            for ((v, m), d) in b.terms() {
                let xt = self.x_times_t(l, *v);
                let mut shifted = HeckeElem::zero();
                for ((w, nu), e) in xt.terms() {
                    let sum = nu.iter().zip(m).map(|(p, q)| p + q).collect();
                    shifted.add_term(*w, sum, e.clone());
                }
                let prod = self.left_t_w(*u, &shifted);
                out.add_assign_scaled(&prod, &c.mul_ref(d));
            }
        }
        out
    }

    /// Whether `f` commutes with every `T_i` and every `X^{ω_k}`.
    pub fn is_central(&self, f: &GroupAlgebraElem) -> bool {
        let fe = self.from_group_algebra(f);
        let n = self.rank();
        let mut gens: Vec<HeckeElem> = (0..n).map(|i| self.t(i)).collect();
        for k in 0..n {
            let mut w = vec![0; n];
            w[k] = 1;
            gens.push(self.x(&w));
        }
        gens.iter()
            .all(|g| self.multiply(&fe, g) == self.multiply(g, &fe))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{CartanKind, Family};
    use proptest::prelude::*;

    fn alg(f: Family, n: usize) -> HeckeAlgebra {
        let rs = RootSystem::new(CartanKind::new(f, n).unwrap()).unwrap();
        HeckeAlgebra::new(&rs, 1000).unwrap()
    }

    #[test]
    fn quadratic_and_concatenation() {
        let h = alg(Family::A, 2);
        let t1 = h.t(0);
        let sq = h.multiply(&t1, &t1);
        let expected = h.one().add(&t1.scale(&FieldElem::q_minus_qinv()));
        assert_eq!(sq, expected);
        let t12 = h.multiply(&h.t(0), &h.t(1));
        let idx = h.group().multiply(h.group().left_mul(0, 0), h.group().left_mul(1, 0));
        assert_eq!(t12, h.t_w(idx));
    }

    #[test]
    fn bernstein_examples() {
        let h = alg(Family::A, 2);
        let qq = FieldElem::q_minus_qinv();
        // k = 0
        assert_eq!(h.bernstein_commute(0, &[0, 1]), h.multiply(&h.t(0), &h.x(&[0, 1])));
        // k = 1: T_1 X^{ω1−α1} + (q−q⁻¹) X^{ω1}
        let e = h.bernstein_commute(0, &[1, 0]);
        let want = h.multiply(&h.t(0), &h.x(&[-1, 1])).add(&h.x(&[1, 0]).scale(&qq));
        assert_eq!(e, want);
        assert_eq!(h.multiply(&h.x(&[1, 0]), &h.t(0)), want);
        // k = −1: T_1 X^{−ω1+α1} − (q−q⁻¹) X^{−ω1+α1}
        let e = h.bernstein_commute(0, &[-1, 0]);
        let want = h.multiply(&h.t(0), &h.x(&[1, -1])).sub(&h.x(&[1, -1]).scale(&qq));
        assert_eq!(e, want);
    }

    #[test]
    fn bernstein_sides_agree_in_rank_two() {
        for (f, n) in [(Family::A, 2), (Family::C, 2), (Family::G, 2)] {
            let h = alg(f, n);
            let rs = h.root_system().clone();
            for i in 0..2 {
                let mut lambdas = Vec::new();
                for k in 0..2 {
                    let mut w = vec![0i64; 2];
                    w[k] = 1;
                    lambdas.push(w.clone());
                    lambdas.push(w.iter().map(|x| -x).collect());
                    let a = rs.simple_root(k);
                    lambdas.push(a.iter().map(|x| -x).collect());
                    lambdas.push(a);
                }
                for l in lambdas {
                    let lhs = h.multiply(&h.x(&l), &h.t(i));
                    assert_eq!(lhs, h.bernstein_commute(i, &l));
                }
            }
        }
    }

    #[test]
    fn center_examples() {
        let h = alg(Family::A, 2);
        let orbit = GroupAlgebraElem::orbit_sum(h.root_system(), &[1, 0]);
        assert_eq!(
            orbit.terms().keys().cloned().collect::<Vec<_>>(),
            vec![vec![-1, 1], vec![0, -1], vec![1, 0]]
        );
        assert!(h.is_central(&orbit));
        assert!(!h.is_central(&GroupAlgebraElem::monomial(vec![1, 0])));
        assert!(h.is_central(&GroupAlgebraElem::one(2)));
        let c2 = alg(Family::C, 2);
        assert!(c2.is_central(&GroupAlgebraElem::orbit_sum(c2.root_system(), &[1, 0])));
    }

    fn generator(h: &HeckeAlgebra, g: u8) -> HeckeElem {
        match g % 6 {
            0 => h.t(0),
            1 => h.t(1),
            2 => h.x(&[1, 0]),
            3 => h.x(&[0, 1]),
            4 => h.x(&[-1, 0]),
            _ => h.x(&[0, -1]),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn associativity(a in proptest::collection::vec(0u8..6, 1..4),
                         b in proptest::collection::vec(0u8..6, 1..4),
                         c in proptest::collection::vec(0u8..6, 1..4),
                         ty in 0u8..3) {
            let h = match ty { 0 => alg(Family::A, 2), 1 => alg(Family::C, 2), _ => alg(Family::G, 2) };
            let word = |w: &[u8]| w.iter().fold(h.one(), |acc, &g| h.multiply(&acc, &generator(&h, g)));
            let (x, y, z) = (word(&a), word(&b), word(&c));
            prop_assert_eq!(h.multiply(&h.multiply(&x, &y), &z), h.multiply(&x, &h.multiply(&y, &z)));
        }
    }
}
