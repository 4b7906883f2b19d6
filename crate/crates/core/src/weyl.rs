//! Weyl group elements as integer matrices acting on the weight lattice.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::roots::{Root, RootSystem};

/// Default enumeration cap; `HECKE_WEYL_CAP` overrides it.
pub const DEFAULT_CAP: usize = 50_000;

pub fn default_cap() -> usize {
    std::env::var("HECKE_WEYL_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&c: &usize| c >= 1)
        .unwrap_or(DEFAULT_CAP)
}

/// A Weyl group element, stored as its action on fundamental-weight
/// coordinates. Equality and hashing use the matrix only.
#[derive(Clone, Debug)]
pub struct WeylElement {
    n: usize,
    m: Vec<i64>,
    length: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.m.hash(state);
    }
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += x * b[k * n + j];
            }
        }
    }
    c
}

fn mat_vec(n: usize, a: &[i64], v: &[i64]) -> Vec<i64> {
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum())
        .collect()
}

fn simple_matrix(rs: &RootSystem, i: usize) -> Vec<i64> {
    let n = rs.rank();
    let mut m = vec![0i64; n * n];
    for r in 0..n {
        m[r * n + r] = 1;
        m[r * n + i] -= rs.cartan()[r][i];
    }
    m
}

fn count_inversions(rs: &RootSystem, n: usize, m: &[i64]) -> usize {
    rs.positive_roots()
        .iter()
        .filter(|r| !rs.find_root(&mat_vec(n, m, &r.omega)).unwrap().positive)
        .count()
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        let mut m = vec![0i64; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        WeylElement { n, m, length: 0 }
    }

    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        WeylElement {
            n: rs.rank(),
            m: simple_matrix(rs, i),
            length: 1,
        }
    }

    /// Wraps an action matrix (row-major); fails if it does not permute
    /// the roots.
    pub fn from_matrix(rs: &RootSystem, m: Vec<i64>) -> Result<Self> {
        let n = rs.rank();
        if m.len() != n * n {
            return Err(Error::Dimension(format!("expected {}x{} matrix", n, n)));
        }
        for r in rs.positive_roots() {
            if rs.find_root(&mat_vec(n, &m, &r.omega)).is_none() {
                return Err(Error::Malformed("matrix is not a Weyl group element".into()));
            }
        }
        let length = count_inversions(rs, n, &m);
        Ok(WeylElement { n, m, length })
    }

    /// Evaluates a word `s_{i1} s_{i2} ⋯`.
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Result<Self> {
        let n = rs.rank();
        let mut m = WeylElement::identity(n).m;
        for &i in word {
            if i >= n {
                return Err(Error::IndexOutOfRange(i));
            }
            m = mat_mul(n, &m, &simple_matrix(rs, i));
        }
        let length = count_inversions(rs, n, &m);
        Ok(WeylElement { n, m, length })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[i64] {
        &self.m
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// `wλ` in fundamental-weight coordinates.
    pub fn act(&self, lambda: &[i64]) -> Vec<i64> {
        mat_vec(self.n, &self.m, lambda)
    }

    pub fn act_root(&self, rs: &RootSystem, root: Root) -> Root {
        rs.find_root(&self.act(&rs.root_omega(root)))
            .expect("Weyl group permutes roots")
    }

    /// The product `self · other`.
    pub fn compose(&self, rs: &RootSystem, other: &WeylElement) -> WeylElement {
        let m = mat_mul(self.n, &self.m, &other.m);
        let length = count_inversions(rs, self.n, &m);
        WeylElement { n: self.n, m, length }
    }

    /// `s_i · self`.
    pub fn left_simple(&self, rs: &RootSystem, i: usize) -> WeylElement {
        WeylElement::simple(rs, i).compose(rs, self)
    }

    /// `self · s_i`.
    pub fn right_simple(&self, rs: &RootSystem, i: usize) -> WeylElement {
        self.compose(rs, &WeylElement::simple(rs, i))
    }

    /// `ℓ(w s_i) < ℓ(w)`, i.e. `w α_i < 0`.
    pub fn has_right_descent(&self, rs: &RootSystem, i: usize) -> bool {
        !rs.find_root(&self.act(&rs.simple_root(i))).unwrap().positive
    }

    /// Some reduced word, found greedily from the right.
    fn any_reduced_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length);
        let mut cur = self.clone();
        while !cur.is_identity() {
            let i = (0..self.n).find(|&i| cur.has_right_descent(rs, i)).unwrap();
            word.push(i);
            cur = cur.right_simple(rs, i);
        }
        word.reverse();
        word
    }

    pub fn inverse(&self, rs: &RootSystem) -> WeylElement {
        let mut w = self.any_reduced_word(rs);
        w.reverse();
        WeylElement::from_word(rs, &w).unwrap()
    }

    /// Lexicographically smallest reduced word.
    pub fn reduced_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length);
        let mut cur = self.clone();
        let mut cur_inv = self.inverse(rs);
        while !cur.is_identity() {
            // left descents of cur are right descents of its inverse
            let i = (0..self.n).find(|&i| cur_inv.has_right_descent(rs, i)).unwrap();
            word.push(i);
            cur = cur.left_simple(rs, i);
            cur_inv = cur_inv.right_simple(rs, i);
        }
        word
    }

    /// `R(w) = {α > 0 | wα < 0}` as indices into the positive roots.
    pub fn inversion_set(&self, rs: &RootSystem) -> BTreeSet<usize> {
        rs.positive_roots()
            .iter()
            .enumerate()
            .filter(|(_, r)| !rs.find_root(&self.act(&r.omega)).unwrap().positive)
            .map(|(k, _)| k)
            .collect()
    }
}

pub fn inversion_set(rs: &RootSystem, w: &WeylElement) -> BTreeSet<usize> {
    w.inversion_set(rs)
}

/// Formats a reduced word as `s1s2s1`, or `1` for the identity.
pub fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        "1".to_string()
    } else {
        word.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

/// A fully enumerated Weyl group with multiplication tables.
///
/// Elements are ordered by length, then by lexicographically smallest
/// reduced word; index 0 is the identity.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<i64>, usize>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

/// Breadth-first closure from the identity under right multiplication by
/// simple reflections.
pub fn enumerate(rs: &RootSystem, cap: usize) -> Result<WeylGroup> {
    let n = rs.rank();
    let gens: Vec<Vec<i64>> = (0..n).map(|i| simple_matrix(rs, i)).collect();
    let id = WeylElement::identity(n);
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut mats: Vec<(Vec<i64>, usize)> = Vec::new();
    seen.insert(id.m.clone(), 0);
    mats.push((id.m.clone(), 0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        let (m, len) = mats[k].clone();
        for g in &gens {
            let next = mat_mul(n, &m, g);
            if !seen.contains_key(&next) {
                if mats.len() >= cap {
                    return Err(Error::CapExceeded { cap, found: mats.len() });
                }
                seen.insert(next.clone(), mats.len());
                mats.push((next, len + 1));
                queue.push_back(mats.len() - 1);
            }
        }
    }
    let index_of: HashMap<Vec<i64>, usize> = seen;
    let size = mats.len();

    // right[i][k]
    let right_raw: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| (0..size).map(|k| index_of[&mat_mul(n, &mats[k].0, g)]).collect())
        .collect();
    let left_raw: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| (0..size).map(|k| index_of[&mat_mul(n, g, &mats[k].0)]).collect())
        .collect();

    // lex-smallest reduced words: first letter is the smallest left descent
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&k| mats[k].1);
    let mut words: Vec<Vec<usize>> = vec![Vec::new(); size];
    for &k in &order {
        let len = mats[k].1;
        if len == 0 {
            continue;
        }
        let i = (0..n)
            .find(|&i| mats[left_raw[i][k]].1 < len)
            .expect("non-identity has a left descent");
        let mut w = vec![i];
        w.extend_from_slice(&words[left_raw[i][k]]);
        words[k] = w;
    }
    order.sort_by(|&a, &b| mats[a].1.cmp(&mats[b].1).then_with(|| words[a].cmp(&words[b])));
    let mut new_index = vec![0usize; size];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    let elements: Vec<WeylElement> = order
        .iter()
        .map(|&old| WeylElement {
            n,
            m: mats[old].0.clone(),
            length: mats[old].1,
        })
        .collect();
    let words: Vec<Vec<usize>> = order.iter().map(|&old| words[old].clone()).collect();
    let remap = |raw: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        raw.iter()
            .map(|row| order.iter().map(|&old| new_index[row[old]]).collect())
            .collect()
    };
    let left = remap(&left_raw);
    let right = remap(&right_raw);
    let index: HashMap<Vec<i64>, usize> = elements
        .iter()
        .enumerate()
        .map(|(k, e)| (e.m.clone(), k))
        .collect();
    let mut inverse = vec![0usize; size];
    for k in 0..size {
        let mut cur = 0usize;
        for &i in words[k].iter().rev() {
            cur = right[i][cur];
        }
        inverse[k] = cur;
    }
    Ok(WeylGroup {
        elements,
        words,
        index,
        left,
        right,
        inverse,
    })
}

impl WeylGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, k: usize) -> &WeylElement {
        &self.elements[k]
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn word(&self, k: usize) -> &[usize] {
        &self.words[k]
    }

    pub fn length(&self, k: usize) -> usize {
        self.elements[k].length
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(&w.m).copied()
    }

    /// Index of `s_i · w_k`.
    pub fn left_mul(&self, i: usize, k: usize) -> usize {
        self.left[i][k]
    }

    /// Index of `w_k · s_i`.
    pub fn right_mul(&self, k: usize, i: usize) -> usize {
        self.right[i][k]
    }

    pub fn inverse(&self, k: usize) -> usize {
        self.inverse[k]
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let mut cur = a;
        for &i in &self.words[b] {
            cur = self.right[i][cur];
        }
        cur
    }

    pub fn longest(&self) -> usize {
        self.elements.len() - 1
    }

    /// Element indices grouped by length.
    pub fn by_length(&self) -> Vec<Vec<usize>> {
        let max = self.elements.last().map(|e| e.length).unwrap_or(0);
        let mut out = vec![Vec::new(); max + 1];
        for (k, e) in self.elements.iter().enumerate() {
            out[e.length].push(k);
        }
        out
    }

    pub fn length_profile(&self) -> Vec<usize> {
        self.by_length().iter().map(|v| v.len()).collect()
    }
}

/// All `w` with `R(w) ∩ Z = ∅`, ordered by length then lexicographic
/// reduced word.
///
/// Explores by left multiplication: when `ℓ(s_i w) = ℓ(w) + 1` the
/// inversion set only grows, `R(s_i w) = R(w) ∪ {w⁻¹α_i}`, so a branch can
/// be cut as soon as it acquires an inversion in `Z`.
pub fn min_coset_reps(
    rs: &RootSystem,
    z: &BTreeSet<usize>,
    cap: usize,
) -> Result<Vec<WeylElement>> {
    let n = rs.rank();
    struct Node {
        w: Vec<i64>,
        w_inv: Vec<i64>,
        length: usize,
    }
    let id = WeylElement::identity(n).m;
    let mut nodes = vec![Node {
        w: id.clone(),
        w_inv: id.clone(),
        length: 0,
    }];
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::from([(id, 0)]);
    let gens: Vec<Vec<i64>> = (0..n).map(|i| simple_matrix(rs, i)).collect();
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for i in 0..n {
            let img = mat_vec(n, &nodes[k].w_inv, &rs.simple_root(i));
            let root = rs.find_root(&img).unwrap();
            if !root.positive || z.contains(&root.index) {
                continue;
            }
            let w = mat_mul(n, &gens[i], &nodes[k].w);
            if seen.contains_key(&w) {
                continue;
            }
            if nodes.len() >= cap {
                return Err(Error::CapExceeded { cap, found: nodes.len() });
            }
            let w_inv = mat_mul(n, &nodes[k].w_inv, &gens[i]);
            seen.insert(w.clone(), nodes.len());
            nodes.push(Node {
                w,
                w_inv,
                length: nodes[k].length + 1,
            });
            queue.push_back(nodes.len() - 1);
        }
    }
    let mut out: Vec<(Vec<usize>, WeylElement)> = nodes
        .into_iter()
        .map(|node| {
            let e = WeylElement {
                n,
                m: node.w,
                length: node.length,
            };
            (e.reduced_word(rs), e)
        })
        .collect();
    out.sort_by(|a, b| a.1.length.cmp(&b.1.length).then_with(|| a.0.cmp(&b.0)));
    Ok(out.into_iter().map(|(_, e)| e).collect())
}

/// Enumerates the subgroup generated by the reflections `s_α`, `α ∈ roots`.
pub fn reflection_subgroup_order(
    rs: &RootSystem,
    roots: &BTreeSet<usize>,
    cap: usize,
) -> Result<usize> {
    let n = rs.rank();
    let gens: Vec<Vec<i64>> = roots
        .iter()
        .map(|&k| {
            let coroot = rs.coroot_coords(k);
            let alpha = &rs.positive_roots()[k].omega;
            let mut m = vec![0i64; n * n];
            for r in 0..n {
                m[r * n + r] = 1;
                for c in 0..n {
                    m[r * n + c] -= alpha[r] * coroot[c];
                }
            }
            m
        })
        .collect();
    let id = WeylElement::identity(n).m;
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let next = mat_mul(n, &m, g);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap, found: seen.len() });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len())
}

/// The parabolic subgroup generated by `s_i` and `s_j`.
pub fn rank2_subgroup(rs: &RootSystem, i: usize, j: usize) -> Vec<WeylElement> {
    let si = WeylElement::simple(rs, i);
    let sj = WeylElement::simple(rs, j);
    let mut out = vec![WeylElement::identity(rs.rank())];
    let mut seen: std::collections::HashSet<WeylElement> = out.iter().cloned().collect();
    let mut k = 0;
    while k < out.len() {
        for g in [&si, &sj] {
            let next = out[k].compose(rs, g);
            if seen.insert(next.clone()) {
                out.push(next);
            }
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{CartanKind, Family};

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(CartanKind::new(f, n).unwrap()).unwrap()
    }

    #[test]
    fn a2_enumeration() {
        let a2 = rs(Family::A, 2);
        let g = enumerate(&a2, 100).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.length_profile(), vec![1, 2, 2, 1]);
        let words: Vec<String> = (0..6).map(|k| word_label(g.word(k))).collect();
        assert_eq!(words, ["1", "s1", "s2", "s1s2", "s2s1", "s1s2s1"]);
    }

    #[test]
    fn group_orders() {
        for (f, n, order) in [
            (Family::C, 2, 8),
            (Family::G, 2, 12),
            (Family::A, 3, 24),
            (Family::B, 3, 48),
            (Family::D, 4, 192),
            (Family::F, 4, 1152),
        ] {
            let r = rs(f, n);
            let g = enumerate(&r, DEFAULT_CAP).unwrap();
            assert_eq!(g.len(), order);
            assert_eq!(g.len() as u128, r.kind().weyl_order());
        }
    }

    #[test]
    fn cap_exceeded() {
        let a3 = rs(Family::A, 3);
        match enumerate(&a3, 10) {
            Err(Error::CapExceeded { cap: 10, found }) => assert_eq!(found, 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compose_and_act_examples() {
        let a2 = rs(Family::A, 2);
        let s1 = WeylElement::simple(&a2, 0);
        let s2 = WeylElement::simple(&a2, 1);
        assert!(s1.compose(&a2, &s1).is_identity());
        assert_eq!(s1.act(&[1, 0]), vec![-1, 1]);
        let l = s1.compose(&a2, &s2).compose(&a2, &s1);
        let r = s2.compose(&a2, &s1).compose(&a2, &s2);
        assert_eq!(l, r);
        assert_eq!(l.length(), 3);
    }

    #[test]
    fn inversion_set_examples() {
        let a2 = rs(Family::A, 2);
        assert!(WeylElement::identity(2).inversion_set(&a2).is_empty());
        let s1 = WeylElement::simple(&a2, 0);
        assert_eq!(s1.inversion_set(&a2), BTreeSet::from([0]));
        let s2s1 = WeylElement::from_word(&a2, &[1, 0]).unwrap();
        assert_eq!(s2s1.inversion_set(&a2), BTreeSet::from([0, 2]));
    }

    #[test]
    fn coset_rep_examples() {
        let a2 = rs(Family::A, 2);
        assert_eq!(min_coset_reps(&a2, &BTreeSet::new(), 100).unwrap().len(), 6);
        let reps = min_coset_reps(&a2, &BTreeSet::from([1]), 100).unwrap();
        let words: Vec<_> = reps.iter().map(|w| word_label(&w.reduced_word(&a2))).collect();
        assert_eq!(words, ["1", "s1", "s2s1"]);
        let all: BTreeSet<usize> = (0..3).collect();
        let reps = min_coset_reps(&a2, &all, 100).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps[0].is_identity());
    }

    #[test]
    fn coset_reps_match_filter() {
        let b3 = rs(Family::B, 3);
        let g = enumerate(&b3, 1000).unwrap();
        let z = BTreeSet::from([1, 4]);
        let brute: Vec<usize> = (0..g.len())
            .filter(|&k| g.element(k).inversion_set(&b3).is_disjoint(&z))
            .collect();
        let reps = min_coset_reps(&b3, &z, 1000).unwrap();
        let got: Vec<usize> = reps.iter().map(|w| g.index_of(w).unwrap()).collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn length_and_descent_properties() {
        for (f, n) in [(Family::A, 3), (Family::C, 2), (Family::G, 2), (Family::B, 3)] {
            let r = rs(f, n);
            let g = enumerate(&r, 1000).unwrap();
            let mut sets = std::collections::HashSet::new();
            for k in 0..g.len() {
                let w = g.element(k);
                let inv = w.inversion_set(&r);
                assert_eq!(inv.len(), w.length());
                assert!(sets.insert(inv));
                for i in 0..n {
                    let ws = g.right_mul(k, i);
                    let up = g.length(ws) == w.length() + 1;
                    assert!(up || g.length(ws) + 1 == w.length());
                    assert_eq!(up, !w.has_right_descent(&r, i));
                }
                assert_eq!(g.multiply(k, g.inverse(k)), 0);
                assert_eq!(WeylElement::from_word(&r, g.word(k)).unwrap(), *w);
            }
            let w0 = g.element(g.longest());
            assert_eq!(w0.inversion_set(&r).len(), r.num_positive());
            assert!(w0.compose(&r, w0).is_identity());
        }
    }

    #[test]
    fn reflection_subgroups() {
        let a2 = rs(Family::A, 2);
        assert_eq!(reflection_subgroup_order(&a2, &BTreeSet::new(), 10).unwrap(), 1);
        assert_eq!(reflection_subgroup_order(&a2, &BTreeSet::from([1]), 10).unwrap(), 2);
        assert_eq!(reflection_subgroup_order(&a2, &BTreeSet::from([0, 1, 2]), 10).unwrap(), 6);
        assert_eq!(rank2_subgroup(&rs(Family::G, 2), 0, 1).len(), 12);
    }
}
