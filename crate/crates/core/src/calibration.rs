//! Calibration graphs, their components, and standard tableaux.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::roots::RootSystem;
use crate::scalar::FieldElem;
use crate::torus::{j_label, orbit, zero_pole_sets, PlacedShape, Weight};
use crate::weyl::{min_coset_reps, word_label, WeylElement};

/// The graph `Γ(t)`: vertices are the orbit points `wt`, with an edge
/// `wt — s_i wt` whenever `(wt)(X^{α_i}) ≠ q^{±2}`.
#[derive(Clone, Debug)]
pub struct CalibrationGraph {
    pub t: Weight,
    pub vertices: Vec<(WeylElement, Weight)>,
    /// `(a, b, i)` with `a < b`.
    pub edges: Vec<(usize, usize, usize)>,
    pub z: BTreeSet<usize>,
    pub p: BTreeSet<usize>,
    words: Vec<Vec<usize>>,
}

pub fn build_graph(rs: &RootSystem, t: &Weight, cap: usize) -> Result<CalibrationGraph> {
    let (z, p) = zero_pole_sets(rs, t);
    let vertices = orbit(rs, t, cap)?;
    let index: HashMap<&Weight, usize> =
        vertices.iter().enumerate().map(|(k, (_, wt))| (wt, k)).collect();
    let q2 = FieldElem::q_pow(2);
    let qm2 = FieldElem::q_pow(-2);
    let mut edges = BTreeSet::new();
    for (a, (_, wt)) in vertices.iter().enumerate() {
        for i in 0..rs.rank() {
            let v = wt.simple_value(rs, i);
            if v == q2 || v == qm2 || v.is_one() {
                continue;
            }
            let b = index[&wt.reflect(rs, i)];
            edges.insert((a.min(b), a.max(b), i));
        }
    }
    let words = vertices.iter().map(|(w, _)| w.reduced_word(rs)).collect();
    Ok(CalibrationGraph {
        t: t.clone(),
        vertices,
        edges: edges.into_iter().collect(),
        z,
        p,
        words,
    })
}

impl CalibrationGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn word(&self, v: usize) -> &[usize] {
        &self.words[v]
    }

    pub fn vertex_of(&self, wt: &Weight) -> Option<usize> {
        self.vertices.iter().position(|(_, x)| x == wt)
    }

    /// `J = R(w) ∩ P(t)` for vertex `v`.
    pub fn vertex_j(&self, rs: &RootSystem, v: usize) -> BTreeSet<usize> {
        self.vertices[v]
            .0
            .inversion_set(rs)
            .intersection(&self.p)
            .copied()
            .collect()
    }

    /// Connected components by breadth-first search, each sorted, listed
    /// in order of their smallest vertex.
    pub fn bfs_components(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut comp = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn to_dot(&self, rs: &RootSystem) -> String {
        let mut s = String::from("graph calibration {\n");
        for v in 0..self.len() {
            let _ = writeln!(
                s,
                "  v{} [label=\"{} | {}\"];",
                v,
                word_label(&self.words[v]),
                j_label(rs, &self.vertex_j(rs, v))
            );
        }
        for &(a, b, i) in &self.edges {
            let _ = writeln!(s, "  v{} -- v{} [label=\"{}\"];", a, b, i + 1);
        }
        s.push_str("}\n");
        s
    }
}

/// One component of `Γ(t)` together with its shape.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub j: BTreeSet<usize>,
    pub vertices: Vec<usize>,
}

/// Components computed twice: by graph search and by grouping vertices
/// on `R(w) ∩ P(t)`. `agree` records whether the two partitions coincide.
#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    pub by_j: Vec<Component>,
    pub agree: bool,
}

pub fn components_and_shapes(rs: &RootSystem, g: &CalibrationGraph) -> ComponentReport {
    let bfs = g.bfs_components();
    let mut groups: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    let mut first_seen: Vec<BTreeSet<usize>> = Vec::new();
    for v in 0..g.len() {
        let j = g.vertex_j(rs, v);
        if !groups.contains_key(&j) {
            first_seen.push(j.clone());
        }
        groups.entry(j).or_default().push(v);
    }
    let by_j: Vec<Component> = first_seen
        .into_iter()
        .map(|j| {
            let vertices = groups[&j].clone();
            Component { j, vertices }
        })
        .collect();
    let bfs_set: BTreeSet<&Vec<usize>> = bfs.iter().collect();
    let j_set: BTreeSet<&Vec<usize>> = by_j.iter().map(|c| &c.vertices).collect();
    let agree = bfs_set == j_set;
    let components = bfs
        .into_iter()
        .map(|vertices| Component {
            j: g.vertex_j(rs, vertices[0]),
            vertices,
        })
        .collect();
    ComponentReport {
        components,
        by_j,
        agree,
    }
}

/// The standard tableaux `F^(t,J)`.
#[derive(Clone, Debug)]
pub struct TableauSet {
    pub j: BTreeSet<usize>,
    pub elements: Vec<WeylElement>,
}

pub fn tableaux(
    rs: &RootSystem,
    t: &Weight,
    j: &BTreeSet<usize>,
    cap: usize,
) -> Result<TableauSet> {
    let (z, p) = zero_pole_sets(rs, t);
    if !j.is_subset(&p) {
        let extra: BTreeSet<usize> = j.difference(&p).copied().collect();
        return Err(Error::NotSubsetOfP(j_label(rs, &extra)));
    }
    let elements = min_coset_reps(rs, &z, cap)?
        .into_iter()
        .filter(|w| {
            let inv = w.inversion_set(rs);
            inv.intersection(&p).copied().collect::<BTreeSet<_>>() == *j
        })
        .collect();
    Ok(TableauSet {
        j: j.clone(),
        elements,
    })
}

/// Every `J` realized by some tableau, in order of first appearance.
pub fn placed_shapes(rs: &RootSystem, t: &Weight, cap: usize) -> Result<Vec<PlacedShape>> {
    let g = build_graph(rs, t, cap)?;
    Ok(components_and_shapes(rs, &g)
        .by_j
        .into_iter()
        .map(|c| PlacedShape { t: t.clone(), j: c.j })
        .collect())
}
