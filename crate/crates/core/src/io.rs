//! Versioned JSON schema for the domain types.
//!
//! Every document is an envelope `{"schema": 1, "kind": ..., "data": ...}`.
//! Rationals are strings `"p/q"`, matrices are row-major, and reduced words
//! are arrays of 1-based simple indices.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::calibration::{components_and_shapes, CalibrationGraph};
use crate::error::{Error, Result};
use crate::hecke::{BasisLabel, MatrixRep, WeightReport};
use crate::linalg::Matrix;
use crate::relations::Report;
use crate::roots::{CartanKind, PositiveRoot, RootSystem};
use crate::scalar::{format_rational, parse_rational, FieldElem, LaurentPoly};
use crate::skew::SkewModule;
use crate::torus::{PlacedShape, Weight};
use crate::weyl::WeylElement;

pub const SCHEMA_VERSION: u32 = 1;

/// A type with a JSON representation under [`SCHEMA_VERSION`].
pub trait Schema: Sized {
    const KIND: &'static str;
    type Repr: Serialize + DeserializeOwned;
    fn to_repr(&self) -> Self::Repr;
    fn from_repr(r: Self::Repr) -> Result<Self>;
}

#[derive(Serialize)]
struct EnvelopeOut<'a, T> {
    schema: u32,
    kind: &'a str,
    data: T,
}

pub fn serialize<T: Schema>(x: &T) -> Result<String> {
    let env = EnvelopeOut {
        schema: SCHEMA_VERSION,
        kind: T::KIND,
        data: x.to_repr(),
    };
    Ok(serde_json::to_string_pretty(&env)?)
}

pub fn deserialize<T: Schema>(s: &str) -> Result<T> {
    let v: Value = serde_json::from_str(s)?;
    let schema = v.get("schema").cloned().unwrap_or(Value::Null);
    if schema.as_u64() != Some(SCHEMA_VERSION as u64) {
        return Err(Error::Schema {
            expected: format!("schema {SCHEMA_VERSION}"),
            found: format!("schema {schema}"),
        });
    }
    let kind = v.get("kind").and_then(Value::as_str).unwrap_or("");
    if kind != T::KIND {
        return Err(Error::Schema {
            expected: T::KIND.into(),
            found: kind.into(),
        });
    }
    let data = v.get("data").cloned().ok_or_else(|| Error::Malformed("missing data".into()))?;
    T::from_repr(serde_json::from_value(data)?)
}

// --- argument parsing ------------------------------------------------------

/// Parses `"2/3,1/3"`; errors report the byte offset of the bad entry.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in s.split(',') {
        let r = parse_rational(part).map_err(|e| match e {
            Error::Parse { position, message, .. } => Error::Parse {
                input: s.to_string(),
                position: pos + position + (part.len() - part.trim_start().len()),
                message,
            },
            other => other,
        })?;
        out.push(r);
        pos += part.len() + 1;
    }
    Ok(out)
}

/// Parses a root set such as `"a1,a1+a2"`; `""` and `"{}"` are empty.
pub fn parse_root_set(rs: &RootSystem, s: &str) -> Result<BTreeSet<usize>> {
    let body = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
    if body.is_empty() {
        return Ok(BTreeSet::new());
    }
    body.split(',').map(|p| rs.parse_root_label(p)).collect()
}

// --- scalars ---------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldElemRepr {
    #[serde(rename = "D")]
    pub d: u32,
    pub num: Vec<(i64, String)>,
    pub den: Vec<(i64, String)>,
}

fn poly_repr(p: &LaurentPoly) -> Vec<(i64, String)> {
    p.terms().iter().map(|(e, c)| (*e, format_rational(c))).collect()
}

fn poly_from(terms: &[(i64, String)]) -> Result<LaurentPoly> {
    let parsed = terms
        .iter()
        .map(|(e, c)| Ok((*e, parse_rational(c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentPoly::from_terms(parsed))
}

impl Schema for FieldElem {
    const KIND: &'static str = "field-element";
    type Repr = FieldElemRepr;

    fn to_repr(&self) -> FieldElemRepr {
        FieldElemRepr {
            d: self.d(),
            num: poly_repr(self.numer()),
            den: poly_repr(self.denom()),
        }
    }

    fn from_repr(r: FieldElemRepr) -> Result<Self> {
        FieldElem::from_parts(r.d, poly_from(&r.num)?, poly_from(&r.den)?)
    }
}

pub type MatrixRepr = Vec<Vec<FieldElemRepr>>;

fn matrix_repr(m: &Matrix<FieldElem>) -> MatrixRepr {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(FieldElem::to_repr).collect())
        .collect()
}

fn matrix_from(rows: MatrixRepr) -> Result<Matrix<FieldElem>> {
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(FieldElem::from_repr).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

// --- weights ---------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<FieldElemRepr>>,
}

impl Schema for Weight {
    const KIND: &'static str = "weight";
    type Repr = WeightRepr;

    fn to_repr(&self) -> WeightRepr {
        match self.gamma() {
            Some(c) => WeightRepr {
                gamma: Some(c.iter().map(format_rational).collect()),
                values: None,
            },
            None => WeightRepr {
                gamma: None,
                values: Some(self.values().iter().map(FieldElem::to_repr).collect()),
            },
        }
    }

    fn from_repr(r: WeightRepr) -> Result<Self> {
        match (r.gamma, r.values) {
            (Some(c), None) => Ok(Weight::from_gamma(
                c.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
            )),
            (None, Some(v)) => {
                Weight::from_values(v.into_iter().map(FieldElem::from_repr).collect::<Result<_>>()?)
            }
            _ => Err(Error::Malformed("weight needs exactly one of gamma, values".into())),
        }
    }
}

// --- modules ---------------------------------------------------------------

fn word_out(w: &[usize]) -> Vec<usize> {
    w.iter().map(|i| i + 1).collect()
}

fn word_in(w: &[usize]) -> Result<Vec<usize>> {
    w.iter()
        .map(|&i| i.checked_sub(1).ok_or_else(|| Error::Malformed("simple indices are 1-based".into())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelRepr {
    Word(Vec<usize>),
    Tag(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRepRepr {
    pub basis: Vec<LabelRepr>,
    /// Keys `T_i` and `X_omega_k`.
    pub generators: BTreeMap<String, MatrixRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightRepr>>,
}

impl Schema for MatrixRep {
    const KIND: &'static str = "matrix-rep";
    type Repr = MatrixRepRepr;

    fn to_repr(&self) -> MatrixRepRepr {
        let mut generators = BTreeMap::new();
        for (i, m) in self.t.iter().enumerate() {
            generators.insert(format!("T_{}", i + 1), matrix_repr(m));
        }
        for (k, m) in self.x.iter().enumerate() {
            generators.insert(format!("X_omega_{}", k + 1), matrix_repr(m));
        }
        MatrixRepRepr {
            basis: self
                .basis
                .iter()
                .map(|b| match b {
                    BasisLabel::Word(w) => LabelRepr::Word(word_out(w)),
                    BasisLabel::Tag(s) => LabelRepr::Tag(s.clone()),
                })
                .collect(),
            generators,
            weights: self.weights.as_ref().map(|ws| ws.iter().map(Weight::to_repr).collect()),
        }
    }

    fn from_repr(r: MatrixRepRepr) -> Result<Self> {
        let basis = r
            .basis
            .into_iter()
            .map(|b| match b {
                LabelRepr::Word(w) => Ok(BasisLabel::Word(word_in(&w)?)),
                LabelRepr::Tag(s) => Ok(BasisLabel::Tag(s)),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut gens = r.generators;
        let rank = gens.keys().filter(|k| k.starts_with("T_")).count();
        let mut take = |key: String| {
            gens.remove(&key)
                .ok_or_else(|| Error::Malformed(format!("missing generator {key}")))
                .and_then(matrix_from)
        };
        let t = (1..=rank).map(|i| take(format!("T_{i}"))).collect::<Result<Vec<_>>>()?;
        let x = (1..=rank).map(|k| take(format!("X_omega_{k}"))).collect::<Result<Vec<_>>>()?;
        if let Some(extra) = gens.keys().next() {
            return Err(Error::Malformed(format!("unexpected generator {extra}")));
        }
        let weights = r
            .weights
            .map(|ws| ws.into_iter().map(Weight::from_repr).collect::<Result<Vec<_>>>())
            .transpose()?;
        MatrixRep::new(basis, t, x, weights)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewModuleRepr {
    #[serde(rename = "type")]
    pub kind: String,
    pub weight: WeightRepr,
    /// Root labels such as `a1+a2`.
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub tableaux: Vec<Vec<usize>>,
    pub module: MatrixRepRepr,
    pub report: Report,
    pub skew_failures: Vec<String>,
}

impl Schema for SkewModule {
    const KIND: &'static str = "skew-module";
    type Repr = SkewModuleRepr;

    fn to_repr(&self) -> SkewModuleRepr {
        let rs = RootSystem::new(self.kind).expect("kind was valid when built");
        SkewModuleRepr {
            kind: self.kind.to_string(),
            weight: self.shape.t.to_repr(),
            j: self.shape.j.iter().map(|&k| rs.root_label(k)).collect(),
            tableaux: self.words.iter().map(|w| word_out(w)).collect(),
            module: self.rep.to_repr(),
            report: self.report.clone(),
            skew_failures: self.skew_failures.clone(),
        }
    }

    fn from_repr(r: SkewModuleRepr) -> Result<Self> {
        let kind = CartanKind::parse(&r.kind)?;
        let rs = RootSystem::new(kind)?;
        let j = r
            .j
            .iter()
            .map(|s| rs.parse_root_label(s))
            .collect::<Result<BTreeSet<_>>>()?;
        let words = r.tableaux.iter().map(|w| word_in(w)).collect::<Result<Vec<_>>>()?;
        let tableaux = words
            .iter()
            .map(|w| WeylElement::from_word(&rs, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(SkewModule {
            kind,
            shape: PlacedShape {
                t: Weight::from_repr(r.weight)?,
                j,
            },
            tableaux,
            words,
            rep: MatrixRep::from_repr(r.module)?,
            report: r.report,
            skew_failures: r.skew_failures,
        })
    }
}

impl Schema for Report {
    const KIND: &'static str = "report";
    type Repr = Report;

    fn to_repr(&self) -> Report {
        self.clone()
    }

    fn from_repr(r: Report) -> Result<Self> {
        Ok(r)
    }
}

// --- exports ---------------------------------------------------------------

/// Root data of a Cartan type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsExport {
    #[serde(rename = "type")]
    pub kind: String,
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<RootEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootEntry {
    pub label: String,
    #[serde(flatten)]
    pub root: PositiveRoot,
}

impl RootsExport {
    pub fn new(rs: &RootSystem) -> Self {
        RootsExport {
            kind: rs.kind().to_string(),
            cartan: rs.cartan().to_vec(),
            positive_roots: rs
                .positive_roots()
                .iter()
                .enumerate()
                .map(|(k, r)| RootEntry {
                    label: rs.root_label(k),
                    root: r.clone(),
                })
                .collect(),
        }
    }
}

impl Schema for RootsExport {
    const KIND: &'static str = "roots";
    type Repr = RootsExport;

    fn to_repr(&self) -> RootsExport {
        self.clone()
    }

    fn from_repr(r: RootsExport) -> Result<Self> {
        Ok(r)
    }
}

/// The calibration graph with its component partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphExport {
    #[serde(rename = "type")]
    pub kind: String,
    pub weight: WeightRepr,
    #[serde(rename = "Z")]
    pub z: Vec<String>,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    pub vertices: Vec<VertexEntry>,
    /// `[a, b, i]`: vertices `a < b` joined by the 1-based simple index `i`.
    pub edges: Vec<[usize; 3]>,
    pub components: Vec<ComponentEntry>,
    /// Whether graph search and grouping by `J` give the same partition.
    pub partition_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub word: Vec<usize>,
    pub weight: WeightRepr,
    #[serde(rename = "J")]
    pub j: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentEntry {
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub vertices: Vec<usize>,
}

fn labels(rs: &RootSystem, s: &BTreeSet<usize>) -> Vec<String> {
    s.iter().map(|&k| rs.root_label(k)).collect()
}

impl GraphExport {
    pub fn new(rs: &RootSystem, g: &CalibrationGraph) -> Self {
        let comps = components_and_shapes(rs, g);
        GraphExport {
            kind: rs.kind().to_string(),
            weight: g.t.to_repr(),
            z: labels(rs, &g.z),
            p: labels(rs, &g.p),
            vertices: (0..g.len())
                .map(|v| VertexEntry {
                    word: word_out(g.word(v)),
                    weight: g.vertices[v].1.to_repr(),
                    j: labels(rs, &g.vertex_j(rs, v)),
                })
                .collect(),
            edges: g.edges.iter().map(|&(a, b, i)| [a, b, i + 1]).collect(),
            components: comps
                .components
                .iter()
                .map(|c| ComponentEntry {
                    j: labels(rs, &c.j),
                    vertices: c.vertices.clone(),
                })
                .collect(),
            partition_agrees: comps.agree,
        }
    }
}

impl Schema for GraphExport {
    const KIND: &'static str = "calibration-graph";
    type Repr = GraphExport;

    fn to_repr(&self) -> GraphExport {
        self.clone()
    }

    fn from_repr(r: GraphExport) -> Result<Self> {
        Ok(r)
    }
}

/// A principal series module with its weight-space summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrincipalExport {
    #[serde(rename = "type")]
    pub kind: String,
    pub weight: WeightRepr,
    pub dim: usize,
    pub calibrated: bool,
    pub weight_spaces: Vec<WeightSpaceEntry>,
    pub module: MatrixRepRepr,
    pub report: Report,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpaceEntry {
    pub weight: WeightRepr,
    pub generalized_dim: usize,
    pub genuine_dim: usize,
}

impl PrincipalExport {
    pub fn new(rs: &RootSystem, t: &Weight, m: &MatrixRep, w: &WeightReport, report: &Report) -> Self {
        PrincipalExport {
            kind: rs.kind().to_string(),
            weight: t.to_repr(),
            dim: m.dim(),
            calibrated: w.calibrated,
            weight_spaces: w
                .spaces
                .iter()
                .map(|s| WeightSpaceEntry {
                    weight: s.weight.to_repr(),
                    generalized_dim: s.dim(),
                    genuine_dim: s.genuine_dim,
                })
                .collect(),
            module: m.to_repr(),
            report: report.clone(),
        }
    }
}

impl Schema for PrincipalExport {
    const KIND: &'static str = "principal-series";
    type Repr = PrincipalExport;

    fn to_repr(&self) -> PrincipalExport {
        self.clone()
    }

    fn from_repr(r: PrincipalExport) -> Result<Self> {
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::build_graph;
    use crate::roots::Family;
    use crate::scalar::rat;
    use crate::skew::build_skew_module;
    use crate::torus::real_weight;

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(CartanKind::new(f, n).unwrap()).unwrap()
    }

    fn round_trip<T: Schema + PartialEq + std::fmt::Debug>(x: &T) -> T {
        let s = serialize(x).unwrap();
        let y: T = deserialize(&s).unwrap();
        assert_eq!(&y, x);
        assert_eq!(serialize(&y).unwrap(), s);
        y
    }

    #[test]
    fn field_elements() {
        let qq = FieldElem::q_minus_qinv();
        let x = qq.try_div(&(FieldElem::one() - FieldElem::u_monomial(3, -4))).unwrap();
        round_trip(&x);
        round_trip(&FieldElem::zero());
        let s = serialize(&FieldElem::q_pow(-2)).unwrap();
        assert!(s.contains("\"D\": 1"));
        assert!(s.contains("\"1/1\""));
    }

    #[test]
    fn malformed_rationals_and_schema() {
        let bad = r#"{"schema":1,"kind":"field-element","data":{"D":1,"num":[[0,"2/0"]],"den":[[0,"1/1"]]}}"#;
        assert!(matches!(deserialize::<FieldElem>(bad), Err(Error::Parse { .. })));
        let old = r#"{"schema":0,"kind":"field-element","data":{"D":1,"num":[],"den":[[0,"1"]]}}"#;
        assert!(matches!(deserialize::<FieldElem>(old), Err(Error::Schema { .. })));
        let other = serialize(&FieldElem::one()).unwrap().replace("field-element", "weight");
        assert!(matches!(deserialize::<FieldElem>(&other), Err(Error::Schema { .. })));
        let zero_den = r#"{"schema":1,"kind":"field-element","data":{"D":1,"num":[[0,"1"]],"den":[]}}"#;
        assert!(deserialize::<FieldElem>(zero_den).is_err());
    }

    #[test]
    fn weights() {
        let a2 = rs(Family::A, 2);
        let t = real_weight(&a2, &[rat(2, 3), rat(1, 3)]).unwrap();
        let back = round_trip(&t);
        assert_eq!(back.gamma().unwrap(), &[rat(2, 3), rat(1, 3)]);
        let v = Weight::from_values(vec![FieldElem::from_int(-1), FieldElem::q_pow(3)]).unwrap();
        let back = round_trip(&v);
        assert!(back.gamma().is_none());
    }

    #[test]
    fn skew_module_round_trip() {
        let g2 = rs(Family::G, 2);
        let t = real_weight(&g2, &[rat(0, 1), rat(1, 1)]).unwrap();
        let m = build_skew_module(&g2, &t, &BTreeSet::new(), 100, false).unwrap();
        let back = round_trip(&m);
        for (a, b) in m.rep.generators().zip(back.rep.generators()) {
            assert_eq!(a, b);
        }
        let a2 = rs(Family::A, 2);
        let t = real_weight(&a2, &[rat(1, 3), rat(5, 3)]).unwrap();
        let m = build_skew_module(&a2, &t, &BTreeSet::from([0]), 100, false).unwrap();
        let s = serialize(&m).unwrap();
        assert!(s.contains("\"a1\""));
        round_trip(&m);
    }

    #[test]
    fn graph_export_is_deterministic() {
        let a2 = rs(Family::A, 2);
        let t = real_weight(&a2, &[rat(2, 3), rat(1, 3)]).unwrap();
        let g = build_graph(&a2, &t, 100).unwrap();
        let e = GraphExport::new(&a2, &g);
        assert_eq!((e.vertices.len(), e.edges.len(), e.components.len()), (3, 0, 3));
        let s = serialize(&e).unwrap();
        let g2 = build_graph(&a2, &t, 100).unwrap();
        assert_eq!(serialize(&GraphExport::new(&a2, &g2)).unwrap(), s);
        round_trip(&e);
        round_trip(&RootsExport::new(&a2));
    }

    #[test]
    fn argument_lists() {
        assert_eq!(parse_rational_list("2/3,1/3").unwrap(), [rat(2, 3), rat(1, 3)]);
        match parse_rational_list("1/2, 3/0") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        let a2 = rs(Family::A, 2);
        assert_eq!(parse_root_set(&a2, "a1, a1+a2").unwrap(), BTreeSet::from([0, 2]));
        assert!(parse_root_set(&a2, "{}").unwrap().is_empty());
        assert!(parse_root_set(&a2, "a3").is_err());
    }
}
