//! Placed skew shapes, the modules built on their standard tableaux, the
//! intertwining operators `τ_i`, and structural certificates for
//! calibrated modules.
//!
//! A module built here has basis `v_w` for `w ∈ F^(t,J)`, with
//! `X^λ v_w = (wt)(X^λ) v_w` and
//! `T_i v_w = (T_i)_{ww} v_w + (q⁻¹ + (T_i)_{ww}) v_{s_i w}`,
//! where `(T_i)_{ww} = (q − q⁻¹)/(1 − (wt)(X^{−α_i}))` and `v_{s_i w} = 0`
//! when `s_i w` is not a tableau.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::calibration::{build_graph, placed_shapes, tableaux, CalibrationGraph};
use crate::error::{Error, Result};
use crate::hecke::{cyclic_closure, weight_space_analysis, BasisLabel, MatrixRep, WeightReport, XMonomials};
use crate::linalg::Matrix;
use crate::relations::{verify_defining_relations, Check, Report};
use crate::roots::{CartanKind, RootSystem};
use crate::scalar::FieldElem;
use crate::torus::{j_label, weyl_act, PlacedShape, Weight};
use crate::weyl::{rank2_subgroup, word_label, WeylElement};

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|c| -c).collect()
}

/// Why `t` fails to be calibratable for `R_ij`, or `None` if it is.
pub fn calibratability_failure(rs: &RootSystem, t: &Weight, i: usize, j: usize) -> Option<String> {
    let unital: Vec<usize> = rs
        .rank2_positive(i, j)
        .into_iter()
        .filter(|&k| t.root_value(rs, k).is_one())
        .collect();
    if unital.is_empty() {
        return None;
    }
    let roots = unital
        .iter()
        .map(|&k| rs.root_label(k))
        .collect::<Vec<_>>()
        .join(", ");
    let m = rs.braid_order(i, j).unwrap_or(2);
    if m != 4 && m != 6 {
        return Some(format!("value 1 on {roots}; the pair has no exceptional case"));
    }
    if t.simple_value(rs, i).is_one() || t.simple_value(rs, j).is_one() {
        return Some(format!("value 1 on {roots}, including a simple root"));
    }
    let long_i = rs.is_long(rs.simple_root_index(i));
    let long_j = rs.is_long(rs.simple_root_index(j));
    let roles = match (long_i, long_j) {
        (true, false) => vec![(i, j)],
        (false, true) => vec![(j, i)],
        _ => vec![(i, j), (j, i)],
    };
    let q2 = FieldElem::q_pow(2);
    let group = rank2_subgroup(rs, i, j);
    let exceptional = roles.iter().any(|&(l, s)| {
        group.iter().any(|u| {
            let ut = weyl_act(rs, u, t);
            ut.simple_value(rs, l) == q2 && ut.simple_value(rs, s).is_one()
        })
    });
    if exceptional {
        None
    } else {
        Some(format!(
            "value 1 on {roots} and no u in W_ij with ut(X^long) = q^2, ut(X^short) = 1"
        ))
    }
}

/// Whether `t` is calibratable for the rank two subsystem `R_ij`.
pub fn is_calibratable_rank2(rs: &RootSystem, t: &Weight, i: usize, j: usize) -> bool {
    calibratability_failure(rs, t, i, j).is_none()
}

/// Result of testing a placed shape for skewness.
#[derive(Clone, Debug)]
pub struct SkewCheck {
    pub tableaux: Vec<WeylElement>,
    pub failures: Vec<String>,
}

impl SkewCheck {
    pub fn is_skew(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Tests every `wt`, `w ∈ F^(t,J)`, against every pair of simple roots.
/// In rank one the pair condition is vacuous, so `(wt)(X^{α_i}) ≠ 1` is
/// tested directly; in higher rank it is implied by calibratability.
pub fn skew_check(rs: &RootSystem, t: &Weight, j: &BTreeSet<usize>, cap: usize) -> Result<SkewCheck> {
    let tab = tableaux(rs, t, j, cap)?;
    if tab.elements.is_empty() {
        return Err(Error::NotPlacedShape(j_label(rs, j)));
    }
    let n = rs.rank();
    let mut failures = Vec::new();
    for w in &tab.elements {
        let wt = weyl_act(rs, w, t);
        let at = word_label(&w.reduced_word(rs));
        for a in 0..n {
            if wt.simple_value(rs, a).is_one() {
                failures.push(format!("w = {at}: (wt)(X^a{}) = 1", a + 1));
            }
            for b in a + 1..n {
                if let Some(why) = calibratability_failure(rs, &wt, a, b) {
                    failures.push(format!(
                        "w = {at}: not calibratable for the pair (a{}, a{}): {why}",
                        a + 1,
                        b + 1
                    ));
                }
            }
        }
    }
    failures.dedup();
    Ok(SkewCheck {
        tableaux: tab.elements,
        failures,
    })
}

pub fn is_placed_skew_shape(rs: &RootSystem, t: &Weight, j: &BTreeSet<usize>, cap: usize) -> Result<bool> {
    Ok(skew_check(rs, t, j, cap)?.is_skew())
}

/// A module on the standard tableaux of a placed shape, with its
/// verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewModule {
    pub kind: CartanKind,
    pub shape: PlacedShape,
    pub tableaux: Vec<WeylElement>,
    pub words: Vec<Vec<usize>>,
    pub rep: MatrixRep,
    pub report: Report,
    /// Reasons the shape is not skew; empty for skew shapes.
    pub skew_failures: Vec<String>,
}

impl SkewModule {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn is_skew(&self) -> bool {
        self.skew_failures.is_empty()
    }

    /// Position of the tableau with the given reduced word.
    pub fn index_of_word(&self, word: &[usize]) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }
}

/// Builds the module of a placed shape and verifies all defining relations.
/// A non-skew shape is refused unless `force` is set, in which case the
/// module is built whenever the formulas are defined and the report
/// records which relations fail.
pub fn build_skew_module(
    rs: &RootSystem,
    t: &Weight,
    j: &BTreeSet<usize>,
    cap: usize,
    force: bool,
) -> Result<SkewModule> {
    let check = skew_check(rs, t, j, cap)?;
    if !check.is_skew() && !force {
        return Err(Error::NotSkew(format!(
            "shape {} at {}: {}",
            j_label(rs, j),
            t.label(),
            check.failures.join("; ")
        )));
    }
    let elems = check.tableaux.clone();
    let n = elems.len();
    let index: HashMap<&WeylElement, usize> = elems.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let weights: Vec<Weight> = elems.iter().map(|w| weyl_act(rs, w, t)).collect();
    let words: Vec<Vec<usize>> = elems.iter().map(|w| w.reduced_word(rs)).collect();
    let qq = FieldElem::q_minus_qinv();
    let qinv = FieldElem::q_pow(-1);
    let mut tm = Vec::with_capacity(rs.rank());
    for i in 0..rs.rank() {
        let na = neg(&rs.simple_root(i));
        let mut m = Matrix::zeros(n, n);
        for (k, w) in elems.iter().enumerate() {
            let den = FieldElem::one().sub_ref(&weights[k].value(&na));
            let diag = qq.try_div(&den).map_err(|_| {
                Error::NotSkew(format!(
                    "(T{})_ww undefined at w = {}: (wt)(X^a{}) = 1",
                    i + 1,
                    word_label(&words[k]),
                    i + 1
                ))
            })?;
            if let Some(&l) = index.get(&w.left_simple(rs, i)) {
                m.set(l, k, qinv.add_ref(&diag));
            }
            m.set(k, k, diag);
        }
        tm.push(m);
    }
    let xm = (0..rs.rank())
        .map(|c| Matrix::diagonal(&weights.iter().map(|w| w.values()[c].clone()).collect::<Vec<_>>()))
        .collect();
    let basis = words.iter().map(|w| BasisLabel::Word(w.clone())).collect();
    let rep = MatrixRep::new(basis, tm, xm, Some(weights))?;
    let report = verify_defining_relations(rs, &rep);
    if !report.all_passed() && !force {
        let names: Vec<String> = report.failures().iter().map(|c| c.name.clone()).collect();
        return Err(Error::RelationFailure(names.join(", ")));
    }
    Ok(SkewModule {
        kind: rs.kind(),
        shape: PlacedShape {
            t: t.clone(),
            j: j.clone(),
        },
        tableaux: elems,
        words,
        rep,
        report,
        skew_failures: check.failures,
    })
}

/// A placed shape with its skewness verdict and dimension.
#[derive(Clone, Debug)]
pub struct ClassifiedShape {
    pub shape: PlacedShape,
    pub skew: bool,
    pub dim: usize,
    pub failures: Vec<String>,
}

/// All placed shapes of `t`, each tagged skew or not. The skew ones index
/// the irreducible calibrated modules with central character `t`.
pub fn classify_calibrated(rs: &RootSystem, t: &Weight, cap: usize) -> Result<Vec<ClassifiedShape>> {
    placed_shapes(rs, t, cap)?
        .into_iter()
        .map(|shape| {
            let c = skew_check(rs, t, &shape.j, cap)?;
            Ok(ClassifiedShape {
                skew: c.is_skew(),
                dim: c.tableaux.len(),
                failures: c.failures,
                shape,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Weight-space frames and τ-operators.

/// A basis of a subspace with a set of rows on which it is invertible.
#[derive(Clone, Debug)]
struct Frame {
    basis: Matrix<FieldElem>,
    rows: Vec<usize>,
    solve: Matrix<FieldElem>,
}

impl Frame {
    fn new(vectors: &[Vec<FieldElem>], ambient: usize) -> Result<Frame> {
        let basis = Matrix::from_columns(vectors, ambient);
        let d = vectors.len();
        let (_, rows) = basis.transpose().rref();
        if rows.len() != d {
            return Err(Error::Malformed("weight space basis is dependent".into()));
        }
        let cols: Vec<usize> = (0..d).collect();
        let solve = basis.submatrix(&rows, &cols).inverse()?;
        Ok(Frame { basis, rows, solve })
    }

    fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of the columns of `m`, if they lie in the span.
    fn coords(&self, m: &Matrix<FieldElem>) -> Option<Matrix<FieldElem>> {
        let cols: Vec<usize> = (0..m.cols()).collect();
        let c = self.solve.mul(&m.submatrix(&self.rows, &cols)).ok()?;
        (self.basis.mul(&c).ok()? == *m).then_some(c)
    }

    fn restrict(&self, a: &Matrix<FieldElem>) -> Option<Matrix<FieldElem>> {
        self.coords(&a.mul(&self.basis).ok()?)
    }
}

/// `τ_i` on a generalized weight space.
#[derive(Clone, Debug)]
pub struct TauOperator {
    pub i: usize,
    pub source: Weight,
    pub target: Weight,
    /// Images of the source basis vectors, as columns in the module.
    pub image: Matrix<FieldElem>,
    /// The same images in coordinates of the target space; `None` if some
    /// image leaves the target space. A target outside the support gives a
    /// `0 × d` matrix when the image vanishes.
    pub matrix: Option<Matrix<FieldElem>>,
}

impl TauOperator {
    pub fn is_invertible(&self) -> bool {
        self.matrix.as_ref().is_some_and(|m| m.is_invertible())
    }
}

/// Cached frames and restricted `X` actions for the spaces of a report.
pub struct TauContext<'a> {
    rs: &'a RootSystem,
    m: &'a MatrixRep,
    report: &'a WeightReport,
    frames: Vec<Frame>,
    xs: Vec<XMonomials<FieldElem>>,
    index: HashMap<Weight, usize>,
    cache: HashMap<(usize, usize), TauOperator>,
}

impl<'a> TauContext<'a> {
    pub fn new(rs: &'a RootSystem, m: &'a MatrixRep, report: &'a WeightReport) -> Result<Self> {
        let mut frames = Vec::new();
        let mut xs = Vec::new();
        for s in &report.spaces {
            let f = Frame::new(&s.basis, m.dim())?;
            let restricted = m
                .x
                .iter()
                .map(|x| f.restrict(x))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Malformed("weight space is not X-stable".into()))?;
            xs.push(XMonomials::new(&restricted)?);
            frames.push(f);
        }
        let index = report
            .spaces
            .iter()
            .enumerate()
            .map(|(k, s)| (s.weight.clone(), k))
            .collect();
        Ok(TauContext {
            rs,
            m,
            report,
            frames,
            xs,
            index,
            cache: HashMap::new(),
        })
    }

    fn space(&self, t: &Weight) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// `τ_i` on the generalized space of `source`.
    pub fn tau(&mut self, i: usize, source: &Weight) -> Result<TauOperator> {
        let k = self.space(source).ok_or(Error::EmptyWeightSpace)?;
        if let Some(op) = self.cache.get(&(k, i)) {
            return Ok(op.clone());
        }
        let op = self.compute(i, k)?;
        self.cache.insert((k, i), op.clone());
        Ok(op)
    }

    fn compute(&self, i: usize, k: usize) -> Result<TauOperator> {
        let source = &self.report.spaces[k].weight;
        if source.simple_value(self.rs, i).is_one() {
            return Err(Error::TauUndefined(i + 1));
        }
        let frame = &self.frames[k];
        let d = frame.dim();
        let x_neg = self.xs[k].monomial(&neg(&self.rs.simple_root(i)));
        let y = Matrix::identity(d).sub(&x_neg)?;
        let z = y.inverse()?.scale(&FieldElem::q_minus_qinv());
        let image = self.m.t[i].mul(&frame.basis)?.sub(&frame.basis.mul(&z)?)?;
        let target = source.reflect(self.rs, i);
        let matrix = match self.space(&target) {
            Some(tk) => self.frames[tk].coords(&image),
            None => image.is_zero().then(|| Matrix::zeros(0, d)),
        };
        Ok(TauOperator {
            i,
            source: source.clone(),
            target,
            image,
            matrix,
        })
    }

    /// Restricted `X^λ` on the space of `t`.
    fn x_on(&self, k: usize, lambda: &[i64]) -> Matrix<FieldElem> {
        self.xs[k].monomial(lambda)
    }

    /// Applies `τ` along `letters` (first letter first) to the basis of the
    /// space of `start`. `None` when some step is undefined.
    fn path(&mut self, start: usize, letters: &[usize]) -> Result<Option<Matrix<FieldElem>>> {
        let mut weight = self.report.spaces[start].weight.clone();
        let mut image = self.frames[start].basis.clone();
        for &l in letters {
            if weight.simple_value(self.rs, l).is_one() {
                return Ok(None);
            }
            let next = weight.reflect(self.rs, l);
            match self.space(&weight) {
                Some(k) => {
                    let coords = self.frames[k]
                        .coords(&image)
                        .ok_or_else(|| Error::Malformed("path left a weight space".into()))?;
                    let op = self.tau(l, &weight)?;
                    image = op.image.mul(&coords)?;
                }
                None => {
                    if !image.is_zero() {
                        return Err(Error::Malformed("nonzero vector outside the support".into()));
                    }
                }
            }
            weight = next;
        }
        Ok(Some(image))
    }
}

fn is_q_pm2(x: &FieldElem) -> bool {
    *x == FieldElem::q_pow(2) || *x == FieldElem::q_pow(-2)
}

/// Exact checks of the τ-operator properties on every weight space: maps
/// into the reflected space, intertwines `X^{ω_k}` with `X^{s_i ω_k}`, the
/// square is the scalar rational function of `X^{α_i}`, invertibility
/// holds exactly when `t(X^{α_i}) ≠ q^{±2}` (and the square vanishes
/// otherwise), and braid-type words agree wherever both are defined.
pub fn verify_tau_properties(rs: &RootSystem, m: &MatrixRep, report: &WeightReport) -> Result<Report> {
    let mut ctx = TauContext::new(rs, m, report)?;
    let mut out = Report::default();
    let n = rs.rank();
    let qq = FieldElem::q_pow(1);
    let qinv = FieldElem::q_pow(-1);
    for (k, space) in report.spaces.iter().enumerate() {
        let b = &space.weight;
        let d = space.dim();
        let basis = ctx.frames[k].basis.clone();
        for i in 0..n {
            let tag = format!("tau{} at {}", i + 1, b.label());
            if b.simple_value(rs, i).is_one() {
                out.push(Check::skipped(tag, "undefined: value 1 on the simple root"));
                continue;
            }
            let fwd = ctx.tau(i, b)?;
            out.push(Check::new(format!("{tag}: maps into the reflected space"), fwd.matrix.is_some()));
            let mut intertwines = true;
            for c in 0..n {
                let mut omega = vec![0; n];
                omega[c] = 1;
                let lhs = m.x[c].mul(&fwd.image)?;
                let rhs = fwd.image.mul(&ctx.x_on(k, &rs.reflect_weight(i, &omega)))?;
                intertwines &= lhs == rhs;
            }
            out.push(Check::new(format!("{tag}: intertwines X"), intertwines));

            // τ_i τ_i against (q − q⁻¹x)(q − q⁻¹x⁻¹)/((1 − x)(1 − x⁻¹)) with x = X^{α_i}
            let alpha = rs.simple_root(i);
            let x = ctx.x_on(k, &alpha);
            let xi = ctx.x_on(k, &neg(&alpha));
            let id = Matrix::identity(d);
            let num = id.scale(&qq).sub(&x.scale(&qinv))?.mul(&id.scale(&qq).sub(&xi.scale(&qinv))?)?;
            let den = id.sub(&x)?.mul(&id.sub(&xi)?)?;
            let scalar = basis.mul(&num.mul(&den.inverse()?)?)?;
            let back_image = match ctx.space(&fwd.target) {
                Some(_) => {
                    let back = ctx.tau(i, &fwd.target)?;
                    let coords = fwd.matrix.clone().unwrap_or_else(|| Matrix::zeros(back.image.cols(), d));
                    let square = back.image.mul(&coords)?;
                    let both = fwd.is_invertible() && back.is_invertible();
                    let value = b.simple_value(rs, i);
                    out.push(Check::new(
                        format!("{tag}: invertible iff value is not q^(+-2)"),
                        both == !is_q_pm2(&value),
                    ));
                    square
                }
                None => {
                    out.push(Check::new(
                        format!("{tag}: invertible iff value is not q^(+-2)"),
                        is_q_pm2(&b.simple_value(rs, i)),
                    ));
                    Matrix::zeros(m.dim(), d)
                }
            };
            out.push(Check::new(format!("{tag}: square is the scalar"), back_image == scalar));
            if is_q_pm2(&b.simple_value(rs, i)) {
                out.push(Check::new(format!("{tag}: square vanishes"), back_image.is_zero()));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let mij = rs.braid_order(i, j)?;
                // operator word i j i … read right to left
                let left: Vec<usize> = (0..mij).map(|s| if s % 2 == 0 { i } else { j }).rev().collect();
                let right: Vec<usize> = (0..mij).map(|s| if s % 2 == 0 { j } else { i }).rev().collect();
                let tag = format!("tau braid ({}, {}) at {}", i + 1, j + 1, b.label());
                match (ctx.path(k, &left)?, ctx.path(k, &right)?) {
                    (Some(a), Some(c)) => out.push(Check::new(tag, a == c)),
                    _ => out.push(Check::skipped(tag, "some factor undefined")),
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Certificates.

/// Irreducibility evidence for a calibrated module with one-dimensional
/// weight spaces.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// The support is exactly one connected component of `Γ(t)`.
    pub single_component: bool,
    /// Every weight space is genuine of dimension one, and they exhaust
    /// the module.
    pub one_dimensional: bool,
    /// `cyclic_closure` from each basis vector.
    pub closures: Vec<usize>,
}

impl Certificate {
    pub fn holds(&self, dim: usize) -> bool {
        self.single_component && self.one_dimensional && self.closures.iter().all(|&c| c == dim)
    }
}

pub fn irreducibility_certificate(m: &MatrixRep, g: &CalibrationGraph) -> Result<Certificate> {
    let report = weight_space_analysis(m)?;
    let one_dimensional = report.complete && report.spaces.iter().all(|s| s.dim() == 1 && s.is_genuine());
    let support: Option<BTreeSet<usize>> = report.spaces.iter().map(|s| g.vertex_of(&s.weight)).collect();
    let single_component = match support {
        Some(sup) if !sup.is_empty() => g
            .bfs_components()
            .iter()
            .any(|c| c.iter().copied().collect::<BTreeSet<_>>() == sup),
        _ => false,
    };
    let n = m.dim();
    let closures = (0..n)
        .map(|k| {
            let mut e = vec![FieldElem::zero(); n];
            e[k] = FieldElem::one();
            cyclic_closure(m, &e)
        })
        .collect::<Result<_>>()?;
    Ok(Certificate {
        single_component,
        one_dimensional,
        closures,
    })
}

/// The structure forced on a calibrated module whose weights are off 1 on
/// every simple root and whose weight spaces are one-dimensional, checked
/// on a module given in a weight basis (diagonal `X`, weights attached):
/// the diagonal of `T_i`, its off-diagonal support, the product of
/// off-diagonal pairs, the inversion of `X^{α_i}` across an `s_i`-pair,
/// bijectivity of `τ_i` across such pairs, and calibratability of every
/// weight in the support.
pub fn forced_structure(rs: &RootSystem, m: &MatrixRep) -> Result<Report> {
    let weights = m
        .weights
        .as_ref()
        .ok_or_else(|| Error::Malformed("module has no weight map".into()))?;
    if !m.x.iter().all(|x| x.is_diagonal()) {
        return Err(Error::Malformed("X matrices are not diagonal".into()));
    }
    let index: HashMap<&Weight, usize> = weights.iter().enumerate().map(|(k, w)| (w, k)).collect();
    if index.len() != weights.len() {
        return Err(Error::Malformed("weight spaces are not one-dimensional".into()));
    }
    let n = rs.rank();
    let qq = FieldElem::q_minus_qinv();
    let qinv = FieldElem::q_pow(-1);
    let mut out = Report::default();
    let mut first = |name: &str, bad: Option<String>| {
        let c = Check::new(name, bad.is_none());
        out.push(match bad {
            Some(d) => c.with_detail(d),
            None => c,
        });
    };
    let mut off_one = None;
    let mut diagonal = None;
    let mut support = None;
    let mut product = None;
    let mut involution = None;
    let mut bijective = None;
    for i in 0..n {
        let t = &m.t[i];
        let alpha = rs.simple_root(i);
        for (b, wb) in weights.iter().enumerate() {
            let at = || format!("T{} at {}", i + 1, wb.label());
            let xb = wb.value(&alpha);
            if xb.is_one() {
                off_one.get_or_insert_with(at);
                continue;
            }
            let forced = qq.try_div(&FieldElem::one().sub_ref(&wb.value(&neg(&alpha))))?;
            if *t.get(b, b) != forced {
                diagonal.get_or_insert_with(at);
            }
            let partner = index.get(&wb.reflect(rs, i)).copied();
            for c in 0..m.dim() {
                if c != b && !t.get(c, b).is_zero() && Some(c) != partner {
                    support.get_or_insert_with(at);
                }
            }
            if let Some(c) = partner.filter(|&c| c != b) {
                let lhs = t.get(b, c).mul_ref(t.get(c, b));
                let rhs = qinv.add_ref(t.get(b, b)).mul_ref(&qinv.add_ref(t.get(c, c)));
                if lhs != rhs {
                    product.get_or_insert_with(at);
                }
                if !xb.mul_ref(&weights[c].value(&alpha)).is_one() {
                    involution.get_or_insert_with(at);
                }
                if t.get(c, b).is_zero() || t.get(b, c).is_zero() {
                    bijective.get_or_insert_with(at);
                }
            }
        }
    }
    first("weights off 1 on simple roots", off_one);
    first("forced diagonal of T_i", diagonal);
    first("off-diagonal support only at s_i b", support);
    first("off-diagonal product identity", product);
    first("X^a_i inverted across s_i pairs", involution);
    first("tau bijective across s_i pairs", bijective);
    let mut uncalibratable = None;
    'outer: for w in weights {
        for a in 0..n {
            for b in a + 1..n {
                if !is_calibratable_rank2(rs, w, a, b) {
                    uncalibratable = Some(format!("{} for (a{}, a{})", w.label(), a + 1, b + 1));
                    break 'outer;
                }
            }
        }
    }
    first("support weights calibratable", uncalibratable);
    Ok(out)
}

/// Whether the support of `m` meets more than one component of `Γ(t)`,
/// using the weight map alone.
pub fn support_components(m: &MatrixRep, g: &CalibrationGraph) -> Option<usize> {
    let weights = m.weights.as_ref()?;
    let comps = g.bfs_components();
    let mut hit = HashSet::new();
    for w in weights {
        let v = g.vertex_of(w)?;
        hit.insert(comps.iter().position(|c| c.contains(&v))?);
    }
    Some(hit.len())
}

/// Breadth-first order of tableaux from the first one along `s_i` moves,
/// returned as positions; useful for displaying a module.
pub fn tableau_walk(module: &SkewModule, rs: &RootSystem) -> Vec<usize> {
    let index: HashMap<&WeylElement, usize> =
        module.tableaux.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut seen = vec![false; module.tableaux.len()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    if !seen.is_empty() {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(k) = queue.pop_front() {
        order.push(k);
        for i in 0..rs.rank() {
            if let Some(&l) = index.get(&module.tableaux[k].left_simple(rs, i)) {
                if !seen[l] {
                    seen[l] = true;
                    queue.push_back(l);
                }
            }
        }
    }
    order
}

/// The two-dimensional block of the G2 example: the module of the placed
/// shape `(t, ∅)` for `t` with `c = (0, 1)`, restricted to the span of
/// `v_1` and `v_{s_2}`. Index 1 is the long simple root.
#[derive(Clone, Debug)]
pub struct G2Block {
    pub module: SkewModule,
    pub positions: [usize; 2],
    pub t_long: Matrix<FieldElem>,
    pub t_short: Matrix<FieldElem>,
    pub x_long: Matrix<FieldElem>,
    pub x_short: Matrix<FieldElem>,
}

pub fn g2_block(cap: usize) -> Result<G2Block> {
    use crate::roots::Family;
    use crate::scalar::rat;
    let rs = RootSystem::new(CartanKind::new(Family::G, 2)?)?;
    let t = crate::torus::real_weight(&rs, &[rat(0, 1), rat(1, 1)])?;
    let module = build_skew_module(&rs, &t, &BTreeSet::new(), cap, false)?;
    let a = module.index_of_word(&[]).ok_or(Error::EmptyWeightSpace)?;
    let b = module.index_of_word(&[1]).ok_or(Error::EmptyWeightSpace)?;
    let positions = [a, b];
    let block = |m: &Matrix<FieldElem>| m.submatrix(&positions, &positions);
    let x_of = |root: &[i64]| {
        let w = module.rep.weights.as_ref().expect("weights");
        Matrix::diagonal(&[w[a].value(root), w[b].value(root)])
    };
    Ok(G2Block {
        t_long: block(&module.rep.t[1]),
        t_short: block(&module.rep.t[0]),
        x_long: x_of(&rs.simple_root(1)),
        x_short: x_of(&rs.simple_root(0)),
        positions,
        module,
    })
}

impl G2Block {
    /// The expected block matrices `(T_long, T_short, X^{α_long}, X^{α_short})`
    /// in closed form.
    pub fn closed_forms() -> [Matrix<FieldElem>; 4] {
        let q = FieldElem::q_pow;
        let one = FieldElem::one();
        let f = |n: FieldElem, d: FieldElem| n.try_div(&d).expect("nonzero denominator");
        let qq = FieldElem::q_minus_qinv();
        let t_long = Matrix::from_rows(vec![
            vec![f(qq.clone(), one.sub_ref(&q(-4))), f(q(1).sub_ref(&q(3)), one.sub_ref(&q(4)))],
            vec![f(q(1).sub_ref(&q(-5)), one.sub_ref(&q(-4))), f(qq, one.sub_ref(&q(4)))],
        ])
        .expect("square");
        [
            t_long,
            Matrix::diagonal(&[q(-1).neg_ref(), q(1)]),
            Matrix::diagonal(&[q(4), q(-4)]),
            Matrix::diagonal(&[q(-2), q(2)]),
        ]
    }

    /// Entrywise comparison with [`G2Block::closed_forms`].
    pub fn compare(&self) -> Report {
        let names = ["T_long", "T_short", "X^alpha_long", "X^alpha_short"];
        let got = [&self.t_long, &self.t_short, &self.x_long, &self.x_short];
        let mut r = Report::default();
        for ((name, g), e) in names.iter().zip(got).zip(Self::closed_forms()) {
            for i in 0..2 {
                for j in 0..2 {
                    r.push(Check::new(format!("{name}[{},{}]", i + 1, j + 1), g.get(i, j) == e.get(i, j)));
                }
            }
        }
        r
    }
}

/// Builds the graph and the module and runs the certificate in one call.
pub fn certify_shape(
    rs: &RootSystem,
    t: &Weight,
    j: &BTreeSet<usize>,
    cap: usize,
) -> Result<(SkewModule, Certificate)> {
    let module = build_skew_module(rs, t, j, cap, false)?;
    let g = build_graph(rs, t, cap)?;
    let cert = irreducibility_certificate(&module.rep, &g)?;
    Ok((module, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{principal_series, HeckeAlgebra};
    use crate::roots::Family;
    use crate::scalar::rat;
    use crate::torus::real_weight;

    fn rs(f: Family) -> RootSystem {
        RootSystem::new(CartanKind::new(f, 2).unwrap()).unwrap()
    }

    fn q(k: i64) -> FieldElem {
        FieldElem::q_pow(k)
    }

    #[test]
    fn calibratable_conditions() {
        let a2 = rs(Family::A);
        let generic = real_weight(&a2, &[rat(1, 5), rat(1, 7)]).unwrap();
        assert!(is_calibratable_rank2(&a2, &generic, 0, 1));
        let singular = real_weight(&a2, &[rat(2, 3), rat(1, 3)]).unwrap();
        assert!(!is_calibratable_rank2(&a2, &singular, 0, 1));
        // C2: long index 1; t(X^long) = q^-2 and t(X^short) = q^2 puts
        // s_long t at (q^2, 1)
        let c2 = rs(Family::C);
        assert!(c2.is_long(c2.simple_root_index(1)));
        let found = (-4..=4)
            .flat_map(|a| (-4..=4).map(move |b| (a, b)))
            .map(|(a, b)| real_weight(&c2, &[rat(a, 2), rat(b, 2)]).unwrap())
            .find(|t| t.simple_value(&c2, 1) == q(-2) && t.simple_value(&c2, 0) == q(2))
            .expect("grid contains the weight");
        assert!(c2.rank2_positive(0, 1).iter().any(|&k| found.root_value(&c2, k).is_one()));
        assert!(is_calibratable_rank2(&c2, &found, 0, 1));
    }

    #[test]
    fn singular_a2_shapes_are_not_skew() {
        let a2 = rs(Family::A);
        let t = real_weight(&a2, &[rat(2, 3), rat(1, 3)]).unwrap();
        let shapes = classify_calibrated(&a2, &t, 100).unwrap();
        assert_eq!(shapes.len(), 3);
        assert!(shapes.iter().all(|s| !s.skew && s.dim == 1));
        let j = BTreeSet::from([0]);
        assert!(matches!(build_skew_module(&a2, &t, &j, 100, false), Err(Error::NotSkew(_))));
        let forced = build_skew_module(&a2, &t, &j, 100, true).unwrap();
        assert_eq!(forced.dim(), 1);
        assert_eq!(*forced.rep.t[0].get(0, 0), q(-1).neg_ref());
        assert_eq!(*forced.rep.t[1].get(0, 0), q(1));
        let bad: Vec<String> = forced.report.failures().iter().map(|c| c.name.clone()).collect();
        assert_eq!(bad, ["braid T1 T2 (m=3)"]);
    }

    #[test]
    fn generic_empty_shape_is_principal_series() {
        for f in [Family::A, Family::C, Family::G] {
            let r = rs(f);
            let t = real_weight(&r, &[rat(1, 5), rat(1, 7)]).unwrap();
            let (module, cert) = certify_shape(&r, &t, &BTreeSet::new(), 100).unwrap();
            let order = r.kind().weyl_order() as usize;
            assert_eq!(module.dim(), order);
            assert!(cert.holds(order));
            assert!(forced_structure(&r, &module.rep).unwrap().all_passed());
            let h = HeckeAlgebra::new(&r, 100).unwrap();
            let ps = principal_series(&h, &t).unwrap();
            let rep = crate::hecke::principal_series_analysis(&h, &ps).unwrap();
            let a: HashSet<&Weight> = rep.support().into_iter().collect();
            let b: HashSet<&Weight> = module.rep.weights.as_ref().unwrap().iter().collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn g2_block_matches_closed_forms() {
        let blk = g2_block(100).unwrap();
        let one = FieldElem::one();
        let qq = q(1).sub_ref(&q(-1));
        let f = |n: FieldElem, d: FieldElem| n.try_div(&d).unwrap();
        assert_eq!(*blk.t_long.get(0, 0), f(qq.clone(), one.sub_ref(&q(-4))));
        assert_eq!(*blk.t_long.get(0, 1), f(q(1).sub_ref(&q(3)), one.sub_ref(&q(4))));
        assert_eq!(*blk.t_long.get(1, 0), f(q(1).sub_ref(&q(-5)), one.sub_ref(&q(-4))));
        assert_eq!(*blk.t_long.get(1, 1), f(qq, one.sub_ref(&q(4))));
        assert_eq!(blk.t_short, Matrix::diagonal(&[q(-1).neg_ref(), q(1)]));
        assert_eq!(blk.x_long, Matrix::diagonal(&[q(4), q(-4)]));
        assert_eq!(blk.x_short, Matrix::diagonal(&[q(-2), q(2)]));
        let cmp = blk.compare();
        assert_eq!(cmp.checks.len(), 16);
        assert!(cmp.all_passed());
    }

    #[test]
    fn tau_suite_on_generic_principal_series() {
        for f in [Family::A, Family::C, Family::G] {
            let r = rs(f);
            let h = HeckeAlgebra::new(&r, 100).unwrap();
            let t = real_weight(&r, &[rat(1, 5), rat(1, 7)]).unwrap();
            let m = principal_series(&h, &t).unwrap();
            let rep = crate::hecke::principal_series_analysis(&h, &m).unwrap();
            let report = verify_tau_properties(&r, &m, &rep).unwrap();
            assert!(report.all_passed(), "{report}");
            assert_eq!(report.count(crate::relations::Status::Skipped), 0);
        }
    }

    #[test]
    fn tau_square_vanishes_at_q_squared() {
        let a2 = rs(Family::A);
        let h = HeckeAlgebra::new(&a2, 100).unwrap();
        // t(X^a1) = q^2 with a1 = 2w1 - w2: c = (1/2 + c2/2, c2)
        let t = real_weight(&a2, &[rat(3, 5), rat(1, 5)]).unwrap();
        assert_eq!(t.simple_value(&a2, 0), q(2));
        let m = principal_series(&h, &t).unwrap();
        let rep = crate::hecke::principal_series_analysis(&h, &m).unwrap();
        let report = verify_tau_properties(&a2, &m, &rep).unwrap();
        assert!(report.all_passed(), "{report}");
        assert!(report.checks.iter().any(|c| c.name.ends_with("square vanishes")));
    }

    #[test]
    fn tau_undefined_in_rank_one() {
        let a1 = RootSystem::new(CartanKind::new(Family::A, 1).unwrap()).unwrap();
        let h = HeckeAlgebra::new(&a1, 10).unwrap();
        let t = real_weight(&a1, &[rat(0, 1)]).unwrap();
        let m = principal_series(&h, &t).unwrap();
        let rep = weight_space_analysis(&m).unwrap();
        let report = verify_tau_properties(&a1, &m, &rep).unwrap();
        assert_eq!(report.count(crate::relations::Status::Skipped), 1);
        let mut ctx = TauContext::new(&a1, &m, &rep).unwrap();
        assert!(matches!(ctx.tau(0, &t), Err(Error::TauUndefined(1))));
    }

    #[test]
    fn direct_sum_is_not_irreducible() {
        let a2 = rs(Family::A);
        let t = real_weight(&a2, &[rat(1, 3), rat(5, 3)]).unwrap();
        let shapes: Vec<_> = classify_calibrated(&a2, &t, 100)
            .unwrap()
            .into_iter()
            .filter(|s| s.skew)
            .collect();
        assert!(shapes.len() >= 2, "{shapes:?}");
        let a = build_skew_module(&a2, &t, &shapes[0].shape.j, 100, false).unwrap();
        let b = build_skew_module(&a2, &t, &shapes[1].shape.j, 100, false).unwrap();
        let g = build_graph(&a2, &t, 100).unwrap();
        let sum = a.rep.direct_sum(&b.rep).unwrap();
        assert_eq!(support_components(&sum, &g), Some(2));
        let cert = irreducibility_certificate(&sum, &g).unwrap();
        assert!(!cert.holds(sum.dim()));
        for s in [&a, &b] {
            assert!(irreducibility_certificate(&s.rep, &g).unwrap().holds(s.dim()));
        }
    }
}
