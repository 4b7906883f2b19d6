use num_rational::BigRational;
use num_traits::One;

use super::HeckeAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Matrix, Scalar};
use crate::scalar::FieldElem;
use crate::torus::Weight;

/// A basis vector label: a reduced word or an opaque tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Word(Vec<usize>),
    Tag(String),
}

impl BasisLabel {
    pub fn display(&self) -> String {
        match self {
            BasisLabel::Word(w) => crate::weyl::word_label(w),
            BasisLabel::Tag(s) => s.clone(),
        }
    }
}

/// A finite-dimensional module given by the matrices of `T_1..T_n` and
/// `X^{ω_1}..X^{ω_n}`. Matrices act on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRep {
    pub basis: Vec<BasisLabel>,
    pub t: Vec<Matrix<FieldElem>>,
    pub x: Vec<Matrix<FieldElem>>,
    /// The weight of each basis vector, when the basis consists of weight
    /// vectors.
    pub weights: Option<Vec<Weight>>,
}

impl MatrixRep {
    pub fn new(
        basis: Vec<BasisLabel>,
        t: Vec<Matrix<FieldElem>>,
        x: Vec<Matrix<FieldElem>>,
        weights: Option<Vec<Weight>>,
    ) -> Result<Self> {
        let n = basis.len();
        if t.len() != x.len() {
            return Err(Error::Dimension("need as many T as X generators".into()));
        }
        if t.iter().chain(&x).any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::Dimension(format!("generators must be {n}x{n}")));
        }
        if weights.as_ref().is_some_and(|w| w.len() != n) {
            return Err(Error::Dimension("one weight per basis vector".into()));
        }
        Ok(MatrixRep { basis, t, x, weights })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.t.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = &Matrix<FieldElem>> {
        self.t.iter().chain(&self.x)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &MatrixRep) -> Result<MatrixRep> {
        if self.rank() != other.rank() {
            return Err(Error::Dimension("ranks differ".into()));
        }
        let (a, b) = (self.dim(), other.dim());
        let block = |p: &Matrix<FieldElem>, q: &Matrix<FieldElem>| {
            let mut m = Matrix::zeros(a + b, a + b);
            for i in 0..a {
                for j in 0..a {
                    m.set(i, j, p.get(i, j).clone());
                }
            }
            for i in 0..b {
                for j in 0..b {
                    m.set(a + i, a + j, q.get(i, j).clone());
                }
            }
            m
        };
        let weights = match (&self.weights, &other.weights) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
            _ => None,
        };
        Ok(MatrixRep {
            basis: self.basis.iter().chain(&other.basis).cloned().collect(),
            t: self.t.iter().zip(&other.t).map(|(p, q)| block(p, q)).collect(),
            x: self.x.iter().zip(&other.x).map(|(p, q)| block(p, q)).collect(),
            weights,
        })
    }

    /// Least `D` such that every entry is a rational function of `q^{1/D}`.
    pub fn common_d(&self) -> u32 {
        self.generators()
            .flat_map(|m| (0..m.rows()).flat_map(move |i| (0..m.cols()).map(move |j| m.get(i, j).d())))
            .fold(1u32, |acc, d| num_integer::lcm(acc, d))
    }

    /// Substitutes `u ← u0` with `q = u^D`, `D = common_d()`. Returns
    /// `(D, T matrices, X matrices)`.
    #[allow(clippy::type_complexity)]
    pub fn evaluate(
        &self,
        u0: &BigRational,
    ) -> Result<(u32, Vec<Matrix<BigRational>>, Vec<Matrix<BigRational>>)> {
        let d = self.common_d();
        let ev = |m: &Matrix<FieldElem>| m.try_map(|x| x.evaluate_in(d, u0));
        Ok((
            d,
            self.t.iter().map(ev).collect::<Result<_>>()?,
            self.x.iter().map(ev).collect::<Result<_>>()?,
        ))
    }
}

/// The matrices of `X^λ` for arbitrary `λ`, from the generators and their
/// inverses.
#[derive(Clone, Debug)]
pub struct XMonomials<F> {
    x: Vec<Matrix<F>>,
    inv: Vec<Matrix<F>>,
}

impl<F: Scalar> XMonomials<F> {
    pub fn new(x: &[Matrix<F>]) -> Result<Self> {
        Ok(XMonomials {
            x: x.to_vec(),
            inv: x.iter().map(|m| m.inverse()).collect::<Result<_>>()?,
        })
    }

    pub fn generator(&self, k: usize) -> &Matrix<F> {
        &self.x[k]
    }

    pub fn monomial(&self, lambda: &[i64]) -> Matrix<F> {
        let n = self.x.first().map(|m| m.rows()).unwrap_or(0);
        let mut out = Matrix::identity(n);
        for (k, &l) in lambda.iter().enumerate() {
            let m = if l >= 0 { &self.x[k] } else { &self.inv[k] };
            for _ in 0..l.unsigned_abs() {
                out = out.mul(m).expect("square");
            }
        }
        out
    }
}

/// A subspace with a basis whose rows at `rows` form the identity, so
/// that coordinates are read off directly.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub basis: Matrix<FieldElem>,
    pub rows: Vec<usize>,
}

impl Subspace {
    pub fn whole(n: usize) -> Self {
        Subspace {
            basis: Matrix::identity(n),
            rows: (0..n).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn vector(&self, k: usize) -> Vec<FieldElem> {
        self.basis.column(k)
    }

    /// Coordinates of a vector known to lie in the subspace.
    pub fn coords(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        self.rows.iter().map(|&r| v[r].clone()).collect()
    }

    /// Coordinates of each column of `m` (an `N × k` matrix of vectors in
    /// the subspace).
    pub fn coords_matrix(&self, m: &Matrix<FieldElem>) -> Matrix<FieldElem> {
        m.submatrix(&self.rows, &(0..m.cols()).collect::<Vec<_>>())
    }

    /// Whether every column of `m` lies in the subspace.
    pub fn contains_columns(&self, m: &Matrix<FieldElem>) -> bool {
        self.basis.mul(&self.coords_matrix(m)).map(|r| r == *m).unwrap_or(false)
    }

    /// Matrix of an operator preserving the subspace.
    pub fn restrict(&self, a: &Matrix<FieldElem>) -> Matrix<FieldElem> {
        self.coords_matrix(&a.mul(&self.basis).expect("dimensions"))
    }

    /// Sub-subspace spanned by the columns of `c` (coordinates), where
    /// `c` comes from a kernel computation with identity at `free`.
    fn refine(&self, c: &Matrix<FieldElem>, free: &[usize]) -> Subspace {
        Subspace {
            basis: self.basis.mul(c).expect("dimensions"),
            rows: free.iter().map(|&f| self.rows[f]).collect(),
        }
    }
}

fn kernel_subspace(a: &Matrix<FieldElem>, within: &Subspace, stabilize: bool) -> Subspace {
    let d = a.rows();
    let mut power = a.clone();
    let mut free = power.kernel_free_columns();
    let mut kernel = power.kernel();
    if stabilize {
        // kernels of A, A², … grow until they stabilize
        while kernel.len() < d && !kernel.is_empty() {
            power = power.mul(a).expect("square");
            let next = power.kernel();
            if next.len() == kernel.len() {
                break;
            }
            free = power.kernel_free_columns();
            kernel = next;
        }
    }
    let c = Matrix::from_columns(&kernel, d);
    within.refine(&c, &free)
}

/// For commuting upper triangular matrices the joint generalized space of
/// `chi` has dimension equal to the number of diagonal positions carrying
/// `chi`. When that number is one, the single eigenvector is found by back
/// substitution and checked against every matrix.
fn triangular_simple_eigenspace(x: &[Matrix<FieldElem>], chi: &[FieldElem]) -> Option<Subspace> {
    if x.is_empty() || !x.iter().all(|m| m.is_upper_triangular()) {
        return None;
    }
    let n = x[0].rows();
    let on_diag = |i: usize| x.iter().zip(chi).all(|(m, c)| m.get(i, i) == c);
    let positions: Vec<usize> = (0..n).filter(|&i| on_diag(i)).collect();
    let [p] = positions[..] else {
        return None;
    };
    let mut v = vec![FieldElem::zero(); n];
    v[p] = FieldElem::one();
    for j in (0..p).rev() {
        let k = (0..x.len()).find(|&k| x[k].get(j, j) != &chi[k])?;
        let mut acc = FieldElem::zero();
        for (l, vl) in v.iter().enumerate().take(p + 1).skip(j + 1) {
            let a = x[k].get(j, l);
            if !a.is_zero() && !vl.is_zero() {
                acc = acc.add_ref(&a.mul_ref(vl));
            }
        }
        if !acc.is_zero() {
            let pivot = x[k].get(j, j).sub_ref(&chi[k]);
            v[j] = acc.neg_ref().try_div(&pivot).ok()?;
        }
    }
    for (m, c) in x.iter().zip(chi) {
        let image = m.mul_vec(&v);
        if image.iter().zip(&v).any(|(a, b)| *a != b.mul_ref(c)) {
            return None;
        }
    }
    Some(Subspace {
        basis: Matrix::from_columns(&[v], n),
        rows: vec![p],
    })
}

/// The simultaneous (generalized, if `generalized`) eigenspace of the
/// commuting matrices `x` with eigenvalues `chi`.
pub fn eigenspace(x: &[Matrix<FieldElem>], chi: &[FieldElem], generalized: bool) -> Subspace {
    if let Some(s) = triangular_simple_eigenspace(x, chi) {
        return s;
    }
    let n = x.first().map(|m| m.rows()).unwrap_or(0);
    let mut space = Subspace::whole(n);
    for (m, c) in x.iter().zip(chi) {
        if space.dim() == 0 {
            break;
        }
        let a = space.restrict(m).add_scalar(&c.neg_ref());
        space = kernel_subspace(&a, &space, generalized);
    }
    space
}

#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub weight: Weight,
    /// Basis of the generalized weight space.
    pub basis: Vec<Vec<FieldElem>>,
    pub genuine_dim: usize,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_genuine(&self) -> bool {
        self.genuine_dim == self.dim()
    }
}

#[derive(Clone, Debug)]
pub struct WeightReport {
    pub dim: usize,
    pub spaces: Vec<WeightSpace>,
    /// Every generalized weight space is a genuine eigenspace.
    pub calibrated: bool,
    /// The generalized spaces exhaust the module.
    pub complete: bool,
}

impl WeightReport {
    pub fn support(&self) -> Vec<&Weight> {
        self.spaces.iter().map(|s| &s.weight).collect()
    }

    pub fn space_of(&self, t: &Weight) -> Option<&WeightSpace> {
        self.spaces.iter().find(|s| s.weight == *t)
    }
}

fn candidate_weights(m: &MatrixRep) -> Result<Vec<Vec<FieldElem>>> {
    let mut out: Vec<Vec<FieldElem>> = Vec::new();
    if m.x.iter().all(|x| x.is_upper_triangular()) {
        for i in 0..m.dim() {
            let chi: Vec<FieldElem> = m.x.iter().map(|x| x.get(i, i).clone()).collect();
            if !out.contains(&chi) {
                out.push(chi);
            }
        }
    } else if let Some(ws) = &m.weights {
        for w in ws {
            if !out.iter().any(|c| c.as_slice() == w.values()) {
                out.push(w.values().to_vec());
            }
        }
    } else {
        return Err(Error::Malformed(
            "X matrices are not triangular and no weight map is given".into(),
        ));
    }
    Ok(out)
}

fn diagonal_multiplicity(x: &[Matrix<FieldElem>], chi: &[FieldElem]) -> Option<usize> {
    if x.is_empty() || !x.iter().all(|m| m.is_upper_triangular()) {
        return None;
    }
    let n = x[0].rows();
    Some(
        (0..n)
            .filter(|&i| x.iter().zip(chi).all(|(m, c)| m.get(i, i) == c))
            .count(),
    )
}

fn report_from(dim: usize, spaces: Vec<WeightSpace>) -> WeightReport {
    let total: usize = spaces.iter().map(|s| s.dim()).sum();
    WeightReport {
        dim,
        calibrated: spaces.iter().all(|s| s.is_genuine()),
        complete: total == dim,
        spaces,
    }
}

/// Exact simultaneous eigen-analysis of the `X^{ω_k}`.
pub fn weight_space_analysis(m: &MatrixRep) -> Result<WeightReport> {
    let mut spaces = Vec::new();
    for chi in candidate_weights(m)? {
        let generalized = eigenspace(&m.x, &chi, true);
        if generalized.dim() == 0 {
            continue;
        }
        // a one-dimensional generalized space is spanned by an eigenvector
        let genuine_dim = if generalized.dim() == 1 {
            1
        } else {
            eigenspace(&m.x, &chi, false).dim()
        };
        spaces.push(WeightSpace {
            weight: Weight::from_values(chi)?,
            basis: (0..generalized.dim()).map(|k| generalized.vector(k)).collect(),
            genuine_dim,
        });
    }
    Ok(report_from(m.dim(), spaces))
}

/// The map `v ↦ (1 − t'(X^{−α_i}))·T_i v − (q − q⁻¹)·v` on a vector of
/// weight `t'`. It sends `M_{t'}` to `M_{s_i t'}` and keeps Laurent
/// polynomial entries Laurent.
fn intertwine(m: &MatrixRep, i: usize, x_neg: &FieldElem, v: &[FieldElem]) -> Vec<FieldElem> {
    let a = FieldElem::one().sub_ref(x_neg);
    let qq = FieldElem::q_minus_qinv();
    m.t[i]
        .mul_vec(v)
        .iter()
        .zip(v)
        .map(|(tv, vv)| a.mul_ref(tv).sub_ref(&qq.mul_ref(vv)))
        .collect()
}

fn diagonal_weight(m: &MatrixRep, w: usize) -> Result<Weight> {
    Weight::from_values(m.x.iter().map(|x| x.get(w, w).clone()).collect())
}

/// Weight vectors of the principal series `m = principal_series(h, t)`,
/// one per group element, obtained from `T_1 ⊗ v_t` by the maps of
/// [`intertwine`] along lexicographic reduced words. Each vector is checked
/// to be a simultaneous eigenvector. Returns `None` when the diagonal
/// characters are not pairwise distinct or some step degenerates.
pub fn intertwiner_vectors(h: &HeckeAlgebra, m: &MatrixRep) -> Result<Option<Vec<Vec<FieldElem>>>> {
    let g = h.group();
    let rs = h.root_system();
    let n = g.len();
    if m.dim() != n || m.rank() != h.rank() || !m.x.iter().all(|x| x.is_upper_triangular()) {
        return Ok(None);
    }
    let weights: Vec<Weight> = (0..n).map(|w| diagonal_weight(m, w)).collect::<Result<_>>()?;
    let distinct: std::collections::HashSet<&Weight> = weights.iter().collect();
    if distinct.len() != n {
        return Ok(None);
    }
    let mut vecs: Vec<Vec<FieldElem>> = Vec::with_capacity(n);
    for w in 0..n {
        let v = if w == 0 {
            let mut e = vec![FieldElem::zero(); n];
            e[0] = FieldElem::one();
            e
        } else {
            let i = g.word(w)[0];
            let prev = g.left_mul(i, w);
            let neg: Vec<i64> = rs.simple_root(i).iter().map(|c| -c).collect();
            intertwine(m, i, &weights[prev].value(&neg), &vecs[prev])
        };
        if v[w].is_zero() || v[w + 1..].iter().any(|e| !e.is_zero()) {
            return Ok(None);
        }
        for (x, chi) in m.x.iter().zip(weights[w].values()) {
            if x.mul_vec(&v).iter().zip(&v).any(|(a, b)| *a != b.mul_ref(chi)) {
                return Ok(None);
            }
        }
        vecs.push(v);
    }
    Ok(Some(vecs))
}

/// Weight analysis of a principal series module. For regular weights the
/// eigenvectors come from [`intertwiner_vectors`]; every diagonal character
/// then occurs once, so each generalized space is one-dimensional.
/// Otherwise this is [`weight_space_analysis`].
pub fn principal_series_analysis(h: &HeckeAlgebra, m: &MatrixRep) -> Result<WeightReport> {
    let Some(vecs) = intertwiner_vectors(h, m)? else {
        return weight_space_analysis(m);
    };
    let mut spaces = Vec::with_capacity(vecs.len());
    for (w, v) in vecs.into_iter().enumerate() {
        let weight = diagonal_weight(m, w)?;
        debug_assert_eq!(diagonal_multiplicity(&m.x, weight.values()), Some(1));
        spaces.push(WeightSpace {
            weight,
            basis: vec![v],
            genuine_dim: 1,
        });
    }
    Ok(report_from(m.dim(), spaces))
}

/// The principal series `m` in the basis of [`intertwiner_vectors`]. The
/// matrix of `T_i` is read off from `φ_i v_w = c·v_{s_i w}`, where each
/// scalar `c` is determined at one coordinate and then checked on the whole
/// vector.
pub fn principal_series_weight_basis(h: &HeckeAlgebra, m: &MatrixRep) -> Result<MatrixRep> {
    let vecs = intertwiner_vectors(h, m)?
        .ok_or_else(|| Error::Malformed("weight is not regular".into()))?;
    let g = h.group();
    let rs = h.root_system();
    let n = g.len();
    let weights: Vec<Weight> = (0..n).map(|w| diagonal_weight(m, w)).collect::<Result<_>>()?;
    let qq = FieldElem::q_minus_qinv();
    let mut tm = Vec::with_capacity(h.rank());
    for i in 0..h.rank() {
        let neg: Vec<i64> = rs.simple_root(i).iter().map(|c| -c).collect();
        let mut t = Matrix::zeros(n, n);
        for w in 0..n {
            let x_neg = weights[w].value(&neg);
            let y = intertwine(m, i, &x_neg, &vecs[w]);
            let s = g.left_mul(i, w);
            let c = y[s].try_div(&vecs[s][s])?;
            let (cn, cd) = (
                FieldElem::from_poly(c.d(), c.numer().clone()),
                FieldElem::from_poly(c.d(), c.denom().clone()),
            );
            if y.iter().zip(&vecs[s]).any(|(a, b)| a.mul_ref(&cd) != b.mul_ref(&cn)) {
                return Err(Error::Malformed(format!(
                    "intertwiner image is not proportional to a weight vector (T{}, index {w})",
                    i + 1
                )));
            }
            let a = FieldElem::one().sub_ref(&x_neg);
            t.set(w, w, qq.try_div(&a)?);
            t.set(s, w, c.try_div(&a)?);
        }
        tm.push(t);
    }
    let xm = (0..h.rank())
        .map(|k| Matrix::diagonal(&weights.iter().map(|wt| wt.values()[k].clone()).collect::<Vec<_>>()))
        .collect();
    let basis = weights.iter().map(|w| BasisLabel::Tag(w.label())).collect();
    MatrixRep::new(basis, tm, xm, Some(weights))
}

/// Dimension of the submodule generated by `v`.
pub fn cyclic_closure(m: &MatrixRep, v: &[FieldElem]) -> Result<usize> {
    if v.len() != m.dim() {
        return Err(Error::Dimension("vector length differs from module dimension".into()));
    }
    let mut basis = EchelonBasis::new(m.dim());
    let Some(first) = basis.insert(v) else {
        return Err(Error::ZeroVector);
    };
    let mut queue = vec![first];
    while let Some(u) = queue.pop() {
        for g in m.generators() {
            if basis.len() == m.dim() {
                return Ok(basis.len());
            }
            if let Some(new) = basis.insert(&g.mul_vec(&u)) {
                queue.push(new);
            }
        }
    }
    Ok(basis.len())
}

impl MatrixRep {
    /// The same module in a basis of simultaneous eigenvectors. Requires a
    /// calibrated module.
    pub fn in_weight_basis(&self, report: &WeightReport) -> Result<MatrixRep> {
        if !report.calibrated || !report.complete {
            return Err(Error::Malformed("module is not calibrated".into()));
        }
        let mut cols = Vec::new();
        let mut weights = Vec::new();
        let mut basis = Vec::new();
        for s in &report.spaces {
            for (k, v) in s.basis.iter().enumerate() {
                cols.push(v.clone());
                weights.push(s.weight.clone());
                basis.push(BasisLabel::Tag(if s.dim() == 1 {
                    s.weight.label()
                } else {
                    format!("{}#{}", s.weight.label(), k)
                }));
            }
        }
        let p = Matrix::from_columns(&cols, self.dim());
        let conj: Box<dyn Fn(&Matrix<FieldElem>) -> Result<Matrix<FieldElem>>> =
            if p.is_upper_triangular() {
                Box::new(|g| p.solve_upper_triangular(&g.mul(&p)?))
            } else {
                let p_inv = p.inverse()?;
                let p2 = p.clone();
                Box::new(move |g| p_inv.mul(&g.mul(&p2)?))
            };
        MatrixRep::new(
            basis,
            self.t.iter().map(&conj).collect::<Result<_>>()?,
            self.x.iter().map(&conj).collect::<Result<_>>()?,
            Some(weights),
        )
    }
}

/// `M(t)` on the basis `T_w ⊗ v_t`, ordered as the enumerated group.
pub fn principal_series(h: &HeckeAlgebra, t: &Weight) -> Result<MatrixRep> {
    let n = h.rank();
    let g = h.group();
    let size = g.len();
    if t.rank() != n {
        return Err(Error::Dimension("weight rank differs from root system".into()));
    }
    let mut tm = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = Matrix::zeros(size, size);
        for w in 0..size {
            for ((w2, _), c) in h.left_t(i, &h.t_w(w)).terms() {
                m.set(*w2, w, c.clone());
            }
        }
        tm.push(m);
    }
    let mut xm = Vec::with_capacity(n);
    for k in 0..n {
        let mut omega = vec![0; n];
        omega[k] = 1;
        let mut m = Matrix::<FieldElem>::zeros(size, size);
        for w in 0..size {
            for ((w2, mu), c) in h.x_times_t(&omega, w).terms() {
                let v = m.get(*w2, w).add_ref(&c.mul_ref(&t.value(mu)));
                m.set(*w2, w, v);
            }
        }
        xm.push(m);
    }
    let basis = (0..size).map(|w| BasisLabel::Word(g.word(w).to_vec())).collect();
    MatrixRep::new(basis, tm, xm, None)
}

/// `q^D − q^{−D}` evaluated at `u0` in the context `q = u^D`.
pub fn q_minus_qinv_at(d: u32, u0: &BigRational) -> BigRational {
    let q = num_traits::pow::pow(u0.clone(), d as usize);
    &q - <BigRational as One>::one() / &q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{CartanKind, Family, RootSystem};
    use crate::scalar::rat;
    use crate::torus::real_weight;

    fn setup(f: Family, n: usize, c: &[BigRational]) -> (HeckeAlgebra, MatrixRep) {
        let rs = RootSystem::new(CartanKind::new(f, n).unwrap()).unwrap();
        let h = HeckeAlgebra::new(&rs, 1000).unwrap();
        let t = real_weight(&rs, c).unwrap();
        let m = principal_series(&h, &t).unwrap();
        (h, m)
    }

    #[test]
    fn generic_a2_is_calibrated() {
        let (_, m) = setup(Family::A, 2, &[rat(1, 5), rat(1, 7)]);
        assert_eq!(m.dim(), 6);
        assert!(m.x.iter().all(|x| x.is_upper_triangular()));
        let r = weight_space_analysis(&m).unwrap();
        assert_eq!(r.spaces.len(), 6);
        assert!(r.calibrated && r.complete);
        for s in &r.spaces {
            let v = s.basis[0].clone();
            assert_eq!(cyclic_closure(&m, &v).unwrap(), 6);
        }
        let wb = m.in_weight_basis(&r).unwrap();
        assert!(wb.x.iter().all(|x| x.is_diagonal()));
    }

    #[test]
    fn intertwiners_agree_with_elimination() {
        for (f, c) in [
            (Family::A, vec![rat(1, 5), rat(1, 7)]),
            (Family::C, vec![rat(1, 2), rat(1, 3)]),
            (Family::G, vec![rat(1, 3), rat(1, 5)]),
        ] {
            let (h, m) = setup(f, 2, &c);
            let fast = principal_series_analysis(&h, &m).unwrap();
            let slow = weight_space_analysis(&m).unwrap();
            assert!(fast.calibrated && fast.complete);
            assert_eq!(fast.spaces.len(), slow.spaces.len());
            for s in &fast.spaces {
                let other = slow.space_of(&s.weight).expect("same support");
                assert_eq!(other.dim(), 1);
                // eigenvectors agree up to a scalar
                let v = &s.basis[0];
                let u = &other.basis[0];
                let k = (0..v.len()).rev().find(|&k| !v[k].is_zero()).unwrap();
                let ratio = v[k].try_div(&u[k]).unwrap();
                assert!(v.iter().zip(u).all(|(a, b)| *a == b.mul_ref(&ratio)));
            }
            let wb = principal_series_weight_basis(&h, &m).unwrap();
            assert!(wb.x.iter().all(|x| x.is_diagonal()));
            let rs = h.root_system();
            assert!(crate::relations::verify_defining_relations(rs, &wb).all_passed());
        }
    }

    #[test]
    fn singular_weight_falls_back() {
        let (h, m) = setup(Family::A, 2, &[rat(2, 3), rat(1, 3)]);
        assert!(intertwiner_vectors(&h, &m).unwrap().is_none());
        let r = principal_series_analysis(&h, &m).unwrap();
        assert_eq!(r.spaces.len(), 3);
        assert!(principal_series_weight_basis(&h, &m).is_err());
    }

    #[test]
    fn singular_a2_multiplicities() {
        let (_, m) = setup(Family::A, 2, &[rat(2, 3), rat(1, 3)]);
        let r = weight_space_analysis(&m).unwrap();
        assert_eq!(r.spaces.len(), 3);
        assert!(r.spaces.iter().all(|s| s.dim() == 2));
        assert!(r.complete);
        let dims: Vec<usize> = r
            .spaces
            .iter()
            .flat_map(|s| (0..s.genuine_dim).map(move |_| s))
            .map(|s| {
                let e = eigenspace(&m.x, s.weight.values(), false);
                cyclic_closure(&m, &e.vector(0)).unwrap()
            })
            .collect();
        assert!(dims.iter().any(|&d| d < 6));
    }

    #[test]
    fn rank_one_not_calibrated() {
        let (_, m) = setup(Family::A, 1, &[rat(0, 1)]);
        let r = weight_space_analysis(&m).unwrap();
        assert_eq!(r.spaces.len(), 1);
        assert_eq!(r.spaces[0].dim(), 2);
        assert_eq!(r.spaces[0].genuine_dim, 1);
        assert!(!r.calibrated);
    }

    #[test]
    fn closure_edge_cases() {
        let (_, m) = setup(Family::A, 1, &[rat(1, 3)]);
        let zero = vec![FieldElem::zero(); 2];
        assert!(matches!(cyclic_closure(&m, &zero), Err(Error::ZeroVector)));
        assert_eq!(cyclic_closure(&m, &[FieldElem::one(), FieldElem::one()]).unwrap(), 2);
    }
}
