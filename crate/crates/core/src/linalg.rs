//! Dense exact linear algebra over a field.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::FieldElem;

/// Field operations needed by the elimination routines.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl Scalar for FieldElem {
    fn zero() -> Self {
        FieldElem::zero()
    }
    fn one() -> Self {
        FieldElem::one()
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn inv(&self) -> Option<Self> {
        FieldElem::inv(self).ok()
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Scalar, E>(&self, f: impl Fn(&F) -> std::result::Result<G, E>) -> std::result::Result<Matrix<G>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<std::result::Result<_, _>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diag(&self) -> Vec<F> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// `self + c·I`.
    pub fn add_scalar(&self, c: &F) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let x = m.get(i, i).add(c);
            m.set(i, i, x);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = o.add(&a.mul(x));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j);
                if !x.is_zero() {
                    let y = x.mul(&inv);
                    m.set(r, j, y);
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let b = m.get(r, j);
                    if b.is_zero() {
                        continue;
                    }
                    let y = m.get(i, j).sub(&f.mul(b));
                    m.set(i, j, y);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space basis; each vector has a 1 at its free column and zeros
    /// at the other free columns.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(row, f).neg();
                }
                v
            })
            .collect()
    }

    /// Free columns of the kernel basis returned by [`Matrix::kernel`].
    pub fn kernel_free_columns(&self) -> Vec<usize> {
        let (_, pivots) = self.rref();
        (0..self.cols).filter(|c| !pivots.contains(c)).collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Solves `self · Y = b` for an upper triangular `self` with nonzero
    /// diagonal, by back substitution.
    pub fn solve_upper_triangular(&self, b: &Self) -> Result<Self> {
        if !self.is_square() || b.rows != self.rows || !self.is_upper_triangular() {
            return Err(Error::Dimension("expected an upper triangular system".into()));
        }
        let n = self.rows;
        let inv_diag: Vec<F> = (0..n)
            .map(|i| self.get(i, i).inv().ok_or(Error::DivisionByZero))
            .collect::<Result<_>>()?;
        let mut y = Self::zeros(n, b.cols);
        for c in 0..b.cols {
            for i in (0..n).rev() {
                let mut acc = b.get(i, c).clone();
                for k in i + 1..n {
                    let a = self.get(i, k);
                    let yk = y.get(k, c);
                    if !a.is_zero() && !yk.is_zero() {
                        acc = acc.sub(&a.mul(yk));
                    }
                }
                if !acc.is_zero() {
                    y.set(i, c, acc.mul(&inv_diag[i]));
                }
            }
        }
        Ok(y)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(blocks: &[&Self]) -> Result<Self> {
        let cols = blocks.first().map(|b| b.cols).unwrap_or(0);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

/// Incrementally maintained echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    dim: usize,
    // each vector has a leading 1 at its pivot, pivots strictly distinct
    vectors: Vec<(usize, Vec<F>)>,
}

impl<F: Scalar> EchelonBasis<F> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, vectors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (p, b) in &self.vectors {
            let f = v[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent; returns the normalized new vector.
    pub fn insert(&mut self, v: &[F]) -> Option<Vec<F>> {
        let r = self.reduce(v);
        let p = r.iter().position(|x| !x.is_zero())?;
        let inv = r[p].inv().expect("nonzero");
        let r: Vec<F> = r.iter().map(|x| if x.is_zero() { F::zero() } else { x.mul(&inv) }).collect();
        for (_, b) in self.vectors.iter_mut() {
            let f = b[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in b.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        self.vectors.push((p, r.clone()));
        Some(r)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vec<F>> {
        self.vectors.iter().map(|(_, v)| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn q(k: i64) -> FieldElem {
        FieldElem::q_pow(k)
    }

    #[test]
    fn rational_inverse_and_kernel() {
        let m = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(3, 1), rat(4, 1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        let s = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
        ])
        .unwrap();
        let k = s.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(s.mul_vec(v).iter().all(|x| Scalar::is_zero(x)));
        }
        assert!(s.inverse().is_err());
    }

    #[test]
    fn field_kernel_of_jordan_block() {
        let m = Matrix::from_rows(vec![
            vec![q(2), FieldElem::one()],
            vec![FieldElem::zero(), q(2)],
        ])
        .unwrap();
        let shifted = m.add_scalar(&q(2).neg_ref());
        assert_eq!(shifted.kernel().len(), 1);
        assert_eq!(shifted.pow(2).unwrap().kernel().len(), 2);
    }

    #[test]
    fn echelon_basis_spans() {
        let mut e = EchelonBasis::new(3);
        assert!(e.insert(&[rat(1, 1), rat(1, 1), rat(0, 1)]).is_some());
        assert!(e.insert(&[rat(2, 1), rat(2, 1), rat(0, 1)]).is_none());
        assert!(e.insert(&[rat(0, 1), rat(1, 1), rat(1, 1)]).is_some());
        assert!(e.contains(&[rat(1, 1), rat(2, 1), rat(1, 1)]));
        assert!(!e.contains(&[rat(0, 1), rat(0, 1), rat(1, 1)]));
        assert_eq!(e.len(), 2);
    }
}
