//! Exact dense linear algebra over a [`Field`]: row reduction, kernels,
//! subspaces in canonical echelon form, and quotient bases.
//!
//! Vectors are plain `Vec<F::Elem>`. A [`Subspace`] always stores the unique
//! reduced row echelon basis of its span, so subspace equality is matrix
//! equality.

use std::fmt;

use thiserror::Error;

use crate::field::Field;
use crate::par;

pub type Vector<F> = Vec<<F as Field>::Elem>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Row elimination switches to the parallel path above this many entries.
const PAR_THRESHOLD: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from row vectors; every row must have length `cols`.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix {
            field: field.clone(),
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged column");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, f: impl Fn(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn row_vectors(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let f = &self.field;
        let rows = par::map_range(self.rows, |i| {
            let mut out = vec![f.zero(); other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for (j, o) in out.iter_mut().enumerate() {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        f.mul_add_assign(o, a, b);
                    }
                }
            }
            out
        });
        Self::from_rows(f, other.cols, rows)
    }

    /// `M v`
    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        f.mul_add_assign(&mut acc, a, b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form, its rank and pivot columns.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut rows = self.row_vectors();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
                continue;
            };
            rows.swap(r, p);
            let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                if !f.is_zero(x) {
                    *x = f.mul(x, &inv);
                }
            }
            let pivot_row = rows[r].clone();
            let eliminate = |i: usize, row: &mut Vec<F::Elem>| {
                if i == r || f.is_zero(&row[c]) {
                    return;
                }
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&factor, y));
                    }
                }
            };
            if self.rows * self.cols >= PAR_THRESHOLD {
                par::for_each_mut(&mut rows, eliminate);
            } else {
                rows.iter_mut().enumerate().for_each(|(i, row)| eliminate(i, row));
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: Self::from_rows(f, self.cols, rows),
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// `{v : M v = 0}`
    pub fn kernel(&self) -> Subspace<F> {
        let f = &self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis: Vec<Vec<F::Elem>> = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(matrix.get(k, free));
                }
                v
            })
            .collect();
        Subspace::from_spanning(f, self.cols, &basis)
    }

    /// `{v : v^T M = 0}`
    pub fn left_kernel(&self) -> Subspace<F> {
        self.transpose().kernel()
    }

    /// A solution of `M x = b`, if one exists.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let aug = Self::from_fn(f, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(k, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Self::from_fn(f, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                f.one()
            } else {
                f.zero()
            }
        });
        let Rref { matrix, rank, pivots } = aug.rref();
        if rank < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(f, n, n, |i, j| matrix.get(i, n + j).clone()))
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(out, " ; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.format(x)).collect();
            write!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Incremental echelon basis. Rows are reduced against earlier rows in
/// insertion order, which is enough for exact membership tests without
/// back-substitution.
#[derive(Clone, Debug)]
pub struct EchelonBuilder<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> EchelonBuilder<F> {
    pub fn new(field: &F, ambient: usize) -> Self {
        EchelonBuilder {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, y) in v.iter_mut().zip(row).skip(p) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let f = &self.field;
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero");
        for x in r.iter_mut().skip(p) {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    pub fn into_subspace(self) -> Subspace<F> {
        Subspace::from_spanning(&self.field, self.ambient, &self.rows)
    }
}

/// A subspace of `F^n` stored as its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the standard vectors at `indices`.
    pub fn coordinate(field: &F, ambient: usize, indices: &[usize]) -> Self {
        let mut pivots = indices.to_vec();
        pivots.sort_unstable();
        pivots.dedup();
        let rows = pivots.iter().map(|&i| vec_ops::unit(field, ambient, i)).collect();
        Subspace {
            basis: Matrix::from_rows(field, ambient, rows),
            pivots,
        }
    }

    pub fn from_spanning(field: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Self {
        Self::from_matrix(&Matrix::from_rows(field, ambient, vectors.to_vec()))
    }

    /// The row space of `m`.
    pub fn from_matrix(m: &Matrix<F>) -> Self {
        let Rref { matrix, rank, pivots } = m.rref();
        let rows = (0..rank).map(|i| matrix.row(i).to_vec()).collect();
        Subspace {
            basis: Matrix::from_rows(m.field(), m.cols(), rows),
            pivots,
        }
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }
    /// Echelon basis rows.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn basis_vectors(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vectors()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its component along the echelon basis; zero at every pivot.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.ambient_dim());
        let f = self.field();
        let mut v = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, y) in v.iter_mut().zip(self.basis.row(k)) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = self.field();
        self.reduce(v).iter().all(|x| f.is_zero(x))
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Linear combination of the echelon basis.
    pub fn combine(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(coords.len(), self.dim());
        let f = self.field();
        let mut v = vec![f.zero(); self.ambient_dim()];
        for (k, c) in coords.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(self.basis.row(k)) {
                if !f.is_zero(y) {
                    f.mul_add_assign(x, c, y);
                }
            }
        }
        v
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        Ok(Self::from_matrix(&self.basis.vstack(&other.basis)))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let f = self.field();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f, self.ambient_dim()));
        }
        // x^T A lies in `other` iff it is killed by every annihilator of `other`.
        let annihilator = other.basis.kernel();
        if annihilator.is_zero() {
            return Ok(self.clone());
        }
        let constraints = annihilator.basis.mul(&self.basis.transpose());
        let coeffs = constraints.kernel();
        let vectors: Vec<Vec<F::Elem>> = coeffs
            .basis_vectors()
            .iter()
            .map(|c| self.combine(c))
            .collect();
        Ok(Self::from_spanning(f, self.ambient_dim(), &vectors))
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok((0..self.dim()).all(|k| other.contains(self.basis.row(k))))
    }

    /// Images of the echelon basis under a linear map given by its matrix.
    pub fn image_under(&self, map: &Matrix<F>) -> Self {
        let vectors: Vec<Vec<F::Elem>> = (0..self.dim()).map(|k| map.mul_vec(self.basis.row(k))).collect();
        Self::from_spanning(self.field(), map.rows(), &vectors)
    }

    /// Echelon basis vectors of `self` that extend a basis of `sub` to a basis
    /// of `self`, chosen greedily in basis order.
    pub fn complement_of(&self, sub: &Self) -> Result<Vec<Vec<F::Elem>>, LinalgError> {
        self.check_ambient(sub)?;
        let mut builder = EchelonBuilder::new(self.field(), self.ambient_dim());
        for v in sub.basis_vectors() {
            builder.insert(&v);
        }
        let mut chosen = Vec::new();
        for v in self.basis_vectors() {
            if builder.insert(&v) {
                chosen.push(v);
            }
        }
        Ok(chosen)
    }
}

/// A complement of a subspace spanned by standard basis vectors, with the
/// linear projection onto quotient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBasis<F: Field> {
    /// Ambient coordinates whose standard vectors represent the quotient basis.
    pub columns: Vec<usize>,
    /// `q × n` matrix sending a vector to its quotient coordinates.
    pub projection: Matrix<F>,
}

impl<F: Field> QuotientBasis<F> {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn representatives(&self) -> Vec<Vec<F::Elem>> {
        let f = self.projection.field();
        let n = self.projection.cols();
        self.columns
            .iter()
            .map(|&c| {
                let mut v = vec![f.zero(); n];
                v[c] = f.one();
                v
            })
            .collect()
    }

    pub fn project(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.projection.mul_vec(v)
    }

    /// `n × q` matrix including quotient coordinates back along the
    /// representatives; `projection · lift = id`.
    pub fn lift(&self) -> Matrix<F> {
        let f = self.projection.field();
        let mut m = Matrix::zeros(f, self.projection.cols(), self.dim());
        for (r, &c) in self.columns.iter().enumerate() {
            m.set(c, r, f.one());
        }
        m
    }
}

/// Complements `sub` by standard vectors, preferring the lowest indices:
/// the reduction runs on reversed coordinates so that pivots sit as far to
/// the right as possible.
pub fn quotient_basis<F: Field>(ambient_dim: usize, sub: &Subspace<F>) -> QuotientBasis<F> {
    assert_eq!(sub.ambient_dim(), ambient_dim);
    let f = sub.field();
    let n = ambient_dim;
    let reversed: Vec<Vec<F::Elem>> = sub
        .basis_vectors()
        .into_iter()
        .map(|mut v| {
            v.reverse();
            v
        })
        .collect();
    let rev = Subspace::from_spanning(f, n, &reversed);
    let mut is_pivot = vec![false; n];
    for &p in rev.pivots() {
        is_pivot[p] = true;
    }
    // Non-pivot columns in reversed coordinates, listed by original index.
    let rev_columns: Vec<usize> = (0..n).rev().filter(|&c| !is_pivot[c]).collect();
    let columns: Vec<usize> = rev_columns.iter().map(|&c| n - 1 - c).collect();
    let mut projection = Matrix::zeros(f, columns.len(), n);
    for (r, &c) in columns.iter().enumerate() {
        projection.set(r, c, f.one());
    }
    for (k, &p) in rev.pivots().iter().enumerate() {
        for (r, &c) in rev_columns.iter().enumerate() {
            let x = rev.basis().get(k, c);
            if !f.is_zero(x) {
                projection.set(r, n - 1 - p, f.neg(x));
            }
        }
    }
    QuotientBasis { columns, projection }
}

/// Helpers on raw coordinate vectors.
pub mod vec_ops {
    use crate::field::Field;

    pub fn zero<F: Field>(f: &F, n: usize) -> Vec<F::Elem> {
        vec![f.zero(); n]
    }

    pub fn unit<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
        let mut v = zero(f, n);
        v[i] = f.one();
        v
    }

    pub fn is_zero<F: Field>(f: &F, v: &[F::Elem]) -> bool {
        v.iter().all(|x| f.is_zero(x))
    }

    pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }

    pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
    }

    pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().map(|x| f.mul(c, x)).collect()
    }

    /// `acc += c * a`
    pub fn axpy<F: Field>(f: &F, acc: &mut [F::Elem], c: &F::Elem, a: &[F::Elem]) {
        if f.is_zero(c) {
            return;
        }
        for (x, y) in acc.iter_mut().zip(a) {
            if !f.is_zero(y) {
                f.mul_add_assign(x, c, y);
            }
        }
    }

    pub fn format<F: Field>(f: &F, v: &[F::Elem]) -> String {
        v.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(" ")
    }

    /// Lexicographic comparison under the field's canonical order.
    pub fn canonical_cmp<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> std::cmp::Ordering {
        for (x, y) in a.iter().zip(b) {
            let o = f.canonical_cmp(x, y);
            if o.is_ne() {
                return o;
            }
        }
        a.len().cmp(&b.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rationals> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(&Rationals, cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::identity(&Rationals, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let z = Matrix::zeros(&Rationals, 2, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());

        let empty = Matrix::zeros(&Rationals, 0, 0);
        assert_eq!(empty.rref().rank, 0);
    }

    #[test]
    fn rref_rank_one_example() {
        let r = qm(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r.matrix, qm(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(&Rationals, 4).kernel().is_zero());
        assert_eq!(Matrix::zeros(&Rationals, 3, 3).kernel().dim(), 3);
        let k = qm(&[&[1, 1]]).kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[q(1), q(-1)]));
        assert!(vec_ops::is_zero(&Rationals, &qm(&[&[1, 1]]).mul_vec(&k.basis_vectors()[0])));
    }

    #[test]
    fn subspace_operations() {
        let f = Rationals;
        let a = Subspace::from_spanning(&f, 4, &[vec![q(1), q(0), q(0), q(0)], vec![q(0), q(1), q(0), q(0)]]);
        let b = Subspace::from_spanning(&f, 4, &[vec![q(0), q(0), q(1), q(0)], vec![q(0), q(0), q(0), q(1)]]);
        assert_eq!(a.sum(&b).unwrap().dim(), 4);
        assert_eq!(a.intersection(&b).unwrap().dim(), 0);
        assert_eq!(a.sum(&a).unwrap(), a);
        assert_eq!(a.intersection(&a).unwrap(), a);

        let plane = Subspace::full(&f, 2);
        let diag = Subspace::from_spanning(&f, 2, &[vec![q(1), q(1)]]);
        assert_eq!(plane.intersection(&diag).unwrap(), diag);

        let c = Subspace::zero(&f, 3);
        assert!(matches!(a.sum(&c), Err(LinalgError::AmbientMismatch { left: 4, right: 3 })));
    }

    #[test]
    fn quotient_basis_examples() {
        let f = Rationals;
        let zero = Subspace::zero(&f, 3);
        let qb = quotient_basis(3, &zero);
        assert_eq!(qb.projection, Matrix::identity(&f, 3));
        assert_eq!(qb.representatives().len(), 3);

        let full = Subspace::full(&f, 3);
        let qb = quotient_basis(3, &full);
        assert_eq!(qb.dim(), 0);

        let line = Subspace::from_spanning(&f, 3, &[vec![q(1), q(1), q(0)]]);
        let qb = quotient_basis(3, &line);
        assert_eq!(qb.dim(), 2);
        assert!(vec_ops::is_zero(&f, &qb.project(&[q(1), q(1), q(0)])));
        assert_eq!(qb.projection.rank(), 2);
        assert!(qb.projection.mul(&qb.lift()).is_identity());
    }

    #[test]
    fn inverse_and_solve() {
        let m = qm(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let x = m.solve(&[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        assert!(qm(&[&[1, 1], &[1, 1]]).solve(&[q(1), q(2)]).is_none());
        assert_eq!(Matrix::zeros(&Rationals, 0, 0).inverse(), Some(Matrix::zeros(&Rationals, 0, 0)));
    }

    #[test]
    fn prime_field_elimination() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_rows(&f, 2, vec![vec![2, 4], vec![1, 2]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix.row(0), &[1, 2]);
    }
}
