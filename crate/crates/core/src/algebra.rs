//! Finite-dimensional associative algebras given by structure constants.
//!
//! The product of basis elements `b_i b_j = Σ_k c_ijk b_k` is stored sparsely
//! per pair `(i, j)`. Construction verifies associativity exactly and detects
//! a unity element if one exists.

use rand::Rng;
use thiserror::Error;

use crate::field::Field;
use crate::linalg::{quotient_basis, vec_ops, EchelonBuilder, LinalgError, Matrix, QuotientBasis, Subspace};
use crate::par;
use crate::poly::{self, Poly};

/// Sparse coordinate vector: sorted `(index, nonzero coefficient)` pairs.
pub type SparseVec<F> = Vec<(usize, <F as Field>::Elem)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("structure tensor shape mismatch: {0}")]
    Shape(String),
    #[error("elements belong to algebras of different dimension ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,
    #[error("subspace is not closed under multiplication")]
    NotASubalgebra,
    #[error("algebra has no unity element")]
    NoUnity,
    #[error("characteristic {p} is too small for the trace-form radical of a {dim}-dimensional algebra")]
    CharacteristicTooSmall { p: u64, dim: usize },
    #[error("ideal is not nilpotent")]
    NotNilpotent,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdAlgebra<F: Field> {
    field: F,
    dim: usize,
    /// `products[i * dim + j]` holds `b_i b_j`.
    products: Vec<SparseVec<F>>,
    unity: Option<Vec<F::Elem>>,
    labels: Vec<String>,
}

fn sparse_from_dense<F: Field>(f: &F, v: &[F::Elem]) -> SparseVec<F> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !f.is_zero(x))
        .map(|(k, x)| (k, x.clone()))
        .collect()
}

/// Sums `(index, coefficient)` terms into a sorted sparse vector without zeros.
pub(crate) fn sparse_sum<F: Field>(f: &F, terms: impl Iterator<Item = (usize, F::Elem)>) -> SparseVec<F> {
    let mut v: Vec<(usize, F::Elem)> = terms.collect();
    v.sort_by_key(|(k, _)| *k);
    let mut out: SparseVec<F> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((l, acc)) if *l == k => f.add_assign(acc, &c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !f.is_zero(c));
    out
}

impl<F: Field> FdAlgebra<F> {
    /// Builds an algebra from the products of basis pairs (row-major, dense
    /// coordinate vectors), verifying associativity and detecting the unity.
    pub fn from_products(field: &F, dim: usize, products: Vec<Vec<F::Elem>>, labels: Option<Vec<String>>) -> Result<Self, AlgebraError> {
        if products.len() != dim * dim {
            return Err(AlgebraError::Shape(format!("expected {} products, got {}", dim * dim, products.len())));
        }
        if let Some(bad) = products.iter().position(|p| p.len() != dim) {
            return Err(AlgebraError::Shape(format!("product {bad} has length {}", products[bad].len())));
        }
        let sparse = products.iter().map(|p| sparse_from_dense(field, p)).collect();
        Self::from_sparse(field, dim, sparse, labels)
    }

    /// Like [`from_products`](Self::from_products) with sparse products.
    pub fn from_sparse(field: &F, dim: usize, mut products: Vec<SparseVec<F>>, labels: Option<Vec<String>>) -> Result<Self, AlgebraError> {
        if products.len() != dim * dim {
            return Err(AlgebraError::Shape(format!("expected {} products, got {}", dim * dim, products.len())));
        }
        for p in products.iter_mut() {
            p.retain(|(_, c)| !field.is_zero(c));
            p.sort_by_key(|(k, _)| *k);
            if p.windows(2).any(|w| w[0].0 == w[1].0) || p.iter().any(|(k, _)| *k >= dim) {
                return Err(AlgebraError::Shape("invalid sparse product".into()));
            }
        }
        let labels = match labels {
            Some(l) if l.len() == dim => l,
            Some(l) => return Err(AlgebraError::Shape(format!("{} labels for dimension {dim}", l.len()))),
            None => (0..dim).map(|i| format!("b{i}")).collect(),
        };
        let mut alg = FdAlgebra {
            field: field.clone(),
            dim,
            products,
            unity: None,
            labels,
        };
        alg.check_associativity()?;
        alg.unity = alg.detect_unity();
        Ok(alg)
    }

    /// Builds an algebra whose products are given by a closure.
    pub fn from_fn(field: &F, dim: usize, labels: Option<Vec<String>>, f: impl Fn(usize, usize) -> Vec<F::Elem> + Sync + Send) -> Result<Self, AlgebraError> {
        let products = par::map_range(dim * dim, |ij| sparse_from_dense(field, &f(ij / dim, ij % dim)));
        Self::from_sparse(field, dim, products, labels)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unity(&self) -> Option<&[F::Elem]> {
        self.unity.as_deref()
    }
    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.products[i * self.dim + j]
    }

    pub fn zero(&self) -> Vec<F::Elem> {
        vec_ops::zero(&self.field, self.dim)
    }
    pub fn basis_element(&self, i: usize) -> Vec<F::Elem> {
        vec_ops::unit(&self.field, self.dim, i)
    }

    /// Bilinear product of two coordinate vectors.
    pub fn mul(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(x.len(), self.dim, "left factor dimension");
        assert_eq!(y.len(), self.dim, "right factor dimension");
        let f = &self.field;
        let mut out = self.zero();
        let ynz: Vec<usize> = (0..self.dim).filter(|&j| !f.is_zero(&y[j])).collect();
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for &j in &ynz {
                let prod = self.basis_product(i, j);
                if prod.is_empty() {
                    continue;
                }
                let c = f.mul(xi, &y[j]);
                for (k, s) in prod {
                    f.mul_add_assign(&mut out[*k], &c, s);
                }
            }
        }
        out
    }

    pub fn checked_mul(&self, x: &[F::Elem], y: &[F::Elem]) -> Result<Vec<F::Elem>, AlgebraError> {
        if x.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch(self.dim, x.len()));
        }
        if y.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch(self.dim, y.len()));
        }
        Ok(self.mul(x, y))
    }

    pub fn mul3(&self, x: &[F::Elem], y: &[F::Elem], z: &[F::Elem]) -> Vec<F::Elem> {
        self.mul(&self.mul(x, y), z)
    }

    /// `b_i · x`
    fn mul_basis_left(&self, i: usize, x: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero();
        for (j, xj) in x.iter().enumerate() {
            if f.is_zero(xj) {
                continue;
            }
            for (k, s) in self.basis_product(i, j) {
                f.mul_add_assign(&mut out[*k], xj, s);
            }
        }
        out
    }

    /// `x · b_j`
    fn mul_basis_right(&self, x: &[F::Elem], j: usize) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (k, s) in self.basis_product(i, j) {
                f.mul_add_assign(&mut out[*k], xi, s);
            }
        }
        out
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mul_matrix(&self, x: &[F::Elem]) -> Matrix<F> {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim).map(|j| self.mul_basis_right(x, j)).collect();
        Matrix::from_columns(&self.field, self.dim, &cols)
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mul_matrix(&self, x: &[F::Elem]) -> Matrix<F> {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim).map(|j| self.mul_basis_left(j, x)).collect();
        Matrix::from_columns(&self.field, self.dim, &cols)
    }

    /// Full scan of all basis triples; reports the first failure in
    /// lexicographic order.
    pub fn check_associativity(&self) -> Result<(), AlgebraError> {
        let n = self.dim;
        let f = &self.field;
        let bad = par::find_first(n, |i| {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let jk = self.basis_product(j, k);
                    if ij.is_empty() && jk.is_empty() {
                        continue;
                    }
                    let lhs = sparse_sum(f, ij.iter().flat_map(|(m, c)| self.basis_product(*m, k).iter().map(move |(l, s)| (*l, f.mul(c, s)))));
                    let rhs = sparse_sum(f, jk.iter().flat_map(|(m, c)| self.basis_product(i, *m).iter().map(move |(l, s)| (*l, f.mul(c, s)))));
                    if lhs != rhs {
                        return Some((j, k));
                    }
                }
            }
            None
        });
        match bad {
            Some((i, (j, k))) => Err(AlgebraError::NonAssociative(i, j, k)),
            None => Ok(()),
        }
    }

    /// Whether `u` is a two-sided identity on every basis element.
    pub fn is_unity(&self, u: &[F::Elem]) -> bool {
        u.len() == self.dim
            && par::find_first(self.dim, |i| {
                let b = self.basis_element(i);
                (self.mul(u, &b) != b || self.mul(&b, u) != b).then_some(())
            })
            .is_none()
    }

    fn detect_unity(&self) -> Option<Vec<F::Elem>> {
        let n = self.dim;
        let f = &self.field;
        if n == 0 {
            return Some(Vec::new());
        }
        // Unknown u: Σ_a u_a c_{a i k} = δ_ik and Σ_a u_a c_{i a k} = δ_ik.
        // Equations are fed into an augmented echelon basis until the
        // solution is pinned down; the candidate is then verified in full.
        let mut eqs = EchelonBuilder::new(f, n + 1);
        'outer: for i in 0..n {
            for side in 0..2 {
                let mut rows: Vec<Vec<F::Elem>> = vec![vec_ops::zero(f, n + 1); n];
                for a in 0..n {
                    let prod = if side == 0 { self.basis_product(a, i) } else { self.basis_product(i, a) };
                    for (k, c) in prod {
                        rows[*k][a] = c.clone();
                    }
                }
                rows[i][n] = f.one();
                for r in rows {
                    eqs.insert(&r);
                }
                if eqs.dim() >= n {
                    break 'outer;
                }
            }
        }
        let sub = eqs.into_subspace();
        if sub.pivots().last() == Some(&n) || sub.dim() < n {
            return None;
        }
        let u: Vec<F::Elem> = (0..n).map(|k| sub.basis().get(k, n).clone()).collect();
        self.is_unity(&u).then_some(u)
    }

    /// Largest power `x^k` stopping at zero, for nilpotency checks on elements.
    pub fn pow(&self, x: &[F::Elem], k: usize) -> Vec<F::Elem> {
        let mut acc = x.to_vec();
        for _ in 1..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Whether `x` is nilpotent (checked by `x^dim+1 = 0`).
    pub fn is_nilpotent_element(&self, x: &[F::Elem]) -> bool {
        let f = &self.field;
        let mut acc = x.to_vec();
        for _ in 0..=self.dim {
            if vec_ops::is_zero(f, &acc) {
                return true;
            }
            acc = self.mul(&acc, x);
        }
        vec_ops::is_zero(f, &acc)
    }

    /// Span of all products `u v` with `u ∈ a`, `v ∈ b`.
    pub fn product_space(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        let av = a.basis_vectors();
        let bv = b.basis_vectors();
        let products: Vec<Vec<Vec<F::Elem>>> =
            par::map_range(av.len(), |i| bv.iter().map(|y| self.mul(&av[i], y)).collect());
        let mut builder = EchelonBuilder::new(&self.field, self.dim);
        for row in products {
            for v in row {
                builder.insert(&v);
                if builder.dim() == self.dim {
                    return Subspace::full(&self.field, self.dim);
                }
            }
        }
        builder.into_subspace()
    }

    /// Minimal `t ≥ 1` with `I^t = 0`, or `None` when `I` is not nilpotent.
    pub fn nilpotency_index(&self, ideal: &Subspace<F>) -> Option<usize> {
        let mut power = ideal.clone();
        let mut t = 1;
        while !power.is_zero() {
            if t > self.dim + 1 {
                return None;
            }
            let next = self.product_space(&power, ideal);
            if next == power {
                return None;
            }
            power = next;
            t += 1;
        }
        Some(t)
    }

    /// The subspace `e A f` for elements `e`, `f`.
    pub fn corner(&self, e: &[F::Elem], g: &[F::Elem]) -> Subspace<F> {
        let images = par::map_range(self.dim, |k| self.mul3(e, &self.basis_element(k), g));
        Subspace::from_spanning(&self.field, self.dim, &images)
    }

    /// `Z(A) = {x : x b_i = b_i x for all i}`, cut down one basis element at a time.
    pub fn center(&self) -> Subspace<F> {
        let f = &self.field;
        let mut current = Subspace::full(f, self.dim);
        for i in 0..self.dim {
            if current.is_zero() {
                break;
            }
            let basis = current.basis_vectors();
            let cols: Vec<Vec<F::Elem>> = basis
                .iter()
                .map(|x| vec_ops::sub(f, &self.mul_basis_right(x, i), &self.mul_basis_left(i, x)))
                .collect();
            let m = Matrix::from_columns(f, self.dim, &cols);
            let kernel = m.kernel();
            if kernel.dim() == basis.len() {
                continue;
            }
            let next: Vec<Vec<F::Elem>> = kernel.basis_vectors().iter().map(|c| current.combine(c)).collect();
            current = Subspace::from_spanning(f, self.dim, &next);
        }
        current
    }

    /// Minimal polynomial of `x` inside the unital subalgebra whose unity is
    /// `unit` (the algebra's own unity, or an idempotent `e` with `x ∈ eAe`).
    pub fn min_poly(&self, x: &[F::Elem], unit: &[F::Elem]) -> Poly<F> {
        let f = &self.field;
        let mut powers: Vec<Vec<F::Elem>> = vec![unit.to_vec()];
        loop {
            let next = self.mul(powers.last().unwrap(), x);
            let m = Matrix::from_columns(f, self.dim, &powers);
            if let Some(c) = m.solve(&next) {
                let mut p: Poly<F> = c.iter().map(|a| f.neg(a)).collect();
                p.push(f.one());
                return p;
            }
            powers.push(next);
        }
    }

    /// Evaluates a polynomial at `x`, with `unit` standing for the constant 1.
    pub fn eval_poly(&self, p: &[F::Elem], x: &[F::Elem], unit: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut acc = self.zero();
        for c in p.iter().rev() {
            acc = self.mul(&acc, x);
            vec_ops::axpy(f, &mut acc, c, unit);
        }
        acc
    }

    /// A random element with small integer coefficients.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Vec<F::Elem> {
        (0..self.dim).map(|_| self.field.random_small(rng, bound)).collect()
    }

    /// A random element of a subspace.
    pub fn random_in<R: Rng + ?Sized>(&self, space: &Subspace<F>, rng: &mut R, bound: i64) -> Vec<F::Elem> {
        let c: Vec<F::Elem> = (0..space.dim()).map(|_| self.field.random_small(rng, bound)).collect();
        space.combine(&c)
    }

    /// The algebra structure on `space`, in the given basis of it (or its
    /// echelon basis). Returns the algebra and the `dim × k` embedding matrix.
    pub fn subalgebra(&self, basis: Option<Vec<Vec<F::Elem>>>, space: &Subspace<F>, labels: Option<Vec<String>>) -> Result<(FdAlgebra<F>, Matrix<F>), AlgebraError> {
        let f = &self.field;
        let basis = basis.unwrap_or_else(|| space.basis_vectors());
        let k = basis.len();
        if k != space.dim() {
            return Err(AlgebraError::Shape("basis size differs from subspace dimension".into()));
        }
        // echelon coordinates -> chosen-basis coordinates
        let echelon_coords: Vec<Vec<F::Elem>> = basis
            .iter()
            .map(|v| space.coordinates(v).ok_or(AlgebraError::NotASubalgebra))
            .collect::<Result<_, _>>()?;
        let to_basis = Matrix::from_rows(f, k, echelon_coords)
            .inverse()
            .ok_or_else(|| AlgebraError::Shape("basis is not independent".into()))?;
        let products: Vec<Option<Vec<F::Elem>>> = par::map_range(k * k, |ij| {
            let p = self.mul(&basis[ij / k], &basis[ij % k]);
            space.coordinates(&p).map(|c| {
                let m = Matrix::from_rows(f, k, vec![c]);
                m.mul(&to_basis).row(0).to_vec()
            })
        });
        let products: Vec<Vec<F::Elem>> = products.into_iter().collect::<Option<_>>().ok_or(AlgebraError::NotASubalgebra)?;
        let sub = FdAlgebra::from_products(f, k, products, labels)?;
        let embedding = Matrix::from_columns(f, self.dim, &basis);
        Ok((sub, embedding))
    }

    /// The same algebra with a unity adjoined as new basis element 0.
    pub fn adjoin_unity(&self) -> FdAlgebra<F> {
        let f = &self.field;
        let n = self.dim + 1;
        let mut products = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let p: SparseVec<F> = match (i, j) {
                    (0, 0) => vec![(0, f.one())],
                    (0, j) => vec![(j, f.one())],
                    (i, 0) => vec![(i, f.one())],
                    (i, j) => self.basis_product(i - 1, j - 1).iter().map(|(k, c)| (k + 1, c.clone())).collect(),
                };
                products.push(p);
            }
        }
        let mut labels = vec!["1".to_string()];
        labels.extend(self.labels.iter().cloned());
        FdAlgebra {
            field: f.clone(),
            dim: n,
            products,
            unity: Some(vec_ops::unit(f, n, 0)),
            labels,
        }
    }

    /// Replaces the display labels.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if labels.len() != self.dim {
            return Err(AlgebraError::Shape(format!("{} labels for dimension {}", labels.len(), self.dim)));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Formats a coordinate vector as a combination of basis labels.
    pub fn format_element(&self, x: &[F::Elem]) -> String {
        let f = &self.field;
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(k, c)| {
                if f.is_one(c) {
                    self.labels[k].clone()
                } else {
                    format!("{}*{}", f.format(c), self.labels[k])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// A two-sided ideal, stored as a canonical subspace of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal<F: Field> {
    space: Subspace<F>,
}

impl<F: Field> Ideal<F> {
    /// Verifies closure under left and right multiplication by every basis element.
    pub fn new(alg: &FdAlgebra<F>, space: Subspace<F>) -> Result<Self, AlgebraError> {
        if space.ambient_dim() != alg.dim() {
            return Err(AlgebraError::DimensionMismatch(alg.dim(), space.ambient_dim()));
        }
        let basis = space.basis_vectors();
        let bad = par::find_first(basis.len(), |r| {
            (0..alg.dim())
                .any(|i| !space.contains(&alg.mul_basis_left(i, &basis[r])) || !space.contains(&alg.mul_basis_right(&basis[r], i)))
                .then_some(())
        });
        if bad.is_some() {
            return Err(AlgebraError::NotAnIdeal);
        }
        Ok(Ideal { space })
    }

    /// Wraps a subspace known to be an ideal by construction.
    pub(crate) fn trusted(space: Subspace<F>) -> Self {
        Ideal { space }
    }

    pub fn zero(alg: &FdAlgebra<F>) -> Self {
        Ideal {
            space: Subspace::zero(alg.field(), alg.dim()),
        }
    }

    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Smallest two-sided ideal containing the generators, by saturation of the
/// span under multiplication by basis elements.
pub fn ideal_closure<F: Field>(alg: &FdAlgebra<F>, generators: &[Vec<F::Elem>]) -> Ideal<F> {
    let all: Vec<usize> = (0..alg.dim()).collect();
    ideal_closure_by(alg, generators, &all)
}

/// Frontier vectors multiplied per batch; bounds the candidates held at once.
const CLOSURE_BATCH: usize = 16;

/// Ideal generated by `generators`, closing only under multiplication by the
/// basis elements `multipliers`. Equals [`ideal_closure`] whenever those basis
/// elements generate `alg` as a unital algebra (e.g. paths of length ≤ 1).
pub fn ideal_closure_by<F: Field>(alg: &FdAlgebra<F>, generators: &[Vec<F::Elem>], multipliers: &[usize]) -> Ideal<F> {
    let f = alg.field();
    let mut builder = EchelonBuilder::new(f, alg.dim());
    let mut frontier: Vec<Vec<F::Elem>> = Vec::new();
    for g in generators {
        if builder.insert(g) {
            frontier.push(g.clone());
        }
    }
    // Each round multiplies the vectors added in the previous round.
    while !frontier.is_empty() && builder.dim() < alg.dim() {
        let mut next = Vec::new();
        for chunk in frontier.chunks(CLOSURE_BATCH) {
            let candidates: Vec<Vec<Vec<F::Elem>>> = par::map_range(chunk.len(), |r| {
                let v = &chunk[r];
                let mut out = Vec::with_capacity(2 * multipliers.len());
                for &i in multipliers {
                    for w in [alg.mul_basis_left(i, v), alg.mul_basis_right(v, i)] {
                        if !vec_ops::is_zero(f, &w) {
                            out.push(w);
                        }
                    }
                }
                out
            });
            for v in candidates.into_iter().flatten() {
                if builder.insert(&v) {
                    next.push(v);
                }
            }
            if builder.dim() == alg.dim() {
                break;
            }
        }
        frontier = next;
    }
    Ideal {
        space: builder.into_subspace(),
    }
}

/// `A / I` together with its quotient basis (projection and lift).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientAlgebra<F: Field> {
    pub algebra: FdAlgebra<F>,
    pub basis: QuotientBasis<F>,
}

impl<F: Field> QuotientAlgebra<F> {
    pub fn project(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        self.basis.project(x)
    }
    /// A preimage of `y` along the representatives.
    pub fn lift(&self, y: &[F::Elem]) -> Vec<F::Elem> {
        self.basis.lift().mul_vec(y)
    }
    pub fn quotient_map(&self) -> &Matrix<F> {
        &self.basis.projection
    }
}

pub fn quotient_algebra<F: Field>(alg: &FdAlgebra<F>, ideal: &Ideal<F>) -> Result<QuotientAlgebra<F>, AlgebraError> {
    let f = alg.field();
    if ideal.space().ambient_dim() != alg.dim() {
        return Err(AlgebraError::DimensionMismatch(alg.dim(), ideal.space().ambient_dim()));
    }
    let basis = quotient_basis(alg.dim(), ideal.space());
    let n = alg.dim();
    let q = basis.dim();
    // π(b_m) for every basis element, sparse.
    let images: Vec<SparseVec<F>> = par::map_range(n, |m| {
        (0..q)
            .filter(|&r| !f.is_zero(basis.projection.get(r, m)))
            .map(|r| (r, basis.projection.get(r, m).clone()))
            .collect()
    });
    let project_sparse = |v: &SparseVec<F>| -> SparseVec<F> {
        sparse_sum(f, v.iter().flat_map(|(m, c)| images[*m].iter().map(move |(r, s)| (*r, f.mul(c, s)))))
    };
    let reps = &basis.columns;
    let products: Vec<SparseVec<F>> = par::map_range(q * q, |rs| project_sparse(alg.basis_product(reps[rs / q], reps[rs % q])));
    let labels = reps.iter().map(|&c| alg.labels()[c].clone()).collect();
    let quotient = FdAlgebra::from_sparse(f, q, products, Some(labels))?;
    // π(b_i b_j) = π(b_i) π(b_j) on all basis pairs; this also certifies that
    // the kernel of π is an ideal.
    let bad = par::find_first(n * n, |ij| {
        let (i, j) = (ij / n, ij % n);
        let lhs = project_sparse(alg.basis_product(i, j));
        let mut terms = Vec::new();
        for (a, x) in &images[i] {
            for (b, y) in &images[j] {
                let xy = f.mul(x, y);
                terms.extend(quotient.basis_product(*a, *b).iter().map(|(k, s)| (*k, f.mul(&xy, s))));
            }
        }
        let rhs = sparse_sum(f, terms.into_iter());
        (lhs != rhs).then_some(())
    });
    if bad.is_some() {
        return Err(AlgebraError::NotAnIdeal);
    }
    Ok(QuotientAlgebra { algebra: quotient, basis })
}

/// Output of [`radical`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalData<F: Field> {
    pub radical: Ideal<F>,
    /// Minimal `t` with `r^t = 0`.
    pub nilpotency_index: usize,
    pub quotient: QuotientAlgebra<F>,
    /// The computation ran in the algebra with a unity adjoined.
    pub adjoined_unity: bool,
    /// Certificate: the trace form of the quotient is nondegenerate.
    pub quotient_semisimple: bool,
}

impl<F: Field> RadicalData<F> {
    pub fn semisimple_quotient(&self) -> &FdAlgebra<F> {
        &self.quotient.algebra
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RadicalOptions {
    /// Adjoin a unity to unity-free inputs instead of failing with `NoUnity`.
    pub adjoin_unity: bool,
}

/// `{x : tr(L_x L_y) = 0 for all y}` computed from the Gram matrix
/// `G_ij = Σ_k c_ijk tr(L_{b_k})`.
pub fn trace_form_kernel<F: Field>(alg: &FdAlgebra<F>) -> Subspace<F> {
    let f = alg.field();
    let n = alg.dim();
    let traces: Vec<F::Elem> = par::map_range(n, |k| {
        let mut t = f.zero();
        for m in 0..n {
            if let Some((_, c)) = alg.basis_product(k, m).iter().find(|(l, _)| *l == m) {
                f.add_assign(&mut t, c);
            }
        }
        t
    });
    let rows = par::map_range(n, |i| {
        (0..n)
            .map(|j| {
                let mut g = f.zero();
                for (k, c) in alg.basis_product(i, j) {
                    f.mul_add_assign(&mut g, c, &traces[*k]);
                }
                g
            })
            .collect::<Vec<_>>()
    });
    Matrix::from_rows(f, n, rows).left_kernel()
}

/// Jacobson radical via the trace form, valid in characteristic 0 and in
/// characteristic `p > dim`.
pub fn radical<F: Field>(alg: &FdAlgebra<F>) -> Result<RadicalData<F>, AlgebraError> {
    radical_with(alg, RadicalOptions::default())
}

pub fn radical_with<F: Field>(alg: &FdAlgebra<F>, opts: RadicalOptions) -> Result<RadicalData<F>, AlgebraError> {
    let f = alg.field();
    let p = f.characteristic();
    if alg.unity().is_none() && !opts.adjoin_unity {
        return Err(AlgebraError::NoUnity);
    }
    let adjoined = alg.unity().is_none();
    let work_dim = alg.dim() + usize::from(adjoined);
    if p != 0 && p as usize <= work_dim {
        return Err(AlgebraError::CharacteristicTooSmall { p, dim: work_dim });
    }
    let space = if adjoined {
        // r(A) = r(A+) ∩ A for the unitization A+ = k·1 ⊕ A.
        let plus = alg.adjoin_unity();
        let old_part: Vec<Vec<F::Elem>> = (1..plus.dim()).map(|i| vec_ops::unit(f, plus.dim(), i)).collect();
        let inside = trace_form_kernel(&plus).intersection(&Subspace::from_spanning(f, plus.dim(), &old_part))?;
        let vectors: Vec<Vec<F::Elem>> = inside.basis_vectors().into_iter().map(|v| v[1..].to_vec()).collect();
        Subspace::from_spanning(f, alg.dim(), &vectors)
    } else {
        trace_form_kernel(alg)
    };
    let radical = Ideal::new(alg, space)?;
    let nilpotency_index = alg.nilpotency_index(radical.space()).ok_or(AlgebraError::NotNilpotent)?;
    let quotient = quotient_algebra(alg, &radical)?;
    let quotient_semisimple = trace_form_kernel(&quotient.algebra).is_zero();
    Ok(RadicalData {
        radical,
        nilpotency_index,
        quotient,
        adjoined_unity: adjoined,
        quotient_semisimple,
    })
}

/// One refinement step `e ↦ 3e² − 2e³` towards an idempotent.
pub fn refine_idempotent<F: Field>(alg: &FdAlgebra<F>, e: &[F::Elem]) -> Vec<F::Elem> {
    let f = alg.field();
    let e2 = alg.mul(e, e);
    let e3 = alg.mul(&e2, e);
    vec_ops::sub(f, &vec_ops::scale(f, &f.from_i64(3), &e2), &vec_ops::scale(f, &f.from_i64(2), &e3))
}

/// The polynomial `E` with `E ≡ 1 mod a` and `E ≡ 0 mod b` for coprime `a`, `b`.
pub fn crt_idempotent_poly<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let (g, _s, t) = poly::ext_gcd(f, a, b);
    debug_assert_eq!(g, vec![f.one()]);
    poly::mul(f, &t, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::models::*;

    #[test]
    fn ground_field_is_unital() {
        let k = field_algebra(&Rationals);
        assert_eq!(k.unity(), Some(&[q(1)][..]));
    }

    #[test]
    fn dual_numbers() {
        let a = truncated_poly(&Rationals, 2);
        assert_eq!(a.unity(), Some(&[q(1), q(0)][..]));
        // (a + b x)(c + d x) = ac + (ad + bc) x
        let x = vec![q(2), q(3)];
        let y = vec![q(5), q(7)];
        assert_eq!(a.mul(&x, &y), vec![q(10), q(14 + 15)]);
        assert_eq!(a.mul(&x, &a.zero()), a.zero());
    }

    #[test]
    fn matrix_algebra_unity() {
        let m2 = matrix_algebra(&Rationals, 2);
        // E11 + E22 in the basis E11, E12, E21, E22
        assert_eq!(m2.unity(), Some(&[q(1), q(0), q(0), q(1)][..]));
    }

    #[test]
    fn non_associative_is_rejected() {
        // b0 b0 = b1, b1 b0 = b0, everything else zero: (b0 b0) b0 = b0, b0 (b0 b0) = 0
        let f = Rationals;
        let mut prods = vec![vec![q(0), q(0)]; 4];
        prods[0] = vec![q(0), q(1)];
        prods[2] = vec![q(1), q(0)];
        assert_eq!(FdAlgebra::from_products(&f, 2, prods, None), Err(AlgebraError::NonAssociative(0, 0, 0)));
    }

    #[test]
    fn ideal_closure_examples() {
        let t2 = upper_triangular(&Rationals, 2); // E11, E12, E22
        assert!(ideal_closure(&t2, &[]).space().is_zero());
        assert!(ideal_closure(&t2, &[t2.unity().unwrap().to_vec()]).space().is_full());
        let i = ideal_closure(&t2, &[t2.basis_element(1)]);
        assert_eq!(i.space(), &Subspace::from_spanning(&Rationals, 3, &[t2.basis_element(1)]));
    }

    #[test]
    fn quotient_examples() {
        let f = Rationals;
        let t2 = upper_triangular(&f, 2);
        let zero = Ideal::zero(&t2);
        assert_eq!(quotient_algebra(&t2, &zero).unwrap().algebra.dim(), 3);
        let all = ideal_closure(&t2, &[t2.unity().unwrap().to_vec()]);
        assert_eq!(quotient_algebra(&t2, &all).unwrap().algebra.dim(), 0);
        let j = ideal_closure(&t2, &[t2.basis_element(1)]);
        let qa = quotient_algebra(&t2, &j).unwrap().algebra;
        assert_eq!(qa.dim(), 2);
        assert_eq!(qa.basis_product(0, 0), &vec![(0, q(1))]);
        assert_eq!(qa.basis_product(1, 1), &vec![(1, q(1))]);
        assert!(qa.basis_product(0, 1).is_empty());
        assert!(qa.basis_product(1, 0).is_empty());
        let not_ideal = Subspace::from_spanning(&f, 3, &[t2.basis_element(0)]);
        assert_eq!(Ideal::new(&t2, not_ideal), Err(AlgebraError::NotAnIdeal));
    }

    #[test]
    fn radical_examples() {
        let f = Rationals;
        let m2 = matrix_algebra(&f, 2);
        let r = radical(&m2).unwrap();
        assert!(r.radical.space().is_zero());
        assert_eq!(r.nilpotency_index, 1);
        assert_eq!(r.semisimple_quotient().dim(), 4);

        let a = truncated_poly(&f, 3);
        let r = radical(&a).unwrap();
        assert_eq!(r.radical.space(), &Subspace::from_spanning(&f, 3, &[a.basis_element(1), a.basis_element(2)]));
        assert_eq!(r.nilpotency_index, 3);
        assert!(r.quotient_semisimple);

        let kk = diagonal_algebra(&f, 2);
        assert!(radical(&kk).unwrap().radical.space().is_zero());
    }

    #[test]
    fn radical_errors() {
        let f5 = crate::field::PrimeField::new(3).unwrap();
        let a = truncated_poly(&f5, 3);
        assert_eq!(radical(&a), Err(AlgebraError::CharacteristicTooSmall { p: 3, dim: 3 }));
        let f = Rationals;
        // the 1-dim algebra with zero product has no unity
        let z = FdAlgebra::from_products(&f, 1, vec![vec![q(0)]], None).unwrap();
        assert_eq!(radical(&z), Err(AlgebraError::NoUnity));
        let r = radical_with(&z, RadicalOptions { adjoin_unity: true }).unwrap();
        assert!(r.adjoined_unity);
        assert_eq!(r.radical.dim(), 1);
        assert_eq!(r.nilpotency_index, 2);
    }

    #[test]
    fn center_examples() {
        let f = Rationals;
        assert!(truncated_poly(&f, 3).center().is_full());
        let m2 = matrix_algebra(&f, 2);
        let z = m2.center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(m2.unity().unwrap()));
        let t2 = upper_triangular(&f, 2);
        let z = t2.center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(t2.unity().unwrap()));
    }

    #[test]
    fn min_poly_of_idempotent() {
        let f = Rationals;
        let m2 = matrix_algebra(&f, 2);
        let p = m2.min_poly(&m2.basis_element(0), m2.unity().unwrap());
        assert_eq!(p, vec![q(0), q(-1), q(1)]);
        let nil = m2.min_poly(&m2.basis_element(1), m2.unity().unwrap());
        assert_eq!(nil, vec![q(0), q(0), q(1)]);
    }
}
