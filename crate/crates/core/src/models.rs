//! Standard algebras used throughout the tests, benches and documentation.

use crate::algebra::{AlgebraError, FdAlgebra, SparseVec};
use crate::field::Field;

/// The ground field as a 1-dimensional algebra.
pub fn field_algebra<F: Field>(f: &F) -> FdAlgebra<F> {
    FdAlgebra::from_sparse(f, 1, vec![vec![(0, f.one())]], Some(vec!["1".into()])).expect("associative")
}

/// `k[x]/(x^n)` on the basis `1, x, …, x^{n-1}`.
pub fn truncated_poly<F: Field>(f: &F, n: usize) -> FdAlgebra<F> {
    let labels = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            i => format!("x{i}"),
        })
        .collect();
    let products = (0..n * n)
        .map(|ij| {
            let d = ij / n + ij % n;
            if d < n {
                vec![(d, f.one())]
            } else {
                Vec::new()
            }
        })
        .collect();
    FdAlgebra::from_sparse(f, n, products, Some(labels)).expect("associative")
}

/// `k^n` with coordinate idempotents as basis.
pub fn diagonal_algebra<F: Field>(f: &F, n: usize) -> FdAlgebra<F> {
    let labels = (1..=n).map(|i| format!("e{i}")).collect();
    let products = (0..n * n)
        .map(|ij| if ij / n == ij % n { vec![(ij / n, f.one())] } else { Vec::new() })
        .collect();
    FdAlgebra::from_sparse(f, n, products, Some(labels)).expect("associative")
}

/// Subalgebra of `M_n` spanned by the matrix units `E_ab` with `(a, b)`
/// allowed by `keep`, in row-major order.
fn matrix_unit_algebra<F: Field>(f: &F, n: usize, keep: impl Fn(usize, usize) -> bool) -> FdAlgebra<F> {
    let units: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| keep(a, b)).collect();
    let index = |a: usize, b: usize| units.iter().position(|&u| u == (a, b));
    let labels = units.iter().map(|(a, b)| format!("E{}{}", a + 1, b + 1)).collect();
    let m = units.len();
    let products: Vec<SparseVec<F>> = (0..m * m)
        .map(|ij| {
            let ((a, b), (c, d)) = (units[ij / m], units[ij % m]);
            if b == c {
                vec![(index(a, d).expect("closed under products"), f.one())]
            } else {
                Vec::new()
            }
        })
        .collect();
    FdAlgebra::from_sparse(f, m, products, Some(labels)).expect("associative")
}

/// The full matrix algebra `M_n(k)` on matrix units `E_11, E_12, …, E_nn`.
pub fn matrix_algebra<F: Field>(f: &F, n: usize) -> FdAlgebra<F> {
    matrix_unit_algebra(f, n, |_, _| true)
}

/// Upper-triangular `n × n` matrices on `E_ab`, `a ≤ b`, row-major.
pub fn upper_triangular<F: Field>(f: &F, n: usize) -> FdAlgebra<F> {
    matrix_unit_algebra(f, n, |a, b| a <= b)
}

/// `A × B` with the basis of `A` followed by the basis of `B`.
pub fn direct_product<F: Field>(a: &FdAlgebra<F>, b: &FdAlgebra<F>) -> Result<FdAlgebra<F>, AlgebraError> {
    let f = a.field();
    let (n, m) = (a.dim(), b.dim());
    let d = n + m;
    let products = (0..d * d)
        .map(|ij| {
            let (i, j) = (ij / d, ij % d);
            if i < n && j < n {
                a.basis_product(i, j).clone()
            } else if i >= n && j >= n {
                b.basis_product(i - n, j - n).iter().map(|(k, c)| (k + n, c.clone())).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut labels: Vec<String> = a.labels().iter().map(|l| format!("{l}.0")).collect();
    labels.extend(b.labels().iter().map(|l| format!("{l}.1")));
    FdAlgebra::from_sparse(f, d, products, Some(labels))
}

#[cfg(test)]
pub(crate) fn q(n: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}
