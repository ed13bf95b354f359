//! Gradations `A = ⊕_g A_g` induced by a generalized matrix decomposition
//! and a bijection from its index set to a finite abelian group.

use thiserror::Error;

use crate::algebra::{radical, AlgebraError, FdAlgebra};
use crate::field::Field;
use crate::gpa::TruncatedGpa;
use crate::idempotent::{
    gm_decompose, lift_idempotents, merge_idempotents, tail_merge_partition, wedderburn_blocks, GmDecomposition, IdempotentError, IdempotentSet,
};
use crate::linalg::Subspace;
use crate::poly::RootFinder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("vertex map is not a bijection")]
    NotBijective,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("m = {m} exceeds the available {max} idempotents")]
    MTooLarge { m: usize, max: usize },
    #[error("m must be at least 1")]
    ZeroM,
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Idempotent(#[from] IdempotentError),
}

/// A finite abelian group on `{0, …, n-1}` with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    table: Vec<Vec<usize>>,
    neg: Vec<usize>,
}

impl AbelianGroup {
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1);
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        let neg = (0..m).map(|a| (m - a) % m).collect();
        AbelianGroup { table, neg }
    }

    /// Validates closure, identity `0`, inverses, commutativity and
    /// associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GradingError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GradingError::InvalidGroup("table must be square over 0..n".into()));
        }
        if (0..n).any(|a| table[0][a] != a) {
            return Err(GradingError::InvalidGroup("0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if table[a][b] != table[b][a] {
                    return Err(GradingError::InvalidGroup(format!("{a} + {b} is not commutative")));
                }
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GradingError::InvalidGroup(format!("({a}, {b}, {c}) is not associative")));
                    }
                }
            }
        }
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0).ok_or_else(|| GradingError::InvalidGroup(format!("{a} has no inverse"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AbelianGroup { table, neg })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.table[a][self.neg[b]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmGrading<F: Field> {
    pub group: AbelianGroup,
    pub vertex_map: Vec<usize>,
    pub decomposition: GmDecomposition<F>,
    pub components: Vec<Subspace<F>>,
}

impl<F: Field> GmGrading<F> {
    pub fn component(&self, g: usize) -> &Subspace<F> {
        &self.components[g]
    }

    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(Subspace::dim).collect()
    }

    /// Degree of the block `A_ij`: `φ(i) − φ(j)`.
    pub fn block_degree(&self, i: usize, j: usize) -> usize {
        self.group.sub(self.vertex_map[i], self.vertex_map[j])
    }

    /// The degree of `x` if it lies in a single nonzero component.
    pub fn degree_of(&self, x: &[F::Elem]) -> Option<usize> {
        self.components.iter().position(|c| !c.is_zero() && c.contains(x))
    }

    /// Dimensions add up and the components span the algebra.
    pub fn check_direct_sum(&self, alg: &FdAlgebra<F>) -> bool {
        let total: usize = self.components.iter().map(Subspace::dim).sum();
        let mut span = Subspace::zero(alg.field(), alg.dim());
        for c in &self.components {
            span = span.sum(c).expect("same ambient");
        }
        total == alg.dim() && span.is_full()
    }

    /// `A_g · A_h ⊆ A_{g+h}` on component bases, for all pairs.
    pub fn check_multiplicative(&self, alg: &FdAlgebra<F>) -> bool {
        let n = self.group.order();
        let bases: Vec<_> = self.components.iter().map(Subspace::basis_vectors).collect();
        (0..n).all(|g| {
            (0..n).all(|h| {
                let target = &self.components[self.group.add(g, h)];
                bases[g].iter().all(|x| bases[h].iter().all(|y| target.contains(&alg.mul(x, y))))
            })
        })
    }

    /// Every block of the finer decomposition is homogeneous here.
    pub fn is_coarsening_of(&self, finer: &GmDecomposition<F>) -> bool {
        let n = finer.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let block = finer.block(i, j);
                block.is_zero() || self.components.iter().any(|c| block.is_subspace_of(c).unwrap_or(false))
            })
        })
    }
}

/// Grades by `A_g = Σ_{φ(i) = φ(j) + g} A_ij`.
pub fn gm_grade<F: Field>(alg: &FdAlgebra<F>, decomp: &GmDecomposition<F>, group: AbelianGroup, vertex_map: &[usize]) -> Result<GmGrading<F>, GradingError> {
    let n = decomp.size();
    if vertex_map.len() != n || group.order() != n {
        return Err(GradingError::SizeMismatch(format!(
            "{n} idempotents, {} vertex images, group of order {}",
            vertex_map.len(),
            group.order()
        )));
    }
    let mut seen = vec![false; n];
    for &g in vertex_map {
        if g >= n || std::mem::replace(&mut seen[g], true) {
            return Err(GradingError::NotBijective);
        }
    }
    let f = alg.field();
    let mut components = vec![Subspace::zero(f, alg.dim()); n];
    for i in 0..n {
        for j in 0..n {
            let g = group.sub(vertex_map[i], vertex_map[j]);
            components[g] = components[g].sum(decomp.block(i, j)).expect("same ambient");
        }
    }
    let grading = GmGrading {
        group,
        vertex_map: vertex_map.to_vec(),
        decomposition: decomp.clone(),
        components,
    };
    debug_assert!(grading.check_direct_sum(alg));
    Ok(grading)
}

/// Merges `set` to `m` idempotents and grades by `Z_m` with the identity map.
pub fn grade_set_via_merge<F: Field>(alg: &FdAlgebra<F>, set: &IdempotentSet<F>, m: usize) -> Result<GmGrading<F>, GradingError> {
    if m == 0 {
        return Err(GradingError::ZeroM);
    }
    if m > set.len() {
        return Err(GradingError::MTooLarge { m, max: set.len() });
    }
    let merged = merge_idempotents(alg, set, &tail_merge_partition(set.len(), m))?;
    let decomp = gm_decompose(alg, &merged)?;
    let ids: Vec<usize> = (0..m).collect();
    gm_grade(alg, &decomp, AbelianGroup::cyclic(m), &ids)
}

/// Lifted central idempotents of `Λ/r`, one per Wedderburn block.
pub fn block_idempotents<F: RootFinder>(alg: &FdAlgebra<F>, seed: u64) -> Result<IdempotentSet<F>, GradingError> {
    if alg.unity().is_none() {
        return Err(AlgebraError::NoUnity.into());
    }
    let rad = radical(alg)?;
    let blocks = wedderburn_blocks(rad.semisimple_quotient(), seed)?;
    Ok(lift_idempotents(alg, &rad.radical, &rad.quotient, &blocks.central_idempotents)?.set)
}

/// A `Z_m` gradation for `1 ≤ m ≤ n_WA(Λ)`.
pub fn grade_via_merge<F: RootFinder>(alg: &FdAlgebra<F>, m: usize, seed: u64) -> Result<GmGrading<F>, GradingError> {
    grade_set_via_merge(alg, &block_idempotents(alg, seed)?, m)
}

/// A `Z_m` gradation of a truncated path algebra for `1 ≤ m ≤ |D_0|`.
pub fn grade_gpa_via_merge<F: Field>(gpa: &TruncatedGpa<F>, m: usize) -> Result<GmGrading<F>, GradingError> {
    grade_set_via_merge(&gpa.algebra, &gpa.gm_unit, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::gpa::{build_truncated_gpa, Quiver, RelationSet, VertexAlgebraFamily};
    use crate::idempotent::validate_complete_set;
    use crate::models::*;

    #[test]
    fn trivial_grading() {
        let t2 = upper_triangular(&Rationals, 2);
        let g = grade_via_merge(&t2, 1, 0).unwrap();
        assert_eq!(g.component_dims(), vec![3]);
        assert!(g.check_multiplicative(&t2));
    }

    #[test]
    fn upper_triangular_two_by_two() {
        let t2 = upper_triangular(&Rationals, 2);
        let set = validate_complete_set(&t2, &[t2.basis_element(0), t2.basis_element(2)]).unwrap();
        let d = gm_decompose(&t2, &set).unwrap();
        // φ(1) = 1, φ(2) = 0 in Z_2.
        let g = gm_grade(&t2, &d, AbelianGroup::cyclic(2), &[1, 0]).unwrap();
        assert_eq!(g.component(0).basis_vectors(), vec![t2.basis_element(0), t2.basis_element(2)]);
        assert_eq!(g.component(1).basis_vectors(), vec![t2.basis_element(1)]);
        assert!(g.check_direct_sum(&t2));
        assert!(g.check_multiplicative(&t2));
    }

    #[test]
    fn diagonal_algebra_is_concentrated_in_degree_zero() {
        let k3 = diagonal_algebra(&Rationals, 3);
        let g = grade_via_merge(&k3, 3, 0).unwrap();
        assert_eq!(g.component_dims(), vec![3, 0, 0]);
    }

    #[test]
    fn upper_triangular_three_by_three_m2() {
        let t3 = upper_triangular(&Rationals, 3);
        let g = grade_via_merge(&t3, 2, 0).unwrap();
        assert_eq!(g.component_dims(), vec![4, 2]);
        assert!(g.check_multiplicative(&t3));
        assert!(matches!(grade_via_merge(&t3, 4, 0), Err(GradingError::MTooLarge { m: 4, max: 3 })));
        let fine = gm_decompose(&t3, &block_idempotents(&t3, 0).unwrap()).unwrap();
        assert!(g.is_coarsening_of(&fine));
    }

    #[test]
    fn a2_gpa_grading() {
        let qv = Quiver::from_names(&["1", "2"], &[("x", "1", "2")]).unwrap();
        let fam = VertexAlgebraFamily::trivial(&Rationals, &qv);
        let gpa = build_truncated_gpa(&qv, &fam, &RelationSet::empty(2)).unwrap();
        let g = grade_gpa_via_merge(&gpa, 2).unwrap();
        assert_eq!(g.component(1).basis_vectors(), vec![gpa.arrow_element(0)]);
    }

    #[test]
    fn bad_vertex_maps() {
        let t2 = upper_triangular(&Rationals, 2);
        let set = validate_complete_set(&t2, &[t2.basis_element(0), t2.basis_element(2)]).unwrap();
        let d = gm_decompose(&t2, &set).unwrap();
        assert_eq!(gm_grade(&t2, &d, AbelianGroup::cyclic(2), &[1, 1]), Err(GradingError::NotBijective));
        assert!(matches!(gm_grade(&t2, &d, AbelianGroup::cyclic(3), &[0, 1]), Err(GradingError::SizeMismatch(_))));
    }

    #[test]
    fn klein_table() {
        let v4 = AbelianGroup::from_table(vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]]).unwrap();
        assert_eq!(v4.sub(1, 2), 3);
        assert!(AbelianGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        let k4 = diagonal_algebra(&Rationals, 4);
        let set = validate_complete_set(&k4, &(0..4).map(|i| k4.basis_element(i)).collect::<Vec<_>>()).unwrap();
        let d = gm_decompose(&k4, &set).unwrap();
        let g = gm_grade(&k4, &d, v4, &[3, 2, 1, 0]).unwrap();
        assert_eq!(g.component_dims(), vec![4, 0, 0, 0]);
    }
}
