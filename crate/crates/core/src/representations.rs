//! Module systems over a gm algebra, local unitary modules, and
//! representations of quivers with vertex algebras.
//!
//! Convention: an element of `A_ij` acts `M_j → M_i`, so its matrix is
//! `d_i × d_j`. For an arrow `x: i → j` the representation map is
//! `f_x: V_j → V_i` (a `d_i × d_j` matrix), and a basis path
//! `a_0 x_1 a_1 … x_n a_n` acts by `ρ(a_0) f_{x_1} ρ(a_1) ⋯ f_{x_n} ρ(a_n)`.

use thiserror::Error;

use crate::algebra::FdAlgebra;
use crate::field::Field;
use crate::gpa::{enumerate_paths, format_path, BasisPath, GpaError, Quiver, TruncatedGpa, VertexAlgebraFamily, DEFAULT_MAX_PATHS};
use crate::idempotent::{gm_decompose, GmDecomposition, IdempotentError};
use crate::linalg::{vec_ops, Matrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unity of block {0} does not act as the identity")]
    NotUnitary(usize),
    #[error("action is not compatible with multiplication: {0}")]
    NotAModule(String),
    #[error("relation {relation} does not act as zero (witness {witness})")]
    RelationNotSatisfied { relation: String, witness: String },
    #[error(transparent)]
    Idempotent(#[from] IdempotentError),
    #[error(transparent)]
    Gpa(#[from] GpaError),
}

/// `{M_i}` with block actions `A_ij × M_j → M_i`, stored as one matrix per
/// echelon basis vector of each block `A_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSystem<F: Field> {
    pub dims: Vec<usize>,
    /// `actions[i][j][k]` is the `d_i × d_j` matrix of the `k`-th basis
    /// vector of `A_ij`.
    pub actions: Vec<Vec<Vec<Matrix<F>>>>,
}

/// The matrix of `x ∈ A_ij`, via its coordinates in the block basis.
fn block_action<F: Field>(f: &F, block: &Subspace<F>, mats: &[Matrix<F>], rows: usize, cols: usize, x: &[F::Elem]) -> Option<Matrix<F>> {
    let coords = block.coordinates(x)?;
    let mut acc = Matrix::zeros(f, rows, cols);
    for (c, m) in coords.iter().zip(mats) {
        if !f.is_zero(c) {
            acc = acc.add(&m.scale(c));
        }
    }
    Some(acc)
}

impl<F: Field> ModuleSystem<F> {
    /// The zero system.
    pub fn zero(alg: &FdAlgebra<F>, decomp: &GmDecomposition<F>) -> Self {
        let f = alg.field();
        let n = decomp.size();
        ModuleSystem {
            dims: vec![0; n],
            actions: (0..n)
                .map(|i| (0..n).map(|j| vec![Matrix::zeros(f, 0, 0); decomp.block(i, j).dim()]).collect())
                .collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Matrix of an element of the block `A_ij`.
    pub fn action_of(&self, decomp: &GmDecomposition<F>, i: usize, j: usize, x: &[F::Elem]) -> Option<Matrix<F>> {
        let f = decomp.block(i, j).field();
        block_action(f, decomp.block(i, j), &self.actions[i][j], self.dims[i], self.dims[j], x)
    }

    /// Shapes, unit action `e_jj = id` and compatibility `(ca)x = c(ax)`.
    pub fn validate(&self, alg: &FdAlgebra<F>, decomp: &GmDecomposition<F>) -> Result<(), RepError> {
        let n = decomp.size();
        if self.dims.len() != n || self.actions.len() != n {
            return Err(RepError::Shape(format!("expected {n} vertices")));
        }
        for i in 0..n {
            if self.actions[i].len() != n {
                return Err(RepError::Shape(format!("row {i} of actions has the wrong length")));
            }
            for j in 0..n {
                let mats = &self.actions[i][j];
                if mats.len() != decomp.block(i, j).dim() {
                    return Err(RepError::Shape(format!("block ({i}, {j}) needs {} matrices", decomp.block(i, j).dim())));
                }
                if mats.iter().any(|m| m.rows() != self.dims[i] || m.cols() != self.dims[j]) {
                    return Err(RepError::Shape(format!("block ({i}, {j}) matrices must be {} x {}", self.dims[i], self.dims[j])));
                }
            }
        }
        for j in 0..n {
            let e = decomp.unit().get(j);
            let m = self.action_of(decomp, j, j, e).ok_or(RepError::NotUnitary(j))?;
            if !m.is_identity() {
                return Err(RepError::NotUnitary(j));
            }
        }
        for s in 0..n {
            for i in 0..n {
                let cs = decomp.block(s, i).basis_vectors();
                for j in 0..n {
                    let as_ = decomp.block(i, j).basis_vectors();
                    for (p, c) in cs.iter().enumerate() {
                        for (q, a) in as_.iter().enumerate() {
                            let ca = alg.mul(c, a);
                            let lhs = self
                                .action_of(decomp, s, j, &ca)
                                .ok_or_else(|| RepError::NotAModule(format!("product outside block ({s}, {j})")))?;
                            let rhs = self.actions[s][i][p].mul(&self.actions[i][j][q]);
                            if lhs != rhs {
                                return Err(RepError::NotAModule(format!("blocks ({s}, {i}) and ({i}, {j})")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A finite-dimensional module with one action matrix per algebra basis
/// element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalUnitaryModule<F: Field> {
    pub dim: usize,
    pub action: Vec<Matrix<F>>,
}

impl<F: Field> LocalUnitaryModule<F> {
    pub fn act(&self, f: &F, x: &[F::Elem]) -> Matrix<F> {
        let mut acc = Matrix::zeros(f, self.dim, self.dim);
        for (c, m) in x.iter().zip(&self.action) {
            if !f.is_zero(c) {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }

    /// Representation property on basis pairs and `Σ e_ii = id`.
    pub fn validate(&self, alg: &FdAlgebra<F>, decomp: &GmDecomposition<F>) -> Result<(), RepError> {
        let f = alg.field();
        if self.action.len() != alg.dim() || self.action.iter().any(|m| m.rows() != self.dim || m.cols() != self.dim) {
            return Err(RepError::Shape("one square matrix per basis element is required".into()));
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = self.act(f, &alg.mul(&alg.basis_element(i), &alg.basis_element(j)));
                if lhs != self.action[i].mul(&self.action[j]) {
                    return Err(RepError::NotAModule(format!("basis pair ({i}, {j})")));
                }
            }
        }
        let u = decomp.unit().sum(f, alg.dim());
        if !self.act(f, &u).is_identity() {
            return Err(RepError::NotUnitary(usize::MAX));
        }
        Ok(())
    }

    /// `A M = M`: the images of all basis actions span the space.
    pub fn generates_whole_space(&self, f: &F) -> bool {
        let cols: Vec<Vec<F::Elem>> = self.action.iter().flat_map(|m| (0..m.cols()).map(|c| m.column(c)).collect::<Vec<_>>()).collect();
        Subspace::from_spanning(f, self.dim, &cols).is_full()
    }

    /// `P⁻¹ · action · P` for every basis element.
    pub fn conjugate(&self, p: &Matrix<F>) -> Option<Self> {
        let inv = p.inverse()?;
        Some(LocalUnitaryModule {
            dim: self.dim,
            action: self.action.iter().map(|m| inv.mul(m).mul(p)).collect(),
        })
    }
}

/// `H`: the direct sum `⊕ M_i` with block-matrix action.
pub fn h_assemble<F: Field>(alg: &FdAlgebra<F>, decomp: &GmDecomposition<F>, ms: &ModuleSystem<F>) -> Result<LocalUnitaryModule<F>, RepError> {
    ms.validate(alg, decomp)?;
    let f = alg.field();
    let n = decomp.size();
    let mut offsets = vec![0; n + 1];
    for i in 0..n {
        offsets[i + 1] = offsets[i] + ms.dims[i];
    }
    let d = offsets[n];
    let action = (0..alg.dim())
        .map(|k| {
            let b = alg.basis_element(k);
            let mut m = Matrix::zeros(f, d, d);
            for i in 0..n {
                for j in 0..n {
                    let part = alg.mul3(decomp.unit().get(i), &b, decomp.unit().get(j));
                    if vec_ops::is_zero(f, &part) {
                        continue;
                    }
                    let block = ms.action_of(decomp, i, j, &part).expect("component lies in its block");
                    for r in 0..ms.dims[i] {
                        for c in 0..ms.dims[j] {
                            m.set(offsets[i] + r, offsets[j] + c, block.get(r, c).clone());
                        }
                    }
                }
            }
            m
        })
        .collect();
    Ok(LocalUnitaryModule { dim: d, action })
}

/// The canonical bases of `M_i = e_ii M` (echelon bases of column spaces),
/// as the columns of one `d × d` matrix in block order.
pub fn split_basis<F: Field>(f: &F, decomp: &GmDecomposition<F>, m: &LocalUnitaryModule<F>) -> (Vec<Subspace<F>>, Matrix<F>) {
    let mut spaces = Vec::new();
    let mut columns = Vec::new();
    for i in 0..decomp.size() {
        let e = m.act(f, decomp.unit().get(i));
        let cols: Vec<Vec<F::Elem>> = (0..e.cols()).map(|c| e.column(c)).collect();
        let space = Subspace::from_spanning(f, m.dim, &cols);
        columns.extend(space.basis_vectors());
        spaces.push(space);
    }
    (spaces, Matrix::from_columns(f, m.dim, &columns))
}

/// `G`: `M_i = e_ii M` with restricted actions.
pub fn g_split<F: Field>(alg: &FdAlgebra<F>, decomp: &GmDecomposition<F>, m: &LocalUnitaryModule<F>) -> Result<ModuleSystem<F>, RepError> {
    m.validate(alg, decomp)?;
    let f = alg.field();
    let n = decomp.size();
    let (spaces, _) = split_basis(f, decomp, m);
    let dims: Vec<usize> = spaces.iter().map(Subspace::dim).collect();
    let actions = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    decomp
                        .block(i, j)
                        .basis_vectors()
                        .iter()
                        .map(|a| {
                            let am = m.act(f, a);
                            let cols: Vec<Vec<F::Elem>> = spaces[j]
                                .basis_vectors()
                                .iter()
                                .map(|v| spaces[i].coordinates(&am.mul_vec(v)).expect("a maps M_j into M_i"))
                                .collect();
                            Matrix::from_columns(f, dims[i], &cols)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let ms = ModuleSystem { dims, actions };
    ms.validate(alg, decomp)?;
    Ok(ms)
}

/// `H(G(M))` equals `M` after the change of basis to block order.
pub fn hg_matches_after_change_of_basis<F: Field>(alg: &FdAlgebra<F>, decomp: &GmDecomposition<F>, m: &LocalUnitaryModule<F>) -> Result<bool, RepError> {
    let f = alg.field();
    let ms = g_split(alg, decomp, m)?;
    let back = h_assemble(alg, decomp, &ms)?;
    let (_, p) = split_basis(f, decomp, m);
    Ok(m.conjugate(&p).is_some_and(|c| c == back))
}

/// The regular module `A` acting on itself from the left.
pub fn regular_module<F: Field>(alg: &FdAlgebra<F>) -> LocalUnitaryModule<F> {
    LocalUnitaryModule {
        dim: alg.dim(),
        action: (0..alg.dim()).map(|k| alg.left_mul_matrix(&alg.basis_element(k))).collect(),
    }
}

/// A representation of `(D, Ω)`: unitary `Ω_ii`-modules `V_i` and arrow maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRepresentation<F: Field> {
    pub dims: Vec<usize>,
    /// `vertex_actions[i][b]`: action of basis element `b` of `Ω_ii` on `V_i`.
    pub vertex_actions: Vec<Vec<Matrix<F>>>,
    /// `arrow_maps[a]` for `a: i → j` is `d_i × d_j`, i.e. `V_j → V_i`.
    pub arrow_maps: Vec<Matrix<F>>,
}

impl<F: Field> QuiverRepresentation<F> {
    pub fn zero(quiver: &Quiver, family: &VertexAlgebraFamily<F>) -> Self {
        let f = family.field();
        QuiverRepresentation {
            dims: vec![0; quiver.vertex_count()],
            vertex_actions: (0..quiver.vertex_count()).map(|v| vec![Matrix::zeros(f, 0, 0); family.get(v).dim()]).collect(),
            arrow_maps: vec![Matrix::zeros(f, 0, 0); quiver.arrows().len()],
        }
    }

    /// `Ω_ii = k` everywhere: vertex actions are identities.
    pub fn with_trivial_vertices(f: &F, dims: Vec<usize>, arrow_maps: Vec<Matrix<F>>) -> Self {
        let vertex_actions = dims.iter().map(|&d| vec![Matrix::identity(f, d)]).collect();
        QuiverRepresentation {
            dims,
            vertex_actions,
            arrow_maps,
        }
    }

    pub fn validate(&self, quiver: &Quiver, family: &VertexAlgebraFamily<F>) -> Result<(), RepError> {
        let f = family.field();
        let nv = quiver.vertex_count();
        if self.dims.len() != nv || self.vertex_actions.len() != nv || self.arrow_maps.len() != quiver.arrows().len() {
            return Err(RepError::Shape("representation does not match the quiver".into()));
        }
        for v in 0..nv {
            let omega = family.get(v);
            let acts = &self.vertex_actions[v];
            let d = self.dims[v];
            if acts.len() != omega.dim() || acts.iter().any(|m| m.rows() != d || m.cols() != d) {
                return Err(RepError::Shape(format!("vertex {} needs {} matrices of size {d}", quiver.vertices()[v], omega.dim())));
            }
            let module = LocalUnitaryModule { dim: d, action: acts.clone() };
            for a in 0..omega.dim() {
                for b in 0..omega.dim() {
                    if module.act(f, &omega.mul(&omega.basis_element(a), &omega.basis_element(b))) != acts[a].mul(&acts[b]) {
                        return Err(RepError::NotAModule(format!("vertex {}", quiver.vertices()[v])));
                    }
                }
            }
            if !module.act(f, omega.unity().expect("unital")).is_identity() {
                return Err(RepError::NotUnitary(v));
            }
        }
        for (a, arrow) in quiver.arrows().iter().enumerate() {
            let m = &self.arrow_maps[a];
            if m.rows() != self.dims[arrow.source] || m.cols() != self.dims[arrow.target] {
                return Err(RepError::Shape(format!(
                    "arrow {} needs a {} x {} matrix",
                    arrow.name, self.dims[arrow.source], self.dims[arrow.target]
                )));
            }
        }
        Ok(())
    }

    /// `ρ(a_0) f_{x_1} ρ(a_1) ⋯ f_{x_n} ρ(a_n)`.
    pub fn path_action(&self, quiver: &Quiver, p: &BasisPath) -> Matrix<F> {
        let verts = p.vertices(quiver);
        let mut acc = self.vertex_actions[verts[0]][p.labels[0]].clone();
        for (k, &a) in p.arrows.iter().enumerate() {
            acc = acc.mul(&self.arrow_maps[a]).mul(&self.vertex_actions[verts[k + 1]][p.labels[k + 1]]);
        }
        acc
    }

    fn combination_action(&self, f: &F, quiver: &Quiver, comb: &[(BasisPath, F::Elem)], rows: usize, cols: usize) -> Matrix<F> {
        let mut acc = Matrix::zeros(f, rows, cols);
        for (p, c) in comb {
            acc = acc.add(&self.path_action(quiver, p).scale(c));
        }
        acc
    }
}

fn witness<F: Field>(f: &F, m: &Matrix<F>) -> String {
    let c = (0..m.cols()).find(|&c| !vec_ops::is_zero(f, &m.column(c))).unwrap_or(0);
    let v = vec_ops::unit(f, m.cols(), c);
    vec_ops::format(f, &v)
}

/// The module system over `Q_t` given by the path-action formula. Checks
/// that every relation and every path of length `t` acts as zero.
pub fn rep_to_module_system<F: Field>(rep: &QuiverRepresentation<F>, gpa: &TruncatedGpa<F>) -> Result<ModuleSystem<F>, RepError> {
    let quiver = &gpa.quiver;
    let family = &gpa.family;
    let f = family.field();
    rep.validate(quiver, family)?;
    for (r, rel) in gpa.relations.elements.iter().enumerate() {
        let Some((p0, _)) = rel.first() else { continue };
        let (rows, cols) = (rep.dims[p0.start], rep.dims[p0.end(quiver)]);
        let m = rep.combination_action(f, quiver, rel, rows, cols);
        if !m.is_zero() {
            return Err(RepError::RelationNotSatisfied {
                relation: format!("#{r}"),
                witness: witness(f, &m),
            });
        }
    }
    let t = gpa.t();
    for p in enumerate_paths(quiver, family, t + 1, DEFAULT_MAX_PATHS)?.iter().filter(|p| p.len() == t) {
        let m = rep.path_action(quiver, p);
        if !m.is_zero() {
            return Err(RepError::RelationNotSatisfied {
                relation: format_path(quiver, family, p),
                witness: witness(f, &m),
            });
        }
    }
    let decomp = gm_decompose(&gpa.algebra, &gpa.gm_unit)?;
    let n = quiver.vertex_count();
    // Block bases are the standard vectors of the surviving paths, in order.
    let actions = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    decomp
                        .block(i, j)
                        .pivots()
                        .iter()
                        .map(|&c| rep.path_action(quiver, &gpa.paths[c]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let ms = ModuleSystem {
        dims: rep.dims.clone(),
        actions,
    };
    ms.validate(&gpa.algebra, &decomp)?;
    Ok(ms)
}

/// Reads off vertex actions from length-0 paths and arrow maps from the
/// arrow elements `e_src x e_tgt`.
pub fn module_system_to_rep<F: Field>(ms: &ModuleSystem<F>, gpa: &TruncatedGpa<F>) -> Result<QuiverRepresentation<F>, RepError> {
    let decomp = gm_decompose(&gpa.algebra, &gpa.gm_unit)?;
    ms.validate(&gpa.algebra, &decomp)?;
    let quiver = &gpa.quiver;
    let family = &gpa.family;
    let f = family.field();
    let vertex_actions = (0..quiver.vertex_count())
        .map(|v| {
            (0..family.get(v).dim())
                .map(|b| {
                    let x = gpa.element(&vec![(BasisPath::vertex(v, b), f.one())]).expect("vertex path");
                    ms.action_of(&decomp, v, v, &x).expect("length-0 path lies in its block")
                })
                .collect()
        })
        .collect();
    let arrow_maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| ms.action_of(&decomp, arrow.source, arrow.target, &gpa.arrow_element(a)).expect("arrow lies in its block"))
        .collect();
    Ok(QuiverRepresentation {
        dims: ms.dims.clone(),
        vertex_actions,
        arrow_maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::gpa::{build_truncated_gpa, RelationMode, RelationSet};
    use crate::idempotent::validate_complete_set;
    use crate::models::*;

    fn m(rows: usize, cols: usize, entries: &[i64]) -> Matrix<Rationals> {
        Matrix::from_fn(&Rationals, rows, cols, |r, c| q(entries[r * cols + c]))
    }

    fn t2_decomp() -> (FdAlgebra<Rationals>, GmDecomposition<Rationals>) {
        let t2 = upper_triangular(&Rationals, 2);
        let set = validate_complete_set(&t2, &[t2.basis_element(0), t2.basis_element(2)]).unwrap();
        let d = gm_decompose(&t2, &set).unwrap();
        (t2, d)
    }

    #[test]
    fn zero_system_assembles_to_zero_module() {
        let (t2, d) = t2_decomp();
        let ms = ModuleSystem::zero(&t2, &d);
        let module = h_assemble(&t2, &d, &ms).unwrap();
        assert_eq!(module.dim, 0);
        assert_eq!(g_split(&t2, &d, &module).unwrap(), ms);
    }

    #[test]
    fn simple_at_first_vertex() {
        let (t2, d) = t2_decomp();
        // M_1 = k, M_2 = 0: blocks (0,0), (0,1), (1,1) each 1-dimensional.
        let ms = ModuleSystem {
            dims: vec![1, 0],
            actions: vec![vec![vec![m(1, 1, &[1])], vec![m(1, 0, &[])]], vec![vec![], vec![m(0, 0, &[])]]],
        };
        let module = h_assemble(&t2, &d, &ms).unwrap();
        assert_eq!(module.action, vec![m(1, 1, &[1]), m(1, 1, &[0]), m(1, 1, &[0])]);
        assert_eq!(g_split(&t2, &d, &module).unwrap(), ms);
    }

    #[test]
    fn regular_module_round_trip() {
        let (t2, d) = t2_decomp();
        let reg = regular_module(&t2);
        let ms = g_split(&t2, &d, &reg).unwrap();
        assert_eq!(ms.dims, vec![2, 1]);
        assert!(hg_matches_after_change_of_basis(&t2, &d, &reg).unwrap());
        let back = h_assemble(&t2, &d, &ms).unwrap();
        assert!(back.generates_whole_space(&Rationals));
    }

    fn a2_gpa() -> TruncatedGpa<Rationals> {
        let qv = Quiver::from_names(&["1", "2"], &[("x", "1", "2")]).unwrap();
        let fam = VertexAlgebraFamily::trivial(&Rationals, &qv);
        build_truncated_gpa(&qv, &fam, &RelationSet::empty(2)).unwrap()
    }

    #[test]
    fn a2_representation_round_trip() {
        let g = a2_gpa();
        let rep = QuiverRepresentation::with_trivial_vertices(&Rationals, vec![1, 1], vec![m(1, 1, &[1])]);
        let ms = rep_to_module_system(&rep, &g).unwrap();
        assert_eq!(module_system_to_rep(&ms, &g).unwrap(), rep);
        let d = gm_decompose(&g.algebra, &g.gm_unit).unwrap();
        let module = h_assemble(&g.algebra, &d, &ms).unwrap();
        assert_eq!(module.dim, 2);
    }

    #[test]
    fn regular_module_of_a2_model() {
        let g = a2_gpa();
        let d = gm_decompose(&g.algebra, &g.gm_unit).unwrap();
        let ms = g_split(&g.algebra, &d, &regular_module(&g.algebra)).unwrap();
        let rep = module_system_to_rep(&ms, &g).unwrap();
        assert_eq!(rep.dims, vec![2, 1]);
        // f_x : V_2 → V_1 is injective.
        assert_eq!(rep.arrow_maps[0].rank(), 1);
        assert_eq!((rep.arrow_maps[0].rows(), rep.arrow_maps[0].cols()), (2, 1));
    }

    #[test]
    fn zero_representation() {
        let g = a2_gpa();
        let rep = QuiverRepresentation::zero(&g.quiver, &g.family);
        let ms = rep_to_module_system(&rep, &g).unwrap();
        assert_eq!(ms.total_dim(), 0);
        assert_eq!(module_system_to_rep(&ms, &g).unwrap(), rep);
    }

    #[test]
    fn loop_relations() {
        let f = Rationals;
        let qv = Quiver::from_names(&["1"], &[("x", "1", "1")]).unwrap();
        let fam = VertexAlgebraFamily::trivial(&f, &qv);
        let x2 = BasisPath {
            start: 0,
            arrows: vec![0, 0],
            labels: vec![0, 0, 0],
        };
        let rel = RelationSet::new(&f, vec![vec![(x2, q(1))]], 3, RelationMode::Relations).unwrap();
        let g = build_truncated_gpa(&qv, &fam, &rel).unwrap();
        let ok = QuiverRepresentation::with_trivial_vertices(&f, vec![2], vec![m(2, 2, &[0, 1, 0, 0])]);
        let ms = rep_to_module_system(&ok, &g).unwrap();
        assert_eq!(module_system_to_rep(&ms, &g).unwrap(), ok);
        let bad = QuiverRepresentation::with_trivial_vertices(&f, vec![3], vec![m(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0])]);
        assert!(matches!(rep_to_module_system(&bad, &g), Err(RepError::RelationNotSatisfied { .. })));
    }

    #[test]
    fn path_action_is_multiplicative_with_matrix_vertex() {
        let f = Rationals;
        let qv = Quiver::from_names(&["1", "2"], &[("x", "1", "2")]).unwrap();
        let fam = VertexAlgebraFamily::new(&qv, vec![matrix_algebra(&f, 2), field_algebra(&f)]).unwrap();
        let g = build_truncated_gpa(&qv, &fam, &RelationSet::empty(2)).unwrap();
        // V_1 = k² with M_2 acting naturally, V_2 = k.
        let units: Vec<Matrix<Rationals>> = (0..4).map(|k| Matrix::from_fn(&f, 2, 2, |r, c| if r * 2 + c == k { q(1) } else { q(0) })).collect();
        let rep = QuiverRepresentation {
            dims: vec![2, 1],
            vertex_actions: vec![units, vec![m(1, 1, &[1])]],
            arrow_maps: vec![m(2, 1, &[3, -1])],
        };
        let ms = rep_to_module_system(&rep, &g).unwrap();
        let d = gm_decompose(&g.algebra, &g.gm_unit).unwrap();
        let module = h_assemble(&g.algebra, &d, &ms).unwrap();
        module.validate(&g.algebra, &d).unwrap();
        for (i, p) in g.paths.iter().enumerate() {
            for (j, r) in g.paths.iter().enumerate() {
                let prod = g.algebra.mul(&g.algebra.basis_element(i), &g.algebra.basis_element(j));
                assert_eq!(module.act(&f, &prod), module.action[i].mul(&module.action[j]), "{p:?} {r:?}");
            }
        }
        assert_eq!(module_system_to_rep(&ms, &g).unwrap(), rep);
    }
}
