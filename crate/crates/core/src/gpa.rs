//! Quivers with vertex algebras and their truncated generalized path algebras
//! `k(D, Ω) / ((ρ) + J^t)`.
//!
//! A basis path of length `n` runs through vertices `i_0 → … → i_n` along
//! arrows `x_1, …, x_n` and carries one basis label of `Ω_{i_p}` at every
//! vertex it visits. The span of these paths is the tensor product
//! `Ω_{i_0} ⊗ k x_1 ⊗ Ω_{i_1} ⊗ … ⊗ Ω_{i_n}`, which is how the multilinearity
//! quotient is realized without ever building the free span first.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{ideal_closure_by, quotient_algebra, radical, AlgebraError, FdAlgebra, Ideal, SparseVec};
use crate::field::Field;
use crate::idempotent::{validate_complete_set, IdempotentError, IdempotentSet};
use crate::linalg::{vec_ops, Matrix, QuotientBasis, Subspace};
use crate::par;

/// Default cap on the number of basis paths in a truncation.
pub const DEFAULT_MAX_PATHS: usize = 50_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GpaError {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("vertex algebra family does not match the quiver: {0}")]
    FamilyMismatch(String),
    #[error("vertex algebra at vertex {0} has nonzero radical")]
    VertexAlgebraNotSemisimple(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("relation {0} has a component of length 0")]
    RelationOutsideJ(usize),
    #[error("relation {0} has a component of length less than 2")]
    RelationOutsideJ2(usize),
    #[error("truncation needs more than {0} basis paths")]
    PathExplosion(usize),
    #[error("truncation level must be at least 1")]
    BadTruncation,
    #[error("vertex map at vertex {0} is not an algebra homomorphism")]
    VertexMapNotHomomorphism(String),
    #[error("image of arrow {0} is not compatible with the vertex images")]
    CompatibilityViolation(String),
    #[error("extension is not an algebra homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Idempotent(#[from] IdempotentError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver; loops and multiple arrows are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, GpaError> {
        if vertices.is_empty() {
            return Err(GpaError::InvalidQuiver("no vertices".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(GpaError::InvalidQuiver(format!("duplicate vertex {v}")));
            }
        }
        let mut names = std::collections::HashSet::new();
        for a in &arrows {
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(GpaError::InvalidQuiver(format!("arrow {} has a missing endpoint", a.name)));
            }
            if !names.insert(a.name.as_str()) {
                return Err(GpaError::InvalidQuiver(format!("duplicate arrow {}", a.name)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Builds a quiver from named endpoints.
    pub fn from_names(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self, GpaError> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let find = |name: &str| {
            vs.iter()
                .position(|v| v == name)
                .ok_or_else(|| GpaError::InvalidQuiver(format!("unknown vertex {name}")))
        };
        let arrows = arrows
            .iter()
            .map(|(n, s, t)| {
                Ok(Arrow {
                    name: n.to_string(),
                    source: find(s)?,
                    target: find(t)?,
                })
            })
            .collect::<Result<Vec<_>, GpaError>>()?;
        Quiver::new(vs, arrows)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }
    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
    pub fn arrows_between(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == i && a.target == j).count()
    }
}

/// The semisimple vertex algebras `Ω_ii`, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexAlgebraFamily<F: Field> {
    algebras: Vec<FdAlgebra<F>>,
}

impl<F: Field> VertexAlgebraFamily<F> {
    /// Checks unity and zero radical at every vertex.
    pub fn new(quiver: &Quiver, algebras: Vec<FdAlgebra<F>>) -> Result<Self, GpaError> {
        if algebras.len() != quiver.vertex_count() {
            return Err(GpaError::FamilyMismatch(format!("{} algebras for {} vertices", algebras.len(), quiver.vertex_count())));
        }
        for (v, alg) in algebras.iter().enumerate() {
            if alg.field().descriptor() != algebras[0].field().descriptor() {
                return Err(GpaError::FamilyMismatch("vertex algebras over different fields".into()));
            }
            if alg.dim() == 0 || alg.unity().is_none() {
                return Err(GpaError::FamilyMismatch(format!("vertex algebra at {} has no unity", quiver.vertices[v])));
            }
            if !radical(alg)?.radical.space().is_zero() {
                return Err(GpaError::VertexAlgebraNotSemisimple(quiver.vertices[v].clone()));
            }
        }
        Ok(VertexAlgebraFamily { algebras })
    }

    /// `Ω_ii = k` at every vertex, with basis label `e`.
    pub fn trivial(f: &F, quiver: &Quiver) -> Self {
        let k = FdAlgebra::from_sparse(f, 1, vec![vec![(0, f.one())]], Some(vec!["e".into()])).expect("associative");
        VertexAlgebraFamily {
            algebras: vec![k; quiver.vertex_count()],
        }
    }

    pub fn get(&self, i: usize) -> &FdAlgebra<F> {
        &self.algebras[i]
    }
    pub fn algebras(&self) -> &[FdAlgebra<F>] {
        &self.algebras
    }
    pub fn field(&self) -> &F {
        self.algebras[0].field()
    }
}

/// A tensor-labeled path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisPath {
    pub start: usize,
    pub arrows: Vec<usize>,
    /// One basis index of the vertex algebra per visited vertex.
    pub labels: Vec<usize>,
}

impl BasisPath {
    pub fn vertex(start: usize, label: usize) -> Self {
        BasisPath {
            start,
            arrows: Vec::new(),
            labels: vec![label],
        }
    }
    pub fn len(&self) -> usize {
        self.arrows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
    pub fn end(&self, quiver: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| quiver.arrows[a].target)
    }
    /// The visited vertices `i_0, …, i_n`.
    pub fn vertices(&self, quiver: &Quiver) -> Vec<usize> {
        std::iter::once(self.start).chain(self.arrows.iter().map(|&a| quiver.arrows[a].target)).collect()
    }

    /// Checks head-to-tail composition and label ranges.
    pub fn validate<F: Field>(&self, quiver: &Quiver, family: &VertexAlgebraFamily<F>) -> Result<(), GpaError> {
        let bad = |m: &str| Err(GpaError::InvalidPath(m.to_string()));
        if self.start >= quiver.vertex_count() {
            return bad("start vertex out of range");
        }
        if self.labels.len() != self.arrows.len() + 1 {
            return bad("label count must be one more than the length");
        }
        let mut at = self.start;
        for &a in &self.arrows {
            let Some(arrow) = quiver.arrows.get(a) else {
                return bad("arrow out of range");
            };
            if arrow.source != at {
                return bad(&format!("arrow {} does not start at {}", arrow.name, quiver.vertices[at]));
            }
            at = arrow.target;
        }
        for (v, &l) in self.vertices(quiver).iter().zip(&self.labels) {
            if l >= family.get(*v).dim() {
                return bad("label out of range");
            }
        }
        Ok(())
    }
}

impl Ord for BasisPath {
    /// Length, then arrow sequence, then start vertex, then labels.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.start.cmp(&other.start))
            .then_with(|| self.labels.cmp(&other.labels))
    }
}

impl PartialOrd for BasisPath {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite linear combination of basis paths.
pub type PathCombination<F> = Vec<(BasisPath, <F as Field>::Elem)>;

/// Human-readable path: labels as `vertex@label` (omitted where the basis
/// element is the unity of a 1-dimensional vertex algebra), arrows by name,
/// joined by `*`.
pub fn format_path<F: Field>(quiver: &Quiver, family: &VertexAlgebraFamily<F>, p: &BasisPath) -> String {
    let f = family.field();
    let verts = p.vertices(quiver);
    let label = |k: usize| {
        let v = verts[k];
        let alg = family.get(v);
        let trivial = alg.dim() == 1 && alg.unity().is_some_and(|u| f.is_one(&u[0]));
        (!trivial).then(|| format!("{}@{}", quiver.vertices[v], alg.labels()[p.labels[k]]))
    };
    if p.is_empty() {
        return label(0).unwrap_or_else(|| quiver.vertices[p.start].clone());
    }
    let mut parts = Vec::new();
    for k in 0..=p.len() {
        if let Some(l) = label(k) {
            parts.push(l);
        }
        if k < p.len() {
            parts.push(quiver.arrows[p.arrows[k]].name.clone());
        }
    }
    parts.join("*")
}

/// Whether relations must lie in `J` or in `J²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationMode {
    WeakRelations,
    Relations,
}

impl fmt::Display for RelationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationMode::WeakRelations => "weak",
            RelationMode::Relations => "relations",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet<F: Field> {
    pub elements: Vec<PathCombination<F>>,
    pub t: usize,
    pub mode: RelationMode,
}

impl<F: Field> RelationSet<F> {
    /// Checks the syntactic containment in `J` (resp. `J²`).
    pub fn new(f: &F, elements: Vec<PathCombination<F>>, t: usize, mode: RelationMode) -> Result<Self, GpaError> {
        if t == 0 {
            return Err(GpaError::BadTruncation);
        }
        let min_len = match mode {
            RelationMode::WeakRelations => 1,
            RelationMode::Relations => 2,
        };
        for (i, rel) in elements.iter().enumerate() {
            if rel.iter().any(|(p, c)| p.len() < min_len && !f.is_zero(c)) {
                return Err(match mode {
                    RelationMode::WeakRelations => GpaError::RelationOutsideJ(i),
                    RelationMode::Relations => GpaError::RelationOutsideJ2(i),
                });
            }
        }
        Ok(RelationSet { elements, t, mode })
    }

    pub fn empty(t: usize) -> Self {
        RelationSet {
            elements: Vec::new(),
            t,
            mode: RelationMode::WeakRelations,
        }
    }
}

/// Expands `f_0 x_1 f_1 … x_n f_n` (each `f_p` an element of the vertex
/// algebra at the `p`-th visited vertex) into basis paths.
pub fn expand_tensor<F: Field>(
    quiver: &Quiver,
    family: &VertexAlgebraFamily<F>,
    start: usize,
    arrows: &[usize],
    factors: &[Vec<F::Elem>],
) -> Result<PathCombination<F>, GpaError> {
    let f = family.field();
    let probe = BasisPath {
        start,
        arrows: arrows.to_vec(),
        labels: vec![0; arrows.len() + 1],
    };
    probe.validate(quiver, family)?;
    let verts = probe.vertices(quiver);
    if factors.len() != verts.len() {
        return Err(GpaError::InvalidPath("one vertex-algebra factor per visited vertex is required".into()));
    }
    for (v, x) in verts.iter().zip(factors) {
        if x.len() != family.get(*v).dim() {
            return Err(GpaError::InvalidPath("factor has the wrong dimension".into()));
        }
    }
    let mut terms: Vec<(Vec<usize>, F::Elem)> = vec![(Vec::new(), f.one())];
    for x in factors {
        let mut next = Vec::new();
        for (labels, c) in &terms {
            for (k, xk) in x.iter().enumerate() {
                if !f.is_zero(xk) {
                    let mut l = labels.clone();
                    l.push(k);
                    next.push((l, f.mul(c, xk)));
                }
            }
        }
        terms = next;
    }
    Ok(terms
        .into_iter()
        .map(|(labels, c)| {
            (
                BasisPath {
                    start,
                    arrows: arrows.to_vec(),
                    labels,
                },
                c,
            )
        })
        .collect())
}

/// All basis paths of length `< levels`, in canonical order.
pub fn enumerate_paths<F: Field>(quiver: &Quiver, family: &VertexAlgebraFamily<F>, levels: usize, max_paths: usize) -> Result<Vec<BasisPath>, GpaError> {
    let mut out: Vec<BasisPath> = Vec::new();
    // Arrow sequences of the current length, each with its start vertex.
    let mut sequences: Vec<(usize, Vec<usize>)> = Vec::new();
    for n in 0..levels {
        sequences = if n == 0 {
            (0..quiver.vertex_count()).map(|v| (v, Vec::new())).collect()
        } else {
            let mut next = Vec::new();
            for (start, seq) in &sequences {
                let end = seq.last().map_or(*start, |&a| quiver.arrows[a].target);
                for (a, arrow) in quiver.arrows.iter().enumerate() {
                    if arrow.source == end {
                        let mut s = seq.clone();
                        s.push(a);
                        next.push((*start, s));
                    }
                }
            }
            next.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
            next
        };
        if sequences.is_empty() {
            break;
        }
        for (start, seq) in &sequences {
            let dims: Vec<usize> = std::iter::once(*start)
                .chain(seq.iter().map(|&a| quiver.arrows[a].target))
                .map(|v| family.get(v).dim())
                .collect();
            let count = dims.iter().try_fold(1usize, |acc, d| acc.checked_mul(*d)).unwrap_or(usize::MAX);
            if out.len().saturating_add(count) > max_paths {
                return Err(GpaError::PathExplosion(max_paths));
            }
            let mut labels = vec![0; dims.len()];
            'odometer: loop {
                out.push(BasisPath {
                    start: *start,
                    arrows: seq.clone(),
                    labels: labels.clone(),
                });
                for k in (0..labels.len()).rev() {
                    labels[k] += 1;
                    if labels[k] < dims[k] {
                        continue 'odometer;
                    }
                    labels[k] = 0;
                }
                break;
            }
        }
    }
    Ok(out)
}

/// The product rule on basis paths: splice at the shared vertex, expanding
/// the junction product in the vertex algebra. `None` for mismatched
/// endpoints.
fn splice<F: Field>(quiver: &Quiver, family: &VertexAlgebraFamily<F>, p: &BasisPath, q: &BasisPath) -> Option<Vec<(BasisPath, F::Elem)>> {
    let v = p.end(quiver);
    if v != q.start {
        return None;
    }
    let junction = family.get(v).basis_product(*p.labels.last().expect("nonempty"), q.labels[0]);
    let mut arrows = p.arrows.clone();
    arrows.extend_from_slice(&q.arrows);
    Some(
        junction
            .iter()
            .map(|(k, c)| {
                let mut labels = p.labels[..p.labels.len() - 1].to_vec();
                labels.push(*k);
                labels.extend_from_slice(&q.labels[1..]);
                (
                    BasisPath {
                        start: p.start,
                        arrows: arrows.clone(),
                        labels,
                    },
                    c.clone(),
                )
            })
            .collect(),
    )
}

/// The free truncation `k(D, Ω) / J^levels` on its path basis.
#[derive(Clone, Debug)]
pub struct FreeTruncation<F: Field> {
    pub algebra: FdAlgebra<F>,
    pub paths: Vec<BasisPath>,
    index: HashMap<BasisPath, usize>,
    pub levels: usize,
}

impl<F: Field> FreeTruncation<F> {
    /// Indices of the paths of length ≤ 1, which generate the truncation as an algebra.
    pub fn generating_paths(&self) -> Vec<usize> {
        (0..self.paths.len()).filter(|&k| self.paths[k].len() <= 1).collect()
    }
    pub fn build(quiver: &Quiver, family: &VertexAlgebraFamily<F>, levels: usize, max_paths: usize) -> Result<Self, GpaError> {
        let f = family.field();
        let paths = enumerate_paths(quiver, family, levels, max_paths)?;
        let index: HashMap<BasisPath, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = paths.len();
        let products: Vec<SparseVec<F>> = par::map_range(n * n, |ij| {
            let (p, q) = (&paths[ij / n], &paths[ij % n]);
            if p.len() + q.len() >= levels {
                return Vec::new();
            }
            let mut out: SparseVec<F> = splice(quiver, family, p, q)
                .unwrap_or_default()
                .into_iter()
                .map(|(path, c)| (index[&path], c))
                .collect();
            out.sort_by_key(|(k, _)| *k);
            out
        });
        let labels = paths.iter().map(|p| format_path(quiver, family, p)).collect();
        let algebra = FdAlgebra::from_sparse(f, n, products, Some(labels))?;
        Ok(FreeTruncation {
            algebra,
            paths,
            index,
            levels,
        })
    }

    pub fn index_of(&self, p: &BasisPath) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Coordinates of a combination; components of length `≥ levels` vanish.
    pub fn element(&self, quiver: &Quiver, family: &VertexAlgebraFamily<F>, comb: &PathCombination<F>) -> Result<Vec<F::Elem>, GpaError> {
        let f = family.field();
        let mut v = self.algebra.zero();
        for (p, c) in comb {
            p.validate(quiver, family)?;
            if let Some(i) = self.index_of(p) {
                f.add_assign(&mut v[i], c);
            }
        }
        Ok(v)
    }

    /// The image of `J`: span of all paths of positive length.
    pub fn arrow_span(&self) -> Subspace<F> {
        let positive: Vec<usize> = (0..self.paths.len()).filter(|&i| !self.paths[i].is_empty()).collect();
        Subspace::coordinate(self.algebra.field(), self.paths.len(), &positive)
    }

    /// `e_ii` as a combination of the length-0 paths at `i`.
    pub fn vertex_unit(&self, family: &VertexAlgebraFamily<F>, i: usize) -> Vec<F::Elem> {
        let u = family.get(i).unity().expect("vertex algebras are unital");
        let mut v = self.algebra.zero();
        for (k, c) in u.iter().enumerate() {
            if let Some(ix) = self.index_of(&BasisPath::vertex(i, k)) {
                v[ix] = c.clone();
            }
        }
        v
    }
}

/// `Q_t = k(D, Ω) / ((ρ) + J^t)` on a basis of surviving paths.
#[derive(Clone, Debug)]
pub struct TruncatedGpa<F: Field> {
    pub quiver: Quiver,
    pub family: VertexAlgebraFamily<F>,
    pub relations: RelationSet<F>,
    pub algebra: FdAlgebra<F>,
    /// `paths[c]` is the basis path behind coordinate `c` of `algebra`.
    pub paths: Vec<BasisPath>,
    pub arrow_ideal: Ideal<F>,
    pub gm_unit: IdempotentSet<F>,
    free: FreeTruncation<F>,
    relation_ideal: Ideal<F>,
    basis: QuotientBasis<F>,
}

impl<F: Field> TruncatedGpa<F> {
    pub fn t(&self) -> usize {
        self.relations.t
    }
    pub fn free(&self) -> &FreeTruncation<F> {
        &self.free
    }
    /// The image of `(ρ)` in the free truncation.
    pub fn relation_ideal(&self) -> &Ideal<F> {
        &self.relation_ideal
    }
    pub fn path_index(&self, p: &BasisPath) -> Option<usize> {
        self.paths.iter().position(|q| q == p)
    }
    /// Projects free-truncation coordinates to the quotient.
    pub fn project(&self, free_coords: &[F::Elem]) -> Vec<F::Elem> {
        self.basis.project(free_coords)
    }
    pub fn element(&self, comb: &PathCombination<F>) -> Result<Vec<F::Elem>, GpaError> {
        Ok(self.project(&self.free.element(&self.quiver, &self.family, comb)?))
    }
    pub fn path_multiply(&self, x: &[F::Elem], y: &[F::Elem]) -> Result<Vec<F::Elem>, GpaError> {
        Ok(self.algebra.checked_mul(x, y)?)
    }
    pub fn vertex_unit(&self, i: usize) -> Vec<F::Elem> {
        self.project(&self.free.vertex_unit(&self.family, i))
    }
    /// `e_src x e_tgt` for arrow `a`.
    pub fn arrow_element(&self, a: usize) -> Vec<F::Elem> {
        let arrow = &self.quiver.arrows[a];
        let u = |v: usize| self.family.get(v).unity().expect("unital").to_vec();
        let comb = expand_tensor(&self.quiver, &self.family, arrow.source, &[a], &[u(arrow.source), u(arrow.target)]).expect("valid arrow");
        self.element(&comb).expect("valid arrow")
    }
    /// Coordinates of the basis path `p` in the free truncation.
    pub fn path_free_index(&self, p: &BasisPath) -> Option<usize> {
        self.free.index_of(p)
    }
    pub fn format_path(&self, p: &BasisPath) -> String {
        format_path(&self.quiver, &self.family, p)
    }
}

pub fn build_truncated_gpa<F: Field>(quiver: &Quiver, family: &VertexAlgebraFamily<F>, relations: &RelationSet<F>) -> Result<TruncatedGpa<F>, GpaError> {
    build_truncated_gpa_with(quiver, family, relations, DEFAULT_MAX_PATHS)
}

pub fn build_truncated_gpa_with<F: Field>(
    quiver: &Quiver,
    family: &VertexAlgebraFamily<F>,
    relations: &RelationSet<F>,
    max_paths: usize,
) -> Result<TruncatedGpa<F>, GpaError> {
    let f = family.field();
    // Re-check containment: the fields are public.
    let relations = RelationSet::new(f, relations.elements.clone(), relations.t, relations.mode)?;
    let free = FreeTruncation::build(quiver, family, relations.t, max_paths)?;
    let gens = relations
        .elements
        .iter()
        .map(|r| free.element(quiver, family, r))
        .collect::<Result<Vec<_>, _>>()?;
    let relation_ideal = ideal_closure_by(&free.algebra, &gens, &free.generating_paths());
    let quotient = quotient_algebra(&free.algebra, &relation_ideal)?;
    let paths: Vec<BasisPath> = quotient.basis.columns.iter().map(|&c| free.paths[c].clone()).collect();
    let algebra = quotient.algebra;
    let basis = quotient.basis;
    // Relations lie in J, so every length-0 path survives and the image of J
    // is spanned by the surviving paths of positive length.
    let positive: Vec<usize> = (0..paths.len()).filter(|&c| !paths[c].is_empty()).collect();
    let arrow_ideal = Ideal::trusted(Subspace::coordinate(f, paths.len(), &positive));
    let units: Vec<Vec<F::Elem>> = (0..quiver.vertex_count()).map(|i| basis.project(&free.vertex_unit(family, i))).collect();
    let gm_unit = validate_complete_set(&algebra, &units)?;
    Ok(TruncatedGpa {
        quiver: quiver.clone(),
        family: family.clone(),
        relations,
        algebra,
        paths,
        arrow_ideal,
        gm_unit,
        free,
        relation_ideal,
        basis,
    })
}

/// Outcome of [`check_weak_relations_cofinal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cofinality {
    Certified,
    /// A length-`t` path that survives in `k(D, Ω) / ((ρ) + J^{t+1})`.
    NotCertified(BasisPath),
}

/// Checks `J^t ⊆ (ρ) + J^{t+1}` in the `(t+1)`-truncation.
pub fn check_weak_relations_cofinal<F: Field>(
    quiver: &Quiver,
    family: &VertexAlgebraFamily<F>,
    relations: &RelationSet<F>,
    max_paths: usize,
) -> Result<Cofinality, GpaError> {
    let t = relations.t;
    let free = FreeTruncation::build(quiver, family, t + 1, max_paths)?;
    let gens = relations
        .elements
        .iter()
        .map(|r| free.element(quiver, family, r))
        .collect::<Result<Vec<_>, _>>()?;
    let ideal = ideal_closure_by(&free.algebra, &gens, &free.generating_paths());
    let f = family.field();
    let witness = free
        .paths
        .iter()
        .enumerate()
        .filter(|(_, p)| p.len() == t)
        .find(|(i, _)| !ideal.space().contains(&vec_ops::unit(f, free.paths.len(), *i)));
    Ok(match witness {
        None => Cofinality::Certified,
        Some((_, p)) => Cofinality::NotCertified(p.clone()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalCheck {
    pub radical_dim: usize,
    pub arrow_ideal_dim: usize,
    pub equal: bool,
}

/// Compares the Jacobson radical with the image of the arrow ideal.
pub fn jacobson_radical_is_arrow_ideal<F: Field>(gpa: &TruncatedGpa<F>) -> Result<RadicalCheck, GpaError> {
    let rad = radical(&gpa.algebra)?;
    Ok(RadicalCheck {
        radical_dim: rad.radical.dim(),
        arrow_ideal_dim: gpa.arrow_ideal.dim(),
        equal: rad.radical.space() == gpa.arrow_ideal.space(),
    })
}

/// The homomorphism `Q_t → target` determined by algebra maps on the vertex
/// algebras (`vertex_maps[i]` is `dim target × dim Ω_ii`, columns = images of
/// basis elements) and images of arrows. Returns its `dim target × dim Q_t`
/// matrix after verifying multiplicativity on all basis pairs.
pub fn gpa_hom_from_generators<F: Field>(
    gpa: &TruncatedGpa<F>,
    target: &FdAlgebra<F>,
    vertex_maps: &[Matrix<F>],
    arrow_images: &[Vec<F::Elem>],
) -> Result<Matrix<F>, GpaError> {
    let f = target.field();
    let quiver = &gpa.quiver;
    if vertex_maps.len() != quiver.vertex_count() || arrow_images.len() != quiver.arrows.len() {
        return Err(GpaError::FamilyMismatch("one map per vertex and one image per arrow are required".into()));
    }
    let img = |v: usize, k: usize| vertex_maps[v].column(k);
    for (v, m) in vertex_maps.iter().enumerate() {
        let omega = gpa.family.get(v);
        if m.rows() != target.dim() || m.cols() != omega.dim() {
            return Err(GpaError::FamilyMismatch(format!("vertex map at {} has the wrong shape", quiver.vertices[v])));
        }
        for a in 0..omega.dim() {
            for b in 0..omega.dim() {
                let lhs = m.mul_vec(&omega.mul(&omega.basis_element(a), &omega.basis_element(b)));
                if lhs != target.mul(&img(v, a), &img(v, b)) {
                    return Err(GpaError::VertexMapNotHomomorphism(quiver.vertices[v].clone()));
                }
            }
        }
    }
    let unit_image = |v: usize| vertex_maps[v].mul_vec(gpa.family.get(v).unity().expect("unital"));
    for (a, x) in arrow_images.iter().enumerate() {
        let arrow = &quiver.arrows[a];
        if x.len() != target.dim() {
            return Err(GpaError::FamilyMismatch(format!("image of arrow {} has the wrong dimension", arrow.name)));
        }
        if target.mul(&unit_image(arrow.source), x) != *x || target.mul(x, &unit_image(arrow.target)) != *x {
            return Err(GpaError::CompatibilityViolation(arrow.name.clone()));
        }
    }
    let path_image = |p: &BasisPath| {
        let verts = p.vertices(quiver);
        let mut acc = img(verts[0], p.labels[0]);
        for (k, &a) in p.arrows.iter().enumerate() {
            acc = target.mul(&acc, &arrow_images[a]);
            acc = target.mul(&acc, &img(verts[k + 1], p.labels[k + 1]));
        }
        acc
    };
    // On the free truncation first, to check that the relations die.
    let free = gpa.free();
    let free_images: Vec<Vec<F::Elem>> = par::map_range(free.paths.len(), |i| path_image(&free.paths[i]));
    let free_matrix = Matrix::from_columns(f, target.dim(), &free_images);
    for (k, r) in gpa.relation_ideal().space().basis_vectors().iter().enumerate() {
        if !vec_ops::is_zero(f, &free_matrix.mul_vec(r)) {
            return Err(GpaError::NotAHomomorphism(format!("relation ideal basis element {k} has nonzero image")));
        }
    }
    let columns: Vec<Vec<F::Elem>> = gpa.paths.iter().map(|p| free_images[free.index_of(p).expect("surviving path")].clone()).collect();
    let phi = Matrix::from_columns(f, target.dim(), &columns);
    let n = gpa.algebra.dim();
    let bad = par::find_first(n * n, |ij| {
        let (i, j) = (ij / n, ij % n);
        let mut lhs = target.zero();
        for (k, c) in gpa.algebra.basis_product(i, j) {
            vec_ops::axpy(f, &mut lhs, c, &columns[*k]);
        }
        let rhs = target.mul(&columns[i], &columns[j]);
        (lhs != rhs).then_some(())
    });
    if let Some((ij, ())) = bad {
        return Err(GpaError::NotAHomomorphism(format!(
            "product of {} and {}",
            gpa.format_path(&gpa.paths[ij / n]),
            gpa.format_path(&gpa.paths[ij % n])
        )));
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::idempotent::gm_decompose;
    use crate::models::*;

    fn a2() -> Quiver {
        Quiver::from_names(&["1", "2"], &[("x", "1", "2")]).unwrap()
    }

    fn one_loop() -> Quiver {
        Quiver::from_names(&["1"], &[("x", "1", "1")]).unwrap()
    }

    fn loop_power(n: usize) -> BasisPath {
        BasisPath {
            start: 0,
            arrows: vec![0; n],
            labels: vec![0; n + 1],
        }
    }

    #[test]
    fn quiver_validation() {
        assert!(Quiver::new(vec![], vec![]).is_err());
        assert!(Quiver::from_names(&["1"], &[("x", "1", "2")]).is_err());
        assert!(Quiver::from_names(&["1", "1"], &[]).is_err());
    }

    #[test]
    fn no_arrows_gives_product_of_vertex_algebras() {
        let f = Rationals;
        let qv = Quiver::from_names(&["1", "2"], &[]).unwrap();
        let fam = VertexAlgebraFamily::new(&qv, vec![matrix_algebra(&f, 2), field_algebra(&f)]).unwrap();
        let g = build_truncated_gpa(&qv, &fam, &RelationSet::empty(2)).unwrap();
        assert_eq!(g.algebra.dim(), 5);
        assert!(g.arrow_ideal.space().is_zero());
        let check = jacobson_radical_is_arrow_ideal(&g).unwrap();
        assert!(check.equal);
    }

    #[test]
    fn one_vertex_matrix_algebra() {
        let f = Rationals;
        let qv = Quiver::from_names(&["1"], &[]).unwrap();
        let fam = VertexAlgebraFamily::new(&qv, vec![matrix_algebra(&f, 2)]).unwrap();
        let g = build_truncated_gpa(&qv, &fam, &RelationSet::empty(1)).unwrap();
        assert_eq!(g.algebra, matrix_algebra(&f, 2).with_labels(g.algebra.labels().to_vec()).unwrap());
    }

    #[test]
    fn a2_matches_upper_triangular() {
        let f = Rationals;
        let qv = a2();
        let fam = VertexAlgebraFamily::trivial(&f, &qv);
        let g = build_truncated_gpa(&qv, &fam, &RelationSet::empty(2)).unwrap();
        assert_eq!(g.algebra.dim(), 3);
        assert_eq!(g.algebra.labels(), &["1", "2", "x"]);
        // Basis order 1, 2, x versus E11, E12, E22.
        let t2 = upper_triangular(&f, 2);
        let perm = [0usize, 2, 1];
        for i in 0..3 {
            for j in 0..3 {
                let lhs: Vec<_> = perm.iter().map(|&k| g.algebra.mul(&g.algebra.basis_element(i), &g.algebra.basis_element(j))[k].clone()).collect();
                let rhs = t2.mul(&t2.basis_element(perm[i]), &t2.basis_element(perm[j]));
                let rhs: Vec<_> = perm.iter().map(|&k| rhs[perm[k]].clone()).collect();
                assert_eq!(lhs, rhs.iter().cloned().collect::<Vec<_>>(), "pair {i} {j}");
            }
        }
        let check = jacobson_radical_is_arrow_ideal(&g).unwrap();
        assert_eq!((check.radical_dim, check.equal), (1, true));
        assert_eq!(check_weak_relations_cofinal(&qv, &fam, &RelationSet::empty(2), 100).unwrap(), Cofinality::Certified);
        let d = gm_decompose(&g.algebra, &g.gm_unit).unwrap();
        assert_eq!(d.block_dims(), vec![vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn unit_acts_trivially_and_mismatch_kills() {
        let f = Rationals;
        let qv = a2();
        let fam = VertexAlgebraFamily::trivial(&f, &qv);
        let g = build_truncated_gpa(&qv, &fam, &RelationSet::empty(2)).unwrap();
        let x = g.arrow_element(0);
        assert_eq!(g.path_multiply(&g.vertex_unit(0), &x).unwrap(), x);
        assert_eq!(g.path_multiply(&x, &g.vertex_unit(1)).unwrap(), x);
        assert!(vec_ops::is_zero(&f, &g.path_multiply(&x, &x).unwrap()));
        assert!(vec_ops::is_zero(&f, &g.path_multiply(&g.vertex_unit(1), &x).unwrap()));
    }

    #[test]
    fn loop_with_cubic_relation() {
        let f = Rationals;
        let qv = one_loop();
        let fam = VertexAlgebraFamily::trivial(&f, &qv);
        let rel = RelationSet::new(&f, vec![vec![(loop_power(3), q(1))]], 3, RelationMode::Relations).unwrap();
        let g = build_truncated_gpa(&qv, &fam, &rel).unwrap();
        assert_eq!(g.algebra.dim(), 3);
        let x = g.arrow_element(0);
        let x2 = g.path_multiply(&x, &x).unwrap();
        assert_eq!(x2, g.element(&vec![(loop_power(2), q(1))]).unwrap());
        assert!(vec_ops::is_zero(&f, &g.path_multiply(&x2, &x).unwrap()));
        let check = jacobson_radical_is_arrow_ideal(&g).unwrap();
        assert_eq!((check.radical_dim, check.equal), (2, true));
    }

    #[test]
    fn cofinality_certificates() {
        let f = Rationals;
        let qv = one_loop();
        let fam = VertexAlgebraFamily::trivial(&f, &qv);
        let rel = RelationSet::new(&f, vec![vec![(loop_power(2), q(1))]], 3, RelationMode::Relations).unwrap();
        assert_eq!(check_weak_relations_cofinal(&qv, &fam, &rel, 100).unwrap(), Cofinality::Certified);
        let none = RelationSet::empty(2);
        assert_eq!(check_weak_relations_cofinal(&qv, &fam, &none, 100).unwrap(), Cofinality::NotCertified(loop_power(2)));
        let all = RelationSet::new(&f, vec![vec![(loop_power(2), q(1))]], 2, RelationMode::Relations).unwrap();
        assert_eq!(check_weak_relations_cofinal(&qv, &fam, &all, 100).unwrap(), Cofinality::Certified);
    }

    #[test]
    fn relation_mode_errors() {
        let f = Rationals;
        let v0 = BasisPath::vertex(0, 0);
        assert_eq!(
            RelationSet::new(&f, vec![vec![(v0, q(1))]], 2, RelationMode::WeakRelations).unwrap_err(),
            GpaError::RelationOutsideJ(0)
        );
        assert_eq!(
            RelationSet::new(&f, vec![vec![(loop_power(1), q(1))]], 2, RelationMode::Relations).unwrap_err(),
            GpaError::RelationOutsideJ2(0)
        );
        assert!(RelationSet::new(&f, vec![vec![(loop_power(1), q(1))]], 2, RelationMode::WeakRelations).is_ok());
    }

    #[test]
    fn stratum_dimension_is_tensor_product() {
        let f = Rationals;
        let qv = a2();
        let fam = VertexAlgebraFamily::new(&qv, vec![matrix_algebra(&f, 2), diagonal_algebra(&f, 2)]).unwrap();
        let paths = enumerate_paths(&qv, &fam, 2, 1000).unwrap();
        assert_eq!(paths.iter().filter(|p| p.len() == 1).count(), 4 * 2);
        assert_eq!(paths.len(), 4 + 2 + 8);
        assert!(paths.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn path_explosion() {
        let f = Rationals;
        let qv = Quiver::from_names(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap();
        let fam = VertexAlgebraFamily::trivial(&f, &qv);
        assert_eq!(enumerate_paths(&qv, &fam, 20, 1000).unwrap_err(), GpaError::PathExplosion(1000));
    }

    #[test]
    fn non_semisimple_vertex_algebra_rejected() {
        let f = Rationals;
        let qv = Quiver::from_names(&["1"], &[]).unwrap();
        assert!(matches!(
            VertexAlgebraFamily::new(&qv, vec![truncated_poly(&f, 2)]),
            Err(GpaError::VertexAlgebraNotSemisimple(_))
        ));
    }

    #[test]
    fn homomorphisms_from_generators() {
        let f = Rationals;
        let qv = a2();
        let fam = VertexAlgebraFamily::trivial(&f, &qv);
        let g = build_truncated_gpa(&qv, &fam, &RelationSet::empty(2)).unwrap();
        let t2 = upper_triangular(&f, 2);
        let col = |v: Vec<_>| Matrix::from_columns(&f, v.len(), &[v]);
        let phi = gpa_hom_from_generators(&g, &t2, &[col(t2.basis_element(0)), col(t2.basis_element(2))], &[t2.basis_element(1)]).unwrap();
        assert!(phi.inverse().is_some());

        // Identity generators on the algebra itself.
        let id = gpa_hom_from_generators(&g, &g.algebra, &[col(g.vertex_unit(0)), col(g.vertex_unit(1))], &[g.arrow_element(0)]).unwrap();
        assert!(id.is_identity());

        // Arrows to zero: kernel is the arrow ideal.
        let kk = diagonal_algebra(&f, 2);
        let pi = gpa_hom_from_generators(&g, &kk, &[col(kk.basis_element(0)), col(kk.basis_element(1))], &[kk.zero()]).unwrap();
        assert_eq!(pi.kernel(), *g.arrow_ideal.space());

        let err = gpa_hom_from_generators(&g, &t2, &[col(t2.basis_element(0)), col(t2.basis_element(2))], &[t2.basis_element(0)]);
        assert_eq!(err.unwrap_err(), GpaError::CompatibilityViolation("x".into()));
    }
}
