//! Presentations of split algebras by quivers with vertex algebras and
//! relations.
//!
//! Given `Λ` with radical `r` and split semisimple quotient, the pipeline is:
//! lift a full system of matrix units of `Λ/r` to get a subalgebra
//! `A ≅ Λ/r` with `Λ = A ⊕ r`; pick vertex idempotents in `A`; take arrows
//! from `e_g r e_h` modulo `r²`; build `φ` on a truncated generalized path
//! algebra and read off its kernel `N`.

use thiserror::Error;

use crate::algebra::{radical, AlgebraError, FdAlgebra, RadicalData};
use crate::field::Field;
use crate::gpa::{
    build_truncated_gpa, build_truncated_gpa_with, gpa_hom_from_generators, BasisPath, GpaError, PathCombination, Quiver,
    RelationMode, RelationSet, TruncatedGpa, VertexAlgebraFamily, Arrow, DEFAULT_MAX_PATHS,
};
use crate::idempotent::{lift_idempotents, matrix_units, validate_complete_set, wedderburn_blocks, IdempotentError, MatrixUnits};
use crate::linalg::{vec_ops, EchelonBuilder, Matrix, Subspace};
use crate::poly::RootFinder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("algebra is not generalized elementary: block {0} has dimension {1}")]
    NotElementary(usize, usize),
    #[error("kernel of the presentation map is not contained in J")]
    KernelNotInJ,
    #[error("kernel of the presentation map is not contained in J^2")]
    KernelNotInJ2,
    #[error("presentation map is not surjective")]
    NotSurjective,
    #[error("lifted matrix units fail the multiplication table")]
    LiftFailed,
    #[error("invalid vertex grouping: {0}")]
    BadGrouping(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Idempotent(#[from] IdempotentError),
    #[error(transparent)]
    Gpa(#[from] GpaError),
}

impl PresentationError {
    /// Input lies outside the supported domain (non-split blocks, small
    /// characteristic) rather than being malformed.
    pub fn is_unsupported_domain(&self) -> bool {
        matches!(
            self,
            PresentationError::Idempotent(IdempotentError::NotSplit(_))
                | PresentationError::Idempotent(IdempotentError::SplittingFailed(_))
                | PresentationError::Algebra(AlgebraError::CharacteristicTooSmall { .. })
                | PresentationError::Idempotent(IdempotentError::Algebra(AlgebraError::CharacteristicTooSmall { .. }))
                | PresentationError::Gpa(GpaError::PathExplosion(_))
        )
    }
}

/// `Λ = A ⊕ r` with the section `ξ : Λ/r → A`.
#[derive(Clone, Debug)]
pub struct Splitting<F: Field> {
    pub algebra: FdAlgebra<F>,
    pub radical: RadicalData<F>,
    /// `dim Λ × dim Λ/r`, an algebra map with `π ∘ ξ = id`.
    pub section: Matrix<F>,
    pub a_space: Subspace<F>,
    /// Matrix units of each block of `Λ/r`.
    pub residual_units: Vec<MatrixUnits<F>>,
    /// Their lifts in `Λ`, same shape.
    pub lifted_units: Vec<MatrixUnits<F>>,
}

impl<F: Field> Splitting<F> {
    pub fn quotient(&self) -> &FdAlgebra<F> {
        self.radical.semisimple_quotient()
    }
    pub fn project(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        self.radical.quotient.project(x)
    }
    pub fn xi(&self, s: &[F::Elem]) -> Vec<F::Elem> {
        self.section.mul_vec(s)
    }
    /// The `A`-component `ξ(π(x))`.
    pub fn component_a(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        self.xi(&self.project(x))
    }
    /// The `r`-component `x − ξ(π(x))`.
    pub fn component_r(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        vec_ops::sub(self.algebra.field(), x, &self.component_a(x))
    }
    pub fn block_count(&self) -> usize {
        self.residual_units.len()
    }
    /// Lifted block unities `Σ_a E_aa`, which are the lifted central
    /// idempotents.
    pub fn block_unities(&self) -> Vec<Vec<F::Elem>> {
        let f = self.algebra.field();
        self.lifted_units
            .iter()
            .map(|mu| mu.diagonal().iter().fold(self.algebra.zero(), |acc, e| vec_ops::add(f, &acc, e)))
            .collect()
    }

    /// `A ∩ r = 0`, `dim A + dim r = dim Λ`, `ξ` multiplicative, `π ∘ ξ = id`.
    pub fn verify(&self) -> bool {
        let s = self.quotient();
        let rad = self.radical.radical.space();
        let Ok(meet) = self.a_space.intersection(rad) else { return false };
        if !meet.is_zero() || self.a_space.dim() + rad.dim() != self.algebra.dim() {
            return false;
        }
        let n = s.dim();
        for i in 0..n {
            let xi_i = self.xi(&s.basis_element(i));
            if self.project(&xi_i) != s.basis_element(i) {
                return false;
            }
            for j in 0..n {
                let lhs = self.xi(&s.mul(&s.basis_element(i), &s.basis_element(j)));
                let rhs = self.algebra.mul(&xi_i, &self.xi(&s.basis_element(j)));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// `(f_1 − n)^{-1} = f_1 + n + n² + …` for nilpotent `n ∈ f_1 Λ f_1`.
fn corner_inverse<F: Field>(alg: &FdAlgebra<F>, unit: &[F::Elem], x: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let f = alg.field();
    let n = vec_ops::sub(f, unit, x);
    let mut acc = unit.to_vec();
    let mut power = unit.to_vec();
    for _ in 0..=alg.dim() {
        power = alg.mul(&power, &n);
        if vec_ops::is_zero(f, &power) {
            return Some(acc);
        }
        acc = vec_ops::add(f, &acc, &power);
    }
    None
}

/// Wedderburn–Malcev splitting of a unital algebra with split semisimple
/// quotient, by lifting matrix units.
pub fn compute_splitting<F: RootFinder>(alg: &FdAlgebra<F>, seed: u64) -> Result<Splitting<F>, PresentationError> {
    let f = alg.field();
    if alg.unity().is_none() {
        return Err(AlgebraError::NoUnity.into());
    }
    let rad = radical(alg)?;
    let s = rad.semisimple_quotient();
    let wedderburn = wedderburn_blocks(s, seed)?;
    let residual_units = wedderburn
        .central_idempotents
        .elements()
        .iter()
        .enumerate()
        .map(|(b, z)| matrix_units(s, z, b, seed))
        .collect::<Result<Vec<_>, _>>()?;

    let diagonal: Vec<Vec<F::Elem>> = residual_units.iter().flat_map(|mu| mu.diagonal()).collect();
    let residual_set = validate_complete_set(s, &diagonal)?;
    let lifted = lift_idempotents(alg, &rad.radical, &rad.quotient, &residual_set)?;
    let mut lifted_diag = lifted.set.into_elements().into_iter();

    let mut lifted_units = Vec::with_capacity(residual_units.len());
    for mu in &residual_units {
        let n = mu.size;
        let es: Vec<Vec<F::Elem>> = lifted_diag.by_ref().take(n).collect();
        let first = &es[0];
        let mut row0 = vec![first.clone()];
        let mut col0 = vec![first.clone()];
        for j in 1..n {
            let u = alg.mul3(first, &rad.quotient.lift(&mu.units[0][j]), &es[j]);
            let v = alg.mul3(&es[j], &rad.quotient.lift(&mu.units[j][0]), first);
            let w = corner_inverse(alg, first, &alg.mul(&u, &v)).ok_or(PresentationError::LiftFailed)?;
            row0.push(u);
            col0.push(alg.mul(&v, &w));
        }
        let units: Vec<Vec<Vec<F::Elem>>> = (0..n)
            .map(|a| (0..n).map(|b| if a == 0 { row0[b].clone() } else { alg.mul(&col0[a], &row0[b]) }).collect())
            .collect();
        lifted_units.push(MatrixUnits { size: n, units });
    }
    // Multiplication table of the lifted units, block by block.
    for mu in &lifted_units {
        let n = mu.size;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let p = alg.mul(&mu.units[a][b], &mu.units[c][d]);
                        let expect = if b == c { mu.units[a][d].clone() } else { alg.zero() };
                        if p != expect {
                            return Err(PresentationError::LiftFailed);
                        }
                    }
                }
            }
        }
    }

    let residual_flat: Vec<Vec<F::Elem>> = residual_units.iter().flat_map(MatrixUnits::flat).collect();
    let lifted_flat: Vec<Vec<F::Elem>> = lifted_units.iter().flat_map(MatrixUnits::flat).collect();
    let m_res = Matrix::from_columns(f, s.dim(), &residual_flat);
    let m_inv = m_res.inverse().ok_or(PresentationError::LiftFailed)?;
    let section = Matrix::from_columns(f, alg.dim(), &lifted_flat).mul(&m_inv);
    let a_space = Subspace::from_spanning(f, alg.dim(), &lifted_flat);
    let split = Splitting {
        algebra: alg.clone(),
        radical: rad,
        section,
        a_space,
        residual_units,
        lifted_units,
    };
    if !split.verify() {
        return Err(PresentationError::LiftFailed);
    }
    Ok(split)
}

/// A quiver-with-relations presentation `k(D, Ω)/N ≅ Λ`.
#[derive(Clone, Debug)]
pub struct Presentation<F: Field> {
    pub quiver: Quiver,
    pub family: VertexAlgebraFamily<F>,
    pub mode: RelationMode,
    /// Nilpotency index of the radical.
    pub t: usize,
    /// Vertex idempotents `e'_ii ∈ A`.
    pub idempotents: Vec<Vec<F::Elem>>,
    /// `vertex_maps[i]`: `dim Λ × dim Ω_ii`, the inclusion of `Ω_ii` through `ξ`.
    pub vertex_maps: Vec<Matrix<F>>,
    /// Arrow representatives in `e'_g r e'_h`.
    pub arrow_images: Vec<Vec<F::Elem>>,
    /// The free `(t+1)`-truncation the map is defined on.
    pub free: TruncatedGpa<F>,
    /// `φ` on `free`: `dim Λ × dim free`.
    pub phi: Matrix<F>,
    /// `N = ker φ` in free coordinates.
    pub kernel: Subspace<F>,
    /// An irredundant set of ideal generators of `N`.
    pub relations: Vec<PathCombination<F>>,
}

impl<F: Field> Presentation<F> {
    pub fn truncation(&self) -> usize {
        self.t + 1
    }
    pub fn relation_set(&self) -> Result<RelationSet<F>, GpaError> {
        RelationSet::new(self.family.field(), self.relations.clone(), self.truncation(), self.mode)
    }
    pub fn arrow_count(&self) -> usize {
        self.quiver.arrows().len()
    }
}

fn to_combination<F: Field>(gpa: &TruncatedGpa<F>, v: &[F::Elem]) -> PathCombination<F> {
    let f = gpa.algebra.field();
    v.iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(c))
        .map(|(k, c)| (gpa.paths[k].clone(), c.clone()))
        .collect()
}

/// Ideal generators of `n`: a complement of `J n + n J` (enough, as `J` is
/// nilpotent), then pruned so that none is generated by the others.
/// Generator sets larger than this keep the greedy order without pruning.
const IRREDUNDANCY_LIMIT: usize = 48;

fn irredundant_generators<F: Field>(gpa: &TruncatedGpa<F>, n: &Subspace<F>) -> Vec<Vec<F::Elem>> {
    let alg = &gpa.algebra;
    let f = alg.field();
    // N ⊆ J is an ideal, so D = JN + NJ is spanned by products with length-1 paths.
    let ones: Vec<Vec<F::Elem>> = (0..alg.dim()).filter(|&k| gpa.paths[k].len() == 1).map(|k| alg.basis_element(k)).collect();
    let omega: Vec<Vec<F::Elem>> = (0..alg.dim()).filter(|&k| gpa.paths[k].is_empty()).map(|k| alg.basis_element(k)).collect();
    let mut decomposable = EchelonBuilder::new(f, alg.dim());
    for v in n.basis_vectors() {
        for b in &ones {
            decomposable.insert(&alg.mul(b, &v));
            decomposable.insert(&alg.mul(&v, b));
        }
    }
    let candidates = n.complement_of(&decomposable.clone().into_subspace()).expect("same ambient");
    // J is nilpotent, so by Nakayama a set generates N as an ideal exactly when
    // its Ω-bimodule span covers N modulo D.
    let bimodule = |g: &[F::Elem]| -> Vec<Vec<F::Elem>> {
        omega
            .iter()
            .flat_map(|a| {
                let ag = alg.mul(a, g);
                omega.iter().map(move |b| alg.mul(&ag, b)).collect::<Vec<_>>()
            })
            .collect()
    };
    let mut span = decomposable.clone();
    let mut gens = Vec::new();
    for g in candidates {
        if !span.contains(&g) {
            for v in bimodule(&g) {
                span.insert(&v);
            }
            gens.push(g);
        }
    }
    if gens.len() <= IRREDUNDANCY_LIMIT {
        let spans: Vec<Vec<Vec<F::Elem>>> = gens.iter().map(|g| bimodule(g)).collect();
        let mut alive = vec![true; gens.len()];
        for k in (0..gens.len()).rev() {
            let mut rest = decomposable.clone();
            for v in (0..gens.len()).filter(|&i| i != k && alive[i]).flat_map(|i| &spans[i]) {
                rest.insert(v);
            }
            alive[k] = !rest.contains(&gens[k]);
        }
        gens = gens.into_iter().zip(alive).filter(|(_, a)| *a).map(|(g, _)| g).collect();
    }
    gens
}

fn arrow_name(n_vertices: usize, g: usize, h: usize, k: usize, count: usize) -> String {
    let base = if n_vertices <= 9 { format!("x{}{}", g + 1, h + 1) } else { format!("x{}_{}", g + 1, h + 1) };
    if count == 1 {
        base
    } else {
        let mut suffix = String::new();
        let mut k = k;
        loop {
            suffix.insert(0, (b'a' + (k % 26) as u8) as char);
            if k < 26 {
                break;
            }
            k = k / 26 - 1;
        }
        format!("{base}{suffix}")
    }
}

#[derive(Clone, Debug, Default)]
pub struct PresentationOptions {
    /// Groups of Wedderburn blocks forming the vertices; `None` is one
    /// vertex per block.
    pub grouping: Option<Vec<Vec<usize>>>,
    pub max_paths: Option<usize>,
}

/// Presentation with vertex algebras the (grouped) Wedderburn blocks of `Λ/r`.
pub fn extract_presentation<F: RootFinder>(alg: &FdAlgebra<F>, seed: u64, opts: &PresentationOptions) -> Result<Presentation<F>, PresentationError> {
    let split = compute_splitting(alg, seed)?;
    present_from_splitting(&split, opts, RelationMode::WeakRelations)
}

/// Presentation of a generalized elementary algebra by an ordinary quiver
/// with relations in `J²`.
pub fn extract_elementary_presentation<F: RootFinder>(alg: &FdAlgebra<F>, seed: u64) -> Result<Presentation<F>, PresentationError> {
    let split = compute_splitting(alg, seed)?;
    for (b, mu) in split.residual_units.iter().enumerate() {
        if mu.size != 1 {
            return Err(PresentationError::NotElementary(b, mu.size * mu.size));
        }
    }
    present_from_splitting(&split, &PresentationOptions::default(), RelationMode::Relations)
}

pub fn present_from_splitting<F: Field>(split: &Splitting<F>, opts: &PresentationOptions, mode: RelationMode) -> Result<Presentation<F>, PresentationError> {
    let alg = &split.algebra;
    let f = alg.field();
    let nb = split.block_count();
    let groups = opts.grouping.clone().unwrap_or_else(|| (0..nb).map(|b| vec![b]).collect());
    let mut seen = vec![false; nb];
    for g in &groups {
        if g.is_empty() {
            return Err(PresentationError::BadGrouping("empty group".into()));
        }
        for &b in g {
            if b >= nb || std::mem::replace(&mut seen[b], true) {
                return Err(PresentationError::BadGrouping(format!("block {b} out of range or repeated")));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(PresentationError::BadGrouping("not every block is covered".into()));
    }
    let nv = groups.len();
    let block_unities = split.block_unities();

    // Vertex algebras: the residual matrix units of each group as basis.
    let mut omegas = Vec::with_capacity(nv);
    let mut vertex_maps = Vec::with_capacity(nv);
    let mut idempotents = Vec::with_capacity(nv);
    let s = split.quotient();
    for g in &groups {
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        let mut lifted = Vec::new();
        for &b in g {
            let (res, lif) = (&split.residual_units[b], &split.lifted_units[b]);
            for a in 0..res.size {
                for c in 0..res.size {
                    basis.push(res.units[a][c].clone());
                    lifted.push(lif.units[a][c].clone());
                    let core = if res.size == 1 { "e".to_string() } else { format!("E{}{}", a + 1, c + 1) };
                    labels.push(if g.len() == 1 { core } else { format!("b{}.{}", b + 1, core) });
                }
            }
        }
        let space = Subspace::from_spanning(f, s.dim(), &basis);
        let (omega, _) = s.subalgebra(Some(basis), &space, Some(labels))?;
        omegas.push(omega);
        vertex_maps.push(Matrix::from_columns(f, alg.dim(), &lifted));
        idempotents.push(g.iter().fold(alg.zero(), |acc, &b| vec_ops::add(f, &acc, &block_unities[b])));
    }
    validate_complete_set(alg, &idempotents)?;
    for e in &idempotents {
        // Vertex idempotents lie in A.
        if !vec_ops::is_zero(f, &split.component_r(e)) {
            return Err(PresentationError::LiftFailed);
        }
    }
    let vertex_names: Vec<String> = (1..=nv).map(|i| i.to_string()).collect();

    // Arrows: complement of e r e' ∩ r² in e r e'.
    let r = split.radical.radical.space();
    let r2 = alg.product_space(r, r);
    let mut arrows = Vec::new();
    let mut arrow_images = Vec::new();
    for gi in 0..nv {
        for hi in 0..nv {
            let corner = alg.corner(&idempotents[gi], &idempotents[hi]).intersection(r).map_err(AlgebraError::from)?;
            let deep = corner.intersection(&r2).map_err(AlgebraError::from)?;
            let reps = corner.complement_of(&deep).map_err(AlgebraError::from)?;
            let count = reps.len();
            for (k, x) in reps.into_iter().enumerate() {
                arrows.push(Arrow {
                    name: arrow_name(nv, gi, hi, k, count),
                    source: gi,
                    target: hi,
                });
                arrow_images.push(x);
            }
        }
    }
    let quiver = Quiver::new(vertex_names, arrows)?;
    let family = VertexAlgebraFamily::new(&quiver, omegas)?;
    let t = split.radical.nilpotency_index;
    let max_paths = opts.max_paths.unwrap_or(DEFAULT_MAX_PATHS);
    let free = build_truncated_gpa_with(&quiver, &family, &RelationSet::empty(t + 1), max_paths)?;
    let phi = gpa_hom_from_generators(&free, alg, &vertex_maps, &arrow_images)?;
    if phi.rank() != alg.dim() {
        return Err(PresentationError::NotSurjective);
    }
    // The kernel of a map verified multiplicative on all basis pairs is an ideal.
    let kernel = phi.kernel();
    let length = |k: usize| free.paths[k].len();
    for v in kernel.basis_vectors() {
        let floor = match mode {
            RelationMode::WeakRelations => 1,
            RelationMode::Relations => 2,
        };
        if v.iter().enumerate().any(|(k, c)| !f.is_zero(c) && length(k) < floor) {
            return Err(match mode {
                RelationMode::WeakRelations => PresentationError::KernelNotInJ,
                RelationMode::Relations => PresentationError::KernelNotInJ2,
            });
        }
    }
    // J^t ⊆ N: every length-t path dies.
    for (k, p) in free.paths.iter().enumerate() {
        if p.len() == t && !vec_ops::is_zero(f, &phi.column(k)) {
            return Err(PresentationError::KernelNotInJ);
        }
    }
    let relations = irredundant_generators(&free, &kernel)
        .iter()
        .map(|v| to_combination(&free, v))
        .collect();
    Ok(Presentation {
        quiver,
        family,
        mode,
        t,
        idempotents,
        vertex_maps,
        arrow_images,
        free,
        phi,
        kernel,
        relations,
    })
}

/// End-to-end check that a presentation describes `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationReport {
    pub target_dim: usize,
    pub quotient_dim: Option<usize>,
    pub vertices: usize,
    pub arrows: usize,
    pub mode: RelationMode,
    /// Named checks in a fixed order.
    pub checks: Vec<(String, bool)>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, ok)| *ok)
    }
}

/// Rebuilds `k(D, Ω)/N` from the presentation data and checks that `φ`
/// descends to an isomorphism onto `target`. Failures are reported, not
/// returned as errors.
pub fn verify_presentation<F: Field>(p: &Presentation<F>, target: &FdAlgebra<F>) -> PresentationReport {
    let f = target.field();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut quotient_dim = None;

    let idem_ok = validate_complete_set(target, &p.idempotents).is_ok();
    checks.push(("idempotents".into(), idem_ok));

    // Arrow counts against dim e_g (r/r²) e_h.
    let counts_ok = idem_ok
        && match radical(target) {
            Ok(rad) => {
                let r = rad.radical.space();
                let r2 = target.product_space(r, r);
                let n = p.quiver.vertex_count();
                (0..n).all(|g| {
                    (0..n).all(|h| {
                        let corner = target.corner(&p.idempotents[g], &p.idempotents[h]);
                        let (Ok(c), Ok(d)) = (corner.intersection(r), corner.intersection(&r2)) else { return false };
                        c.dim() - d.dim() == p.quiver.arrows_between(g, h)
                    })
                })
            }
            Err(_) => false,
        };
    checks.push(("arrow-count".into(), counts_ok));

    let built = p.relation_set().map_err(GpaError::from).and_then(|rels| build_truncated_gpa(&p.quiver, &p.family, &rels));
    match built {
        Ok(q) => {
            quotient_dim = Some(q.algebra.dim());
            checks.push(("dimension".into(), q.algebra.dim() == target.dim()));
            let j_floor = match p.mode {
                RelationMode::WeakRelations => 1,
                RelationMode::Relations => 2,
            };
            let n_in_j = p.relations.iter().all(|r| r.iter().all(|(path, c)| f.is_zero(c) || path.len() >= j_floor));
            checks.push(("relations-in-J".into(), n_in_j));
            let t = p.t;
            let top: Vec<&BasisPath> = q.free().paths.iter().filter(|path| path.len() == t).collect();
            let jt_in_n = top.iter().all(|path| {
                let ix = q.free().index_of(path).expect("enumerated");
                q.relation_ideal().space().contains(&vec_ops::unit(f, q.free().paths.len(), ix))
            });
            checks.push(("J^t-in-N".into(), jt_in_n));
            match gpa_hom_from_generators(&q, target, &p.vertex_maps, &p.arrow_images) {
                Ok(phi) => {
                    checks.push(("homomorphism".into(), true));
                    let bij = phi.rows() == phi.cols() && phi.inverse().is_some();
                    checks.push(("bijective".into(), bij));
                }
                Err(_) => {
                    checks.push(("homomorphism".into(), false));
                    checks.push(("bijective".into(), false));
                }
            }
            let radical_ok = crate::gpa::jacobson_radical_is_arrow_ideal(&q).map(|c| c.equal).unwrap_or(false);
            checks.push(("radical-is-arrow-ideal".into(), radical_ok));
        }
        Err(_) => {
            for name in ["dimension", "relations-in-J", "J^t-in-N", "homomorphism", "bijective", "radical-is-arrow-ideal"] {
                checks.push((name.into(), false));
            }
        }
    }
    PresentationReport {
        target_dim: target.dim(),
        quotient_dim,
        vertices: p.quiver.vertex_count(),
        arrows: p.arrow_count(),
        mode: p.mode,
        checks,
    }
}

/// Number of simple blocks of `Λ/r`.
pub fn wedderburn_artin_number<F: RootFinder>(alg: &FdAlgebra<F>, seed: u64) -> Result<usize, PresentationError> {
    let rad = radical(alg)?;
    Ok(wedderburn_blocks(rad.semisimple_quotient(), seed)?.n_wa())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::models::*;

    #[test]
    fn splitting_semisimple_is_identity() {
        let f = Rationals;
        let m2 = matrix_algebra(&f, 2);
        let s = compute_splitting(&m2, 0).unwrap();
        assert!(s.radical.radical.space().is_zero());
        assert!(s.a_space.is_full());
        assert!(s.section.is_identity());
    }

    #[test]
    fn splitting_upper_triangular() {
        let f = Rationals;
        let t2 = upper_triangular(&f, 2);
        let s = compute_splitting(&t2, 0).unwrap();
        let diag = Subspace::from_spanning(&f, 3, &[t2.basis_element(0), t2.basis_element(2)]);
        assert_eq!(s.a_space, diag);
        assert_eq!(s.radical.radical.space(), &Subspace::from_spanning(&f, 3, &[t2.basis_element(1)]));
    }

    #[test]
    fn splitting_truncated_poly() {
        let f = Rationals;
        let a = truncated_poly(&f, 3);
        let s = compute_splitting(&a, 0).unwrap();
        assert_eq!(s.a_space, Subspace::from_spanning(&f, 3, &[a.basis_element(0)]));
    }

    #[test]
    fn presentation_of_m2() {
        let f = Rationals;
        let m2 = matrix_algebra(&f, 2);
        let p = extract_presentation(&m2, 0, &PresentationOptions::default()).unwrap();
        assert_eq!((p.quiver.vertex_count(), p.arrow_count()), (1, 0));
        assert!(p.kernel.is_zero());
        assert_eq!(p.family.get(0).dim(), 4);
        assert!(verify_presentation(&p, &m2).passed());
        assert!(matches!(extract_elementary_presentation(&m2, 0), Err(PresentationError::NotElementary(0, 4))));
    }

    #[test]
    fn presentation_of_upper_triangular() {
        let f = Rationals;
        let t2 = upper_triangular(&f, 2);
        let p = extract_presentation(&t2, 0, &PresentationOptions::default()).unwrap();
        assert_eq!((p.quiver.vertex_count(), p.arrow_count()), (2, 1));
        let a = &p.quiver.arrows()[0];
        assert_eq!((a.source, a.target), (0, 1));
        assert_eq!(p.t, 2);
        assert!(p.relations.is_empty());
        assert!(verify_presentation(&p, &t2).passed());
    }

    #[test]
    fn presentation_of_truncated_poly() {
        let f = Rationals;
        let a = truncated_poly(&f, 3);
        let p = extract_presentation(&a, 0, &PresentationOptions::default()).unwrap();
        assert_eq!((p.quiver.vertex_count(), p.arrow_count(), p.t), (1, 1, 3));
        // Truncation at level 4: 1, x, x², x³; kernel = x³.
        assert_eq!(p.free.algebra.dim(), 4);
        assert_eq!(p.kernel.dim(), 1);
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0][0].0.len(), 3);
        assert!(verify_presentation(&p, &a).passed());
    }

    #[test]
    fn elementary_presentations() {
        let f = Rationals;
        let a = truncated_poly(&f, 2);
        let p = extract_elementary_presentation(&a, 0).unwrap();
        assert_eq!(p.mode, RelationMode::Relations);
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0][0].0.len(), 2);
        assert!(verify_presentation(&p, &a).passed());

        let t3 = upper_triangular(&f, 3);
        let p = extract_elementary_presentation(&t3, 0).unwrap();
        assert_eq!((p.quiver.vertex_count(), p.arrow_count()), (3, 2));
        let report = verify_presentation(&p, &t3);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.quotient_dim, Some(6));
    }

    #[test]
    fn tampering_is_detected() {
        let f = Rationals;
        let a = truncated_poly(&f, 3);
        let mut p = extract_presentation(&a, 0, &PresentationOptions::default()).unwrap();
        p.relations.pop();
        let r = verify_presentation(&p, &a);
        assert_eq!(r.check("dimension"), Some(false));

        let t2 = upper_triangular(&f, 2);
        let p = extract_presentation(&t2, 0, &PresentationOptions::default()).unwrap();
        let mut arrows = p.quiver.arrows().to_vec();
        arrows[0].target = 0;
        let mut bad = p.clone();
        bad.quiver = Quiver::new(p.quiver.vertices().to_vec(), arrows).unwrap();
        let r = verify_presentation(&bad, &t2);
        assert_eq!(r.check("arrow-count"), Some(false));
    }

    #[test]
    fn grouping_blocks_into_fewer_vertices() {
        let f = Rationals;
        let t3 = upper_triangular(&f, 3);
        let t2 = upper_triangular(&f, 2);
        for (alg, grouping) in [(&t3, vec![vec![0], vec![1, 2]]), (&t3, vec![vec![0, 1], vec![2]]), (&t2, vec![vec![0, 1]])] {
            let m = grouping.len();
            let opts = PresentationOptions {
                grouping: Some(grouping),
                ..Default::default()
            };
            let p = extract_presentation(alg, 0, &opts).unwrap();
            assert_eq!(p.quiver.vertex_count(), m);
            let report = verify_presentation(&p, alg);
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn wedderburn_artin_numbers() {
        let f = Rationals;
        assert_eq!(wedderburn_artin_number(&matrix_algebra(&f, 2), 0).unwrap(), 1);
        assert_eq!(wedderburn_artin_number(&diagonal_algebra(&f, 3), 0).unwrap(), 3);
        assert_eq!(wedderburn_artin_number(&upper_triangular(&f, 2), 0).unwrap(), 2);
    }

    #[test]
    fn generalized_model_over_gf5() {
        let f = PrimeField::new(5).unwrap();
        let m2 = matrix_algebra(&f, 2);
        let p = extract_presentation(&m2, 0, &PresentationOptions::default()).unwrap();
        assert!(verify_presentation(&p, &m2).passed());
    }
}
