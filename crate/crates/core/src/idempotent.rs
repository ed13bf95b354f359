//! Complete sets of pairwise orthogonal idempotents and what they induce:
//! generalized matrix (gm) decompositions `A_ij = e_ii A e_jj`, lifting of
//! idempotents modulo a nilpotent ideal, and the Wedderburn block data of a
//! semisimple algebra.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{crt_idempotent_poly, radical, refine_idempotent, AlgebraError, FdAlgebra, Ideal, QuotientAlgebra};
use crate::field::{Field, PrimeField};
use crate::linalg::{vec_ops, Matrix, Subspace};
use crate::par;
use crate::poly::{self, RootFinder};

/// Random attempts allowed per split before giving up.
pub const SPLIT_RETRIES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdempotentError {
    #[error("element {0} is zero")]
    ZeroElement(usize),
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("elements {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("the sum of the set does not act as a two-sided unity")]
    Incomplete,
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("ideal is not nilpotent")]
    NotNilpotent,
    #[error("idempotent refinement did not converge")]
    LiftDiverged,
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("center could not be split after {0} random retries")]
    SplittingFailed(usize),
    #[error("block {0} is not a full matrix algebra over the ground field")]
    NotSplit(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Which Def.-style condition a candidate set violates, for diagnostics.
impl IdempotentError {
    pub fn reason(&self) -> &'static str {
        match self {
            IdempotentError::ZeroElement(_) => "zero-element",
            IdempotentError::NotIdempotent(_) | IdempotentError::NotOrthogonal(..) => "orthogonality",
            IdempotentError::Incomplete => "completeness",
            _ => "other",
        }
    }
}

/// A validated complete set of pairwise orthogonal nonzero idempotents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentSet<F: Field> {
    elements: Vec<Vec<F::Elem>>,
}

impl<F: Field> IdempotentSet<F> {
    pub fn elements(&self) -> &[Vec<F::Elem>] {
        &self.elements
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn get(&self, i: usize) -> &[F::Elem] {
        &self.elements[i]
    }
    pub fn sum(&self, f: &F, dim: usize) -> Vec<F::Elem> {
        self.elements.iter().fold(vec_ops::zero(f, dim), |acc, e| vec_ops::add(f, &acc, e))
    }
    pub fn into_elements(self) -> Vec<Vec<F::Elem>> {
        self.elements
    }
}

/// Checks idempotency, pairwise orthogonality, nonvanishing and that the sum
/// acts as a two-sided unity. For unital algebras the last condition is
/// exactly `Σ e_ii = u`.
pub fn validate_complete_set<F: Field>(alg: &FdAlgebra<F>, candidates: &[Vec<F::Elem>]) -> Result<IdempotentSet<F>, IdempotentError> {
    let f = alg.field();
    for (i, e) in candidates.iter().enumerate() {
        if e.len() != alg.dim() {
            return Err(AlgebraError::DimensionMismatch(alg.dim(), e.len()).into());
        }
        if vec_ops::is_zero(f, e) {
            return Err(IdempotentError::ZeroElement(i));
        }
    }
    let n = candidates.len();
    let bad = par::find_first(n * n, |ij| {
        let (i, j) = (ij / n, ij % n);
        let p = alg.mul(&candidates[i], &candidates[j]);
        let ok = if i == j { p == candidates[i] } else { vec_ops::is_zero(f, &p) };
        (!ok).then_some(())
    });
    if let Some((ij, ())) = bad {
        let (i, j) = (ij / n, ij % n);
        return Err(if i == j { IdempotentError::NotIdempotent(i) } else { IdempotentError::NotOrthogonal(i, j) });
    }
    let s = candidates.iter().fold(alg.zero(), |acc, e| vec_ops::add(f, &acc, e));
    if !alg.is_unity(&s) {
        return Err(IdempotentError::Incomplete);
    }
    Ok(IdempotentSet {
        elements: candidates.to_vec(),
    })
}

/// Groups idempotents and sums each group.
pub fn merge_idempotents<F: Field>(alg: &FdAlgebra<F>, set: &IdempotentSet<F>, partition: &[Vec<usize>]) -> Result<IdempotentSet<F>, IdempotentError> {
    let f = alg.field();
    let mut seen = vec![false; set.len()];
    for group in partition {
        if group.is_empty() {
            return Err(IdempotentError::BadPartition("empty group".into()));
        }
        for &i in group {
            if i >= set.len() {
                return Err(IdempotentError::BadPartition(format!("index {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(IdempotentError::BadPartition(format!("index {i} repeated")));
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(IdempotentError::BadPartition(format!("index {i} not covered")));
    }
    let merged: Vec<Vec<F::Elem>> = partition
        .iter()
        .map(|g| g.iter().fold(alg.zero(), |acc, &i| vec_ops::add(f, &acc, set.get(i))))
        .collect();
    validate_complete_set(alg, &merged)
}

/// The partition `{0}, {1}, …, {m-2}, {m-1, …, n-1}` of `n` indices into `m` groups.
pub fn tail_merge_partition(n: usize, m: usize) -> Vec<Vec<usize>> {
    assert!(m >= 1 && m <= n);
    let mut groups: Vec<Vec<usize>> = (0..m - 1).map(|i| vec![i]).collect();
    groups.push((m - 1..n).collect());
    groups
}

/// `A = ⊕ A_ij` with `A_ij = e_ii A e_jj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmDecomposition<F: Field> {
    unit: IdempotentSet<F>,
    blocks: Vec<Vec<Subspace<F>>>,
}

impl<F: Field> GmDecomposition<F> {
    pub fn unit(&self) -> &IdempotentSet<F> {
        &self.unit
    }
    pub fn size(&self) -> usize {
        self.unit.len()
    }
    pub fn block(&self, i: usize, j: usize) -> &Subspace<F> {
        &self.blocks[i][j]
    }
    pub fn block_dims(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|row| row.iter().map(Subspace::dim).collect()).collect()
    }

    /// `Σ dim A_ij = dim A` and the blocks together span `A`.
    pub fn check_direct_sum(&self, alg: &FdAlgebra<F>) -> bool {
        let total: usize = self.blocks.iter().flatten().map(Subspace::dim).sum();
        if total != alg.dim() {
            return false;
        }
        let mut span = Subspace::zero(alg.field(), alg.dim());
        for b in self.blocks.iter().flatten() {
            span = span.sum(b).expect("same ambient");
        }
        span.is_full()
    }

    /// `A_ij · A_st ⊆ δ_js A_it` on block bases.
    pub fn check_block_products(&self, alg: &FdAlgebra<F>) -> bool {
        let n = self.size();
        let f = alg.field();
        let pairs: Vec<(usize, usize, usize, usize)> = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).flat_map(move |s| (0..n).map(move |t| (i, j, s, t)))))
            .collect();
        par::find_first(pairs.len(), |p| {
            let (i, j, s, t) = pairs[p];
            let left = self.blocks[i][j].basis_vectors();
            let right = self.blocks[s][t].basis_vectors();
            for x in &left {
                for y in &right {
                    let xy = alg.mul(x, y);
                    let ok = if j == s { self.blocks[i][t].contains(&xy) } else { vec_ops::is_zero(f, &xy) };
                    if !ok {
                        return Some(());
                    }
                }
            }
            None
        })
        .is_none()
    }
}

/// Decomposes `alg` along a complete idempotent set.
pub fn gm_decompose<F: Field>(alg: &FdAlgebra<F>, unit: &IdempotentSet<F>) -> Result<GmDecomposition<F>, IdempotentError> {
    let unit = validate_complete_set(alg, unit.elements())?;
    let n = unit.len();
    let flat = par::map_range(n * n, |ij| alg.corner(unit.get(ij / n), unit.get(ij % n)));
    let mut it = flat.into_iter();
    let blocks = (0..n).map(|_| it.by_ref().take(n).collect()).collect();
    Ok(GmDecomposition { unit, blocks })
}

/// `x - s x - x s + s x s`, i.e. `(1 - s) x (1 - s)` without needing a unity.
fn compress<F: Field>(alg: &FdAlgebra<F>, s: &[F::Elem], x: &[F::Elem]) -> Vec<F::Elem> {
    let f = alg.field();
    let sx = alg.mul(s, x);
    let xs = alg.mul(x, s);
    let sxs = alg.mul(&sx, s);
    let mut out = vec_ops::sub(f, x, &sx);
    out = vec_ops::sub(f, &out, &xs);
    vec_ops::add(f, &out, &sxs)
}

/// Iterates `e ↦ 3e² − 2e³` until `e² = e`. Returns the idempotent and the
/// number of steps, or `None` after `cap` steps.
pub fn refine_to_idempotent<F: Field>(alg: &FdAlgebra<F>, e: &[F::Elem], cap: usize) -> Option<(Vec<F::Elem>, usize)> {
    let mut e = e.to_vec();
    for steps in 0..=cap {
        if alg.mul(&e, &e) == e {
            return Some((e, steps));
        }
        e = refine_idempotent(alg, &e);
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedIdempotents<F: Field> {
    pub set: IdempotentSet<F>,
    /// Total refinement steps over all elements.
    pub iterations: usize,
}

/// Lifts a complete idempotent set of `A / I` to one of `A`, for nilpotent `I`.
pub fn lift_idempotents<F: Field>(
    alg: &FdAlgebra<F>,
    ideal: &Ideal<F>,
    quotient: &QuotientAlgebra<F>,
    residual: &IdempotentSet<F>,
) -> Result<LiftedIdempotents<F>, IdempotentError> {
    let f = alg.field();
    let t = alg.nilpotency_index(ideal.space()).ok_or(IdempotentError::NotNilpotent)?;
    // Quadratic convergence: the defect lies in I^(2^k) after k steps.
    let cap = usize::BITS as usize - t.leading_zeros() as usize + 2;
    let mut lifted: Vec<Vec<F::Elem>> = Vec::with_capacity(residual.len());
    let mut iterations = 0;
    let mut s = alg.zero();
    for r in residual.elements() {
        let pre = quotient.lift(r);
        let x = if lifted.is_empty() { pre } else { compress(alg, &s, &pre) };
        let (e, steps) = refine_to_idempotent(alg, &x, cap).ok_or(IdempotentError::LiftDiverged)?;
        iterations += steps;
        s = vec_ops::add(f, &s, &e);
        lifted.push(e);
    }
    for (e, r) in lifted.iter().zip(residual.elements()) {
        if quotient.project(e) != *r {
            return Err(IdempotentError::LiftDiverged);
        }
    }
    let set = validate_complete_set(alg, &lifted)?;
    Ok(LiftedIdempotents { set, iterations })
}

/// One simple block `B = z S z` of a semisimple algebra `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedderburnBlock<F: Field> {
    pub algebra: FdAlgebra<F>,
    /// `dim S × dim B` matrix embedding the block basis into `S`.
    pub embedding: Matrix<F>,
    pub center_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedderburnData<F: Field> {
    pub central_idempotents: IdempotentSet<F>,
    pub blocks: Vec<WedderburnBlock<F>>,
}

impl<F: Field> WedderburnData<F> {
    /// The Wedderburn–Artin number: how many simple blocks there are.
    pub fn n_wa(&self) -> usize {
        self.blocks.len()
    }
}

/// Canonical order: position of the first nonzero coordinate, then
/// lexicographic in the field order.
pub fn sort_canonically<F: Field>(f: &F, elems: &mut [Vec<F::Elem>]) {
    elems.sort_by(|a, b| {
        let lead = |v: &[F::Elem]| v.iter().position(|x| !f.is_zero(x)).unwrap_or(usize::MAX);
        lead(a).cmp(&lead(b)).then_with(|| vec_ops::canonical_cmp(f, b, a))
    });
}

/// Tries to write the idempotent `unit` as a sum of two nonzero orthogonal
/// idempotents polynomial in `y ∈ unit·A·unit`, using a root of the minimal
/// polynomial of `y` that splits it into coprime factors.
fn split_by_element<F: RootFinder>(
    alg: &FdAlgebra<F>,
    unit: &[F::Elem],
    y: &[F::Elem],
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<F::Elem>, Vec<F::Elem>)> {
    let f = alg.field();
    let m = alg.min_poly(y, unit);
    if poly::degree(f, &m).unwrap_or(0) < 2 {
        return None;
    }
    for a in f.roots(&m, rng) {
        let (k, rest) = poly::split_root(f, &m, &a);
        if poly::degree(f, &rest).unwrap_or(0) == 0 {
            continue;
        }
        let mut power = vec![f.one()];
        for _ in 0..k {
            power = poly::mul(f, &power, &poly::linear(f, &a));
        }
        let e_poly = crt_idempotent_poly(f, &power, &rest);
        let e1 = alg.eval_poly(&e_poly, y, unit);
        let e2 = vec_ops::sub(f, unit, &e1);
        if !vec_ops::is_zero(f, &e1) && !vec_ops::is_zero(f, &e2) {
            return Some((e1, e2));
        }
    }
    None
}

/// Central primitive idempotents and simple blocks of a semisimple algebra.
/// The result does not depend on `seed`.
pub fn wedderburn_blocks<F: RootFinder>(semisimple: &FdAlgebra<F>, seed: u64) -> Result<WedderburnData<F>, IdempotentError> {
    let f = semisimple.field();
    let unity = semisimple.unity().ok_or(AlgebraError::NoUnity)?.to_vec();
    if !radical(semisimple)?.radical.space().is_zero() {
        return Err(IdempotentError::NotSemisimple);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = semisimple.center();
    let center_basis = center.basis_vectors();
    let local_center = |z: &[F::Elem]| -> Subspace<F> {
        let v: Vec<Vec<F::Elem>> = center_basis.iter().map(|c| semisimple.mul(z, c)).collect();
        Subspace::from_spanning(f, semisimple.dim(), &v)
    };

    let mut pending = if semisimple.dim() == 0 { Vec::new() } else { vec![unity] };
    let mut done = Vec::new();
    while let Some(z) = pending.pop() {
        let zc = local_center(&z);
        if zc.dim() <= 1 {
            done.push(z);
            continue;
        }
        let mut split = None;
        for y in zc.basis_vectors() {
            split = split_by_element(semisimple, &z, &y, &mut rng);
            if split.is_some() {
                break;
            }
        }
        let mut attempts = 0;
        while split.is_none() && attempts < SPLIT_RETRIES {
            let y = semisimple.random_in(&zc, &mut rng, 5);
            split = split_by_element(semisimple, &z, &y, &mut rng);
            attempts += 1;
        }
        let (a, b) = split.ok_or(IdempotentError::SplittingFailed(SPLIT_RETRIES))?;
        pending.push(a);
        pending.push(b);
    }
    sort_canonically(f, &mut done);
    let central_idempotents = validate_complete_set(semisimple, &done)?;
    let blocks = central_idempotents
        .elements()
        .iter()
        .map(|z| {
            let space = semisimple.corner(z, z);
            let (algebra, embedding) = semisimple.subalgebra(None, &space, None)?;
            let center_dim = local_center(z).dim();
            Ok(WedderburnBlock {
                algebra,
                embedding,
                center_dim,
            })
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(WedderburnData { central_idempotents, blocks })
}

/// A full system of matrix units `E_ab` of a block isomorphic to `M_n(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixUnits<F: Field> {
    pub size: usize,
    /// `units[a][b]` is `E_ab` in ambient coordinates.
    pub units: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> MatrixUnits<F> {
    pub fn diagonal(&self) -> Vec<Vec<F::Elem>> {
        (0..self.size).map(|a| self.units[a][a].clone()).collect()
    }
    /// All units in row-major order.
    pub fn flat(&self) -> Vec<Vec<F::Elem>> {
        self.units.iter().flatten().cloned().collect()
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Matrix units of the simple block `z S z` of a semisimple algebra `S`,
/// where `z` is a central primitive idempotent. Fails with `NotSplit` if the
/// block is not a full matrix algebra over the ground field (or no zero
/// divisor turns up within the retry budget).
pub fn matrix_units<F: RootFinder>(alg: &FdAlgebra<F>, z: &[F::Elem], block_index: usize, seed: u64) -> Result<MatrixUnits<F>, IdempotentError> {
    let f = alg.field();
    let not_split = IdempotentError::NotSplit(block_index);
    let block = alg.corner(z, z);
    let n = isqrt(block.dim());
    if n * n != block.dim() || n == 0 {
        return Err(not_split);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (block_index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let basis: Vec<Vec<F::Elem>> = (0..alg.dim()).map(|k| alg.basis_element(k)).collect();

    let mut pending = vec![z.to_vec()];
    let mut primitive = Vec::new();
    while let Some(e) = pending.pop() {
        let corner = alg.corner(&e, &e);
        if corner.dim() == 1 {
            primitive.push(e);
            continue;
        }
        let mut split = None;
        // Compressions of basis elements and of their pairwise products first:
        // in a matrix-unit-like basis these already have rational eigenvalues.
        'search: for k in 0..alg.dim() {
            let y = alg.mul3(&e, &basis[k], &e);
            if vec_ops::is_zero(f, &y) {
                continue;
            }
            if let Some(s) = split_by_element(alg, &e, &y, &mut rng) {
                split = Some(s);
                break 'search;
            }
        }
        if split.is_none() {
            'pairs: for k in 0..alg.dim() {
                let ek = alg.mul(&e, &basis[k]);
                if vec_ops::is_zero(f, &ek) {
                    continue;
                }
                for l in 0..alg.dim() {
                    let y = alg.mul3(&ek, &basis[l], &e);
                    if vec_ops::is_zero(f, &y) {
                        continue;
                    }
                    if let Some(s) = split_by_element(alg, &e, &y, &mut rng) {
                        split = Some(s);
                        break 'pairs;
                    }
                }
            }
        }
        let mut attempts = 0;
        while split.is_none() && attempts < SPLIT_RETRIES {
            let y = alg.random_in(&corner, &mut rng, 3);
            split = split_by_element(alg, &e, &y, &mut rng);
            attempts += 1;
        }
        let (a, b) = split.ok_or(not_split.clone())?;
        pending.push(a);
        pending.push(b);
    }
    if primitive.len() != n {
        return Err(not_split);
    }
    sort_canonically(f, &mut primitive);

    let first = &primitive[0];
    let lead = first.iter().position(|x| !f.is_zero(x)).expect("nonzero idempotent");
    let mut row0 = vec![first.clone()];
    let mut col0 = vec![first.clone()];
    for ej in &primitive[1..] {
        let top = alg.corner(first, ej);
        let bottom = alg.corner(ej, first);
        if top.dim() != 1 || bottom.dim() != 1 {
            return Err(not_split);
        }
        let u = top.basis_vectors().remove(0);
        let v = bottom.basis_vectors().remove(0);
        let uv = alg.mul(&u, &v);
        let lambda = f.div(&uv[lead], &first[lead]).ok_or(not_split.clone())?;
        let lambda_inv = f.inv(&lambda).ok_or(not_split.clone())?;
        let v = vec_ops::scale(f, &lambda_inv, &v);
        if alg.mul(&u, &v) != *first || alg.mul(&v, &u) != *ej {
            return Err(not_split);
        }
        row0.push(u);
        col0.push(v);
    }
    let units = (0..n)
        .map(|a| (0..n).map(|b| if a == 0 { row0[b].clone() } else { alg.mul(&col0[a], &row0[b]) }).collect())
        .collect();
    Ok(MatrixUnits { size: n, units })
}

/// Outcome of the primitivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitivity<F: Field> {
    Primitive,
    /// An idempotent of `eAe` other than `0` and `e`.
    NotPrimitive(Vec<F::Elem>),
    /// Neither a witness nor a proof was found (a non-split simple quotient).
    Undetermined,
}

/// Upper bound on `p^dim` for exhaustive search in `e A e` over `GF(p)`.
const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Exhaustive search for idempotents of `e A e` over a small prime field.
pub fn enumerate_corner_idempotents(alg: &FdAlgebra<PrimeField>, e: &[u64]) -> Option<Vec<Vec<u64>>> {
    let f = alg.field();
    let corner = alg.corner(e, e);
    let p = f.modulus();
    let d = corner.dim() as u32;
    if d > 6 || p.checked_pow(d).is_none_or(|c| c > ENUMERATION_LIMIT) {
        return None;
    }
    let total = p.pow(d);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let coords: Vec<u64> = (0..d)
            .map(|_| {
                let r = c % p;
                c /= p;
                r
            })
            .collect();
        let x = corner.combine(&coords);
        if alg.mul(&x, &x) == x {
            out.push(x);
        }
    }
    Some(out)
}

/// Whether `e` is primitive, i.e. `e A e` has no idempotents besides `0`, `e`.
pub fn is_primitive<F: RootFinder>(alg: &FdAlgebra<F>, e: &[F::Elem], seed: u64) -> Result<Primitivity<F>, IdempotentError> {
    let f = alg.field();
    if alg.mul(e, e) != e || vec_ops::is_zero(f, e) {
        return Err(IdempotentError::NotIdempotent(0));
    }
    let space = alg.corner(e, e);
    if space.dim() == 1 {
        return Ok(Primitivity::Primitive);
    }
    let (corner, embedding) = alg.subalgebra(None, &space, None)?;
    let rad = radical(&corner)?;
    let semisimple = rad.semisimple_quotient();
    if semisimple.dim() == 1 {
        return Ok(Primitivity::Primitive);
    }
    let residual = match wedderburn_blocks(semisimple, seed) {
        Ok(w) if w.n_wa() > 1 => Some(w.central_idempotents.get(0).to_vec()),
        Ok(w) => match matrix_units(semisimple, w.central_idempotents.get(0), 0, seed) {
            Ok(mu) => Some(mu.units[0][0].clone()),
            Err(_) => None,
        },
        Err(IdempotentError::SplittingFailed(_)) => None,
        Err(err) => return Err(err),
    };
    let Some(residual) = residual else {
        return Ok(Primitivity::Undetermined);
    };
    let comp = vec_ops::sub(f, semisimple.unity().expect("unital"), &residual);
    let res_set = validate_complete_set(semisimple, &[residual, comp])?;
    let lifted = lift_idempotents(&corner, &rad.radical, &rad.quotient, &res_set)?;
    Ok(Primitivity::NotPrimitive(embedding.mul_vec(lifted.set.get(0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ideal_closure, quotient_algebra};
    use crate::field::Rationals;
    use crate::models::*;

    #[test]
    fn gm_decomposition_of_single_unit() {
        let t2 = upper_triangular(&Rationals, 2);
        let set = validate_complete_set(&t2, &[t2.unity().unwrap().to_vec()]).unwrap();
        let d = gm_decompose(&t2, &set).unwrap();
        assert!(d.block(0, 0).is_full());
    }

    #[test]
    fn gm_decomposition_of_upper_triangular() {
        let f = Rationals;
        let t2 = upper_triangular(&f, 2); // E11, E12, E22
        let set = validate_complete_set(&t2, &[t2.basis_element(0), t2.basis_element(2)]).unwrap();
        let d = gm_decompose(&t2, &set).unwrap();
        let span = |i: usize| Subspace::from_spanning(&f, 3, &[t2.basis_element(i)]);
        assert_eq!(d.block(0, 0), &span(0));
        assert_eq!(d.block(0, 1), &span(1));
        assert_eq!(d.block(1, 1), &span(2));
        assert!(d.block(1, 0).is_zero());
        assert!(d.check_direct_sum(&t2));
        assert!(d.check_block_products(&t2));
    }

    #[test]
    fn coordinate_idempotents_of_product() {
        let kk = diagonal_algebra(&Rationals, 2);
        let set = validate_complete_set(&kk, &[kk.basis_element(0), kk.basis_element(1)]).unwrap();
        let d = gm_decompose(&kk, &set).unwrap();
        assert_eq!(d.block_dims(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn validation_failures() {
        let t2 = upper_triangular(&Rationals, 2);
        let err = validate_complete_set(&t2, &[t2.basis_element(0)]).unwrap_err();
        assert_eq!(err, IdempotentError::Incomplete);
        assert_eq!(err.reason(), "completeness");
        let err = validate_complete_set(&t2, &[t2.zero()]).unwrap_err();
        assert_eq!(err.reason(), "zero-element");
        let not_orth = validate_complete_set(&t2, &[t2.basis_element(0), t2.unity().unwrap().to_vec()]).unwrap_err();
        assert_eq!(not_orth.reason(), "orthogonality");
    }

    #[test]
    fn merging() {
        let t2 = upper_triangular(&Rationals, 2);
        let set = validate_complete_set(&t2, &[t2.basis_element(0), t2.basis_element(2)]).unwrap();
        assert_eq!(merge_idempotents(&t2, &set, &[vec![0], vec![1]]).unwrap(), set);
        let all = merge_idempotents(&t2, &set, &[vec![0, 1]]).unwrap();
        assert_eq!(all.get(0), t2.unity().unwrap());
        assert!(merge_idempotents(&t2, &set, &[vec![0]]).is_err());
        assert!(merge_idempotents(&t2, &set, &[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn lifting_through_zero_ideal_is_identity() {
        let kk = diagonal_algebra(&Rationals, 2);
        let zero = Ideal::zero(&kk);
        let qa = quotient_algebra(&kk, &zero).unwrap();
        let res = validate_complete_set(&qa.algebra, &[qa.algebra.basis_element(0), qa.algebra.basis_element(1)]).unwrap();
        let lifted = lift_idempotents(&kk, &zero, &qa, &res).unwrap();
        assert_eq!(lifted.iterations, 0);
        assert_eq!(lifted.set.elements(), res.elements());
    }

    #[test]
    fn lifting_upper_triangular_needs_no_iterations() {
        let t2 = upper_triangular(&Rationals, 2);
        let j = ideal_closure(&t2, &[t2.basis_element(1)]);
        let qa = quotient_algebra(&t2, &j).unwrap();
        let res = validate_complete_set(&qa.algebra, &[qa.algebra.basis_element(0), qa.algebra.basis_element(1)]).unwrap();
        let lifted = lift_idempotents(&t2, &j, &qa, &res).unwrap();
        assert_eq!(lifted.iterations, 0);
        assert_eq!(lifted.set.elements(), &[t2.basis_element(0), t2.basis_element(2)]);
    }

    #[test]
    fn refinement_from_one_plus_x() {
        // In k[x]/(x²): 3(1+x)² − 2(1+x)³ = 3 + 6x − 2 − 6x = 1.
        let a = truncated_poly(&Rationals, 2);
        let (e, steps) = refine_to_idempotent(&a, &[q(1), q(1)], 4).unwrap();
        assert_eq!(e, vec![q(1), q(0)]);
        assert_eq!(steps, 1);
    }

    #[test]
    fn wedderburn_examples() {
        let f = Rationals;
        let kk = diagonal_algebra(&f, 2);
        let w = wedderburn_blocks(&kk, 1).unwrap();
        assert_eq!(w.n_wa(), 2);
        assert!(w.blocks.iter().all(|b| b.algebra.dim() == 1));

        let m2 = matrix_algebra(&f, 2);
        assert_eq!(wedderburn_blocks(&m2, 1).unwrap().n_wa(), 1);

        let m2q = direct_product(&m2, &field_algebra(&f)).unwrap();
        let w = wedderburn_blocks(&m2q, 3).unwrap();
        let dims: Vec<usize> = w.blocks.iter().map(|b| b.algebra.dim()).collect();
        assert_eq!(dims, vec![4, 1]);
        assert_eq!(wedderburn_blocks(&m2q, 99).unwrap().central_idempotents, w.central_idempotents);
    }

    #[test]
    fn matrix_units_of_m3() {
        let f = Rationals;
        let m3 = matrix_algebra(&f, 3);
        let mu = matrix_units(&m3, m3.unity().unwrap(), 0, 5).unwrap();
        assert_eq!(mu.size, 3);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let p = m3.mul(&mu.units[a][b], &mu.units[c][d]);
                        let expect = if b == c { mu.units[a][d].clone() } else { m3.zero() };
                        assert_eq!(p, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn non_split_field_extension() {
        // Q(i) as a 2-dimensional Q-algebra: 1, i with i² = -1.
        let f = Rationals;
        let qi = FdAlgebra::from_products(&f, 2, vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(0), q(1)], vec![q(-1), q(0)]], None).unwrap();
        assert_eq!(wedderburn_blocks(&qi, 0), Err(IdempotentError::SplittingFailed(SPLIT_RETRIES)));
    }

    #[test]
    fn primitivity() {
        let f = Rationals;
        let m2 = matrix_algebra(&f, 2);
        assert_eq!(is_primitive(&m2, &m2.basis_element(0), 0).unwrap(), Primitivity::Primitive);
        match is_primitive(&m2, m2.unity().unwrap(), 0).unwrap() {
            Primitivity::NotPrimitive(w) => {
                assert_eq!(m2.mul(&w, &w), w);
                assert_ne!(w, m2.unity().unwrap().to_vec());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        let t2 = upper_triangular(&f, 2);
        assert!(matches!(is_primitive(&t2, t2.unity().unwrap(), 0).unwrap(), Primitivity::NotPrimitive(_)));
        let a = truncated_poly(&f, 3);
        assert_eq!(is_primitive(&a, a.unity().unwrap(), 0).unwrap(), Primitivity::Primitive);
    }

    #[test]
    fn primitivity_agrees_with_enumeration_over_gf5() {
        let f = PrimeField::new(5).unwrap();
        let t2 = upper_triangular(&f, 2);
        for e in [t2.basis_element(0), t2.unity().unwrap().to_vec()] {
            let all = enumerate_corner_idempotents(&t2, &e).unwrap();
            let nontrivial = all.iter().any(|x| !vec_ops::is_zero(&f, x) && *x != e);
            let verdict = is_primitive(&t2, &e, 0).unwrap();
            assert_eq!(nontrivial, matches!(verdict, Primitivity::NotPrimitive(_)));
        }
    }
}
