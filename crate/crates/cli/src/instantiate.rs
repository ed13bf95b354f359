//! Turns parsed declarations into library objects over a concrete field.

use thiserror::Error;

use gpalg::algebra::AlgebraError;
use gpalg::field::FieldError;
use gpalg::gpa::{build_truncated_gpa_with, BasisPath, GpaError, PathCombination, Quiver, RelationMode, RelationSet, TruncatedGpa, VertexAlgebraFamily};
use gpalg::representations::QuiverRepresentation;
use gpalg::{FdAlgebra, Field, Matrix};

use crate::workspace::{AlgebraDecl, MatrixLit, ModeDecl, PathTerm, PathToken, QuiverDecl, RepDecl, SparseTerms, Workspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("{0}: {1}")]
    Field(String, FieldError),
    #[error("algebra {0}: {1}")]
    Algebra(String, AlgebraError),
    #[error("quiver {0}: {1}")]
    Gpa(String, GpaError),
    #[error("{0}")]
    Invalid(String),
}

impl BuildError {
    pub fn is_unsupported_domain(&self) -> bool {
        matches!(self, BuildError::Gpa(_, GpaError::PathExplosion(_)))
    }
}

fn coeff<F: Field>(f: &F, ctx: &str, c: &num_rational::BigRational) -> Result<F::Elem, BuildError> {
    f.from_rational(c).map_err(|e| BuildError::Field(ctx.to_string(), e))
}

fn dense<F: Field>(f: &F, ctx: &str, dim: usize, terms: &SparseTerms) -> Result<Vec<F::Elem>, BuildError> {
    let mut v = vec![f.zero(); dim];
    for (k, c) in terms {
        let c = coeff(f, ctx, c)?;
        f.add_assign(&mut v[*k], &c);
    }
    Ok(v)
}

pub fn build_algebra<F: Field>(f: &F, decl: &AlgebraDecl) -> Result<FdAlgebra<F>, BuildError> {
    let n = decl.dim;
    let mut products = vec![vec![f.zero(); n]; n * n];
    for (i, j, terms) in &decl.products {
        products[i * n + j] = dense(f, &decl.name, n, terms)?;
    }
    FdAlgebra::from_products(f, n, products, Some(decl.label_list())).map_err(|e| BuildError::Algebra(decl.name.clone(), e))
}

pub fn build_idempotent_sets<F: Field>(f: &F, decl: &AlgebraDecl) -> Result<Vec<Vec<Vec<F::Elem>>>, BuildError> {
    decl.idempotent_sets
        .iter()
        .map(|set| set.iter().map(|e| dense(f, &decl.name, decl.dim, e)).collect())
        .collect()
}

pub fn build_quiver(decl: &QuiverDecl) -> Result<Quiver, BuildError> {
    let vertices: Vec<&str> = decl.vertices.iter().map(String::as_str).collect();
    let arrows: Vec<(&str, &str, &str)> = decl.arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
    Quiver::from_names(&vertices, &arrows).map_err(|e| BuildError::Gpa(decl.name.clone(), e))
}

pub fn build_family<F: Field>(f: &F, ws: &Workspace, decl: &QuiverDecl, quiver: &Quiver) -> Result<VertexAlgebraFamily<F>, BuildError> {
    let mut algebras = Vec::with_capacity(quiver.vertex_count());
    for v in quiver.vertices() {
        let alg = match decl.omega.iter().find(|(x, _)| x == v) {
            Some((_, a)) => {
                let a = ws.algebra(a).ok_or_else(|| BuildError::Invalid(format!("unknown algebra {a}")))?;
                build_algebra(f, a)?
            }
            None => FdAlgebra::from_products(f, 1, vec![vec![f.one()]], Some(vec!["e".into()])).expect("the ground field is an algebra"),
        };
        algebras.push(alg);
    }
    VertexAlgebraFamily::new(quiver, algebras).map_err(|e| BuildError::Gpa(decl.name.clone(), e))
}

fn unity_label<F: Field>(family: &VertexAlgebraFamily<F>, quiver: &Quiver, v: usize) -> Result<usize, BuildError> {
    let omega = family.get(v);
    let unity = omega.unity().expect("vertex algebras are unital");
    (0..omega.dim())
        .find(|&k| omega.basis_element(k) == unity)
        .ok_or_else(|| BuildError::Invalid(format!("vertex {} needs an explicit label in path terms", quiver.vertices()[v])))
}

fn label_index<F: Field>(family: &VertexAlgebraFamily<F>, quiver: &Quiver, v: usize, label: &str) -> Result<usize, BuildError> {
    family
        .get(v)
        .labels()
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| BuildError::Invalid(format!("label {label} does not belong to vertex {}", quiver.vertices()[v])))
}

/// Resolves `b0 . x1 . b1 …`; omitted labels stand for the unity.
pub fn resolve_path<F: Field>(quiver: &Quiver, family: &VertexAlgebraFamily<F>, tokens: &[PathToken]) -> Result<BasisPath, BuildError> {
    let mut pending: Option<(&Option<String>, &str)> = None;
    let mut arrows: Vec<usize> = Vec::new();
    let mut labels = Vec::new();
    let mut start = None;
    let resolve = |pending: Option<(&Option<String>, &str)>, v: usize| -> Result<usize, BuildError> {
        match pending {
            None => unity_label(family, quiver, v),
            Some((Some(q), _)) if quiver.vertex_index(q) != Some(v) => Err(BuildError::Invalid(format!("label qualified by {q} sits at vertex {}", quiver.vertices()[v]))),
            Some((_, l)) => label_index(family, quiver, v, l),
        }
    };
    for tok in tokens {
        match tok {
            PathToken::Label { vertex, label } => {
                if pending.is_some() {
                    return Err(BuildError::Invalid("two labels without an arrow between them".into()));
                }
                pending = Some((vertex, label));
            }
            PathToken::Arrow(name) => {
                let a = quiver.arrow_index(name).ok_or_else(|| BuildError::Invalid(format!("unknown arrow {name}")))?;
                let arrow = &quiver.arrows()[a];
                let here = match arrows.last() {
                    Some(&prev) => quiver.arrows()[prev].target,
                    None => arrow.source,
                };
                if here != arrow.source {
                    return Err(BuildError::Invalid(format!("arrow {name} does not compose with the preceding arrow")));
                }
                start.get_or_insert(arrow.source);
                labels.push(resolve(pending.take(), here)?);
                arrows.push(a);
            }
        }
    }
    let end = match arrows.last() {
        Some(&a) => quiver.arrows()[a].target,
        None => {
            let (vertex, label) = pending.ok_or_else(|| BuildError::Invalid("empty path term".into()))?;
            let v = match vertex {
                Some(q) => quiver.vertex_index(q).ok_or_else(|| BuildError::Invalid(format!("unknown vertex {q}")))?,
                None => {
                    let hits: Vec<usize> = (0..quiver.vertex_count()).filter(|&v| family.get(v).labels().iter().any(|l| l == label)).collect();
                    match hits.as_slice() {
                        [v] => *v,
                        _ => return Err(BuildError::Invalid(format!("label {label} is ambiguous; qualify it as vertex@{label}"))),
                    }
                }
            };
            start = Some(v);
            v
        }
    };
    labels.push(resolve(pending, end)?);
    Ok(BasisPath {
        start: start.expect("start vertex set"),
        arrows,
        labels,
    })
}

pub fn build_combination<F: Field>(f: &F, quiver: &Quiver, family: &VertexAlgebraFamily<F>, terms: &[PathTerm]) -> Result<PathCombination<F>, BuildError> {
    let mut out: PathCombination<F> = Vec::new();
    for t in terms {
        let p = resolve_path(quiver, family, &t.tokens)?;
        let c = coeff(f, "relation", &t.coeff)?;
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, acc)) => f.add_assign(acc, &c),
            None => out.push((p, c)),
        }
    }
    out.retain(|(_, c)| !f.is_zero(c));
    Ok(out)
}

pub fn build_relations<F: Field>(f: &F, decl: &QuiverDecl, quiver: &Quiver, family: &VertexAlgebraFamily<F>) -> Result<RelationSet<F>, BuildError> {
    let t = decl.truncate.ok_or_else(|| BuildError::Invalid(format!("quiver {} needs a `truncate` line", decl.name)))?;
    let mode = match decl.mode {
        Some(ModeDecl::Strict) => RelationMode::Relations,
        _ => RelationMode::WeakRelations,
    };
    let elements = decl
        .relations
        .iter()
        .map(|r| build_combination(f, quiver, family, &r.terms))
        .collect::<Result<Vec<_>, _>>()?;
    RelationSet::new(f, elements, t, mode).map_err(|e| BuildError::Gpa(decl.name.clone(), e))
}

pub fn build_gpa<F: Field>(f: &F, ws: &Workspace, decl: &QuiverDecl, max_paths: usize) -> Result<TruncatedGpa<F>, BuildError> {
    let quiver = build_quiver(decl)?;
    let family = build_family(f, ws, decl, &quiver)?;
    let relations = build_relations(f, decl, &quiver, &family)?;
    build_truncated_gpa_with(&quiver, &family, &relations, max_paths).map_err(|e| BuildError::Gpa(decl.name.clone(), e))
}

fn build_matrix<F: Field>(f: &F, ctx: &str, m: &MatrixLit, rows: usize, cols: usize) -> Result<Matrix<F>, BuildError> {
    if m.is_empty() && rows * cols == 0 {
        return Ok(Matrix::zeros(f, rows, cols));
    }
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(BuildError::Invalid(format!("{ctx} must be a {rows} x {cols} matrix")));
    }
    let data = m.iter().map(|r| r.iter().map(|c| coeff(f, ctx, c)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(f, cols, data))
}

/// Missing `vertex` lines mean dimension 0, missing `arrowmap` lines the
/// zero map, and missing `act` lines on a 1-dimensional vertex algebra the
/// identity.
pub fn build_rep<F: Field>(f: &F, decl: &RepDecl, gpa: &TruncatedGpa<F>) -> Result<QuiverRepresentation<F>, BuildError> {
    let quiver = &gpa.quiver;
    let family = &gpa.family;
    let dims: Vec<usize> = quiver
        .vertices()
        .iter()
        .map(|v| decl.dims.iter().find(|(x, _)| x == v).map_or(0, |(_, d)| *d))
        .collect();
    let mut vertex_actions = Vec::with_capacity(dims.len());
    for (v, name) in quiver.vertices().iter().enumerate() {
        let omega = family.get(v);
        let d = dims[v];
        let mut acts = Vec::with_capacity(omega.dim());
        for (k, label) in omega.labels().iter().enumerate() {
            let lit = decl.acts.iter().find(|(l, x, _)| l == label && x == name);
            let m = match lit {
                Some((_, _, m)) => build_matrix(f, &format!("act {label} {name}"), m, d, d)?,
                None if omega.dim() == 1 && omega.is_unity(&omega.basis_element(k)) => Matrix::identity(f, d),
                None if d == 0 => Matrix::zeros(f, 0, 0),
                None => return Err(BuildError::Invalid(format!("missing `act {label} {name}`"))),
            };
            acts.push(m);
        }
        vertex_actions.push(acts);
    }
    let arrow_maps = quiver
        .arrows()
        .iter()
        .map(|a| {
            let (rows, cols) = (dims[a.source], dims[a.target]);
            match decl.arrow_maps.iter().find(|(x, _)| *x == a.name) {
                Some((_, m)) => build_matrix(f, &format!("arrowmap {}", a.name), m, rows, cols),
                None => Ok(Matrix::zeros(f, rows, cols)),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QuiverRepresentation {
        dims,
        vertex_actions,
        arrow_maps,
    })
}
