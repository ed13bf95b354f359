//! The line-oriented workspace format: parsing, reference checks and a
//! canonical printer.
//!
//! Basis indices in `mul` and `idempotents` lines are 1-based. Coefficients
//! are integers or fractions `a/b` and are kept as exact rationals until an
//! algebra is instantiated over its field.

use std::collections::HashSet;
use std::fmt::{self, Display, Write as _};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use gpalg::field::is_prime;
use gpalg::FieldDescriptor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {expected}")]
    SyntaxError { line: usize, col: usize, expected: String },
    #[error("{line}:{col}: unknown reference `{name}`")]
    UnknownReference { line: usize, col: usize, name: String },
    #[error("{line}:{col}: duplicate name `{name}`")]
    DuplicateName { line: usize, col: usize, name: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

pub type Coeff = BigRational;
pub type SparseTerms = Vec<(usize, Coeff)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDecl {
    pub name: String,
    pub dim: usize,
    pub field: FieldDescriptor,
    pub labels: Option<Vec<String>>,
    /// `(i, j, b_i b_j)`, 0-based.
    pub products: Vec<(usize, usize, SparseTerms)>,
    pub idempotent_sets: Vec<Vec<SparseTerms>>,
}

impl AlgebraDecl {
    pub fn label_list(&self) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| (1..=self.dim).map(|i| format!("b{i}")).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathToken {
    Arrow(String),
    Label { vertex: Option<String>, label: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTerm {
    pub coeff: Coeff,
    pub tokens: Vec<PathToken>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationDecl {
    pub name: String,
    pub terms: Vec<PathTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeDecl {
    Weak,
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverDecl {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String, String)>,
    /// `(vertex, algebra)`; unassigned vertices carry `k`.
    pub omega: Vec<(String, String)>,
    pub relations: Vec<RelationDecl>,
    pub truncate: Option<usize>,
    pub mode: Option<ModeDecl>,
}

pub type MatrixLit = Vec<Vec<Coeff>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepDecl {
    pub name: String,
    pub quiver: String,
    pub dims: Vec<(String, usize)>,
    /// `(label, vertex, matrix)`.
    pub acts: Vec<(String, String, MatrixLit)>,
    pub arrow_maps: Vec<(String, MatrixLit)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workspace {
    pub field: Option<FieldDescriptor>,
    pub algebras: Vec<AlgebraDecl>,
    pub quivers: Vec<QuiverDecl>,
    pub reps: Vec<RepDecl>,
}

impl Workspace {
    /// The field every object is defined over (`Q` for an empty workspace).
    pub fn field(&self) -> FieldDescriptor {
        self.field.or_else(|| self.algebras.first().map(|a| a.field)).unwrap_or(FieldDescriptor::Rationals)
    }
    pub fn algebra(&self, name: &str) -> Option<&AlgebraDecl> {
        self.algebras.iter().find(|a| a.name == name)
    }
    pub fn quiver(&self, name: &str) -> Option<&QuiverDecl> {
        self.quivers.iter().find(|q| q.name == name)
    }
    pub fn rep(&self, name: &str) -> Option<&RepDecl> {
        self.reps.iter().find(|r| r.name == name)
    }
    pub fn is_empty(&self) -> bool {
        self.algebras.is_empty() && self.quivers.is_empty() && self.reps.is_empty()
    }
}

pub fn parse_workspace(path: &Path) -> Result<Workspace, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_str(&text)
}

#[derive(Clone, Copy, Debug)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], col: s + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &line[s..], col: s + 1 });
    }
    out
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_rational(s: &str) -> Option<Coeff> {
    let int = |t: &str| -> Option<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (int(n)?, int(d)?);
            (!d.is_zero() && !d.is_negative()).then(|| BigRational::new(n, d))
        }
        None => int(s).map(BigRational::from_integer),
    }
}

fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

struct Parser {
    ws: Workspace,
    line: usize,
    names: HashSet<String>,
    current_algebra: Option<usize>,
    current_quiver: Option<usize>,
    current_rep: Option<usize>,
    /// Reference checks deferred to the end of the file.
    pending: Vec<(usize, usize, Ref)>,
}

enum Ref {
    Algebra(String),
    Quiver(String),
    Vertex { quiver: String, vertex: String },
    RepArrow { quiver: String, arrow: String },
    RepLabel { quiver: String, vertex: String, label: String },
    Relation { quiver: String, relation: usize },
}

impl Parser {
    fn syntax(&self, col: usize, expected: impl Into<String>) -> ParseError {
        ParseError::SyntaxError {
            line: self.line,
            col,
            expected: expected.into(),
        }
    }

    fn expect_kw(&self, toks: &[Tok], i: usize, kw: &str, eol: usize) -> Result<(), ParseError> {
        match toks.get(i) {
            Some(t) if t.text == kw => Ok(()),
            Some(t) => Err(self.syntax(t.col, format!("`{kw}`"))),
            None => Err(self.syntax(eol, format!("`{kw}`"))),
        }
    }

    fn ident<'a>(&self, toks: &[Tok<'a>], i: usize, what: &str, eol: usize) -> Result<Tok<'a>, ParseError> {
        match toks.get(i) {
            Some(t) if is_ident(t.text) => Ok(*t),
            Some(t) => Err(self.syntax(t.col, what)),
            None => Err(self.syntax(eol, what)),
        }
    }

    fn number(&self, toks: &[Tok], i: usize, what: &str, eol: usize) -> Result<usize, ParseError> {
        match toks.get(i) {
            Some(t) => t.text.parse().map_err(|_| self.syntax(t.col, what)),
            None => Err(self.syntax(eol, what)),
        }
    }

    fn end(&self, toks: &[Tok], i: usize) -> Result<(), ParseError> {
        match toks.get(i) {
            Some(t) => Err(self.syntax(t.col, "end of line")),
            None => Ok(()),
        }
    }

    fn field_token(&self, t: Option<&Tok>, eol: usize) -> Result<FieldDescriptor, ParseError> {
        let t = t.ok_or_else(|| self.syntax(eol, "`Q` or `GF(p)`"))?;
        if t.text == "Q" {
            return Ok(FieldDescriptor::Rationals);
        }
        let p = t
            .text
            .strip_prefix("GF(")
            .and_then(|s| s.strip_suffix(')'))
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| self.syntax(t.col, "`Q` or `GF(p)`"))?;
        if !is_prime(p) || p >= 1 << 31 {
            return Err(self.syntax(t.col + 3, "a prime characteristic below 2^31"));
        }
        Ok(FieldDescriptor::PrimeField(p))
    }

    fn check_field(&mut self, fd: FieldDescriptor, col: usize) -> Result<(), ParseError> {
        let current = self.ws.field.or_else(|| self.ws.algebras.first().map(|a| a.field));
        match current {
            Some(c) if c != fd => Err(self.syntax(col, format!("field {c}, as declared for this workspace"))),
            _ => Ok(()),
        }
    }

    fn declare(&mut self, name: &str, col: usize) -> Result<(), ParseError> {
        if !self.names.insert(name.to_string()) {
            return Err(ParseError::DuplicateName {
                line: self.line,
                col,
                name: name.into(),
            });
        }
        Ok(())
    }

    /// `k:c k:c ...` with 1-based `k`, stored 0-based.
    fn sparse_terms(&self, toks: &[Tok], dim: usize) -> Result<SparseTerms, ParseError> {
        toks.iter()
            .map(|t| {
                let (k, c) = t.text.split_once(':').ok_or_else(|| self.syntax(t.col, "a term `index:coefficient`"))?;
                let k: usize = k.parse().map_err(|_| self.syntax(t.col, "a basis index"))?;
                if k == 0 || k > dim {
                    return Err(self.syntax(t.col, format!("a basis index in 1..={dim}")));
                }
                let c = parse_rational(c).ok_or_else(|| self.syntax(t.col + t.text.find(':').unwrap() + 1, "an integer or fraction a/b"))?;
                Ok((k - 1, c))
            })
            .collect()
    }

    fn matrix(&self, toks: &[Tok]) -> Result<MatrixLit, ParseError> {
        let mut rows: MatrixLit = vec![Vec::new()];
        for t in toks {
            if t.text == ";" {
                rows.push(Vec::new());
            } else {
                let c = parse_rational(t.text).ok_or_else(|| self.syntax(t.col, "a matrix entry or `;`"))?;
                rows.last_mut().unwrap().push(c);
            }
        }
        if rows.iter().all(Vec::is_empty) {
            return Ok(Vec::new());
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            let col = toks.first().map_or(1, |t| t.col);
            return Err(self.syntax(col, "rows of equal length"));
        }
        Ok(rows)
    }

    fn relation_expr(&self, rhs: &str, base_col: usize) -> Result<Vec<PathTerm>, ParseError> {
        #[derive(Debug)]
        enum L<'a> {
            Word(&'a str),
            Star,
            Dot,
            Plus,
            Minus,
        }
        let mut lex: Vec<(L, usize)> = Vec::new();
        let bytes: Vec<(usize, char)> = rhs.char_indices().collect();
        let mut i = 0;
        while i < bytes.len() {
            let (pos, ch) = bytes[i];
            let col = base_col + pos;
            match ch {
                c if c.is_whitespace() => i += 1,
                '*' => {
                    lex.push((L::Star, col));
                    i += 1;
                }
                '.' => {
                    lex.push((L::Dot, col));
                    i += 1;
                }
                '+' => {
                    lex.push((L::Plus, col));
                    i += 1;
                }
                '-' => {
                    lex.push((L::Minus, col));
                    i += 1;
                }
                c if c.is_alphanumeric() || c == '_' || c == '@' || c == '/' || c == '\'' => {
                    let mut j = i;
                    while j < bytes.len() && (bytes[j].1.is_alphanumeric() || matches!(bytes[j].1, '_' | '@' | '/' | '\'')) {
                        j += 1;
                    }
                    let end = if j < bytes.len() { bytes[j].0 } else { rhs.len() };
                    lex.push((L::Word(&rhs[pos..end]), col));
                    i = j;
                }
                _ => return Err(self.syntax(col, "a path term")),
            }
        }
        let eol = base_col + rhs.len();
        let mut terms = Vec::new();
        let mut k = 0;
        loop {
            let mut sign = BigRational::one();
            match lex.get(k) {
                Some((L::Plus, _)) if !terms.is_empty() => k += 1,
                Some((L::Minus, _)) => {
                    sign = -sign;
                    k += 1;
                }
                Some(_) if terms.is_empty() => {}
                Some((_, col)) => return Err(self.syntax(*col, "`+` or `-`")),
                None if terms.is_empty() => return Err(self.syntax(eol, "a path term")),
                None => break,
            }
            let mut coeff = sign.clone();
            if let (Some((L::Word(w), _)), Some((L::Star, _))) = (lex.get(k), lex.get(k + 1)) {
                let col = lex[k].1;
                let c = parse_rational(w).ok_or_else(|| self.syntax(col, "a coefficient"))?;
                coeff = sign * c;
                k += 2;
            }
            let mut tokens = Vec::new();
            loop {
                match lex.get(k) {
                    Some((L::Word(w), col)) => {
                        tokens.push(path_token(w).ok_or_else(|| self.syntax(*col, "an arrow name or vertex label"))?);
                        k += 1;
                    }
                    Some((_, col)) => return Err(self.syntax(*col, "an arrow name or vertex label")),
                    None => return Err(self.syntax(eol, "an arrow name or vertex label")),
                }
                match lex.get(k) {
                    Some((L::Dot, _)) => k += 1,
                    _ => break,
                }
            }
            terms.push(PathTerm { coeff, tokens });
        }
        Ok(terms)
    }

    fn line(&mut self, raw: &str) -> Result<(), ParseError> {
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokenize(content);
        let Some(head) = toks.first() else { return Ok(()) };
        let eol = content.trim_end().len() + 1;
        match head.text {
            "field" => {
                let fd = self.field_token(toks.get(1), eol)?;
                self.end(&toks, 2)?;
                if self.ws.field.is_some() {
                    return Err(self.syntax(head.col, "at most one `field` declaration"));
                }
                self.check_field(fd, toks[1].col)?;
                self.ws.field = Some(fd);
            }
            "algebra" => {
                let name = self.ident(&toks, 1, "an algebra name", eol)?;
                self.expect_kw(&toks, 2, "dim", eol)?;
                let dim = self.number(&toks, 3, "a dimension", eol)?;
                self.expect_kw(&toks, 4, "over", eol)?;
                let fd = self.field_token(toks.get(5), eol)?;
                self.end(&toks, 6)?;
                self.check_field(fd, toks[5].col)?;
                self.declare(name.text, name.col)?;
                self.ws.algebras.push(AlgebraDecl {
                    name: name.text.into(),
                    dim,
                    field: fd,
                    labels: None,
                    products: Vec::new(),
                    idempotent_sets: Vec::new(),
                });
                self.current_algebra = Some(self.ws.algebras.len() - 1);
                self.current_quiver = None;
                self.current_rep = None;
            }
            "labels" => {
                let a = self.current_algebra.ok_or_else(|| self.syntax(head.col, "an `algebra` line before `labels`"))?;
                let dim = self.ws.algebras[a].dim;
                if self.ws.algebras[a].labels.is_some() {
                    return Err(self.syntax(head.col, "one `labels` line per algebra"));
                }
                let mut seen = HashSet::new();
                let mut labels = Vec::new();
                for t in &toks[1..] {
                    if !is_ident(t.text) {
                        return Err(self.syntax(t.col, "a label"));
                    }
                    if !seen.insert(t.text) {
                        return Err(ParseError::DuplicateName {
                            line: self.line,
                            col: t.col,
                            name: t.text.into(),
                        });
                    }
                    labels.push(t.text.to_string());
                }
                if labels.len() != dim {
                    return Err(self.syntax(eol, format!("{dim} labels")));
                }
                self.ws.algebras[a].labels = Some(labels);
            }
            "mul" => {
                let a = self.current_algebra.ok_or_else(|| self.syntax(head.col, "an `algebra` line before `mul`"))?;
                let dim = self.ws.algebras[a].dim;
                let mut idx = [0usize; 2];
                for (k, slot) in idx.iter_mut().enumerate() {
                    let v = self.number(&toks, 1 + k, "a basis index", eol)?;
                    if v == 0 || v > dim {
                        return Err(self.syntax(toks[1 + k].col, format!("a basis index in 1..={dim}")));
                    }
                    *slot = v - 1;
                }
                self.expect_kw(&toks, 3, "=", eol)?;
                let terms = self.sparse_terms(&toks[4..], dim)?;
                if self.ws.algebras[a].products.iter().any(|(i, j, _)| (*i, *j) == (idx[0], idx[1])) {
                    return Err(self.syntax(head.col, "each product `mul i j` at most once"));
                }
                self.ws.algebras[a].products.push((idx[0], idx[1], terms));
            }
            "idempotents" => {
                let name = self.ident(&toks, 1, "an algebra name", eol)?;
                self.expect_kw(&toks, 2, "=", eol)?;
                let a = self.ws.algebras.iter().position(|a| a.name == name.text).ok_or_else(|| ParseError::UnknownReference {
                    line: self.line,
                    col: name.col,
                    name: name.text.into(),
                })?;
                let dim = self.ws.algebras[a].dim;
                let mut set = Vec::new();
                for chunk in toks[3..].split(|t| t.text == ";") {
                    set.push(self.sparse_terms(chunk, dim)?);
                }
                self.ws.algebras[a].idempotent_sets.push(set);
            }
            "quiver" => {
                let name = self.ident(&toks, 1, "a quiver name", eol)?;
                self.expect_kw(&toks, 2, "vertices", eol)?;
                let mut vertices = Vec::new();
                for t in &toks[3..] {
                    if !is_ident(t.text) {
                        return Err(self.syntax(t.col, "a vertex name"));
                    }
                    if vertices.iter().any(|v| v == t.text) {
                        return Err(ParseError::DuplicateName {
                            line: self.line,
                            col: t.col,
                            name: t.text.into(),
                        });
                    }
                    vertices.push(t.text.to_string());
                }
                if vertices.is_empty() {
                    return Err(self.syntax(eol, "at least one vertex"));
                }
                self.declare(name.text, name.col)?;
                self.ws.quivers.push(QuiverDecl {
                    name: name.text.into(),
                    vertices,
                    arrows: Vec::new(),
                    omega: Vec::new(),
                    relations: Vec::new(),
                    truncate: None,
                    mode: None,
                });
                self.current_quiver = Some(self.ws.quivers.len() - 1);
                self.current_algebra = None;
                self.current_rep = None;
            }
            "arrow" => {
                let q = self.current_quiver.ok_or_else(|| self.syntax(head.col, "a `quiver` line before `arrow`"))?;
                let name = self.ident(&toks, 1, "an arrow name", eol)?;
                let src = self.ident(&toks, 2, "a source vertex", eol)?;
                let tgt = self.ident(&toks, 3, "a target vertex", eol)?;
                self.end(&toks, 4)?;
                let quiver = &self.ws.quivers[q];
                if quiver.arrows.iter().any(|(a, _, _)| a == name.text) || quiver.vertices.iter().any(|v| v == name.text) {
                    return Err(ParseError::DuplicateName {
                        line: self.line,
                        col: name.col,
                        name: name.text.into(),
                    });
                }
                for v in [src, tgt] {
                    if !quiver.vertices.iter().any(|x| x == v.text) {
                        return Err(ParseError::UnknownReference {
                            line: self.line,
                            col: v.col,
                            name: v.text.into(),
                        });
                    }
                }
                self.ws.quivers[q].arrows.push((name.text.into(), src.text.into(), tgt.text.into()));
            }
            "omega" => {
                let quiver = self.ident(&toks, 1, "a quiver name", eol)?;
                let vertex = self.ident(&toks, 2, "a vertex name", eol)?;
                let alg = self.ident(&toks, 3, "an algebra name", eol)?;
                self.end(&toks, 4)?;
                let q = self.ws.quivers.iter().position(|q| q.name == quiver.text).ok_or_else(|| ParseError::UnknownReference {
                    line: self.line,
                    col: quiver.col,
                    name: quiver.text.into(),
                })?;
                if !self.ws.quivers[q].vertices.iter().any(|v| v == vertex.text) {
                    return Err(ParseError::UnknownReference {
                        line: self.line,
                        col: vertex.col,
                        name: vertex.text.into(),
                    });
                }
                if self.ws.quivers[q].omega.iter().any(|(v, _)| v == vertex.text) {
                    return Err(ParseError::DuplicateName {
                        line: self.line,
                        col: vertex.col,
                        name: vertex.text.into(),
                    });
                }
                self.pending.push((self.line, alg.col, Ref::Algebra(alg.text.into())));
                self.ws.quivers[q].omega.push((vertex.text.into(), alg.text.into()));
            }
            "relation" => {
                let q = self.current_quiver.ok_or_else(|| self.syntax(head.col, "a `quiver` line before `relation`"))?;
                let name = self.ident(&toks, 1, "a relation name", eol)?;
                self.expect_kw(&toks, 2, "=", eol)?;
                let rhs_start = toks[2].col; // column of `=`
                let rhs = &content[rhs_start..];
                let terms = self.relation_expr(rhs, rhs_start + 1)?;
                if self.ws.quivers[q].relations.iter().any(|r| r.name == name.text) {
                    return Err(ParseError::DuplicateName {
                        line: self.line,
                        col: name.col,
                        name: name.text.into(),
                    });
                }
                let quiver = self.ws.quivers[q].name.clone();
                let relation = self.ws.quivers[q].relations.len();
                self.pending.push((self.line, rhs_start + 1, Ref::Relation { quiver, relation }));
                self.ws.quivers[q].relations.push(RelationDecl { name: name.text.into(), terms });
            }
            "truncate" => {
                let q = self.current_quiver.ok_or_else(|| self.syntax(head.col, "a `quiver` line before `truncate`"))?;
                let t = self.number(&toks, 1, "a truncation level", eol)?;
                self.end(&toks, 2)?;
                if t == 0 {
                    return Err(self.syntax(toks[1].col, "a truncation level of at least 1"));
                }
                self.ws.quivers[q].truncate = Some(t);
            }
            "mode" => {
                let q = self.current_quiver.ok_or_else(|| self.syntax(head.col, "a `quiver` line before `mode`"))?;
                let mode = match toks.get(1).map(|t| t.text) {
                    Some("weak") => ModeDecl::Weak,
                    Some("strict") => ModeDecl::Strict,
                    _ => return Err(self.syntax(toks.get(1).map_or(eol, |t| t.col), "`weak` or `strict`")),
                };
                self.end(&toks, 2)?;
                self.ws.quivers[q].mode = Some(mode);
            }
            "rep" => {
                let name = self.ident(&toks, 1, "a representation name", eol)?;
                self.expect_kw(&toks, 2, "over", eol)?;
                let quiver = self.ident(&toks, 3, "a quiver name", eol)?;
                self.end(&toks, 4)?;
                self.declare(name.text, name.col)?;
                self.pending.push((self.line, quiver.col, Ref::Quiver(quiver.text.into())));
                self.ws.reps.push(RepDecl {
                    name: name.text.into(),
                    quiver: quiver.text.into(),
                    dims: Vec::new(),
                    acts: Vec::new(),
                    arrow_maps: Vec::new(),
                });
                self.current_rep = Some(self.ws.reps.len() - 1);
                self.current_algebra = None;
                self.current_quiver = None;
            }
            "vertex" => {
                let r = self.current_rep.ok_or_else(|| self.syntax(head.col, "a `rep` line before `vertex`"))?;
                let v = self.ident(&toks, 1, "a vertex name", eol)?;
                self.expect_kw(&toks, 2, "dim", eol)?;
                let d = self.number(&toks, 3, "a dimension", eol)?;
                self.end(&toks, 4)?;
                let rep = &self.ws.reps[r];
                if rep.dims.iter().any(|(x, _)| x == v.text) {
                    return Err(ParseError::DuplicateName {
                        line: self.line,
                        col: v.col,
                        name: v.text.into(),
                    });
                }
                let quiver = rep.quiver.clone();
                self.pending.push((
                    self.line,
                    v.col,
                    Ref::Vertex {
                        quiver,
                        vertex: v.text.into(),
                    },
                ));
                self.ws.reps[r].dims.push((v.text.into(), d));
            }
            "act" => {
                let r = self.current_rep.ok_or_else(|| self.syntax(head.col, "a `rep` line before `act`"))?;
                let label = self.ident(&toks, 1, "a vertex-algebra label", eol)?;
                let v = self.ident(&toks, 2, "a vertex name", eol)?;
                self.expect_kw(&toks, 3, "=", eol)?;
                let m = self.matrix(&toks[4..])?;
                let quiver = self.ws.reps[r].quiver.clone();
                self.pending.push((
                    self.line,
                    label.col,
                    Ref::RepLabel {
                        quiver,
                        vertex: v.text.into(),
                        label: label.text.into(),
                    },
                ));
                self.ws.reps[r].acts.push((label.text.into(), v.text.into(), m));
            }
            "arrowmap" => {
                let r = self.current_rep.ok_or_else(|| self.syntax(head.col, "a `rep` line before `arrowmap`"))?;
                let a = self.ident(&toks, 1, "an arrow name", eol)?;
                self.expect_kw(&toks, 2, "=", eol)?;
                let m = self.matrix(&toks[3..])?;
                if self.ws.reps[r].arrow_maps.iter().any(|(x, _)| x == a.text) {
                    return Err(ParseError::DuplicateName {
                        line: self.line,
                        col: a.col,
                        name: a.text.into(),
                    });
                }
                let quiver = self.ws.reps[r].quiver.clone();
                self.pending.push((
                    self.line,
                    a.col,
                    Ref::RepArrow {
                        quiver,
                        arrow: a.text.into(),
                    },
                ));
                self.ws.reps[r].arrow_maps.push((a.text.into(), m));
            }
            _ => return Err(self.syntax(head.col, "a section keyword")),
        }
        Ok(())
    }

    fn resolve(&self) -> Result<(), ParseError> {
        let unknown = |line: usize, col: usize, name: &str| ParseError::UnknownReference {
            line,
            col,
            name: name.into(),
        };
        for (line, col, r) in &self.pending {
            let (line, col) = (*line, *col);
            match r {
                Ref::Algebra(a) => {
                    self.ws.algebra(a).ok_or_else(|| unknown(line, col, a))?;
                }
                Ref::Quiver(q) => {
                    self.ws.quiver(q).ok_or_else(|| unknown(line, col, q))?;
                }
                Ref::Vertex { quiver, vertex } => {
                    let Some(q) = self.ws.quiver(quiver) else { continue };
                    if !q.vertices.contains(vertex) {
                        return Err(unknown(line, col, vertex));
                    }
                }
                Ref::RepArrow { quiver, arrow } => {
                    let Some(q) = self.ws.quiver(quiver) else { continue };
                    if !q.arrows.iter().any(|(a, _, _)| a == arrow) {
                        return Err(unknown(line, col, arrow));
                    }
                }
                Ref::RepLabel { quiver, vertex, label } => {
                    let Some(q) = self.ws.quiver(quiver) else { continue };
                    if !q.vertices.contains(vertex) {
                        return Err(unknown(line, col, vertex));
                    }
                    if !vertex_labels(&self.ws, q, vertex).contains(label) {
                        return Err(unknown(line, col, label));
                    }
                }
                Ref::Relation { quiver, relation } => {
                    let q = self.ws.quiver(quiver).expect("relation inside its quiver");
                    for tok in q.relations[*relation].terms.iter().flat_map(|t| &t.tokens) {
                        match tok {
                            PathToken::Arrow(a) => {
                                if !q.arrows.iter().any(|(x, _, _)| x == a) {
                                    return Err(unknown(line, col, a));
                                }
                            }
                            PathToken::Label { vertex, label } => {
                                let known = match vertex {
                                    Some(v) => q.vertices.contains(v) && vertex_labels(&self.ws, q, v).contains(label),
                                    None => q.vertices.iter().any(|v| vertex_labels(&self.ws, q, v).contains(label)),
                                };
                                if !known {
                                    return Err(unknown(line, col, &format_token(tok)));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A bare word is an arrow if the quiver has such an arrow, otherwise a
/// label; `v@label` is always a label.
fn path_token(w: &str) -> Option<PathToken> {
    match w.split_once('@') {
        Some((v, l)) if is_ident(v) && is_ident(l) => Some(PathToken::Label {
            vertex: Some(v.into()),
            label: l.into(),
        }),
        Some(_) => None,
        None if is_ident(w) => Some(PathToken::Arrow(w.into())),
        None => None,
    }
}

/// Labels of the vertex algebra at `vertex` (`e` for the default `k`).
pub fn vertex_labels(ws: &Workspace, q: &QuiverDecl, vertex: &str) -> Vec<String> {
    match q.omega.iter().find(|(v, _)| v == vertex) {
        Some((_, a)) => ws.algebra(a).map(AlgebraDecl::label_list).unwrap_or_default(),
        None => vec!["e".into()],
    }
}

fn format_token(t: &PathToken) -> String {
    match t {
        PathToken::Arrow(a) => a.clone(),
        PathToken::Label { vertex: Some(v), label } => format!("{v}@{label}"),
        PathToken::Label { vertex: None, label } => label.clone(),
    }
}

pub fn parse_str(text: &str) -> Result<Workspace, ParseError> {
    let mut p = Parser {
        ws: Workspace::default(),
        line: 0,
        names: HashSet::new(),
        current_algebra: None,
        current_quiver: None,
        current_rep: None,
        pending: Vec::new(),
    };
    for (n, raw) in text.lines().enumerate() {
        p.line = n + 1;
        p.line(raw)?;
    }
    // Bare words in relations that are not arrows become labels.
    for q in &mut p.ws.quivers {
        let arrows: HashSet<String> = q.arrows.iter().map(|(a, _, _)| a.clone()).collect();
        for r in &mut q.relations {
            for t in &mut r.terms {
                for tok in &mut t.tokens {
                    if let PathToken::Arrow(a) = tok {
                        if !arrows.contains(a) {
                            *tok = PathToken::Label {
                                vertex: None,
                                label: a.clone(),
                            };
                        }
                    }
                }
            }
        }
    }
    p.resolve()?;
    Ok(p.ws)
}

fn write_sparse(out: &mut String, terms: &SparseTerms) {
    for (k, c) in terms {
        let _ = write!(out, " {}:{}", k + 1, format_coeff(c));
    }
}

fn write_matrix(out: &mut String, m: &MatrixLit) {
    let rows: Vec<String> = m.iter().map(|r| r.iter().map(format_coeff).collect::<Vec<_>>().join(" ")).collect();
    if !rows.is_empty() {
        let _ = write!(out, " {}", rows.join(" ; "));
    }
}

impl Display for Workspace {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if let Some(fd) = self.field {
            let _ = writeln!(out, "field {fd}");
        }
        for a in &self.algebras {
            let _ = writeln!(out, "algebra {} dim {} over {}", a.name, a.dim, a.field);
            if let Some(l) = &a.labels {
                let _ = writeln!(out, "labels {}", l.join(" "));
            }
            for (i, j, terms) in &a.products {
                let _ = write!(out, "mul {} {} =", i + 1, j + 1);
                write_sparse(&mut out, terms);
                out.push('\n');
            }
            for set in &a.idempotent_sets {
                let _ = write!(out, "idempotents {} =", a.name);
                for (k, e) in set.iter().enumerate() {
                    if k > 0 {
                        out.push_str(" ;");
                    }
                    write_sparse(&mut out, e);
                }
                out.push('\n');
            }
        }
        for q in &self.quivers {
            let _ = writeln!(out, "quiver {} vertices {}", q.name, q.vertices.join(" "));
            for (a, s, t) in &q.arrows {
                let _ = writeln!(out, "arrow {a} {s} {t}");
            }
            for (v, a) in &q.omega {
                let _ = writeln!(out, "omega {} {v} {a}", q.name);
            }
            for r in &q.relations {
                let _ = write!(out, "relation {} =", r.name);
                for (k, t) in r.terms.iter().enumerate() {
                    let path = t.tokens.iter().map(format_token).collect::<Vec<_>>().join(" . ");
                    let mag = format_coeff(&t.coeff.abs());
                    match (k, t.coeff.is_negative()) {
                        (0, false) => write!(out, " {mag} * {path}"),
                        (0, true) => write!(out, " -{mag} * {path}"),
                        (_, false) => write!(out, " + {mag} * {path}"),
                        (_, true) => write!(out, " - {mag} * {path}"),
                    }?;
                }
                out.push('\n');
            }
            if let Some(t) = q.truncate {
                let _ = writeln!(out, "truncate {t}");
            }
            if let Some(m) = q.mode {
                let _ = writeln!(out, "mode {}", if m == ModeDecl::Weak { "weak" } else { "strict" });
            }
        }
        for r in &self.reps {
            let _ = writeln!(out, "rep {} over {}", r.name, r.quiver);
            for (v, d) in &r.dims {
                let _ = writeln!(out, "vertex {v} dim {d}");
            }
            for (l, v, m) in &r.acts {
                let _ = write!(out, "act {l} {v} =");
                write_matrix(&mut out, m);
                out.push('\n');
            }
            for (a, m) in &r.arrow_maps {
                let _ = write!(out, "arrowmap {a} =");
                write_matrix(&mut out, m);
                out.push('\n');
            }
        }
        fmt.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file() {
        assert_eq!(parse_str("").unwrap(), Workspace::default());
        assert!(parse_str("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn composite_characteristic_rejected() {
        let err = parse_str("field GF(4)\n").unwrap_err();
        assert!(matches!(err, ParseError::SyntaxError { line: 1, .. }), "{err}");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_str("algebra A dim 2 over Q\nmul 1 3 = 1:1\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::SyntaxError {
                line: 2,
                col: 7,
                expected: "a basis index in 1..=2".into()
            }
        );
        let err = parse_str("algebra A dim 1 over Q\nalgebra A dim 1 over Q\n").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateName { line: 2, col: 9, .. }));
        let err = parse_str("quiver D vertices 1\nomega D 1 K\n").unwrap_err();
        assert!(matches!(err, ParseError::UnknownReference { line: 2, col: 11, .. }));
    }

    #[test]
    fn relation_syntax() {
        let ws = parse_str("quiver D vertices 1\narrow x 1 1\narrow y 1 1\nrelation r = x.y - 1/2 * y . x\ntruncate 3\n").unwrap();
        let r = &ws.quivers[0].relations[0];
        assert_eq!(r.terms.len(), 2);
        assert_eq!(r.terms[1].coeff, BigRational::new((-1).into(), 2.into()));
        assert_eq!(r.terms[1].tokens, vec![PathToken::Arrow("y".into()), PathToken::Arrow("x".into())]);
        let again = parse_str(&ws.to_string()).unwrap();
        assert_eq!(again, ws);
    }

    #[test]
    fn fractions_and_round_trip() {
        let text = "field Q\nalgebra A dim 2 over Q\nlabels one x\nmul 1 1 = 1:1\nmul 1 2 = 2:1\nmul 2 1 = 2:1\nmul 2 2 = 1:-3/4\n\
                    idempotents A = 1:1\nquiver D vertices p q\narrow a p q\nomega D p A\nrelation r = 2 * one . a\ntruncate 2\nmode weak\n\
                    rep V over D\nvertex p dim 1\nvertex q dim 2\nact one p = 1\narrowmap a = 1 0\n";
        let ws = parse_str(text).unwrap();
        assert_eq!(parse_str(&ws.to_string()).unwrap(), ws);
    }
}
