//! Verb implementations and the report protocol.

use std::fmt::Write as _;

use clap::ValueEnum;
use thiserror::Error;

use gpalg::algebra::{radical, AlgebraError};
use gpalg::gpa::{check_weak_relations_cofinal, enumerate_paths, jacobson_radical_is_arrow_ideal, Cofinality, GpaError, RelationMode, TruncatedGpa};
use gpalg::grading::{block_idempotents, grade_gpa_via_merge, grade_via_merge, GmGrading, GradingError};
use gpalg::idempotent::{gm_decompose, validate_complete_set, wedderburn_blocks, IdempotentError, IdempotentSet};
use gpalg::poly::RootFinder;
use gpalg::presentation::{compute_splitting, extract_elementary_presentation, extract_presentation, verify_presentation, Presentation, PresentationError, PresentationOptions};
use gpalg::representations::{g_split, h_assemble, module_system_to_rep, rep_to_module_system, RepError};
use gpalg::{FdAlgebra, Field, FieldDescriptor, PrimeField, Rationals};

use crate::instantiate::{build_algebra, build_gpa, build_idempotent_sets, build_rep, BuildError};
use crate::workspace::{ParseError, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Validate,
    Radical,
    Decompose,
    Idempotents,
    Present,
    PresentElementary,
    GpaBuild,
    GpaCheck,
    RepConvert,
    Grade,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Validate => "validate",
            Verb::Radical => "radical",
            Verb::Decompose => "decompose",
            Verb::Idempotents => "idempotents",
            Verb::Present => "present",
            Verb::PresentElementary => "present-elementary",
            Verb::GpaBuild => "gpa-build",
            Verb::GpaCheck => "gpa-check",
            Verb::RepConvert => "rep-convert",
            Verb::Grade => "grade",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub m: Option<usize>,
    pub max_paths: usize,
    pub name: Option<String>,
    pub basis: bool,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            m: None,
            max_paths: gpalg::gpa::DEFAULT_MAX_PATHS,
            name: None,
            basis: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("{0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unsupported(_) => 3,
            CliError::Build(b) if b.is_unsupported_domain() => 3,
            _ => 2,
        }
    }
}

fn algebra_error(e: AlgebraError) -> CliError {
    match e {
        AlgebraError::CharacteristicTooSmall { .. } => CliError::Unsupported(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn idempotent_error(e: IdempotentError) -> CliError {
    match e {
        IdempotentError::NotSplit(_) | IdempotentError::SplittingFailed(_) => CliError::Unsupported(e.to_string()),
        IdempotentError::Algebra(a) => algebra_error(a),
        _ => CliError::Input(e.to_string()),
    }
}

fn presentation_error(e: PresentationError) -> CliError {
    if e.is_unsupported_domain() {
        CliError::Unsupported(e.to_string())
    } else {
        CliError::Input(e.to_string())
    }
}

fn gpa_error(e: GpaError) -> CliError {
    match e {
        GpaError::PathExplosion(_) => CliError::Unsupported(e.to_string()),
        GpaError::Algebra(a) => algebra_error(a),
        GpaError::Idempotent(i) => idempotent_error(i),
        _ => CliError::Input(e.to_string()),
    }
}

fn grading_error(e: GradingError) -> CliError {
    match e {
        GradingError::Algebra(a) => algebra_error(a),
        GradingError::Idempotent(i) => idempotent_error(i),
        _ => CliError::Input(e.to_string()),
    }
}

/// An ordered list of `key = value` entries plus an exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub entries: Vec<(String, String)>,
    failed: bool,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            entries: Vec::new(),
            failed: false,
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    /// Records a certificate; a failure makes the exit code 1.
    pub fn check(&mut self, key: impl Into<String>, ok: bool) {
        self.failed |= !ok;
        self.push(key, if ok { "pass" } else { "fail" });
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Machine => {
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k} = {v}");
                }
            }
            Format::Text => {
                let _ = writeln!(out, "{}", self.title);
                let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "  {k:<width$}  {v}");
                }
            }
        }
        out
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(",")
    }
}

/// Runs `verb` on a parsed workspace.
pub fn run_workspace(ws: &Workspace, verb: Verb, opts: &RunOptions) -> Result<Report, CliError> {
    match ws.field() {
        FieldDescriptor::Rationals => Runner { f: Rationals, ws, opts }.run(verb),
        FieldDescriptor::PrimeField(p) => {
            let f = PrimeField::new(p).map_err(|e| CliError::Input(e.to_string()))?;
            Runner { f, ws, opts }.run(verb)
        }
    }
}

enum Target<F: Field> {
    Algebra { name: String, alg: FdAlgebra<F>, sets: Vec<Vec<Vec<F::Elem>>> },
    Quiver { name: String, gpa: Box<TruncatedGpa<F>> },
}

impl<F: Field> Target<F> {
    fn algebra(&self) -> &FdAlgebra<F> {
        match self {
            Target::Algebra { alg, .. } => alg,
            Target::Quiver { gpa, .. } => &gpa.algebra,
        }
    }
    fn name(&self) -> &str {
        match self {
            Target::Algebra { name, .. } | Target::Quiver { name, .. } => name,
        }
    }
}

struct Runner<'a, F: RootFinder> {
    f: F,
    ws: &'a Workspace,
    opts: &'a RunOptions,
}

impl<F: RootFinder> Runner<'_, F> {
    fn run(&self, verb: Verb) -> Result<Report, CliError> {
        let mut r = Report::new(format!("{} over {}", verb.name(), self.ws.field()));
        r.push("verb", verb.name());
        r.push("field", self.ws.field());
        r.push("seed", self.opts.seed);
        match verb {
            Verb::Validate => self.validate(&mut r)?,
            Verb::RepConvert => self.rep_convert(&mut r)?,
            _ => {
                let target = self.target()?;
                r.push("target", target.name());
                r.push("dim", target.algebra().dim());
                match verb {
                    Verb::Radical => self.radical(&target, &mut r)?,
                    Verb::Decompose => self.decompose(&target, &mut r)?,
                    Verb::Idempotents => self.idempotents(&target, &mut r)?,
                    Verb::Present => self.present(&target, &mut r, false)?,
                    Verb::PresentElementary => self.present(&target, &mut r, true)?,
                    Verb::GpaBuild => self.gpa_build(&target, &mut r)?,
                    Verb::GpaCheck => self.gpa_check(&target, &mut r)?,
                    Verb::Grade => self.grade(&target, &mut r)?,
                    Verb::Validate | Verb::RepConvert => unreachable!(),
                }
            }
        }
        Ok(r)
    }

    fn algebra_target(&self, name: &str) -> Result<Target<F>, CliError> {
        let decl = self.ws.algebra(name).expect("known algebra");
        Ok(Target::Algebra {
            name: name.into(),
            alg: build_algebra(&self.f, decl)?,
            sets: build_idempotent_sets(&self.f, decl)?,
        })
    }

    fn quiver_target(&self, name: &str) -> Result<Target<F>, CliError> {
        let decl = self.ws.quiver(name).expect("known quiver");
        Ok(Target::Quiver {
            name: name.into(),
            gpa: Box::new(build_gpa(&self.f, self.ws, decl, self.opts.max_paths)?),
        })
    }

    /// `--name`, else the first quiver, else the first algebra.
    fn target(&self) -> Result<Target<F>, CliError> {
        match &self.opts.name {
            Some(n) if self.ws.quiver(n).is_some() => self.quiver_target(n),
            Some(n) if self.ws.algebra(n).is_some() => self.algebra_target(n),
            Some(n) => Err(CliError::Input(format!("no algebra or quiver named {n}"))),
            None => match (self.ws.quivers.first(), self.ws.algebras.first()) {
                (Some(q), _) => self.quiver_target(&q.name),
                (None, Some(a)) => self.algebra_target(&a.name),
                (None, None) => Err(CliError::Input("workspace declares no algebra or quiver".into())),
            },
        }
    }

    fn validate(&self, r: &mut Report) -> Result<(), CliError> {
        r.push("algebras", self.ws.algebras.len());
        r.push("quivers", self.ws.quivers.len());
        r.push("reps", self.ws.reps.len());
        for decl in &self.ws.algebras {
            let key = format!("algebra.{}", decl.name);
            r.push(format!("{key}.dim"), decl.dim);
            match build_algebra(&self.f, decl) {
                Ok(alg) => {
                    r.check(format!("{key}.associative"), true);
                    r.check(format!("{key}.unity"), alg.unity().is_some());
                    for (s, set) in build_idempotent_sets(&self.f, decl)?.iter().enumerate() {
                        let ok = validate_complete_set(&alg, set).is_ok();
                        r.check(format!("{key}.idempotents.{}", s + 1), ok);
                    }
                }
                Err(BuildError::Algebra(_, AlgebraError::NonAssociative(i, j, k))) => {
                    r.check(format!("{key}.associative"), false);
                    r.push(format!("{key}.witness"), format!("{},{},{}", i + 1, j + 1, k + 1));
                }
                Err(e) => return Err(e.into()),
            }
        }
        for decl in &self.ws.quivers {
            let key = format!("quiver.{}", decl.name);
            let gpa = build_gpa(&self.f, self.ws, decl, self.opts.max_paths)?;
            r.push(format!("{key}.vertices"), gpa.quiver.vertex_count());
            r.push(format!("{key}.arrows"), gpa.quiver.arrows().len());
            r.push(format!("{key}.t"), gpa.t());
            r.push(format!("{key}.dim"), gpa.algebra.dim());
            r.check(format!("{key}.associative"), true);
            r.check(format!("{key}.unity"), gpa.algebra.unity().is_some());
            self.cofinality(&gpa, &format!("{key}."), r)?;
        }
        for decl in &self.ws.reps {
            let key = format!("rep.{}", decl.name);
            let q = self.ws.quiver(&decl.quiver).expect("resolved by the parser");
            let gpa = build_gpa(&self.f, self.ws, q, self.opts.max_paths)?;
            let rep = build_rep(&self.f, decl, &gpa)?;
            r.push(format!("{key}.dims"), join(&rep.dims));
            let ok = rep_to_module_system(&rep, &gpa);
            r.check(format!("{key}.module"), ok.is_ok());
            if let Err(e) = ok {
                r.push(format!("{key}.error"), e);
            }
        }
        Ok(())
    }

    fn cofinality(&self, gpa: &TruncatedGpa<F>, prefix: &str, r: &mut Report) -> Result<(), CliError> {
        r.push(format!("{prefix}mode"), gpa.relations.mode);
        if gpa.relations.mode == RelationMode::WeakRelations {
            match check_weak_relations_cofinal(&gpa.quiver, &gpa.family, &gpa.relations, self.opts.max_paths).map_err(gpa_error)? {
                Cofinality::Certified => r.check(format!("{prefix}cofinal"), true),
                Cofinality::NotCertified(p) => {
                    r.check(format!("{prefix}cofinal"), false);
                    r.push(format!("{prefix}cofinal.witness"), gpa.format_path(&p));
                }
            }
        }
        Ok(())
    }

    fn radical(&self, t: &Target<F>, r: &mut Report) -> Result<(), CliError> {
        let alg = t.algebra();
        let rad = radical(alg).map_err(algebra_error)?;
        r.push("radical_dim", rad.radical.dim());
        r.push("nilpotency_index", rad.nilpotency_index);
        r.push("quotient_dim", rad.semisimple_quotient().dim());
        r.check("quotient_semisimple", rad.quotient_semisimple);
        if self.opts.basis {
            for (k, v) in rad.radical.space().basis_vectors().iter().enumerate() {
                r.push(format!("radical.basis.{}", k + 1), alg.format_element(v));
            }
        }
        Ok(())
    }

    fn report_gm(&self, alg: &FdAlgebra<F>, set: &IdempotentSet<F>, prefix: &str, r: &mut Report) -> Result<(), CliError> {
        let d = gm_decompose(alg, set).map_err(idempotent_error)?;
        r.push(format!("{prefix}size"), d.size());
        let rows: Vec<String> = d.block_dims().iter().map(|row| join(row)).collect();
        r.push(format!("{prefix}block_dims"), rows.join(";"));
        r.check(format!("{prefix}direct_sum"), d.check_direct_sum(alg));
        r.check(format!("{prefix}block_products"), d.check_block_products(alg));
        Ok(())
    }

    fn decompose(&self, t: &Target<F>, r: &mut Report) -> Result<(), CliError> {
        let alg = t.algebra();
        let rad = radical(alg).map_err(algebra_error)?;
        let w = wedderburn_blocks(rad.semisimple_quotient(), self.opts.seed).map_err(idempotent_error)?;
        r.push("radical_dim", rad.radical.dim());
        r.push("n_wa", w.n_wa());
        r.push("block_dims", join(w.blocks.iter().map(|b| b.algebra.dim())));
        r.push("block_center_dims", join(w.blocks.iter().map(|b| b.center_dim)));
        let shipped: Vec<&Vec<Vec<F::Elem>>> = match t {
            Target::Algebra { sets, .. } => sets.iter().collect(),
            Target::Quiver { .. } => Vec::new(),
        };
        match t {
            Target::Quiver { gpa, .. } => self.report_gm(alg, &gpa.gm_unit, "gm.vertex.", r)?,
            Target::Algebra { .. } if !shipped.is_empty() => {
                for (s, set) in shipped.iter().enumerate() {
                    let set = validate_complete_set(alg, set).map_err(|e| CliError::Input(format!("idempotent set {}: {e}", s + 1)))?;
                    self.report_gm(alg, &set, &format!("gm.set{}.", s + 1), r)?;
                }
            }
            Target::Algebra { .. } => {
                let set = block_idempotents(alg, self.opts.seed).map_err(grading_error)?;
                self.report_gm(alg, &set, "gm.blocks.", r)?;
            }
        }
        Ok(())
    }

    fn idempotents(&self, t: &Target<F>, r: &mut Report) -> Result<(), CliError> {
        let alg = t.algebra();
        let split = compute_splitting(alg, self.opts.seed).map_err(presentation_error)?;
        let elems: Vec<Vec<F::Elem>> = split.lifted_units.iter().flat_map(|mu| mu.diagonal()).collect();
        r.push("count", elems.len());
        r.push("block_sizes", join(split.lifted_units.iter().map(|mu| mu.size)));
        r.check("complete_orthogonal", validate_complete_set(alg, &elems).is_ok());
        r.check("splitting", split.verify());
        if self.opts.basis {
            for (k, e) in elems.iter().enumerate() {
                r.push(format!("idempotent.{}", k + 1), alg.format_element(e));
            }
        }
        Ok(())
    }

    fn present(&self, t: &Target<F>, r: &mut Report, elementary: bool) -> Result<(), CliError> {
        let alg = t.algebra();
        let p = if elementary {
            match extract_elementary_presentation(alg, self.opts.seed) {
                Err(e @ (PresentationError::NotElementary(..) | PresentationError::KernelNotInJ2)) => {
                    r.check("elementary", false);
                    r.push("reason", e);
                    return Ok(());
                }
                other => other.map_err(presentation_error)?,
            }
        } else {
            extract_presentation(alg, self.opts.seed, &PresentationOptions::default()).map_err(presentation_error)?
        };
        self.report_presentation(&p, alg, r);
        Ok(())
    }

    fn report_presentation(&self, p: &Presentation<F>, alg: &FdAlgebra<F>, r: &mut Report) {
        let report = verify_presentation(p, alg);
        r.push("mode", p.mode);
        r.push("t", p.t);
        r.push("vertices", p.quiver.vertex_count());
        r.push("vertex_dims", join(p.family.algebras().iter().map(FdAlgebra::dim)));
        r.push("arrows", p.arrow_count());
        r.push("relations", p.relations.len());
        r.push("quotient_dim", report.quotient_dim.map_or("-".into(), |d| d.to_string()));
        for (name, ok) in &report.checks {
            r.check(format!("check.{name}"), *ok);
        }
        if self.opts.basis {
            for a in p.quiver.arrows() {
                r.push(format!("arrow.{}", a.name), format!("{} -> {}", p.quiver.vertices()[a.source], p.quiver.vertices()[a.target]));
            }
            let f = &self.f;
            for (k, rel) in p.relations.iter().enumerate() {
                let terms: Vec<String> = rel.iter().map(|(q, c)| format!("{}*{}", f.format(c), p.free.format_path(q))).collect();
                r.push(format!("relation.{}", k + 1), terms.join(" + "));
            }
        }
    }

    fn gpa_of<'t>(&self, t: &'t Target<F>) -> Result<&'t TruncatedGpa<F>, CliError> {
        match t {
            Target::Quiver { gpa, .. } => Ok(gpa),
            Target::Algebra { name, .. } => Err(CliError::Input(format!("{name} is an algebra; this verb needs a quiver"))),
        }
    }

    fn gpa_build(&self, t: &Target<F>, r: &mut Report) -> Result<(), CliError> {
        let gpa = self.gpa_of(t)?;
        let tt = gpa.t();
        r.push("vertices", gpa.quiver.vertex_count());
        r.push("arrows", gpa.quiver.arrows().len());
        r.push("vertex_dims", join(gpa.family.algebras().iter().map(FdAlgebra::dim)));
        r.push("t", tt);
        r.push("mode", gpa.relations.mode);
        r.push("relations", gpa.relations.elements.len());
        let free = enumerate_paths(&gpa.quiver, &gpa.family, tt, self.opts.max_paths).map_err(gpa_error)?;
        let by_len = |paths: &[gpalg::gpa::BasisPath]| join((0..tt).map(|l| paths.iter().filter(|p| p.len() == l).count()));
        r.push("free_paths_by_length", by_len(&free));
        r.push("basis_paths_by_length", by_len(&gpa.paths));
        r.push("dim_bound", free.len());
        r.check("dimension_bound", gpa.algebra.dim() <= free.len());
        r.push("relation_ideal_dim", gpa.relation_ideal().dim());
        if self.opts.basis {
            for (k, p) in gpa.paths.iter().enumerate() {
                r.push(format!("basis.{}", k + 1), gpa.format_path(p));
            }
        }
        Ok(())
    }

    fn gpa_check(&self, t: &Target<F>, r: &mut Report) -> Result<(), CliError> {
        let gpa = self.gpa_of(t)?;
        let rc = jacobson_radical_is_arrow_ideal(gpa).map_err(gpa_error)?;
        r.push("radical_dim", rc.radical_dim);
        r.push("arrow_ideal_dim", rc.arrow_ideal_dim);
        r.check("radical_is_arrow_ideal", rc.equal);
        self.cofinality(gpa, "", r)?;
        self.report_gm(&gpa.algebra, &gpa.gm_unit, "gm.vertex.", r)?;
        let rad = radical(&gpa.algebra).map_err(algebra_error)?;
        let n_wa = wedderburn_blocks(rad.semisimple_quotient(), self.opts.seed).map_err(idempotent_error)?.n_wa();
        r.push("n_wa", n_wa);
        r.check("vertices_le_n_wa", gpa.quiver.vertex_count() <= n_wa);
        Ok(())
    }

    fn grade(&self, t: &Target<F>, r: &mut Report) -> Result<(), CliError> {
        let alg = t.algebra();
        let g: GmGrading<F> = match t {
            Target::Quiver { gpa, .. } => grade_gpa_via_merge(gpa, self.opts.m.unwrap_or(gpa.quiver.vertex_count())),
            Target::Algebra { .. } => match self.opts.m {
                Some(m) => grade_via_merge(alg, m, self.opts.seed),
                None => {
                    let set = block_idempotents(alg, self.opts.seed).map_err(grading_error)?;
                    grade_via_merge(alg, set.len(), self.opts.seed)
                }
            },
        }
        .map_err(grading_error)?;
        r.push("m", g.group.order());
        r.push("component_dims", join(g.component_dims()));
        r.check("direct_sum", g.check_direct_sum(alg));
        r.check("multiplicative", g.check_multiplicative(alg));
        if self.opts.basis {
            for (k, c) in g.components.iter().enumerate() {
                let elems: Vec<String> = c.basis_vectors().iter().map(|v| alg.format_element(v)).collect();
                r.push(format!("component.{k}"), if elems.is_empty() { "0".into() } else { elems.join(" | ") });
            }
        }
        Ok(())
    }

    fn rep_convert(&self, r: &mut Report) -> Result<(), CliError> {
        let decl = match &self.opts.name {
            Some(n) => self.ws.rep(n).ok_or_else(|| CliError::Input(format!("no representation named {n}")))?,
            None => self.ws.reps.first().ok_or_else(|| CliError::Input("workspace declares no representation".into()))?,
        };
        let q = self.ws.quiver(&decl.quiver).expect("resolved by the parser");
        let gpa = build_gpa(&self.f, self.ws, q, self.opts.max_paths)?;
        let rep = build_rep(&self.f, decl, &gpa)?;
        r.push("target", &decl.name);
        r.push("quiver", &q.name);
        r.push("dims", join(&rep.dims));
        let ms = match rep_to_module_system(&rep, &gpa) {
            Ok(ms) => ms,
            Err(e @ RepError::RelationNotSatisfied { .. }) => {
                r.check("relations", false);
                r.push("reason", e);
                return Ok(());
            }
            Err(e) => return Err(CliError::Input(e.to_string())),
        };
        r.check("relations", true);
        let decomp = gm_decompose(&gpa.algebra, &gpa.gm_unit).map_err(idempotent_error)?;
        let module = h_assemble(&gpa.algebra, &decomp, &ms).map_err(|e| CliError::Input(e.to_string()))?;
        r.push("module_dim", module.dim);
        r.check("module_axioms", module.validate(&gpa.algebra, &decomp).is_ok());
        r.check("generated", module.generates_whole_space(&self.f));
        let back = g_split(&gpa.algebra, &decomp, &module).map_err(|e| CliError::Input(e.to_string()))?;
        r.check("g_after_h", back == ms);
        let rep2 = module_system_to_rep(&ms, &gpa).map_err(|e| CliError::Input(e.to_string()))?;
        r.check("rep_round_trip", rep2 == rep);
        Ok(())
    }
}
