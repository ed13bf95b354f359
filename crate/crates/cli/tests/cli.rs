use std::path::{Path, PathBuf};
use std::process::Command;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use gpalg::FieldDescriptor;
use gpalg_cli::workspace::{AlgebraDecl, ModeDecl, PathTerm, PathToken, QuiverDecl, RelationDecl, RepDecl};
use gpalg_cli::{corpus_files, parse_str, parse_workspace, Workspace};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gpa(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gpa")).args(args).env("GPA_SEED", "0").output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn machine(verb: &str, file: &Path, extra: &[&str]) -> (i32, String) {
    let file = file.to_str().unwrap();
    let mut args = vec![verb, file, "--format", "machine"];
    args.extend_from_slice(extra);
    let (code, out, err) = gpa(&args);
    (code, out + &err)
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
}

#[test]
fn present_upper_triangular_2() {
    let (code, out) = machine("present", &corpus().join("upper_triangular_2.alg"), &[]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "vertices"), "2");
    assert_eq!(value(&out, "arrows"), "1");
    assert_eq!(value(&out, "relations"), "0");
    assert_eq!(value(&out, "check.bijective"), "pass");
}

#[test]
fn radical_of_m2q() {
    let (code, out) = machine("radical", &corpus().join("m2q.alg"), &[]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "radical_dim"), "0");
    assert_eq!(value(&out, "nilpotency_index"), "1");
}

#[test]
fn grade_upper_triangular_2() {
    let (code, out) = machine("grade", &corpus().join("upper_triangular_2.alg"), &["--m", "2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "component_dims"), "2,1");
    assert_eq!(value(&out, "multiplicative"), "pass");
}

#[test]
fn text_format_is_readable() {
    let file = corpus().join("upper_triangular_2.alg");
    let (code, out, _) = gpa(&["present", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.trim_start().starts_with("arrows") && l.trim_end().ends_with('1')), "{out}");
}

#[test]
fn parse_of_shipped_upper_triangular_2() {
    let ws = parse_workspace(&corpus().join("upper_triangular_2.alg")).unwrap();
    assert_eq!(ws.algebras.len(), 1);
    assert_eq!(ws.algebras[0].dim, 3);
}

#[test]
fn input_errors_exit_2() {
    let (code, out) = machine("validate", &data("gf4.alg"), &[]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("1:10"), "{out}");
    let (code, _) = machine("validate", &data("missing.alg"), &[]);
    assert_eq!(code, 2);
    let (code, _, _) = gpa(&["validate"]);
    assert_eq!(code, 2);
}

#[test]
fn non_split_blocks_exit_3() {
    let (code, out) = machine("present", &data("gaussian.alg"), &[]);
    assert_eq!(code, 3, "{out}");
    let (code, out) = machine("radical", &data("gaussian.alg"), &[]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "radical_dim"), "0");
}

#[test]
fn failed_certificates_exit_1() {
    // M2 is not elementary.
    let (code, out) = machine("present-elementary", &corpus().join("m2q.alg"), &[]);
    assert_eq!(code, 1, "{out}");
    // A non-associative table is reported, not rejected.
    let (code, out) = machine("validate", &data("nonassociative.alg"), &[]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("associative = fail"), "{out}");
}

#[test]
fn path_cap_is_unsupported_domain() {
    let (code, out) = machine("gpa-build", &corpus().join("kronecker.alg"), &["--max-paths", "2"]);
    assert_eq!(code, 3, "{out}");
}

#[test]
fn seed_must_be_numeric() {
    let file = corpus().join("k.alg");
    let out = Command::new(env!("CARGO_BIN_EXE_gpa")).args(["validate", file.to_str().unwrap()]).env("GPA_SEED", "x").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_mode_writes_one_report_per_file() {
    let out = tempfile::tempdir().unwrap();
    let (code, stdout, err) = gpa(&["radical", "--all", corpus().to_str().unwrap(), "--out", out.path().to_str().unwrap(), "--format", "machine"]);
    assert_eq!(code, 0, "{stdout}{err}");
    let files = corpus_files(&corpus()).unwrap();
    assert_eq!(stdout.lines().count(), files.len());
    for f in files {
        let stem = f.file_stem().unwrap().to_string_lossy();
        let written = std::fs::read_to_string(out.path().join(format!("{stem}.radical.txt"))).unwrap();
        let (_, direct) = machine("radical", &f, &[]);
        assert_eq!(written, direct);
    }
}

#[test]
fn corpus_round_trips_through_printer() {
    for f in corpus_files(&corpus()).unwrap() {
        let ws = parse_workspace(&f).unwrap();
        assert_eq!(parse_str(&ws.to_string()).unwrap(), ws, "{}", f.display());
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn sparse(dim: usize) -> impl Strategy<Value = Vec<(usize, BigRational)>> {
    prop::collection::btree_map(0..dim, rational(), 1..=dim).prop_map(|m| m.into_iter().collect())
}

/// Matrices with no entries are written, and read back, as the empty literal.
fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    let rows = if cols == 0 { 0 } else { rows };
    prop::collection::vec(prop::collection::vec(rational(), cols), rows)
}

fn algebra_decl() -> impl Strategy<Value = AlgebraDecl> {
    (1usize..=4, any::<bool>()).prop_flat_map(|(dim, labelled)| {
        let products = prop::collection::btree_map((0..dim, 0..dim), sparse(dim), 0..=dim * dim)
            .prop_map(|m| m.into_iter().map(|((i, j), t)| (i, j, t)).collect::<Vec<_>>());
        let sets = prop::collection::vec(prop::collection::vec(sparse(dim), 1..=2), 0..=2);
        (products, sets).prop_map(move |(products, idempotent_sets)| AlgebraDecl {
            name: "A".into(),
            dim,
            field: FieldDescriptor::Rationals,
            labels: labelled.then(|| (0..dim).map(|i| format!("u{i}")).collect()),
            products,
            idempotent_sets,
        })
    })
}

/// A workspace with one algebra `A`, a quiver `Q` using it at vertex `v1`,
/// relations over valid tokens and a representation `R` of matching shape.
fn workspace() -> impl Strategy<Value = Workspace> {
    (algebra_decl(), 1usize..=3, prop::collection::vec((0usize..3, 0usize..3), 0..=3), any::<bool>(), 1usize..=4, any::<bool>()).prop_flat_map(
        |(alg, nv, raw_arrows, assign, truncate, strict)| {
            let vertices: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
            let arrows: Vec<(String, String, String)> = raw_arrows
                .iter()
                .enumerate()
                .map(|(k, (s, t))| (format!("x{k}"), vertices[s % nv].clone(), vertices[t % nv].clone()))
                .collect();
            let omega = if assign { vec![(vertices[0].clone(), "A".to_string())] } else { vec![] };
            let labels_of = {
                let alg_labels = alg.label_list();
                let assign = assign;
                move |v: usize| if assign && v == 0 { alg_labels.clone() } else { vec!["e".to_string()] }
            };
            let mut token_pool: Vec<PathToken> = arrows.iter().map(|(a, _, _)| PathToken::Arrow(a.clone())).collect();
            for (v, name) in vertices.iter().enumerate() {
                for l in labels_of(v) {
                    token_pool.push(PathToken::Label { vertex: Some(name.clone()), label: l });
                }
            }
            let term = (rational(), prop::collection::vec(prop::sample::select(token_pool), 1..=3)).prop_map(|(coeff, tokens)| PathTerm { coeff, tokens });
            let relations = prop::collection::vec(prop::collection::vec(term, 1..=3), 0..=2);
            let dims = prop::collection::vec(0usize..=2, nv);
            (Just((alg, vertices, arrows, omega, truncate, strict)), relations, dims)
        },
    )
    .prop_flat_map(|((alg, vertices, arrows, omega, truncate, strict), relations, dims)| {
        let dim_of = |name: &str| dims[vertices.iter().position(|v| v == name).unwrap()];
        let maps: Vec<_> = arrows.iter().map(|(_, s, t)| matrix(dim_of(s), dim_of(t))).collect();
        let acts: Vec<_> = vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| omega.is_empty() || *i != 0)
            .map(|(i, v)| (Just(v.clone()), matrix(dims[i], dims[i])))
            .collect();
        (Just((alg, vertices.clone(), arrows.clone(), omega, truncate, strict, relations, dims.clone())), maps, acts)
    })
    .prop_map(|((alg, vertices, arrows, omega, truncate, strict, relations, dims), maps, acts)| {
        let quiver = QuiverDecl {
            name: "Q".into(),
            vertices: vertices.clone(),
            arrows: arrows.clone(),
            omega,
            relations: relations.into_iter().enumerate().map(|(k, terms)| RelationDecl { name: format!("r{k}"), terms }).collect(),
            truncate: Some(truncate),
            mode: Some(if strict { ModeDecl::Strict } else { ModeDecl::Weak }),
        };
        let rep = RepDecl {
            name: "R".into(),
            quiver: "Q".into(),
            dims: vertices.iter().cloned().zip(dims).collect(),
            acts: acts.into_iter().map(|(v, m)| ("e".to_string(), v, m)).collect(),
            arrow_maps: arrows.iter().map(|(a, _, _)| a.clone()).zip(maps).collect(),
        };
        Workspace {
            field: Some(FieldDescriptor::Rationals),
            algebras: vec![alg],
            quivers: vec![quiver],
            reps: vec![rep],
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        rng_seed: RngSeed::Fixed(0x7072_696e),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn parse_print_round_trip(ws in workspace()) {
        let printed = ws.to_string();
        let reparsed = parse_str(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(&reparsed, &ws);
        prop_assert_eq!(reparsed.to_string(), printed);
    }
}
