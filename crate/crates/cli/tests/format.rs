use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use qbif_cli::format::ParseError;
use qbif_cli::generate::{generate, CorpusKind, GenerateOptions};
use qbif_cli::workspace::{Entity, LoadError, Workspace};
use qbif_core::fincat::FinCat;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(corpus_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

/// Index-level equality of every entity, plus equal canonical text.
fn assert_same(a: &Workspace, b: &Workspace) {
    assert_eq!(a.len(), b.len());
    for ((na, ea), (nb, eb)) in a.entries().iter().zip(b.entries()) {
        assert_eq!(na, nb);
        assert_eq!(ea.kind(), eb.kind(), "{na}");
        match (ea, eb) {
            (Entity::Category(x), Entity::Category(y)) => {
                assert_eq!(x.cat.to_raw(), y.cat.to_raw(), "{na}");
                assert!(x.cat.same_tables(&y.cat));
            }
            (Entity::Functor(x), Entity::Functor(y)) => {
                assert_eq!(x.functor.obj_map(), y.functor.obj_map());
                assert_eq!(x.functor.mor_map(), y.functor.mor_map());
            }
            (Entity::Model(x), Entity::Model(y)) => assert_eq!(x.model, y.model),
            (Entity::Class(x), Entity::Class(y)) => assert_eq!(x.class, y.class),
            (Entity::Wfs(x), Entity::Wfs(y)) => assert_eq!(x.wfs, y.wfs),
            (Entity::Reedy(x), Entity::Reedy(y)) => {
                assert_eq!(x.reedy.degree, y.reedy.degree);
                assert_eq!((&x.reedy.plus, &x.reedy.minus), (&y.reedy.plus, &y.reedy.minus));
            }
            (Entity::Transformation(x), Entity::Transformation(y)) => assert_eq!(x.alpha.components(), y.alpha.components()),
            _ => {}
        }
    }
    assert_eq!(a.save(), b.save());
}

#[test]
fn shipped_corpus_round_trips() {
    let files = corpus_files();
    assert!(files.len() >= 8);
    for f in files {
        let (ws, _) = Workspace::load_file(&f).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        let again = Workspace::parse(&ws.save()).unwrap();
        assert_same(&ws, &again);
    }
}

#[test]
fn generated_workspaces_round_trip() {
    for kind in [CorpusKind::Product, CorpusKind::Cod, CorpusKind::Dom, CorpusKind::RandomSquareBifib, CorpusKind::Reedy] {
        let opts = GenerateOptions { kind, lattice: "diamond".into(), reedy: "span3".into(), count: Some(3), seed: 7, ..Default::default() };
        let ws = generate(&opts).unwrap();
        assert!(!ws.is_empty());
        assert_same(&ws, &Workspace::parse(&ws.save()).unwrap());
    }
}

#[test]
fn empty_file_is_an_empty_workspace() {
    assert!(Workspace::parse("").unwrap().is_empty());
    assert!(Workspace::parse("# nothing here\n\n").unwrap().is_empty());
    assert!(Workspace::parse("qbif 1\n").unwrap().is_empty());
}

fn parse_error(src: &str) -> ParseError {
    match Workspace::parse(src) {
        Err(LoadError::Parse(e)) => e,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn unknown_morphism_in_class_is_named() {
    let e = parse_error("qbif 1\nchain c 2\nend\nclass k c\n  members 0<1 nope\nend\n");
    assert_eq!((e.line, e.column), (5, 15));
    assert!(e.message.contains("nope"), "{}", e.message);
}

#[test]
fn duplicate_names_are_rejected() {
    let e = parse_error("qbif 1\nchain c 2\nend\ndiamond c\nend\n");
    assert_eq!((e.line, e.column), (4, 9));
    let e = parse_error("qbif 1\nposet p\n  element a a\nend\n");
    assert!(e.message.contains("duplicate"));
}

#[test]
fn structural_errors_carry_lines() {
    let e = parse_error("qbif 1\nchain c 2\nend\nmodel m c\n  cof :all\n  weak :isos\nend\n");
    assert_eq!(e.line, 4);
    assert!(e.message.contains("fib"));
    assert!(matches!(Workspace::parse("qbif 1\nlattice v\n  element a b c\n  leq a c\n  leq b c\nend\n"), Err(LoadError::Invalid { line: 2, .. })));
    let not_functor = "qbif 1\nchain c 2\nend\nfunctor f c c\n  obj 0 1\n  obj 1 0\nend\n";
    assert!(matches!(Workspace::parse(not_functor), Err(LoadError::Validation { line: 4, .. })));
    let e = parse_error("qbif 1\nsetup s missing\n  base-model x\nend\n");
    assert!(e.message.contains("missing"));
}

#[test]
fn hand_written_categories_get_identities() {
    let ws = Workspace::parse("qbif 1\ncategory c\n  object x y\n  morphism f x y\n  morphism g x y\nend\n").unwrap();
    let Some(Entity::Category(c)) = ws.get("c") else { panic!() };
    assert_eq!(c.cat.num_morphisms(), 4);
    assert_eq!(c.cat.hom(0, 1).len(), 2);
}

/// A random poset with labels that need quoting.
fn arb_category() -> impl Strategy<Value = FinCat> {
    (1usize..=4, prop::collection::vec(any::<bool>(), 6)).prop_map(|(n, edges)| {
        let labels: Vec<String> = (0..n).map(|i| if i % 2 == 0 { format!("p {i}") } else { format!("q#{i}") }).collect();
        let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        let leq: Vec<(usize, usize)> = pairs.zip(edges).filter(|(_, e)| *e).map(|(p, _)| p).collect();
        FinCat::from_preorder(&labels, &leq).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn save_then_load_is_index_identical(c in arb_category(), reversed in any::<bool>()) {
        let mut ws = Workspace::new();
        let cat = if reversed {
            // Same poset with morphisms in reversed index order, which the
            // element/order form cannot express.
            let raw = c.to_raw();
            let mut r = raw.clone();
            r.morphisms.reverse();
            qbif_core::fincat::validate_category(&r).unwrap()
        } else {
            c
        };
        ws.add_category("c", Arc::new(cat)).unwrap();
        let again = Workspace::parse(&ws.save()).unwrap();
        assert_same(&ws, &again);
    }
}
