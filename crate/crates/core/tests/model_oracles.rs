mod oracle;

use std::sync::Arc;

use oracle::Bits;
use qbif_core::class::MorClass;
use qbif_core::fincat::{commutative_squares, factorizations, functor_category, product_category, FinCat, SquareFilter, DEFAULT_SIZE_GUARD};
use qbif_core::lifting::{check_intertwined, check_wfs, class_composite, has_lift, left_complement, right_complement, Wfs};
use qbif_core::model::{check_model_structure, enumerate_model_structures, enumerate_wfs, model_from_intertwined, ModelStructure, DEFAULT_BUDGET};
use qbif_core::verdict::Witness;

fn bits(c: &MorClass) -> Bits {
    (0..c.universe()).map(|m| c.contains(m)).collect()
}

fn class(b: &Bits) -> MorClass {
    MorClass::from_predicate(b.len(), |m| b[m])
}

#[test]
fn chain_morphism_counts_match_closure() {
    for n in 1..=5 {
        let c = FinCat::chain(n);
        assert_eq!(c.num_morphisms(), n * (n + 1) / 2);
    }
}

#[test]
fn functor_category_counts_match_monotone_maps() {
    for (j, c) in [(2, 3), (2, 2), (3, 2), (3, 3)] {
        let (jc, cc) = (Arc::new(FinCat::chain(j)), Arc::new(FinCat::chain(c)));
        let fc = functor_category(&jc, &cc, DEFAULT_SIZE_GUARD).unwrap();
        let maps = oracle::monotone_maps(&oracle::order(&jc), &oracle::order(&cc));
        assert_eq!(fc.cat.num_objects(), maps.len());
        let pointwise = maps
            .iter()
            .flat_map(|f| maps.iter().map(move |g| (f, g)))
            .filter(|(f, g)| f.iter().zip(g.iter()).all(|(a, b)| a <= b))
            .count();
        assert_eq!(fc.cat.num_morphisms(), pointwise);
    }
    let two = Arc::new(FinCat::chain(2));
    assert_eq!(functor_category(&two, &Arc::new(FinCat::chain(3)), DEFAULT_SIZE_GUARD).unwrap().cat.num_objects(), 6);
    assert_eq!(functor_category(&two, &two, DEFAULT_SIZE_GUARD).unwrap().cat.num_objects(), 3);
}

#[test]
fn product_counts() {
    let two = Arc::new(FinCat::chain(2));
    let p = product_category(&two, &two, DEFAULT_SIZE_GUARD).unwrap();
    assert_eq!((p.cat.num_objects(), p.cat.num_morphisms()), (4, 9));
    let t = Arc::new(FinCat::terminal());
    let q = product_category(&two, &t, DEFAULT_SIZE_GUARD).unwrap();
    assert!(q.proj_a.is_isomorphism());
}

#[test]
fn squares_match_brute_force() {
    for cat in [FinCat::terminal(), FinCat::chain(2), FinCat::chain(3)] {
        let ours = commutative_squares(&cat, SquareFilter::default());
        assert_eq!(ours.len(), oracle::squares(&cat).len());
    }
    assert_eq!(commutative_squares(&FinCat::terminal(), SquareFilter::default()).len(), 1);
    assert_eq!(commutative_squares(&FinCat::chain(2), SquareFilter::default()).len(), 6);
}

#[test]
fn factorizations_match_brute_force() {
    let c = FinCat::chain(3);
    for f in c.morphisms() {
        let mut ours = factorizations(&c, f);
        let mut theirs = oracle::splittings(&c, f);
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs);
    }
    assert_eq!(factorizations(&c, c.hom(0, 2)[0]).len(), 3);
}

#[test]
fn lifting_matches_brute_force() {
    let two = Arc::new(FinCat::chain(2));
    let sq = product_category(&two, &two, DEFAULT_SIZE_GUARD).unwrap().cat;
    for cat in [FinCat::chain(2), FinCat::chain(3), (*sq).clone()] {
        for j in cat.morphisms() {
            for q in cat.morphisms() {
                assert_eq!(has_lift(&cat, j, q), oracle::lifts(&cat, j, q));
            }
        }
    }
}

#[test]
fn complements_examples() {
    let c = FinCat::chain(2);
    let n = c.num_morphisms();
    assert_eq!(right_complement(&c, &MorClass::empty(n)), c.all());
    assert_eq!(left_complement(&c, &c.all()), c.isos());
    assert_eq!(right_complement(&c, &MorClass::identities(&c)), c.all());
    assert_eq!(class_composite(&c, &c.isos(), &c.isos()), c.isos());
    assert_eq!(class_composite(&c, &c.all(), &c.all()), c.all());
}

#[test]
fn wfs_enumeration_matches_oracle() {
    for cat in [FinCat::chain(2), FinCat::chain(3)] {
        let mut ours: Vec<(Bits, Bits)> =
            enumerate_wfs(&cat, DEFAULT_BUDGET).unwrap().iter().map(|w| (bits(&w.left), bits(&w.right))).collect();
        let mut theirs = oracle::all_wfs(&cat);
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs);
        for (l, r) in &theirs {
            assert!(check_wfs(&cat, &Wfs::new(class(l), class(r))).passed());
        }
    }
}

#[test]
fn model_enumeration_matches_oracle() {
    for cat in [FinCat::terminal(), FinCat::empty(), FinCat::chain(2), FinCat::chain(3)] {
        let mut ours: Vec<(Bits, Bits, Bits)> = enumerate_model_structures(&cat, DEFAULT_BUDGET)
            .unwrap()
            .iter()
            .map(|m| (bits(&m.cof), bits(&m.weak), bits(&m.fib)))
            .collect();
        let mut theirs = oracle::all_models(&cat);
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs);
    }
}

#[test]
fn two_chain_structures_and_duality() {
    let c = FinCat::chain(2);
    let all = enumerate_model_structures(&c, DEFAULT_BUDGET).unwrap();
    assert_eq!(all.len(), 3);
    assert!(all.contains(&ModelStructure::trivial(&c)));
    let op = Arc::new(qbif_core::fincat::opposite(&c));
    let op_all = enumerate_model_structures(&op, DEFAULT_BUDGET).unwrap();
    for ms in &all {
        assert!(op_all.contains(&ms.opposite()));
    }
}

#[test]
fn check_model_structure_agrees_with_oracle_on_every_triple() {
    let c = FinCat::chain(2);
    let subsets = oracle::all_subsets(&c);
    for cof in &subsets {
        for weak in &subsets {
            for fib in &subsets {
                let ms = ModelStructure::new(class(cof), class(weak), class(fib));
                assert_eq!(check_model_structure(&c, &ms).passed(), oracle::is_model(&c, cof, weak, fib));
            }
        }
    }
}

#[test]
fn intertwined_pairs_on_three_chain() {
    let c = FinCat::chain(3);
    let systems = enumerate_wfs(&c, DEFAULT_BUDGET).unwrap();
    let mut refused = 0;
    for w1 in &systems {
        for w2 in &systems {
            if !check_intertwined(&c, w1, w2).passed() {
                continue;
            }
            match model_from_intertwined(&c, w1, w2).unwrap() {
                qbif_core::verdict::Construction::Built(ms) => {
                    assert!(oracle::is_model(&c, &bits(&ms.cof), &bits(&ms.weak), &bits(&ms.fib)));
                }
                qbif_core::verdict::Construction::Refused(r) => {
                    refused += 1;
                    assert!(matches!(r.verdict.root_witness(), Some(Witness::TwoOutOfThree { .. })));
                }
            }
        }
    }
    assert!(refused > 0, "some intertwined pair on the 3-chain fails 2-out-of-3");
}

#[test]
fn intertwined_examples() {
    let c = FinCat::chain(2);
    let lr = Wfs::new(c.all(), c.isos());
    let rl = Wfs::new(c.isos(), c.all());
    let built = model_from_intertwined(&c, &rl, &lr).unwrap();
    assert_eq!(built.built(), Some(&ModelStructure::trivial(&c)));
    let same = model_from_intertwined(&c, &lr, &lr).unwrap();
    assert_eq!(same.built(), Some(&ModelStructure::new(c.all(), c.all(), c.isos())));
    assert!(check_intertwined(&c, &lr, &rl).failed());
}
