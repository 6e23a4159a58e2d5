mod oracle;

use std::sync::Arc;

use oracle::Bits;
use qbif_core::bifib::{build_cleavage, TieBreak};
use qbif_core::class::MorClass;
use qbif_core::corpus::{arrow_setup, product_setup, square_corpus, theorem_corpus, ArrowEnd, IndexedLattices};
use qbif_core::fincat::{FinCat, Functor, FunctorCategory, DEFAULT_SIZE_GUARD};
use qbif_core::lifting::{check_intertwined, check_wfs, class_composite};
use qbif_core::model::{enumerate_model_structures, ModelStructure, DEFAULT_BUDGET};
use qbif_core::quillen::*;
use qbif_core::reedy::FinLattice;
use qbif_core::verdict::Construction;

fn bits(c: &MorClass) -> Bits {
    (0..c.universe()).map(|m| c.contains(m)).collect()
}

fn oracle_model(cat: &FinCat, ms: &ModelStructure) -> bool {
    oracle::is_model(cat, &bits(&ms.cof), &bits(&ms.weak), &bits(&ms.fib))
}

fn identity_setup(cat: &Arc<FinCat>, ms: &ModelStructure) -> QuillenSetup {
    let bifib = build_cleavage(&Functor::identity(cat), TieBreak::Smallest).built().unwrap().clone();
    let point = ModelStructure::trivial(&FinCat::terminal());
    QuillenSetup::new(bifib, ms.clone(), vec![point; cat.num_objects()]).unwrap()
}

#[test]
fn main_theorem_on_corpus_against_axiom_oracle() {
    let corpus = theorem_corpus(TieBreak::Smallest).unwrap();
    assert!(corpus.len() >= 200);
    let (mut yes, mut no) = (0, 0);
    for entry in &corpus {
        let r = verify_main_theorem(&entry.setup).unwrap();
        let by_oracle = oracle_model(entry.setup.bifib.total(), &r.candidate);
        assert_eq!(by_oracle, r.hypotheses_hold(), "{}", entry.name);
        assert!(r.agrees(), "{}", entry.name);
        if by_oracle {
            yes += 1
        } else {
            no += 1
        }
    }
    assert!(yes > 0 && no > 0, "corpus exercises both outcomes");
}

#[test]
fn main_theorem_over_square_base() {
    for entry in square_corpus(TieBreak::Smallest).unwrap() {
        let r = verify_main_theorem(&entry.setup).unwrap();
        assert_eq!(oracle_model(entry.setup.bifib.total(), &r.candidate), r.hypotheses_hold(), "{}", entry.name);
    }
}

#[test]
fn stanculescu_pairs_are_intertwined_with_class_identities() {
    for entry in theorem_corpus(TieBreak::Smallest).unwrap() {
        let s = &entry.setup;
        let e = s.bifib.total();
        let cof_side = stanculescu_wfs(s, Side::Cofibration).unwrap();
        let fib_side = stanculescu_wfs(s, Side::Fibration).unwrap();
        assert!(check_wfs(e, &cof_side).passed() && check_wfs(e, &fib_side).passed());
        assert!(check_intertwined(e, &fib_side, &cof_side).passed(), "{}", entry.name);
        let w = class_composite(e, &cof_side.right, &fib_side.left);
        assert_eq!(fib_side.left, w.intersection(&cof_side.left));
        assert_eq!(cof_side.right, w.intersection(&fib_side.right));
    }
}

#[test]
fn necessity_suite_and_duality_on_corpus() {
    for entry in theorem_corpus(TieBreak::Smallest).unwrap() {
        let s = &entry.setup;
        let direct = grothendieck_model(s).unwrap();
        let dual = grothendieck_model(&s.opposite()).unwrap();
        match (&direct, &dual) {
            (Construction::Built(a), Construction::Built(b)) => {
                assert_eq!(&a.opposite(), b, "{}", entry.name);
                assert!(necessity_suite(s, a).passed(), "{}", entry.name);
                assert!(check_quillen_bifibration(s, a).passed(), "{}", entry.name);
            }
            (Construction::Refused(_), Construction::Refused(_)) => {}
            _ => panic!("duality mismatch on {}", entry.name),
        }
    }
}

#[test]
fn cleavage_tie_break_does_not_matter() {
    let small = theorem_corpus(TieBreak::Smallest).unwrap();
    let large = theorem_corpus(TieBreak::Largest).unwrap();
    assert_eq!(small.len(), large.len());
    for (a, b) in small.iter().zip(&large) {
        assert_eq!(a.name, b.name);
        let (ra, rb) = (verify_main_theorem(&a.setup).unwrap(), verify_main_theorem(&b.setup).unwrap());
        assert_eq!(ra.candidate, rb.candidate);
        assert_eq!(ra.hcon.outcome, rb.hcon.outcome);
        assert_eq!(ra.hbc.outcome, rb.hbc.outcome);
        assert_eq!(ra.total_is_model, rb.total_is_model);
    }
}

/// Product classes read off the pair encoding `a * |B| + b` of morphisms.
fn product_expectation(m: &FinCat, m_ms: &ModelStructure, b: &FinCat, b_ms: &ModelStructure) -> ModelStructure {
    let nb = b.num_morphisms();
    let n = m.num_morphisms() * nb;
    let both = |x: &MorClass, y: &MorClass| MorClass::from_predicate(n, |t| x.contains(t / nb) && y.contains(t % nb));
    ModelStructure::new(both(&m_ms.cof, &b_ms.cof), both(&m_ms.weak, &b_ms.weak), both(&m_ms.fib, &b_ms.fib))
}

#[test]
fn product_bifibration_gives_product_structure() {
    let lats = [FinLattice::chain(2), FinLattice::chain(3), FinLattice::diamond()];
    for m in &lats {
        for b in &lats[..2] {
            let m_all = enumerate_model_structures(m.cat(), DEFAULT_BUDGET).unwrap();
            let b_all = enumerate_model_structures(b.cat(), DEFAULT_BUDGET).unwrap();
            for mm in &m_all {
                for bm in &b_all {
                    let (_, s) = product_setup(m.cat(), mm, b.cat(), bm, DEFAULT_SIZE_GUARD, TieBreak::Smallest).unwrap();
                    let expected = product_expectation(m.cat(), mm, b.cat(), bm);
                    assert_eq!(grothendieck_model(&s).unwrap().built(), Some(&expected));
                    assert!(check_q(&s).passed() && check_hcon(&s).passed() && check_hbc(&s).passed());
                    assert!(check_rs_conditions(&s).passed());
                    assert!(check_hp_conditions(&s).passed());
                }
            }
        }
    }
}

/// Value of object `x` at `j` and component of `t` at `j`, read from raw tables.
fn val(fc: &FunctorCategory, x: usize, j: usize) -> usize {
    fc.functors[x].0[j]
}

fn comp(fc: &FunctorCategory, t: usize, j: usize) -> usize {
    fc.transformations[t].components[j]
}

#[test]
fn arrow_bifibrations_give_injective_and_projective_structures() {
    for lat in [FinLattice::chain(3), FinLattice::diamond()] {
        let c = lat.cat();
        let below = |x: usize, y: usize| !c.hom(x, y).is_empty();
        let arrow = |x: usize, y: usize| c.hom(x, y)[0];
        // Meets and joins by search over the order.
        let meet = |x: usize, y: usize| {
            c.objects().filter(|&z| below(z, x) && below(z, y)).find(|&z| c.objects().all(|w| !(below(w, x) && below(w, y)) || below(w, z))).unwrap()
        };
        let join = |x: usize, y: usize| {
            c.objects().filter(|&z| below(x, z) && below(y, z)).find(|&z| c.objects().all(|w| !(below(x, w) && below(y, w)) || below(z, w))).unwrap()
        };
        for ms in enumerate_model_structures(c, DEFAULT_BUDGET).unwrap() {
            let (fc, s) = arrow_setup(&lat, &ms, ArrowEnd::Codomain, DEFAULT_SIZE_GUARD, TieBreak::Smallest).unwrap();
            let e = &fc.cat;
            let n = e.num_morphisms();
            let tc = total_classes(&s);
            let cof = MorClass::from_predicate(n, |t| ms.cof.contains(comp(&fc, t, 0)) && ms.cof.contains(comp(&fc, t, 1)));
            let fib = MorClass::from_predicate(n, |t| {
                let (x, y) = (e.src(t), e.tgt(t));
                ms.fib.contains(comp(&fc, t, 1)) && ms.fib.contains(arrow(val(&fc, x, 0), meet(val(&fc, x, 1), val(&fc, y, 0))))
            });
            assert_eq!((&tc.cof, &tc.fib), (&cof, &fib));
            let built = grothendieck_model(&s).unwrap();
            let weak = MorClass::from_predicate(n, |t| ms.weak.contains(comp(&fc, t, 0)) && ms.weak.contains(comp(&fc, t, 1)));
            assert_eq!(built.built(), Some(&ModelStructure::new(cof, weak.clone(), fib)));

            let (fc, s) = arrow_setup(&lat, &ms, ArrowEnd::Domain, DEFAULT_SIZE_GUARD, TieBreak::Smallest).unwrap();
            let e = &fc.cat;
            let tc = total_classes(&s);
            let cof = MorClass::from_predicate(n, |t| {
                let (x, y) = (e.src(t), e.tgt(t));
                ms.cof.contains(comp(&fc, t, 0)) && ms.cof.contains(arrow(join(val(&fc, x, 1), val(&fc, y, 0)), val(&fc, y, 1)))
            });
            let fib = MorClass::from_predicate(n, |t| ms.fib.contains(comp(&fc, t, 0)) && ms.fib.contains(comp(&fc, t, 1)));
            assert_eq!((&tc.cof, &tc.fib), (&cof, &fib));
            assert_eq!(grothendieck_model(&s).unwrap().built(), Some(&ModelStructure::new(cof, weak, fib)));
        }
    }
}

#[test]
fn identity_bifibration_returns_base_structure() {
    let c = Arc::new(FinCat::chain(3));
    for ms in enumerate_model_structures(&c, DEFAULT_BUDGET).unwrap() {
        let s = identity_setup(&c, &ms);
        assert!(check_q(&s).passed() && check_hcon(&s).passed() && check_hbc(&s).passed());
        assert_eq!(grothendieck_model(&s).unwrap().built(), Some(&ms));
        assert!(check_rs_conditions(&s).passed() && check_hp_conditions(&s).passed());
        assert!(check_quillen_bifibration(&s, &ms).passed());
    }
}

#[test]
fn failing_hypotheses_are_witnessed() {
    let mut corpus = theorem_corpus(TieBreak::Smallest).unwrap();
    corpus.extend(square_corpus(TieBreak::Smallest).unwrap());
    let (mut hcon_fail, mut hbc_fail) = (false, false);
    for e in &corpus {
        let r = verify_main_theorem(&e.setup).unwrap();
        if r.hcon.failed() {
            hcon_fail = true;
            assert!(r.hcon.root_witness().is_some());
        }
        if r.hbc.failed() && r.hcon.passed() {
            hbc_fail = true;
            assert!(r.hbc.root_witness().is_some());
            let refused = grothendieck_model(&e.setup).unwrap();
            assert!(refused.refusal().is_some());
            assert!(!oracle_model(e.setup.bifib.total(), &r.candidate));
        }
    }
    assert!(hcon_fail && hbc_fail);
}

#[test]
fn fiberwise_quillen_failure_is_found_by_enumeration() {
    // Collage 2-chain -> 2-chain with the identity map: u_! is the identity,
    // so a cofibration in the left fiber that is not one in the right fails.
    let l = FinLattice::chain(2);
    let data = IndexedLattices::over_chain(vec![l.clone(), l.clone()], vec![vec![0, 1]]).unwrap();
    let all = enumerate_model_structures(l.cat(), DEFAULT_BUDGET).unwrap();
    let base = ModelStructure::trivial(&FinCat::chain(2));
    let mut found = false;
    for a in &all {
        for b in &all {
            let (_, s) = data.setup(base.clone(), &[a.clone(), b.clone()], TieBreak::Smallest).unwrap();
            let v = check_q(&s);
            if v.failed() {
                found = true;
                assert!(v.root_witness().is_some());
            }
        }
    }
    assert!(found);
}
