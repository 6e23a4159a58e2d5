mod oracle;

use std::sync::Arc;

use proptest::prelude::*;
use qbif_core::bifib::TieBreak;
use qbif_core::class::MorClass;
use qbif_core::corpus::{random_lattice_setups, LatticeStock};
use qbif_core::fincat::{opposite, validate_category, FinCat};
use qbif_core::lifting::{left_complement, right_complement};
use qbif_core::model::{check_model_structure, enumerate_model_structures, DEFAULT_BUDGET};
use qbif_core::quillen::{grothendieck_model, verify_main_theorem};
use qbif_core::reedy::FinLattice;

fn poset(n: usize, edges: &[bool]) -> FinCat {
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
    let leq: Vec<(usize, usize)> = pairs.zip(edges.iter().cycle()).filter(|(_, &e)| e).map(|(p, _)| p).collect();
    FinCat::from_preorder(&labels, &leq).unwrap()
}

fn arb_poset() -> impl Strategy<Value = FinCat> {
    (1usize..=4, prop::collection::vec(any::<bool>(), 6)).prop_map(|(n, e)| poset(n, &e))
}

/// A poset with a fresh bottom and top glued on; kept only when it is a lattice.
fn arb_lattice() -> impl Strategy<Value = FinLattice> {
    (0usize..=3, prop::collection::vec(any::<bool>(), 3)).prop_filter_map("not a lattice", |(k, e)| {
        let n = k + 2;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let inner = i >= 1 && j < n - 1;
                edges.push(!inner || e[(i + j) % e.len()]);
            }
        }
        FinLattice::from_poset(Arc::new(poset(n, &edges))).ok()
    })
}

fn arb_class(universe: usize) -> impl Strategy<Value = MorClass> {
    prop::collection::vec(any::<bool>(), universe).prop_map(move |b| MorClass::from_predicate(universe, |m| b[m]))
}

fn poset_and_class() -> impl Strategy<Value = (FinCat, MorClass)> {
    arb_poset().prop_flat_map(|c| {
        let n = c.num_morphisms();
        (Just(c), arb_class(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn opposite_is_an_involution(c in arb_poset()) {
        prop_assert!(opposite(&opposite(&c)).same_tables(&c));
    }

    #[test]
    fn raw_round_trip_preserves_indices(c in arb_poset()) {
        prop_assert!(validate_category(&c.to_raw()).unwrap().same_tables(&c));
    }

    #[test]
    fn lift_table_matches_oracle(c in arb_poset()) {
        for j in c.morphisms() {
            for q in c.morphisms() {
                prop_assert_eq!(c.lift_table().lifts(j, q), oracle::lifts(&c, j, q));
            }
        }
    }

    #[test]
    fn complements_form_a_galois_connection((c, a) in poset_and_class()) {
        let r = right_complement(&c, &a);
        let closure = left_complement(&c, &r);
        prop_assert!(a.is_subset(&closure));
        prop_assert_eq!(right_complement(&c, &closure), r.clone());
        let bigger = a.union(&MorClass::isos(&c));
        prop_assert!(right_complement(&c, &bigger).is_subset(&r));
    }

    #[test]
    fn lattice_operations_are_bounds(l in arb_lattice()) {
        for x in l.elements() {
            prop_assert!(l.leq(l.bottom(), x) && l.leq(x, l.top()));
            for y in l.elements() {
                let (j, m) = (l.join(x, y), l.meet(x, y));
                prop_assert!(l.leq(x, j) && l.leq(y, j) && l.leq(m, x) && l.leq(m, y));
                prop_assert_eq!(l.join(x, m), x);
                prop_assert_eq!(l.meet(x, j), x);
                for z in l.elements() {
                    if l.leq(x, z) && l.leq(y, z) { prop_assert!(l.leq(j, z)); }
                    if l.leq(z, x) && l.leq(z, y) { prop_assert!(l.leq(z, m)); }
                }
            }
        }
    }

    #[test]
    fn right_adjoint_satisfies_adjunction(a in arb_lattice(), b in arb_lattice()) {
        for f in a.join_preserving_maps(&b).into_iter().take(20) {
            let g = a.right_adjoint(&b, &f);
            for x in a.elements() {
                for y in b.elements() {
                    prop_assert_eq!(b.leq(f[x], y), a.leq(x, g[y]));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumerated_structures_satisfy_axioms_and_dualize(c in arb_poset()) {
        let op = opposite(&c);
        let all = enumerate_model_structures(&c, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(all.len(), enumerate_model_structures(&op, DEFAULT_BUDGET).unwrap().len());
        for ms in &all {
            let bits = |k: &MorClass| oracle::bits_from(&c, k.iter());
            prop_assert!(oracle::is_model(&c, &bits(&ms.cof), &bits(&ms.weak), &bits(&ms.fib)));
            prop_assert!(check_model_structure(&op, &ms.opposite()).passed());
        }
    }

    #[test]
    fn random_setups_dualize_and_ignore_tie_break(seed in any::<u64>()) {
        let stock = LatticeStock::small().unwrap();
        let small = random_lattice_setups(&stock, seed, 2, TieBreak::Smallest).unwrap();
        let large = random_lattice_setups(&stock, seed, 2, TieBreak::Largest).unwrap();
        prop_assert_eq!(small.len(), 2);
        for (a, b) in small.iter().zip(&large) {
            prop_assert_eq!(&a.name, &b.name);
            let direct = grothendieck_model(&a.setup).unwrap();
            let dual = grothendieck_model(&a.setup.opposite()).unwrap();
            prop_assert_eq!(direct.built().map(|m| m.opposite()), dual.built().cloned());
            let (ra, rb) = (verify_main_theorem(&a.setup).unwrap(), verify_main_theorem(&b.setup).unwrap());
            prop_assert_eq!(&ra.candidate, &rb.candidate);
            prop_assert!(ra.agrees());
        }
    }
}
