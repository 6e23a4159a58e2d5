//! The lifting relation, complements, and weak factorization systems.

use serde::Serialize;

use crate::class::MorClass;
use crate::fincat::{FinCat, Mor};
use crate::verdict::{Verdict, Witness};

/// Commuting squares from `j` to `q`: pairs `(top, bottom)` with
/// `q ∘ top = bottom ∘ j`.
pub fn lifting_squares(cat: &FinCat, j: Mor, q: Mor) -> Vec<(Mor, Mor)> {
    let mut out = Vec::new();
    for &top in cat.hom(cat.src(j), cat.src(q)) {
        let qt = cat.comp(q, top);
        for &bottom in cat.hom(cat.tgt(j), cat.tgt(q)) {
            if cat.comp(bottom, j) == qt {
                out.push((top, bottom));
            }
        }
    }
    out
}

/// A diagonal `h` with `h ∘ j = top` and `q ∘ h = bottom`.
pub fn diagonal(cat: &FinCat, j: Mor, q: Mor, top: Mor, bottom: Mor) -> Option<Mor> {
    cat.hom(cat.tgt(j), cat.src(q))
        .iter()
        .copied()
        .find(|&h| cat.comp(h, j) == top && cat.comp(q, h) == bottom)
}

/// First commuting square from `j` to `q` without a diagonal.
pub fn unliftable_square(cat: &FinCat, j: Mor, q: Mor) -> Option<(Mor, Mor)> {
    lifting_squares(cat, j, q)
        .into_iter()
        .find(|&(t, b)| diagonal(cat, j, q, t, b).is_none())
}

/// `j` has the left lifting property against `q`.
pub fn has_lift(cat: &FinCat, j: Mor, q: Mor) -> bool {
    unliftable_square(cat, j, q).is_none()
}

/// The full lifting relation of a category.
#[derive(Clone, Debug)]
pub struct LiftTable {
    /// `rows[j]` = every `q` with `j ⧄ q`.
    rows: Vec<MorClass>,
    /// `cols[q]` = every `j` with `j ⧄ q`.
    cols: Vec<MorClass>,
}

impl LiftTable {
    pub fn compute(cat: &FinCat) -> Self {
        let n = cat.num_morphisms();
        let mut rows = vec![MorClass::empty(n); n];
        let mut cols = vec![MorClass::empty(n); n];
        for j in 0..n {
            for q in 0..n {
                if has_lift(cat, j, q) {
                    rows[j].insert(q);
                    cols[q].insert(j);
                }
            }
        }
        LiftTable { rows, cols }
    }

    pub fn lifts(&self, j: Mor, q: Mor) -> bool {
        self.rows[j].contains(q)
    }

    pub fn right_complement(&self, left: &MorClass) -> MorClass {
        let mut r = MorClass::full(self.rows.len());
        for j in left.iter() {
            r.intersect_with(&self.rows[j]);
        }
        r
    }

    pub fn left_complement(&self, right: &MorClass) -> MorClass {
        let mut l = MorClass::full(self.cols.len());
        for q in right.iter() {
            l.intersect_with(&self.cols[q]);
        }
        l
    }

    /// `{ j : j ⧄ q }`.
    pub fn lifting_against(&self, q: Mor) -> &MorClass {
        &self.cols[q]
    }
}

/// Morphisms with the right lifting property against every member of `left`.
pub fn right_complement(cat: &FinCat, left: &MorClass) -> MorClass {
    cat.lift_table().right_complement(left)
}

/// Morphisms with the left lifting property against every member of `right`.
pub fn left_complement(cat: &FinCat, right: &MorClass) -> MorClass {
    cat.lift_table().left_complement(right)
}

/// `{ g ∘ f : f ∈ first, g ∈ second }`.
pub fn class_composite(cat: &FinCat, second: &MorClass, first: &MorClass) -> MorClass {
    let mut out = MorClass::empty(cat.num_morphisms());
    for &(f, g, gf) in cat.composable_pairs() {
        if first.contains(f) && second.contains(g) {
            out.insert(gf);
        }
    }
    out
}

/// First factorization `f = r ∘ l` with `l ∈ left` and `r ∈ right`.
pub fn factor_through(cat: &FinCat, f: Mor, left: &MorClass, right: &MorClass) -> Option<(Mor, Mor)> {
    for &l in cat.out_of(cat.src(f)) {
        if !left.contains(l) {
            continue;
        }
        for &r in cat.hom(cat.tgt(l), cat.tgt(f)) {
            if right.contains(r) && cat.comp(r, l) == f {
                return Some((l, r));
            }
        }
    }
    None
}

/// A candidate weak factorization system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Wfs {
    pub left: MorClass,
    pub right: MorClass,
}

impl Wfs {
    pub fn new(left: MorClass, right: MorClass) -> Self {
        Wfs { left, right }
    }

    /// The same pair read in the opposite category, with sides exchanged.
    pub fn opposite(&self) -> Wfs {
        Wfs { left: self.right.clone(), right: self.left.clone() }
    }
}

/// Check both complement equalities and the factorization axiom.
///
/// Clauses run in the order soundness, factorization, left closure, right
/// closure; the witness comes from the first failure and the trace records
/// every clause.
pub fn check_wfs(cat: &FinCat, wfs: &Wfs) -> Verdict {
    let table = cat.lift_table();
    let mut failures: Vec<(&str, Witness)> = Vec::new();

    'sound: for j in wfs.left.iter() {
        for q in wfs.right.iter() {
            if !table.lifts(j, q) {
                let (top, bottom) = unliftable_square(cat, j, q).expect("table agrees with squares");
                failures.push(("soundness", Witness::NoLift { j, q, top, bottom }));
                break 'sound;
            }
        }
    }
    if let Some(f) = cat.morphisms().find(|&f| factor_through(cat, f, &wfs.left, &wfs.right).is_none()) {
        failures.push(("factorization", Witness::Unfactorable { morphism: f }));
    }
    if let Some(m) = table.left_complement(&wfs.right).first_outside(&wfs.left) {
        failures.push(("left-closure", Witness::Missing { morphism: m, class: "left".into() }));
    }
    if let Some(m) = table.right_complement(&wfs.left).first_outside(&wfs.right) {
        failures.push(("right-closure", Witness::Missing { morphism: m, class: "right".into() }));
    }

    let trace: Vec<String> = ["soundness", "factorization", "left-closure", "right-closure"]
        .iter()
        .map(|c| {
            let ok = failures.iter().all(|(n, _)| n != c);
            format!("{c}: {}", if ok { "ok" } else { "fails" })
        })
        .collect();
    let mut v = match failures.into_iter().next() {
        None => Verdict::pass("wfs"),
        Some((_, w)) => Verdict::fail("wfs", w),
    };
    v.trace = trace;
    v
}

/// `w1.left ⊆ w2.left`, equivalently `w2.right ⊆ w1.right` for a pair of wfs.
pub fn check_intertwined(cat: &FinCat, w1: &Wfs, w2: &Wfs) -> Verdict {
    for (name, w) in [("w1", w1), ("w2", w2)] {
        let v = check_wfs(cat, w);
        if !v.passed() {
            return Verdict::nest(format!("intertwined ({name} is a wfs)"), v);
        }
    }
    if let Some(m) = w1.left.first_outside(&w2.left) {
        return Verdict::fail("intertwined", Witness::Missing { morphism: m, class: "L2".into() });
    }
    debug_assert!(w2.right.is_subset(&w1.right));
    Verdict::pass("intertwined")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{product_category, DEFAULT_SIZE_GUARD};
    use std::sync::Arc;

    #[test]
    fn arrow_does_not_lift_against_itself() {
        let c = FinCat::chain(2);
        assert!(!has_lift(&c, 1, 1));
        assert!(has_lift(&c, 0, 1));
    }

    #[test]
    fn square_poset_lifting() {
        let c2 = Arc::new(FinCat::chain(2));
        let sq = product_category(&c2, &c2, DEFAULT_SIZE_GUARD).unwrap().cat;
        // (0,0)->(0,1) against (1,0)->(1,1).
        let j = sq.hom(0, 1)[0];
        let q = sq.hom(2, 3)[0];
        assert!(!has_lift(&sq, j, q));
    }

    #[test]
    fn complements_on_two_chain() {
        let c = FinCat::chain(2);
        assert_eq!(left_complement(&c, &c.all()), MorClass::identities(&c));
        assert_eq!(right_complement(&c, &c.all()), c.isos());
        assert_eq!(class_composite(&c, &c.isos(), &c.isos()), c.isos());
    }

    #[test]
    fn wfs_examples() {
        let c = FinCat::chain(2);
        assert!(check_wfs(&c, &Wfs::new(c.all(), c.isos())).passed());
        let ids = MorClass::identities(&c);
        let v = check_wfs(&c, &Wfs::new(ids.clone(), ids));
        assert_eq!(v.witness, Some(Witness::Unfactorable { morphism: 1 }));
        let v = check_wfs(&c, &Wfs::new(MorClass::empty(3), c.all()));
        assert!(v.trace.iter().any(|l| l == "left-closure: fails"));
    }

    #[test]
    fn intertwined_example() {
        let c = FinCat::chain(2);
        let w1 = Wfs::new(c.all(), c.isos());
        let w2 = Wfs::new(c.isos(), c.all());
        let v = check_intertwined(&c, &w1, &w2);
        assert_eq!(v.witness, Some(Witness::Missing { morphism: 1, class: "L2".into() }));
        assert!(check_intertwined(&c, &w2, &w1).passed());
    }
}
