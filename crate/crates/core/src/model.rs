//! Model structures on finite categories, Quillen functors and adjunctions.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::class::MorClass;
use crate::fincat::{FinCat, Functor, Mor, Obj};
use crate::lifting::{check_wfs, class_composite, Wfs};
use crate::verdict::{Construction, Refusal, Verdict, Witness};

/// Default work limit for [`enumerate_model_structures`].
pub const DEFAULT_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("the two systems are not intertwined")]
    NotIntertwined(Verdict),
    #[error("enumeration needs {needed} candidates, above the budget {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
}

/// Cofibrations, weak equivalences and fibrations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModelStructure {
    pub cof: MorClass,
    pub weak: MorClass,
    pub fib: MorClass,
}

impl ModelStructure {
    pub fn new(cof: MorClass, weak: MorClass, fib: MorClass) -> Self {
        ModelStructure { cof, weak, fib }
    }

    /// Every morphism a cofibration and a fibration, isos the weak equivalences.
    pub fn trivial(cat: &FinCat) -> Self {
        Self::new(cat.all(), cat.isos(), cat.all())
    }

    pub fn acyclic_cof(&self) -> MorClass {
        self.cof.intersection(&self.weak)
    }

    pub fn acyclic_fib(&self) -> MorClass {
        self.fib.intersection(&self.weak)
    }

    /// `(C, F ∩ W)`.
    pub fn cof_wfs(&self) -> Wfs {
        Wfs::new(self.cof.clone(), self.acyclic_fib())
    }

    /// `(C ∩ W, F)`.
    pub fn fib_wfs(&self) -> Wfs {
        Wfs::new(self.acyclic_cof(), self.fib.clone())
    }

    /// The dual structure on the opposite category.
    pub fn opposite(&self) -> Self {
        Self::new(self.fib.clone(), self.weak.clone(), self.cof.clone())
    }
}

/// A composable pair where exactly two of the three arrows lie in `weak`.
pub fn two_out_of_three_failure(cat: &FinCat, weak: &MorClass) -> Option<Witness> {
    cat.composable_pairs().iter().find_map(|&(f, g, gf)| {
        let n = weak.contains(f) as u8 + weak.contains(g) as u8 + weak.contains(gf) as u8;
        (n == 2).then_some(Witness::TwoOutOfThree { first: f, second: g, composite: gf })
    })
}

/// 2-out-of-3 and both weak factorization systems.
pub fn check_model_structure(cat: &FinCat, ms: &ModelStructure) -> Verdict {
    if let Some(w) = two_out_of_three_failure(cat, &ms.weak) {
        return Verdict::fail("model-structure", w).with_trace("two-out-of-three: fails");
    }
    let v = check_wfs(cat, &ms.cof_wfs());
    if !v.passed() {
        return Verdict::nest("model-structure", Verdict { condition: "cofibration wfs".into(), ..v });
    }
    let v = check_wfs(cat, &ms.fib_wfs());
    if !v.passed() {
        return Verdict::nest("model-structure", Verdict { condition: "fibration wfs".into(), ..v });
    }
    Verdict::pass("model-structure")
}

/// From `w1 = (L1, R1)` and `w2 = (L2, R2)` with `L1 ⊆ L2`, take
/// `W = R2 ∘ L1`; this is a model structure `(L2, W, R1)` exactly when `W`
/// has 2-out-of-3.
pub fn model_from_intertwined(cat: &FinCat, w1: &Wfs, w2: &Wfs) -> Result<Construction<ModelStructure>, ModelError> {
    let v = crate::lifting::check_intertwined(cat, w1, w2);
    if !v.passed() {
        return Err(ModelError::NotIntertwined(v));
    }
    let weak = class_composite(cat, &w2.right, &w1.left);
    if let Some(w) = two_out_of_three_failure(cat, &weak) {
        return Ok(Construction::Refused(Refusal {
            reason: "composite class lacks 2-out-of-3".into(),
            verdict: Verdict::fail("two-out-of-three", w),
        }));
    }
    let ms = ModelStructure::new(w2.left.clone(), weak, w1.right.clone());
    let check = check_model_structure(cat, &ms);
    assert!(check.passed(), "intertwined pair with 2-out-of-3 gave a non-model structure: {check:?}");
    assert_eq!(ms.acyclic_cof(), w1.left, "acyclic cofibrations differ from L1");
    assert_eq!(ms.acyclic_fib(), w2.right, "acyclic fibrations differ from R2");
    Ok(Construction::Built(ms))
}

/// Every left class of the lifting Galois connection: intersections of the
/// sets `{ j : j ⧄ q }`.
fn closed_left_classes(cat: &FinCat, budget: usize) -> Result<Vec<MorClass>, ModelError> {
    let table = cat.lift_table();
    let mut family = vec![cat.all()];
    let mut seen: HashSet<MorClass> = family.iter().cloned().collect();
    for q in cat.morphisms() {
        let col = table.lifting_against(q);
        for i in 0..family.len() {
            let c = family[i].intersection(col);
            if seen.insert(c.clone()) {
                family.push(c);
                if family.len() > budget {
                    return Err(ModelError::BudgetExceeded { needed: family.len(), budget });
                }
            }
        }
    }
    Ok(family)
}

/// Every weak factorization system, ordered by left class.
pub fn enumerate_wfs(cat: &FinCat, budget: usize) -> Result<Vec<Wfs>, ModelError> {
    let table = cat.lift_table();
    let mut out: Vec<Wfs> = closed_left_classes(cat, budget)?
        .into_iter()
        .map(|l| {
            let r = table.right_complement(&l);
            Wfs::new(l, r)
        })
        .filter(|w| {
            cat.morphisms()
                .all(|f| crate::lifting::factor_through(cat, f, &w.left, &w.right).is_some())
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Every model structure, sorted by `(cof, weak, fib)`.
///
/// Candidates are pairs of weak factorization systems `(C, F∩W)` and
/// `(C∩W, F)` with `C∩W ⊆ C`; the weak equivalences are the composite class
/// and must satisfy 2-out-of-3. Each result is re-verified with
/// [`check_model_structure`].
pub fn enumerate_model_structures(cat: &FinCat, budget: usize) -> Result<Vec<ModelStructure>, ModelError> {
    let systems = enumerate_wfs(cat, budget)?;
    let pairs = systems.len() * systems.len();
    if pairs > budget {
        return Err(ModelError::BudgetExceeded { needed: pairs, budget });
    }
    let isos = cat.isos();
    let mut out = Vec::new();
    for wc in &systems {
        for wf in &systems {
            if !wf.left.is_subset(&wc.left) {
                continue;
            }
            let weak = class_composite(cat, &wc.right, &wf.left);
            if !isos.is_subset(&weak) || two_out_of_three_failure(cat, &weak).is_some() {
                continue;
            }
            let ms = ModelStructure::new(wc.left.clone(), weak, wf.right.clone());
            let v = check_model_structure(cat, &ms);
            assert!(v.passed(), "enumerated candidate failed verification: {v:?}");
            out.push(ms);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuillenStatus {
    Left,
    Right,
    Both,
    Neither,
}

impl QuillenStatus {
    pub fn is_left(self) -> bool {
        matches!(self, QuillenStatus::Left | QuillenStatus::Both)
    }

    pub fn is_right(self) -> bool {
        matches!(self, QuillenStatus::Right | QuillenStatus::Both)
    }
}

/// First member of `src` whose image under `f` leaves `tgt`.
pub fn preservation_failure(f: &Functor, src: &MorClass, tgt: &MorClass, class: &str) -> Option<Witness> {
    src.iter().find(|&m| !tgt.contains(f.mor(m))).map(|m| Witness::NotPreserved {
        base: None,
        morphism: m,
        image: f.mor(m),
        class: class.into(),
    })
}

/// Left: preserves cofibrations and acyclic cofibrations. Right: fibrations
/// and acyclic fibrations.
pub fn quillen_status(f: &Functor, dom: &ModelStructure, cod: &ModelStructure) -> QuillenStatus {
    let left = left_quillen_failure(f, dom, cod).is_none();
    let right = right_quillen_failure(f, dom, cod).is_none();
    let status = match (left, right) {
        (true, true) => QuillenStatus::Both,
        (true, false) => QuillenStatus::Left,
        (false, true) => QuillenStatus::Right,
        (false, false) => QuillenStatus::Neither,
    };
    if status == QuillenStatus::Both {
        debug_assert!(
            preservation_failure(f, &dom.weak, &cod.weak, "weak").is_none(),
            "a left and right Quillen functor must preserve weak equivalences"
        );
    }
    status
}

pub fn left_quillen_failure(f: &Functor, dom: &ModelStructure, cod: &ModelStructure) -> Option<Witness> {
    preservation_failure(f, &dom.cof, &cod.cof, "cofibration")
        .or_else(|| preservation_failure(f, &dom.acyclic_cof(), &cod.acyclic_cof(), "acyclic cofibration"))
}

pub fn right_quillen_failure(f: &Functor, dom: &ModelStructure, cod: &ModelStructure) -> Option<Witness> {
    preservation_failure(f, &dom.fib, &cod.fib, "fibration")
        .or_else(|| preservation_failure(f, &dom.acyclic_fib(), &cod.acyclic_fib(), "acyclic fibration"))
}

/// First morphism where `F` fails to preserve or to reflect weak equivalences.
pub fn conservativity_failure(f: &Functor, w_dom: &MorClass, w_cod: &MorClass) -> Option<Witness> {
    f.dom().morphisms().find_map(|m| {
        let image = f.mor(m);
        match (w_dom.contains(m), w_cod.contains(image)) {
            (true, false) => Some(Witness::NotPreserved { base: None, morphism: m, image, class: "weak".into() }),
            (false, true) => Some(Witness::NotConservative { base: None, morphism: m, image }),
            _ => None,
        }
    })
}

/// `f ∈ W ⟺ F(f) ∈ W` for every morphism of the domain.
pub fn is_homotopically_conservative(f: &Functor, w_dom: &MorClass, w_cod: &MorClass) -> Verdict {
    Verdict::from_option("homotopically-conservative", conservativity_failure(f, w_dom, w_cod))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AdjunctionError {
    #[error("functors do not form a pair M → N → M")]
    Shape,
    #[error("transposition at ({x}, {y}) is not a bijection")]
    NotBijective { x: Obj, y: Obj },
    #[error("transposition is not natural at ({x}, {y})")]
    NotNatural { x: Obj, y: Obj },
}

/// An adjunction `L ⊣ R` with `L: M → N`, stored extensionally: for every
/// `(X, Y)` the list of pairs `(k: LX → Y, φk: X → RY)`.
#[derive(Clone, Debug)]
pub struct AdjunctionData {
    left: Functor,
    right: Functor,
    table: Vec<Vec<(Mor, Mor)>>,
}

impl AdjunctionData {
    /// Tabulate `transpose` and check that it is a natural bijection.
    pub fn new(
        left: Functor,
        right: Functor,
        mut transpose: impl FnMut(Obj, Obj, Mor) -> Mor,
    ) -> Result<Self, AdjunctionError> {
        let (m, n) = (left.dom().clone(), left.cod().clone());
        if !right.dom().same_tables(&n) || !right.cod().same_tables(&m) {
            return Err(AdjunctionError::Shape);
        }
        let mut table = Vec::with_capacity(m.num_objects() * n.num_objects());
        for x in m.objects() {
            for y in n.objects() {
                let from = n.hom(left.obj(x), y);
                let to = m.hom(x, right.obj(y));
                let pairs: Vec<(Mor, Mor)> = from.iter().map(|&k| (k, transpose(x, y, k))).collect();
                let mut images: Vec<Mor> = pairs.iter().map(|p| p.1).collect();
                images.sort_unstable();
                images.dedup();
                if from.len() != to.len() || images.len() != to.len() || !images.iter().all(|i| to.contains(i)) {
                    return Err(AdjunctionError::NotBijective { x, y });
                }
                table.push(pairs);
            }
        }
        let adj = AdjunctionData { left, right, table };
        adj.check_naturality()?;
        Ok(adj)
    }

    /// For thin categories the bijection is forced; only existence has to match.
    pub fn between_thin(left: Functor, right: Functor) -> Result<Self, AdjunctionError> {
        let m = left.dom().clone();
        let r = right.clone();
        Self::new(left, right, |x, y, _| m.hom(x, r.obj(y)).first().copied().unwrap_or(usize::MAX))
    }

    fn entry(&self, x: Obj, y: Obj) -> &[(Mor, Mor)] {
        &self.table[x * self.left.cod().num_objects() + y]
    }

    pub fn left(&self) -> &Functor {
        &self.left
    }

    pub fn right(&self) -> &Functor {
        &self.right
    }

    /// `φ(k)` for `k: LX → Y`.
    pub fn transpose(&self, x: Obj, y: Obj, k: Mor) -> Mor {
        self.entry(x, y).iter().find(|p| p.0 == k).expect("k is in hom(LX, Y)").1
    }

    /// `φ⁻¹(h)` for `h: X → RY`.
    pub fn untranspose(&self, x: Obj, y: Obj, h: Mor) -> Mor {
        self.entry(x, y).iter().find(|p| p.1 == h).expect("h is in hom(X, RY)").0
    }

    /// Unit component `X → RLX`.
    pub fn unit(&self, x: Obj) -> Mor {
        let lx = self.left.obj(x);
        self.transpose(x, lx, self.left.cod().identity(lx))
    }

    /// Counit component `LRY → Y`.
    pub fn counit(&self, y: Obj) -> Mor {
        let ry = self.right.obj(y);
        self.untranspose(ry, y, self.left.dom().identity(ry))
    }

    fn check_naturality(&self) -> Result<(), AdjunctionError> {
        let (m, n) = (self.left.dom(), self.left.cod());
        for x in m.objects() {
            for y in n.objects() {
                for &(k, phik) in self.entry(x, y) {
                    // Precomposition with a: X' → X.
                    for &a in m.incoming(x) {
                        let x2 = m.src(a);
                        let lhs = self.transpose(x2, y, n.comp(k, self.left.mor(a)));
                        if lhs != m.comp(phik, a) {
                            return Err(AdjunctionError::NotNatural { x: x2, y });
                        }
                    }
                    // Postcomposition with b: Y → Y'.
                    for &b in n.out_of(y) {
                        let y2 = n.tgt(b);
                        let lhs = self.transpose(x, y2, n.comp(b, k));
                        if lhs != m.comp(self.right.mor(b), phik) {
                            return Err(AdjunctionError::NotNatural { x, y: y2 });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `L` left Quillen, which must coincide with `R` right Quillen.
pub fn is_quillen_adjunction(adj: &AdjunctionData, m: &ModelStructure, n: &ModelStructure) -> bool {
    quillen_adjunction_failure(adj, m, n).is_none()
}

/// The first preservation failure of `L`, with the equivalence to the right
/// adjoint asserted.
pub fn quillen_adjunction_failure(adj: &AdjunctionData, m: &ModelStructure, n: &ModelStructure) -> Option<Witness> {
    let left = left_quillen_failure(&adj.left, m, n);
    let right = right_quillen_failure(&adj.right, n, m);
    assert_eq!(
        left.is_none(),
        right.is_none(),
        "left adjoint is left Quillen iff right adjoint is right Quillen"
    );
    left
}

/// Standard hom-set criterion for a Quillen equivalence: for cofibrant `X`
/// and fibrant `Y`, `k: LX → Y` is weak iff `φk` is. Requires an initial
/// object in `M` and a terminal object in `N`.
pub fn quillen_equivalence_failure(adj: &AdjunctionData, m: &ModelStructure, n: &ModelStructure) -> Option<Option<Witness>> {
    let (mc, nc) = (adj.left.dom(), adj.left.cod());
    let init = mc.initial_object()?;
    let term = nc.terminal_object()?;
    for x in mc.objects().filter(|&x| m.cof.contains(mc.hom(init, x)[0])) {
        for y in nc.objects().filter(|&y| n.fib.contains(nc.hom(y, term)[0])) {
            for &(k, phik) in adj.entry(x, y) {
                if n.weak.contains(k) != m.weak.contains(phik) {
                    return Some(Some(Witness::NotConservative { base: None, morphism: phik, image: k }));
                }
            }
        }
    }
    Some(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::validate_functor;
    use std::sync::Arc;

    #[test]
    fn two_chain_structures() {
        let c = FinCat::chain(2);
        let all = enumerate_model_structures(&c, DEFAULT_BUDGET).unwrap();
        assert_eq!(all.len(), 3);
        let trivial = ModelStructure::new(c.all(), c.isos(), c.all());
        assert!(all.contains(&trivial));
        let op = crate::fincat::opposite(&c);
        let dual: Vec<_> = enumerate_model_structures(&op, DEFAULT_BUDGET).unwrap();
        for ms in &all {
            assert!(dual.contains(&ms.opposite()));
        }
    }

    #[test]
    fn terminal_and_empty_have_one_structure() {
        assert_eq!(enumerate_model_structures(&FinCat::terminal(), DEFAULT_BUDGET).unwrap().len(), 1);
        assert_eq!(enumerate_model_structures(&FinCat::empty(), DEFAULT_BUDGET).unwrap().len(), 1);
    }

    #[test]
    fn all_all_all_is_not_a_model_structure() {
        let c = FinCat::chain(2);
        let v = check_model_structure(&c, &ModelStructure::new(c.all(), c.all(), c.all()));
        assert!(v.failed());
    }

    #[test]
    fn intertwined_construction() {
        let c = FinCat::chain(2);
        let w = Wfs::new(c.all(), c.isos());
        let built = model_from_intertwined(&c, &w, &w).unwrap();
        assert_eq!(built.built().unwrap(), &ModelStructure::new(c.all(), c.all(), c.isos()));
        let w2 = Wfs::new(c.isos(), c.all());
        assert!(matches!(model_from_intertwined(&c, &w, &w2), Err(ModelError::NotIntertwined(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let c = FinCat::chain(3);
        assert!(matches!(enumerate_model_structures(&c, 2), Err(ModelError::BudgetExceeded { .. })));
    }

    #[test]
    fn constant_functor_status() {
        let c2 = Arc::new(FinCat::chain(2));
        let one = Arc::new(FinCat::terminal());
        let to_point = validate_functor(&c2, &one, vec![0, 0], vec![0, 0, 0]).unwrap();
        let src = ModelStructure::new(c2.all(), c2.isos(), c2.all());
        let tgt = ModelStructure::trivial(&one);
        assert_eq!(quillen_status(&to_point, &src, &tgt), QuillenStatus::Both);
        // Constant at the top of the 2-chain with W = isos in the target.
        let konst = validate_functor(&c2, &c2, vec![1, 1], vec![2, 2, 2]).unwrap();
        let w_all = ModelStructure::new(c2.all(), c2.all(), c2.isos());
        assert!(!is_homotopically_conservative(&konst, &src.weak, &w_all.weak).passed());
        assert!(is_homotopically_conservative(&konst, &w_all.weak, &src.weak).passed());
        let id = crate::fincat::Functor::identity(&c2);
        assert!(is_homotopically_conservative(&id, &src.weak, &src.weak).passed());
    }
}
