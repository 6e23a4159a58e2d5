//! Reedy categories, latching and matching objects in finite lattices, and
//! the degree-by-degree construction of the Reedy model structure through
//! restriction bifibrations.

mod gluing;
mod lattice;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bifib::{build_cleavage, is_cartesian, is_cocartesian, Bifibration, TieBreak};
use crate::class::MorClass;
use crate::fincat::{
    full_subcategory, functor_category, precomposition, FinCat, Functor, FunctorCategory, Mor, Obj, ValidationError,
};
use crate::model::ModelStructure;
use crate::quillen::{grothendieck_model, QuillenError, QuillenSetup};
use crate::verdict::{Construction, Refusal, Verdict, Witness};

pub use gluing::{bigluing, bigluing_setup, check_shulman, shulman_classes, Bigluing, GluingData, ShulmanReport};
pub use lattice::{FinLattice, LatticeError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReedyError {
    #[error("degree condition fails at morphism {morphism}")]
    DegreeViolation { morphism: Mor },
    #[error("morphism {morphism} has no plus-minus factorization")]
    FactorizationMissing { morphism: Mor },
    #[error("morphism {morphism} has several plus-minus factorizations")]
    FactorizationNotUnique { morphism: Mor },
    #[error("{class} class is not a subcategory (morphism {morphism})")]
    NotSubcategory { class: &'static str, morphism: Mor },
    #[error("degree table has the wrong length")]
    DegreeTable,
    #[error("latching object is not below matching object at {object}")]
    AlphaMissing { object: Obj },
    #[error(transparent)]
    Size(#[from] ValidationError),
    #[error("restriction is not a bifibration: {0:?}")]
    NotBifibration(Box<Refusal>),
    #[error("step at degree {degree} refused: {refusal:?}")]
    StepRefused { degree: usize, refusal: Box<Refusal> },
    #[error(transparent)]
    Quillen(#[from] QuillenError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A category with a degree function and direct/inverse subcategories.
#[derive(Clone, Debug)]
pub struct ReedyCat {
    pub cat: Arc<FinCat>,
    pub degree: Vec<usize>,
    pub plus: MorClass,
    pub minus: MorClass,
}

/// Check the degree conditions, that both classes are subcategories, and
/// unique factorization `f = f⁺ ∘ f⁻`.
pub fn validate_reedy(cat: &Arc<FinCat>, degree: Vec<usize>, plus: MorClass, minus: MorClass) -> Result<ReedyCat, ReedyError> {
    if degree.len() != cat.num_objects() {
        return Err(ReedyError::DegreeTable);
    }
    for m in cat.morphisms().filter(|&m| !cat.is_identity(m)) {
        let (s, t) = (degree[cat.src(m)], degree[cat.tgt(m)]);
        if (plus.contains(m) && s >= t) || (minus.contains(m) && s <= t) {
            return Err(ReedyError::DegreeViolation { morphism: m });
        }
    }
    for (class, c) in [("plus", &plus), ("minus", &minus)] {
        if let Some(o) = cat.objects().find(|&o| !c.contains(cat.identity(o))) {
            return Err(ReedyError::NotSubcategory { class, morphism: cat.identity(o) });
        }
        for &(f, g, gf) in cat.composable_pairs() {
            if c.contains(f) && c.contains(g) && !c.contains(gf) {
                return Err(ReedyError::NotSubcategory { class, morphism: gf });
            }
        }
    }
    for f in cat.morphisms() {
        let n = crate::fincat::factorizations(cat, f)
            .into_iter()
            .filter(|&(lo, hi)| minus.contains(lo) && plus.contains(hi))
            .count();
        match n {
            0 => return Err(ReedyError::FactorizationMissing { morphism: f }),
            1 => {}
            _ => return Err(ReedyError::FactorizationNotUnique { morphism: f }),
        }
    }
    Ok(ReedyCat { cat: cat.clone(), degree, plus, minus })
}

impl ReedyCat {
    /// A poset read as a direct category: every arrow raises degree.
    pub fn direct_chain(n: usize) -> ReedyCat {
        let cat = Arc::new(FinCat::chain(n));
        let (all, ids) = (cat.all(), MorClass::identities(&cat));
        validate_reedy(&cat, (0..n).collect(), all, ids).expect("chains are direct")
    }

    /// `p → q ⇉ r`: one degree-lowering arrow `s: p → q` and two
    /// degree-raising arrows `d0, d1: q → r`, freely composed.
    pub fn span_of_three() -> ReedyCat {
        let mut b = crate::fincat::CategoryBuilder::new();
        let p = b.add_object_with_identity("p");
        let q = b.add_object_with_identity("q");
        let r = b.add_object_with_identity("r");
        let s = b.add_morphism("s", p, q);
        let d0 = b.add_morphism("d0", q, r);
        let d1 = b.add_morphism("d1", q, r);
        let d0s = b.add_morphism("d0s", p, r);
        let d1s = b.add_morphism("d1s", p, r);
        b.set_composite(d0, s, d0s).expect("fresh");
        b.set_composite(d1, s, d1s).expect("fresh");
        let cat = Arc::new(b.build().expect("free category"));
        let ids = MorClass::identities(&cat);
        let mut plus = ids.clone();
        plus.insert(d0);
        plus.insert(d1);
        let mut minus = ids;
        minus.insert(s);
        validate_reedy(&cat, vec![1, 0, 2], plus, minus).expect("valid Reedy structure")
    }

    /// The terminal category, degree 0.
    pub fn point() -> ReedyCat {
        let cat = Arc::new(FinCat::terminal());
        let all = cat.all();
        validate_reedy(&cat, vec![0], all.clone(), all).expect("point")
    }

    /// Distinct degrees in increasing order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = self.degree.clone();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Full sub-Reedy category on objects of degree `< bound`, with its
    /// inclusion. Objects keep their relative order.
    pub fn below(&self, bound: usize) -> (ReedyCat, Functor) {
        let objs: Vec<Obj> = self.cat.objects().filter(|&o| self.degree[o] < bound).collect();
        let (sub, inc) = full_subcategory(&self.cat, &objs);
        let restrict = |c: &MorClass| MorClass::from_predicate(sub.num_morphisms(), |m| c.contains(inc.mor(m)));
        let r = ReedyCat {
            degree: objs.iter().map(|&o| self.degree[o]).collect(),
            plus: restrict(&self.plus),
            minus: restrict(&self.minus),
            cat: sub,
        };
        (r, inc)
    }

    /// The same structure on the opposite category, with plus and minus exchanged.
    pub fn opposite(&self) -> ReedyCat {
        ReedyCat {
            cat: Arc::new(crate::fincat::opposite(&self.cat)),
            degree: self.degree.clone(),
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }
}

/// `S ⊙ c` is `c` for non-empty `S` and the bottom otherwise; the weighted
/// colimit is the join of the terms.
pub fn weighted_colimit(lat: &FinLattice, terms: impl IntoIterator<Item = (usize, Obj)>) -> Obj {
    lat.join_all(terms.into_iter().filter(|t| t.0 > 0).map(|t| t.1))
}

/// Dual of [`weighted_colimit`].
pub fn weighted_limit(lat: &FinLattice, terms: impl IntoIterator<Item = (usize, Obj)>) -> Obj {
    lat.meet_all(terms.into_iter().filter(|t| t.0 > 0).map(|t| t.1))
}

/// Latching object at `r`: weighted colimit of the values at objects of
/// degree below `deg r`, weighted by `hom(s, r)`.
pub fn latching(reedy: &ReedyCat, lat: &FinLattice, r: Obj, value: &dyn Fn(Obj) -> Obj) -> Obj {
    let d = reedy.degree[r];
    weighted_colimit(
        lat,
        reedy.cat.objects().filter(|&s| reedy.degree[s] < d).map(|s| (reedy.cat.hom(s, r).len(), value(s))),
    )
}

/// Matching object at `r`, weighted by `hom(r, s)`.
pub fn matching(reedy: &ReedyCat, lat: &FinLattice, r: Obj, value: &dyn Fn(Obj) -> Obj) -> Obj {
    let d = reedy.degree[r];
    weighted_limit(
        lat,
        reedy.cat.objects().filter(|&s| reedy.degree[s] < d).map(|s| (reedy.cat.hom(r, s).len(), value(s))),
    )
}

/// The arrow `L_r X ≤ M_r X`.
pub fn canonical_alpha(reedy: &ReedyCat, lat: &FinLattice, r: Obj, value: &dyn Fn(Obj) -> Obj) -> Result<Mor, ReedyError> {
    let (l, m) = (latching(reedy, lat, r, value), matching(reedy, lat, r, value));
    lat.cat().hom(l, m).first().copied().ok_or(ReedyError::AlphaMissing { object: r })
}

/// The Reedy classes on `[R, M]` for a model structure on the lattice `M`.
pub fn reedy_triple(reedy: &ReedyCat, lat: &FinLattice, ms: &ModelStructure, fc: &FunctorCategory) -> ModelStructure {
    let e = &fc.cat;
    let n = e.num_morphisms();
    let objs: Vec<Obj> = reedy.cat.objects().collect();
    let arrow = |x: Obj, y: Obj| lat.arrow(x, y);
    let cof = MorClass::from_predicate(n, |t| {
        let (x, y) = (e.src(t), e.tgt(t));
        objs.iter().all(|&r| {
            let ly = latching(reedy, lat, r, &|s| fc.value(y, s));
            ms.cof.contains(arrow(lat.join(ly, fc.value(x, r)), fc.value(y, r)))
        })
    });
    let weak = MorClass::from_predicate(n, |t| objs.iter().all(|&r| ms.weak.contains(fc.component(t, r))));
    let fib = MorClass::from_predicate(n, |t| {
        let (x, y) = (e.src(t), e.tgt(t));
        objs.iter().all(|&r| {
            let mx = matching(reedy, lat, r, &|s| fc.value(x, s));
            ms.fib.contains(arrow(fc.value(x, r), lat.meet(mx, fc.value(y, r))))
        })
    });
    ModelStructure::new(cof, weak, fib)
}

/// For every Reedy acyclic fibration `X → Y` and object `r`, every pullback
/// of `M_r X ≤ M_r Y` is a weak equivalence of `M`.
pub fn check_matching_preservation(reedy: &ReedyCat, lat: &FinLattice, ms: &ModelStructure, fc: &FunctorCategory) -> Verdict {
    let triple = reedy_triple(reedy, lat, ms, fc);
    for t in triple.acyclic_fib().iter() {
        let (x, y) = (fc.cat.src(t), fc.cat.tgt(t));
        for r in reedy.cat.objects() {
            let mx = matching(reedy, lat, r, &|s| fc.value(x, s));
            let my = matching(reedy, lat, r, &|s| fc.value(y, s));
            for z in lat.elements().filter(|&z| lat.leq(z, my)) {
                let pulled = lat.arrow(lat.meet(z, mx), z);
                if !ms.weak.contains(pulled) {
                    return Verdict::fail("matching-preservation", Witness::BaseChange { morphism: t, along: z, result: pulled });
                }
            }
        }
    }
    Verdict::pass("matching-preservation")
}

/// Outcome of comparing extensions of a diagram with families in the
/// latching-matching intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub extensions: usize,
    pub families: usize,
    pub bijective: bool,
}

/// Extend `x` (values on objects of degree `< mu`, indexed by `R`) to degree
/// `mu` in every possible way and compare with the product of intervals
/// `[L_r x, M_r x]` over objects of degree `mu`.
pub fn extension_bijection(reedy: &ReedyCat, lat: &FinLattice, mu: usize, x: &[Obj], size_guard: usize) -> Result<ExtensionReport, ReedyError> {
    let (r_le, inc_le) = reedy.below(mu + 1);
    let fc = functor_category(&r_le.cat, lat.cat(), size_guard)?;
    let low: Vec<Obj> = r_le.cat.objects().filter(|&o| r_le.degree[o] < mu).collect();
    let top: Vec<Obj> = r_le.cat.objects().filter(|&o| r_le.degree[o] == mu).collect();
    let xv = |o: Obj| x[inc_le.obj(o)];
    // Extensions: objects of [R≤mu, M] agreeing with x below mu.
    let extensions: Vec<Vec<Obj>> = fc
        .cat
        .objects()
        .filter(|&f| low.iter().all(|&o| fc.value(f, o) == xv(o)))
        .map(|f| top.iter().map(|&r| fc.value(f, r)).collect())
        .collect();
    // Families in the intervals.
    let bounds: Vec<(Obj, Obj)> = top
        .iter()
        .map(|&r| {
            (latching(&r_le, lat, r, &|s| xv(s)), matching(&r_le, lat, r, &|s| xv(s)))
        })
        .collect();
    let mut families: Vec<Vec<Obj>> = vec![Vec::new()];
    for &(l, m) in &bounds {
        let mut next = Vec::new();
        for fam in &families {
            for y in lat.elements().filter(|&y| lat.leq(l, y) && lat.leq(y, m)) {
                let mut f = fam.clone();
                f.push(y);
                next.push(f);
            }
        }
        families = next;
    }
    // Round trip: every family rebuilds a functor, and restriction recovers it.
    let mut bijective = extensions.len() == families.len();
    for fam in &families {
        let mut obj_map = vec![0; r_le.cat.num_objects()];
        for &o in &low {
            obj_map[o] = xv(o);
        }
        for (i, &r) in top.iter().enumerate() {
            obj_map[r] = fam[i];
        }
        let monotone = r_le.cat.morphisms().all(|m| lat.leq(obj_map[r_le.cat.src(m)], obj_map[r_le.cat.tgt(m)]));
        bijective &= monotone && extensions.contains(fam);
    }
    Ok(ExtensionReport { extensions: extensions.len(), families: families.len(), bijective })
}

/// The restriction `[R≤mu, M] → [R<mu, M]` with its cleavage.
pub struct RestrictionBifibration {
    pub upper: ReedyCat,
    pub lower: ReedyCat,
    pub total: FunctorCategory,
    pub base: FunctorCategory,
    pub bifib: Bifibration,
    /// Objects of degree `mu`, as indices of `upper`.
    pub top_objects: Vec<Obj>,
}

/// Build the restriction functor and its cleavage, and check that cartesian
/// morphisms are exactly those whose matching squares are pullbacks and
/// cocartesian ones those whose latching squares are pushouts.
pub fn restriction_bifibration(
    reedy: &ReedyCat,
    lat: &FinLattice,
    mu: usize,
    size_guard: usize,
    tie_break: TieBreak,
) -> Result<RestrictionBifibration, ReedyError> {
    let (upper, _) = reedy.below(mu + 1);
    let lower_objs: Vec<Obj> = upper.cat.objects().filter(|&o| upper.degree[o] < mu).collect();
    let (lower, inc) = upper.below(mu);
    debug_assert_eq!(inc.obj_map(), &lower_objs[..]);
    let total = functor_category(&upper.cat, lat.cat(), size_guard)?;
    let base = functor_category(&lower.cat, lat.cat(), size_guard)?;
    let p = precomposition(&total, &base, &inc);
    let bifib = match build_cleavage(&p, tie_break) {
        Construction::Built(b) => b,
        Construction::Refused(r) => return Err(ReedyError::NotBifibration(Box::new(r))),
    };
    let top_objects: Vec<Obj> = upper.cat.objects().filter(|&o| upper.degree[o] == mu).collect();
    let e = &total.cat;
    for f in e.morphisms() {
        let (x, y) = (e.src(f), e.tgt(f));
        let pullback = top_objects.iter().all(|&r| {
            let mx = matching(&upper, lat, r, &|s| total.value(x, s));
            total.value(x, r) == lat.meet(total.value(y, r), mx)
        });
        let pushout = top_objects.iter().all(|&r| {
            let ly = latching(&upper, lat, r, &|s| total.value(y, s));
            total.value(y, r) == lat.join(total.value(x, r), ly)
        });
        assert_eq!(is_cartesian(&p, f), pullback, "cartesian morphisms are the pullback squares");
        assert_eq!(is_cocartesian(&p, f), pushout, "cocartesian morphisms are the pushout squares");
    }
    Ok(RestrictionBifibration { upper, lower, total, base, bifib, top_objects })
}

impl RestrictionBifibration {
    /// Fiber structures: a vertical morphism is in a class when every
    /// component at degree `mu` is.
    pub fn fiber_models(&self, ms: &ModelStructure) -> Vec<ModelStructure> {
        self.bifib
            .fibers()
            .iter()
            .map(|fiber| {
                let class = |c: &MorClass| {
                    MorClass::from_predicate(fiber.cat.num_morphisms(), |l| {
                        let t = fiber.embedding.mor(l);
                        self.top_objects.iter().all(|&r| c.contains(self.total.component(t, r)))
                    })
                };
                ModelStructure::new(class(&ms.cof), class(&ms.weak), class(&ms.fib))
            })
            .collect()
    }

    /// Setup whose base carries `base_model`.
    pub fn setup(&self, base_model: ModelStructure, ms: &ModelStructure) -> Result<QuillenSetup, ReedyError> {
        Ok(QuillenSetup::new(self.bifib.clone(), base_model, self.fiber_models(ms))?)
    }
}

/// The restriction setup at degree `mu`: the base carries the Reedy
/// structure of the lower part, built by [`reedy_construct`].
pub fn reedy_step_setup(
    reedy: &ReedyCat,
    lat: &FinLattice,
    ms: &ModelStructure,
    mu: usize,
    size_guard: usize,
    tie_break: TieBreak,
) -> Result<(RestrictionBifibration, QuillenSetup), ReedyError> {
    let (lower, _) = reedy.below(mu);
    let below = reedy_construct(&lower, lat, ms, size_guard, tie_break)?;
    let rb = restriction_bifibration(reedy, lat, mu, size_guard, tie_break)?;
    assert!(rb.base.cat.same_tables(&below.category.cat), "lower stage and restriction base coincide");
    let setup = rb.setup(below.model, ms)?;
    Ok((rb, setup))
}

/// One degree of [`reedy_construct`].
#[derive(Clone, Debug)]
pub struct ReedyStage {
    pub degree: usize,
    pub model: ModelStructure,
    pub matches_triple: bool,
    pub extensions_ok: bool,
}

pub struct ReedyConstruction {
    pub stages: Vec<ReedyStage>,
    /// `[R, M]` with the final structure on it.
    pub category: FunctorCategory,
    pub model: ModelStructure,
}

/// Build the Reedy structure one degree at a time, each step through the
/// restriction bifibration, and compare every stage with the direct
/// latching/matching description.
pub fn reedy_construct(
    reedy: &ReedyCat,
    lat: &FinLattice,
    ms: &ModelStructure,
    size_guard: usize,
    tie_break: TieBreak,
) -> Result<ReedyConstruction, ReedyError> {
    let degrees = reedy.degrees();
    let empty = Arc::new(FinCat::empty());
    let mut current = functor_category(&empty, lat.cat(), size_guard)?;
    let mut model = ModelStructure::trivial(&current.cat);
    let mut stages = Vec::new();
    for &d in &degrees {
        let rb = restriction_bifibration(reedy, lat, d, size_guard, tie_break)?;
        assert!(rb.base.cat.same_tables(&current.cat), "stage bases chain together");
        let setup = rb.setup(model, ms)?;
        let built = match grothendieck_model(&setup)? {
            Construction::Built(m) => m,
            Construction::Refused(refusal) => return Err(ReedyError::StepRefused { degree: d, refusal: Box::new(refusal) }),
        };
        let triple = reedy_triple(&rb.upper, lat, ms, &rb.total);
        let mut extensions_ok = true;
        let (_, inc_lower_in_r) = reedy.below(d);
        for a in rb.base.cat.objects() {
            let mut values = vec![0; reedy.cat.num_objects()];
            for (local, &o) in inc_lower_in_r.obj_map().iter().enumerate() {
                values[o] = rb.base.value(a, local);
            }
            extensions_ok &= extension_bijection(reedy, lat, d, &values, size_guard)?.bijective;
        }
        stages.push(ReedyStage { degree: d, model: built.clone(), matches_triple: built == triple, extensions_ok });
        model = built;
        current = rb.total;
    }
    Ok(ReedyConstruction { stages, category: current, model })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::DEFAULT_SIZE_GUARD;

    #[test]
    fn degenerate_structure_is_rejected() {
        let cat = Arc::new(FinCat::chain(2));
        let err = validate_reedy(&cat, vec![0, 1], cat.all(), cat.all()).unwrap_err();
        assert!(matches!(err, ReedyError::DegreeViolation { .. }));
    }

    #[test]
    fn examples_validate() {
        ReedyCat::direct_chain(2);
        ReedyCat::span_of_three();
        ReedyCat::point();
    }

    #[test]
    fn weighted_bounds() {
        let d = FinLattice::diamond();
        assert_eq!(weighted_colimit(&d, []), d.bottom());
        assert_eq!(weighted_limit(&d, []), d.top());
        assert_eq!(weighted_colimit(&d, [(1, 1)]), 1);
        assert_eq!(weighted_colimit(&d, [(1, 1), (2, 2)]), 3);
        assert_eq!(weighted_limit(&d, [(1, 1), (1, 2)]), 0);
        assert_eq!(weighted_colimit(&d, [(0, 1), (1, 2)]), 2);
    }

    #[test]
    fn latching_on_chain() {
        let r = ReedyCat::direct_chain(2);
        let m = FinLattice::chain(3);
        let x = |_: Obj| 1;
        assert_eq!(latching(&r, &m, 0, &x), m.bottom());
        assert_eq!(matching(&r, &m, 0, &x), m.top());
        assert_eq!(latching(&r, &m, 1, &x), 1);
        assert_eq!(matching(&r, &m, 1, &x), m.top());
    }

    #[test]
    fn latching_on_span() {
        let r = ReedyCat::span_of_three();
        let d = FinLattice::diamond();
        // p, q, r carry a, a, top.
        let vals = [1, 1, 3];
        let v = |o: Obj| vals[o];
        assert_eq!(latching(&r, &d, 0, &v), d.bottom());
        assert_eq!(matching(&r, &d, 0, &v), 1);
        assert_eq!(latching(&r, &d, 2, &v), 1);
        assert_eq!(matching(&r, &d, 2, &v), d.top());
        assert!(canonical_alpha(&r, &d, 0, &v).is_ok());
    }

    #[test]
    fn reedy_over_point_is_the_target_structure() {
        let m = FinLattice::chain(3);
        for ms in crate::model::enumerate_model_structures(m.cat(), crate::model::DEFAULT_BUDGET).unwrap() {
            let c = reedy_construct(&ReedyCat::point(), &m, &ms, DEFAULT_SIZE_GUARD, TieBreak::Smallest).unwrap();
            assert_eq!(c.model.cof.count(), ms.cof.count());
            assert_eq!(c.model.weak.count(), ms.weak.count());
        }
    }

    #[test]
    fn restriction_fibers_are_intervals() {
        let r = ReedyCat::direct_chain(2);
        let m = FinLattice::chain(3);
        let rb = restriction_bifibration(&r, &m, 1, DEFAULT_SIZE_GUARD, TieBreak::Smallest).unwrap();
        for a in rb.base.cat.objects() {
            let x0 = rb.base.value(a, 0);
            let size = m.elements().filter(|&y| m.leq(x0, y)).count();
            let fib = &rb.bifib.fiber(a).cat;
            assert_eq!(fib.num_objects(), size);
            assert!(fib.is_thin());
            assert_eq!(fib.num_morphisms(), size * (size + 1) / 2);
        }
    }

    #[test]
    fn construction_matches_triple() {
        let cases: Vec<(ReedyCat, FinLattice)> = vec![
            (ReedyCat::direct_chain(2), FinLattice::chain(3)),
            (ReedyCat::direct_chain(2), FinLattice::diamond()),
            (ReedyCat::direct_chain(2).opposite(), FinLattice::chain(2)),
            (ReedyCat::span_of_three(), FinLattice::chain(2)),
        ];
        for (r, m) in cases {
            for ms in crate::model::enumerate_model_structures(m.cat(), crate::model::DEFAULT_BUDGET).unwrap() {
                let c = reedy_construct(&r, &m, &ms, DEFAULT_SIZE_GUARD, TieBreak::Smallest).unwrap();
                assert!(c.stages.iter().all(|s| s.matches_triple && s.extensions_ok));
                assert!(crate::model::check_model_structure(&c.category.cat, &c.model).passed());
                assert!(check_matching_preservation(&r, &m, &ms, &c.category).passed());
            }
        }
    }

    #[test]
    fn extension_count_on_chain() {
        let r = ReedyCat::direct_chain(2);
        let m = FinLattice::chain(3);
        let rep = extension_bijection(&r, &m, 1, &[1, 0], DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(rep, ExtensionReport { extensions: 2, families: 2, bijective: true });
    }
}
