//! Model structures on the total category of a bifibration whose base and
//! fibers carry model structures.

use serde::Serialize;
use thiserror::Error;

use crate::bifib::{Bifibration, TieBreak};
use crate::class::MorClass;
use crate::fincat::{commutative_squares, CommSquare, Mor, Obj, SquareFilter};
use crate::lifting::{check_wfs, class_composite, factor_through, Wfs};
use crate::model::{
    check_model_structure, conservativity_failure, left_quillen_failure, preservation_failure,
    quillen_adjunction_failure, quillen_equivalence_failure, quillen_status, AdjunctionData, ModelStructure,
    QuillenStatus,
};
use crate::verdict::{Construction, Refusal, Verdict, Witness};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QuillenError {
    #[error("setup is malformed: {0:?}")]
    InvalidSetup(Verdict),
    #[error("hypothesis not met: {0:?}")]
    HypothesisNotMet(Verdict),
    #[error("internal consistency check failed: {0}")]
    InvariantViolated(String),
}

/// A bifibration with model structures on its base and on every fiber.
#[derive(Clone, Debug)]
pub struct QuillenSetup {
    pub bifib: Bifibration,
    pub base_model: ModelStructure,
    /// Indexed by base object, classes over fiber-local morphism indices.
    pub fiber_models: Vec<ModelStructure>,
}

impl QuillenSetup {
    /// Validate the base and every fiber structure.
    pub fn new(bifib: Bifibration, base_model: ModelStructure, fiber_models: Vec<ModelStructure>) -> Result<Self, QuillenError> {
        let v = check_model_structure(bifib.base(), &base_model);
        if !v.passed() {
            return Err(QuillenError::InvalidSetup(Verdict::nest("base model", v)));
        }
        if fiber_models.len() != bifib.base().num_objects() {
            return Err(QuillenError::InvalidSetup(Verdict::fail(
                "fiber models",
                Witness::Object { object: fiber_models.len() },
            )));
        }
        for (a, ms) in fiber_models.iter().enumerate() {
            let v = check_model_structure(&bifib.fiber(a).cat, ms);
            if !v.passed() {
                return Err(QuillenError::InvalidSetup(Verdict::nest(format!("fiber model over {a}"), v)));
            }
        }
        Ok(QuillenSetup { bifib, base_model, fiber_models })
    }

    /// Build fiber structures from classes of vertical morphisms of the
    /// total category. Non-vertical members are ignored.
    pub fn from_vertical_classes(bifib: Bifibration, base_model: ModelStructure, classes: &ModelStructure) -> Result<Self, QuillenError> {
        let fiber_models = bifib
            .fibers()
            .iter()
            .map(|fiber| {
                let local = |c: &MorClass| {
                    MorClass::from_predicate(fiber.cat.num_morphisms(), |l| c.contains(fiber.embedding.mor(l)))
                };
                ModelStructure::new(local(&classes.cof), local(&classes.weak), local(&classes.fib))
            })
            .collect();
        Self::new(bifib, base_model, fiber_models)
    }

    /// The fiber structures as classes of vertical morphisms of the total category.
    pub fn vertical_classes(&self) -> ModelStructure {
        let n = self.bifib.total().num_morphisms();
        let (mut cof, mut weak, mut fib) = (MorClass::empty(n), MorClass::empty(n), MorClass::empty(n));
        for (fiber, ms) in self.bifib.fibers().iter().zip(&self.fiber_models) {
            for l in fiber.cat.morphisms() {
                let g = fiber.embedding.mor(l);
                for (dst, src) in [(&mut cof, &ms.cof), (&mut weak, &ms.weak), (&mut fib, &ms.fib)] {
                    if src.contains(l) {
                        dst.insert(g);
                    }
                }
            }
        }
        ModelStructure::new(cof, weak, fib)
    }

    /// The dual setup on `p^op`.
    pub fn opposite(&self) -> QuillenSetup {
        QuillenSetup {
            bifib: self.bifib.opposite(),
            base_model: self.base_model.opposite(),
            fiber_models: self.fiber_models.iter().map(ModelStructure::opposite).collect(),
        }
    }

    /// Same data with the cleavage rebuilt under another tie-break.
    pub fn with_tie_break(&self, tie_break: TieBreak) -> QuillenSetup {
        QuillenSetup {
            bifib: self.bifib.with_tie_break(tie_break),
            base_model: self.base_model.clone(),
            fiber_models: self.fiber_models.clone(),
        }
    }

    fn fiber_of_mor(&self, f: Mor) -> (Obj, Mor) {
        let e = self.bifib.total();
        let a = self.bifib.functor().obj(e.src(f));
        (a, self.bifib.local_mor(f).expect("morphism is vertical"))
    }

    fn in_fiber(&self, f: Mor, pick: impl Fn(&ModelStructure) -> &MorClass) -> bool {
        let (a, l) = self.fiber_of_mor(f);
        pick(&self.fiber_models[a]).contains(l)
    }

    fn in_fiber_owned(&self, f: Mor, pick: impl Fn(&ModelStructure) -> MorClass) -> bool {
        let (a, l) = self.fiber_of_mor(f);
        pick(&self.fiber_models[a]).contains(l)
    }
}

/// Which weak factorization system of the total category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `(total cofibrations, total acyclic fibrations)`.
    Cofibration,
    /// `(total acyclic cofibrations, total fibrations)`.
    Fibration,
}

fn adjunction_for(setup: &QuillenSetup, u: Mor) -> AdjunctionData {
    setup.bifib.adjunction(u).expect("push and pull along a cleavage are adjoint")
}

fn fiber_witness(u: Mor, w: Witness) -> Witness {
    match w {
        Witness::NotPreserved { morphism, image, class, .. } => {
            Witness::NotPreserved { base: Some(u), morphism, image, class }
        }
        Witness::NotConservative { morphism, image, .. } => Witness::NotConservative { base: Some(u), morphism, image },
        other => other,
    }
}

/// Every `(u_!, u*)` is a Quillen adjunction.
pub fn check_q(setup: &QuillenSetup) -> Verdict {
    let b = setup.bifib.base();
    for u in b.morphisms() {
        let adj = adjunction_for(setup, u);
        let (ma, mb) = (&setup.fiber_models[b.src(u)], &setup.fiber_models[b.tgt(u)]);
        if let Some(w) = quillen_adjunction_failure(&adj, ma, mb) {
            return Verdict::fail("Q", fiber_witness(u, w));
        }
    }
    Verdict::pass("Q")
}

/// The half of the Quillen condition a single weak factorization system needs.
pub fn check_q_side(setup: &QuillenSetup, side: Side) -> Verdict {
    let b = setup.bifib.base();
    for u in b.morphisms() {
        let push = setup.bifib.push_functor(u);
        let (ma, mb) = (&setup.fiber_models[b.src(u)], &setup.fiber_models[b.tgt(u)]);
        let w = match side {
            Side::Cofibration => preservation_failure(&push, &ma.cof, &mb.cof, "cofibration"),
            Side::Fibration => preservation_failure(&push, &ma.acyclic_cof(), &mb.acyclic_cof(), "acyclic cofibration"),
        };
        if let Some(w) = w {
            return Verdict::fail("Q", fiber_witness(u, w));
        }
    }
    Verdict::pass("Q")
}

/// The four total classes, defined through base classes and vertical factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotalClasses {
    pub cof: MorClass,
    pub acyclic_cof: MorClass,
    pub fib: MorClass,
    pub acyclic_fib: MorClass,
}

pub fn total_classes(setup: &QuillenSetup) -> TotalClasses {
    let (bf, base) = (&setup.bifib, &setup.base_model);
    let e = bf.total();
    let p = bf.functor();
    let (b_acof, b_afib) = (base.acyclic_cof(), base.acyclic_fib());
    let n = e.num_morphisms();
    let cof = MorClass::from_predicate(n, |f| {
        base.cof.contains(p.mor(f)) && setup.in_fiber(bf.push_fact(f), |m| &m.cof)
    });
    let acyclic_cof = MorClass::from_predicate(n, |f| {
        b_acof.contains(p.mor(f)) && setup.in_fiber_owned(bf.push_fact(f), |m| m.acyclic_cof())
    });
    let fib = MorClass::from_predicate(n, |f| {
        base.fib.contains(p.mor(f)) && setup.in_fiber(bf.pull_fact(f), |m| &m.fib)
    });
    let acyclic_fib = MorClass::from_predicate(n, |f| {
        b_afib.contains(p.mor(f)) && setup.in_fiber_owned(bf.pull_fact(f), |m| m.acyclic_fib())
    });
    TotalClasses { cof, acyclic_cof, fib, acyclic_fib }
}

/// One of the two total weak factorization systems, verified with
/// [`check_wfs`] and with an explicit factorization of every morphism built
/// from a base factorization and a fiber factorization of its middle factor.
pub fn stanculescu_wfs(setup: &QuillenSetup, side: Side) -> Result<Wfs, QuillenError> {
    let q = check_q_side(setup, side);
    if !q.passed() {
        return Err(QuillenError::HypothesisNotMet(q));
    }
    let tc = total_classes(setup);
    let wfs = match side {
        Side::Cofibration => Wfs::new(tc.cof.clone(), tc.acyclic_fib.clone()),
        Side::Fibration => Wfs::new(tc.acyclic_cof.clone(), tc.fib.clone()),
    };
    let bf = &setup.bifib;
    let (e, b) = (bf.total(), bf.base());
    let (base_l, base_r) = match side {
        Side::Cofibration => (setup.base_model.cof.clone(), setup.base_model.acyclic_fib()),
        Side::Fibration => (setup.base_model.acyclic_cof(), setup.base_model.fib.clone()),
    };
    for f in e.morphisms() {
        let pf = bf.functor().mor(f);
        let (l, r) = factor_through(b, pf, &base_l, &base_r)
            .ok_or_else(|| QuillenError::InvariantViolated(format!("base morphism {pf} does not factor")))?;
        let c = b.tgt(l);
        let m = bf.middle_factor(f, l, r).map_err(|err| QuillenError::InvariantViolated(err.to_string()))?;
        let fm = &setup.fiber_models[c];
        let (fl, fr) = match side {
            Side::Cofibration => (fm.cof.clone(), fm.acyclic_fib()),
            Side::Fibration => (fm.acyclic_cof(), fm.fib.clone()),
        };
        let fiber = bf.fiber(c);
        let (ml, mr) = factor_through(&fiber.cat, bf.local_mor(m).expect("middle factor is vertical"), &fl, &fr)
            .ok_or_else(|| QuillenError::InvariantViolated(format!("middle factor of {f} does not factor")))?;
        let lam = bf.cocartesian_lift(l, e.src(f));
        let rho = bf.cartesian_lift(r, e.tgt(f));
        let left = e.comp(fiber.embedding.mor(ml), lam);
        let right = e.comp(rho, fiber.embedding.mor(mr));
        if e.comp(right, left) != f || !wfs.left.contains(left) || !wfs.right.contains(right) {
            return Err(QuillenError::InvariantViolated(format!("lifted factorization of {f} is wrong")));
        }
    }
    let v = check_wfs(e, &wfs);
    if !v.passed() {
        return Err(QuillenError::InvariantViolated(format!("total wfs fails: {v:?}")));
    }
    Ok(wfs)
}

/// Base factorizations `p(f) = q ∘ j` with `j` an acyclic cofibration and `q`
/// an acyclic fibration.
fn admissible_factorizations(setup: &QuillenSetup, f: Mor) -> Vec<(Mor, Mor)> {
    let b = setup.bifib.base();
    let (acof, afib) = (setup.base_model.acyclic_cof(), setup.base_model.acyclic_fib());
    crate::fincat::factorizations(b, setup.bifib.functor().mor(f))
        .into_iter()
        .filter(|&(j, q)| acof.contains(j) && afib.contains(q))
        .collect()
}

fn middle_is_weak(setup: &QuillenSetup, f: Mor, j: Mor, q: Mor) -> bool {
    let m = setup.bifib.middle_factor(f, j, q).expect("admissible factorization");
    setup.in_fiber(m, |ms| &ms.weak)
}

/// `totalAFib ∘ totalACof`, cross-checked against the middle-factor
/// description.
pub fn total_weak(setup: &QuillenSetup) -> MorClass {
    let tc = total_classes(setup);
    let e = setup.bifib.total();
    let weak = class_composite(e, &tc.acyclic_fib, &tc.acyclic_cof);
    let by_middle = MorClass::from_predicate(e.num_morphisms(), |f| {
        admissible_factorizations(setup, f)
            .into_iter()
            .any(|(j, q)| middle_is_weak(setup, f, j, q))
    });
    assert_eq!(weak, by_middle, "two descriptions of the total weak equivalences disagree");
    weak
}

/// Push along base acyclic cofibrations and pull along base acyclic
/// fibrations are homotopically conservative.
pub fn check_hcon(setup: &QuillenSetup) -> Verdict {
    let b = setup.bifib.base();
    for u in setup.base_model.acyclic_cof().iter() {
        let (wa, wb) = (&setup.fiber_models[b.src(u)].weak, &setup.fiber_models[b.tgt(u)].weak);
        if let Some(w) = conservativity_failure(&setup.bifib.push_functor(u), wa, wb) {
            return Verdict::fail("hCon", fiber_witness(u, w)).with_trace("push");
        }
    }
    for v in setup.base_model.acyclic_fib().iter() {
        let (wa, wb) = (&setup.fiber_models[b.src(v)].weak, &setup.fiber_models[b.tgt(v)].weak);
        if let Some(w) = conservativity_failure(&setup.bifib.pull_functor(v), wb, wa) {
            return Verdict::fail("hCon", fiber_witness(v, w)).with_trace("pull");
        }
    }
    Verdict::pass("hCon")
}

/// Base squares with acyclic cofibrations on the vertical sides and acyclic
/// fibrations on the horizontal sides.
pub fn hbc_squares(setup: &QuillenSetup) -> Vec<CommSquare> {
    let (acof, afib) = (setup.base_model.acyclic_cof(), setup.base_model.acyclic_fib());
    let filter = SquareFilter { top: Some(&afib), left: Some(&acof), right: Some(&acof), bottom: Some(&afib) };
    commutative_squares(setup.bifib.base(), filter)
}

/// Every mate component of every such square is a fiber weak equivalence.
pub fn check_hbc(setup: &QuillenSetup) -> Verdict {
    let bf = &setup.bifib;
    let b = bf.base();
    for sq in hbc_squares(setup) {
        let c = b.tgt(sq.top);
        let c2 = b.tgt(sq.left);
        for z in bf.fiber(c).embedding.obj_map().iter().copied() {
            let comp = bf.mate_component(&sq, z);
            let local = bf.local_mor(comp).expect("mate components are vertical");
            if !setup.fiber_models[c2].weak.contains(local) {
                return Verdict::fail("hBC", Witness::MateComponent { square: sq, object: z, component: comp });
            }
        }
    }
    Verdict::pass("hBC")
}

/// `(totalCof, total weak, totalFib)` when both hypotheses hold, a refusal
/// carrying the failing hypothesis otherwise.
pub fn grothendieck_model(setup: &QuillenSetup) -> Result<Construction<ModelStructure>, QuillenError> {
    let q = check_q(setup);
    if !q.passed() {
        return Err(QuillenError::HypothesisNotMet(q));
    }
    let hcon = check_hcon(setup);
    let hbc = check_hbc(setup);
    for v in [&hcon, &hbc] {
        if !v.passed() {
            return Ok(Construction::Refused(Refusal {
                reason: format!("{} does not hold", v.condition),
                verdict: v.clone(),
            }));
        }
    }
    let tc = total_classes(setup);
    let ms = ModelStructure::new(tc.cof.clone(), total_weak(setup), tc.fib.clone());
    let v = check_model_structure(setup.bifib.total(), &ms);
    if !v.passed() {
        return Err(QuillenError::InvariantViolated(format!("total triple is not a model structure: {v:?}")));
    }
    if ms.acyclic_cof() != tc.acyclic_cof || ms.acyclic_fib() != tc.acyclic_fib {
        return Err(QuillenError::InvariantViolated("acyclic total classes disagree".into()));
    }
    Ok(Construction::Built(ms))
}

/// Both sides of the main equivalence on one setup.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    /// The total triple satisfies every model-category axiom.
    pub total_is_model: bool,
    pub hcon: Verdict,
    pub hbc: Verdict,
    pub model_check: Verdict,
    pub candidate: ModelStructure,
}

impl TheoremReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hcon.passed() && self.hbc.passed()
    }

    pub fn agrees(&self) -> bool {
        self.total_is_model == self.hypotheses_hold()
    }

    pub fn verdict(&self) -> Verdict {
        let v = if self.agrees() {
            Verdict::pass("main-theorem")
        } else {
            Verdict::nest("main-theorem", Verdict::fail("equivalence", Witness::Nested { verdict: Box::new(self.model_check.clone()) }))
        };
        v.with_trace(format!("total is model: {}", self.total_is_model))
            .with_trace(self.hcon.summary())
            .with_trace(self.hbc.summary())
    }
}

/// Evaluate both sides of "total model structure ⟺ hCon ∧ hBC".
pub fn verify_main_theorem(setup: &QuillenSetup) -> Result<TheoremReport, QuillenError> {
    let q = check_q(setup);
    if !q.passed() {
        return Err(QuillenError::HypothesisNotMet(q));
    }
    let tc = total_classes(setup);
    let candidate = ModelStructure::new(tc.cof, total_weak(setup), tc.fib);
    let model_check = check_model_structure(setup.bifib.total(), &candidate);
    Ok(TheoremReport {
        total_is_model: model_check.passed(),
        hcon: check_hcon(setup),
        hbc: check_hbc(setup),
        model_check,
        candidate,
    })
}

/// `p` is left and right Quillen for `candidate`, and each fiber inherits
/// the restricted classes as a model structure equal to the given one.
pub fn check_quillen_bifibration(setup: &QuillenSetup, candidate: &ModelStructure) -> Verdict {
    let bf = &setup.bifib;
    let status = quillen_status(bf.functor(), candidate, &setup.base_model);
    if status != QuillenStatus::Both {
        let w = left_quillen_failure(bf.functor(), candidate, &setup.base_model)
            .or_else(|| crate::model::right_quillen_failure(bf.functor(), candidate, &setup.base_model))
            .expect("status is not both");
        return Verdict::fail("quillen-bifibration", w);
    }
    for fiber in bf.fibers() {
        let restrict = |c: &MorClass| {
            MorClass::from_predicate(fiber.cat.num_morphisms(), |l| c.contains(fiber.embedding.mor(l)))
        };
        let inherited = ModelStructure::new(restrict(&candidate.cof), restrict(&candidate.weak), restrict(&candidate.fib));
        let v = check_model_structure(&fiber.cat, &inherited);
        if !v.passed() {
            return Verdict::nest("quillen-bifibration", v);
        }
        if inherited != setup.fiber_models[fiber.base] {
            return Verdict::fail("quillen-bifibration", Witness::Object { object: fiber.base })
                .with_trace("restricted classes differ from the fiber structure");
        }
    }
    Verdict::pass("quillen-bifibration")
}

/// The consequences that any total model structure with the total classes
/// must satisfy. Each sub-check appears in the trace.
pub fn necessity_suite(setup: &QuillenSetup, total: &ModelStructure) -> Verdict {
    let bf = &setup.bifib;
    let (e, p) = (bf.total(), bf.functor());
    let base = &setup.base_model;
    let (t_acof, t_afib) = (total.acyclic_cof(), total.acyclic_fib());
    let (b_acof, b_afib) = (base.acyclic_cof(), base.acyclic_fib());
    let mut checks: Vec<Verdict> = Vec::new();

    checks.push(Verdict { condition: "fiberwise-quillen".into(), ..check_q(setup) });

    let mut w = None;
    for f in e.morphisms().filter(|&f| crate::bifib::is_cocartesian(p, f)) {
        let u = p.mor(f);
        if base.cof.contains(u) && !total.cof.contains(f) {
            w = Some(Witness::Missing { morphism: f, class: "cofibration".into() });
        } else if b_acof.contains(u) && !t_acof.contains(f) {
            w = Some(Witness::Missing { morphism: f, class: "acyclic cofibration".into() });
        }
        if w.is_some() {
            break;
        }
    }
    checks.push(Verdict::from_option("cocartesian-over-cofibrations", w));

    let mut w = None;
    for f in e.morphisms().filter(|&f| crate::bifib::is_cartesian(p, f)) {
        let u = p.mor(f);
        if base.fib.contains(u) && !total.fib.contains(f) {
            w = Some(Witness::Missing { morphism: f, class: "fibration".into() });
        } else if b_afib.contains(u) && !t_afib.contains(f) {
            w = Some(Witness::Missing { morphism: f, class: "acyclic fibration".into() });
        }
        if w.is_some() {
            break;
        }
    }
    checks.push(Verdict::from_option("cartesian-over-fibrations", w));

    let mut w = None;
    'fibers: for fiber in bf.fibers() {
        let fw = &setup.fiber_models[fiber.base].weak;
        for l in fiber.cat.morphisms() {
            let g = fiber.embedding.mor(l);
            if fw.contains(l) != total.weak.contains(g) {
                w = Some(Witness::NotConservative { base: None, morphism: l, image: g });
                break 'fibers;
            }
        }
    }
    checks.push(Verdict::from_option("fiber-inclusion-conservative", w));

    let tc = total_classes(setup);
    let w = [
        (&total.cof, &tc.cof, "cofibration"),
        (&t_acof, &tc.acyclic_cof, "acyclic cofibration"),
        (&total.fib, &tc.fib, "fibration"),
        (&t_afib, &tc.acyclic_fib, "acyclic fibration"),
    ]
    .into_iter()
    .find_map(|(have, want, class)| {
        have.first_outside(want)
            .map(|m| Witness::Unexpected { morphism: m, class: class.into() })
            .or_else(|| want.first_outside(have).map(|m| Witness::Missing { morphism: m, class: class.into() }))
    });
    checks.push(Verdict::from_option("total-class-descriptions", w));

    let mut w = None;
    'morphisms: for f in e.morphisms() {
        let facts = admissible_factorizations(setup, f);
        if let Some(&first) = facts.first() {
            let expect = middle_is_weak(setup, f, first.0, first.1);
            for &other in &facts[1..] {
                if middle_is_weak(setup, f, other.0, other.1) != expect {
                    w = Some(Witness::MiddleFactor { morphism: f, first, second: other });
                    break 'morphisms;
                }
            }
        }
    }
    checks.push(Verdict::from_option("middle-factor-independence", w));

    let trace: Vec<String> = checks.iter().map(Verdict::summary).collect();
    let mut v = match checks.into_iter().find(|c| !c.passed()) {
        None => Verdict::pass("necessity"),
        Some(c) => Verdict::nest("necessity", c),
    };
    v.trace = trace;
    v
}

/// Unit components of `u_! ⊣ u*` that are weak equivalences, pointwise.
fn unit_failure(setup: &QuillenSetup, u: Mor, adj: &AdjunctionData) -> Option<Witness> {
    let b = setup.bifib.base();
    let wa = &setup.fiber_models[b.src(u)].weak;
    let fa = &setup.bifib.fiber(b.src(u)).cat;
    fa.objects().find_map(|x| {
        let eta = adj.unit(x);
        (!wa.contains(eta)).then_some(Witness::Missing { morphism: eta, class: format!("weak (unit over {u})") })
    })
}

/// Conditions of the earlier criterion: pulls along base weak equivalences
/// are homotopically conservative, and units along base acyclic cofibrations
/// are pointwise weak equivalences.
pub fn check_rs_conditions(setup: &QuillenSetup) -> Verdict {
    let b = setup.bifib.base();
    for u in setup.base_model.weak.iter() {
        let (wa, wb) = (&setup.fiber_models[b.src(u)].weak, &setup.fiber_models[b.tgt(u)].weak);
        if let Some(w) = conservativity_failure(&setup.bifib.pull_functor(u), wb, wa) {
            return Verdict::fail("RS", fiber_witness(u, w)).with_trace("pull along a weak equivalence");
        }
    }
    for u in setup.base_model.acyclic_cof().iter() {
        let adj = adjunction_for(setup, u);
        if let Some(w) = unit_failure(setup, u, &adj) {
            return Verdict::fail("RS", fiber_witness(u, w)).with_trace("unit along an acyclic cofibration");
        }
    }
    Verdict::pass("RS")
}

/// Derived unit and counit test for a Quillen equivalence, with replacements
/// chosen from the fiber factorizations. `None` when the fibers lack the
/// initial or terminal object that replacements need.
fn derived_equivalence_failure(setup: &QuillenSetup, u: Mor, adj: &AdjunctionData) -> Option<Option<Witness>> {
    let b = setup.bifib.base();
    let (a, bb) = (b.src(u), b.tgt(u));
    let (ca, cb) = (&setup.bifib.fiber(a).cat, &setup.bifib.fiber(bb).cat);
    let (ma, mb) = (&setup.fiber_models[a], &setup.fiber_models[bb]);
    let init_a = ca.initial_object()?;
    let term_b = cb.terminal_object()?;
    let (push, pull) = (adj.left(), adj.right());
    // Unit side: X cofibrant, u_!X → R(u_!X) an acyclic cofibration to a fibrant object.
    for x in ca.objects().filter(|&x| ma.cof.contains(ca.hom(init_a, x)[0])) {
        let ux = push.obj(x);
        let (r, _) = factor_through(cb, cb.hom(ux, term_b)[0], &mb.acyclic_cof(), &mb.fib).expect("fibrant replacement");
        let composite = ca.comp(pull.mor(r), adj.unit(x));
        if !ma.weak.contains(composite) {
            return Some(Some(Witness::Missing { morphism: composite, class: format!("weak (derived unit over {u})") }));
        }
    }
    // Counit side: Y fibrant, Q(u*Y) → u*Y an acyclic fibration from a cofibrant object.
    let init_for_q = ca.initial_object()?;
    for y in cb.objects().filter(|&y| mb.fib.contains(cb.hom(y, term_b)[0])) {
        let uy = pull.obj(y);
        let (_, q) = factor_through(ca, ca.hom(init_for_q, uy)[0], &ma.cof, &ma.acyclic_fib()).expect("cofibrant replacement");
        let composite = cb.comp(adj.counit(y), push.mor(q));
        if !mb.weak.contains(composite) {
            return Some(Some(Witness::Missing { morphism: composite, class: format!("weak (derived counit over {u})") }));
        }
    }
    Some(None)
}

/// Conditions of the later criterion: `(u_!, u*)` is a Quillen equivalence
/// for base weak equivalences, push along acyclic cofibrations and pull along
/// acyclic fibrations preserve weak equivalences.
pub fn check_hp_conditions(setup: &QuillenSetup) -> Verdict {
    let b = setup.bifib.base();
    for u in setup.base_model.weak.iter() {
        let adj = adjunction_for(setup, u);
        let (ma, mb) = (&setup.fiber_models[b.src(u)], &setup.fiber_models[b.tgt(u)]);
        if let Some(w) = quillen_adjunction_failure(&adj, ma, mb) {
            return Verdict::fail("HP", fiber_witness(u, w)).with_trace("not a Quillen adjunction");
        }
        let Some(derived) = derived_equivalence_failure(setup, u, &adj) else {
            return Verdict::not_applicable("HP", "fibers lack the objects needed for replacements");
        };
        let hom_set = quillen_equivalence_failure(&adj, ma, mb).expect("extremal objects exist");
        assert_eq!(derived.is_none(), hom_set.is_none(), "two Quillen-equivalence criteria disagree over {u}");
        if let Some(w) = derived {
            return Verdict::fail("HP", fiber_witness(u, w)).with_trace("not a Quillen equivalence");
        }
    }
    for u in setup.base_model.acyclic_cof().iter() {
        let (wa, wb) = (&setup.fiber_models[b.src(u)].weak, &setup.fiber_models[b.tgt(u)].weak);
        if let Some(w) = preservation_failure(&setup.bifib.push_functor(u), wa, wb, "weak") {
            return Verdict::fail("HP", fiber_witness(u, w)).with_trace("push along an acyclic cofibration");
        }
    }
    for v in setup.base_model.acyclic_fib().iter() {
        let (wa, wb) = (&setup.fiber_models[b.src(v)].weak, &setup.fiber_models[b.tgt(v)].weak);
        if let Some(w) = preservation_failure(&setup.bifib.pull_functor(v), wb, wa, "weak") {
            return Verdict::fail("HP", fiber_witness(v, w)).with_trace("pull along an acyclic fibration");
        }
    }
    Verdict::pass("HP")
}
