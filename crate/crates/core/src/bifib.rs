//! Cartesian and cocartesian morphisms, cleavages, fibers and the push/pull
//! functors of a Grothendieck bifibration.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{opposite, CategoryBuilder, CommSquare, FinCat, Functor, Mor, NatTransformation, Obj};
use crate::model::{AdjunctionData, AdjunctionError};
use crate::verdict::{Construction, Refusal, Verdict, Witness};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BifibError {
    #[error("base factorization does not compose to p(f)")]
    FactorizationMismatch,
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("square does not commute in the base")]
    SquareNotCommuting,
    #[error(transparent)]
    Adjunction(#[from] AdjunctionError),
}

/// Which cartesian lift the cleavage keeps when several exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    #[default]
    Smallest,
    Largest,
}

/// Unique `h` with `p(h) = v` and `f ∘ h = g`, counted over every candidate.
fn cartesian_lift_count(p: &Functor, f: Mor, g: Mor, v: Mor) -> usize {
    let e = p.dom();
    e.hom(e.src(g), e.src(f))
        .iter()
        .filter(|&&h| p.mor(h) == v && e.comp(f, h) == g)
        .count()
}

fn cocartesian_lift_count(p: &Functor, f: Mor, g: Mor, v: Mor) -> usize {
    let e = p.dom();
    e.hom(e.tgt(f), e.tgt(g))
        .iter()
        .filter(|&&h| p.mor(h) == v && e.comp(h, f) == g)
        .count()
}

/// `f: X → Y` over `u` is cartesian: every `g: Z → Y` over `u ∘ v` factors
/// as `f ∘ h` for exactly one `h` over `v`.
pub fn is_cartesian(p: &Functor, f: Mor) -> bool {
    let (e, b) = (p.dom(), p.cod());
    let (x, y) = (e.src(f), e.tgt(f));
    let u = p.mor(f);
    e.incoming(y).iter().all(|&g| {
        let z = e.src(g);
        b.hom(p.obj(z), p.obj(x))
            .iter()
            .filter(|&&v| b.comp(u, v) == p.mor(g))
            .all(|&v| cartesian_lift_count(p, f, g, v) == 1)
    })
}

/// Dual of [`is_cartesian`].
pub fn is_cocartesian(p: &Functor, f: Mor) -> bool {
    let (e, b) = (p.dom(), p.cod());
    let (x, y) = (e.src(f), e.tgt(f));
    let u = p.mor(f);
    e.out_of(x).iter().all(|&g| {
        let z = e.tgt(g);
        b.hom(p.obj(y), p.obj(z))
            .iter()
            .filter(|&&v| b.comp(v, u) == p.mor(g))
            .all(|&v| cocartesian_lift_count(p, f, g, v) == 1)
    })
}

/// The fiber over a base object with its embedding into the total category.
#[derive(Clone, Debug)]
pub struct FiberView {
    pub base: Obj,
    pub cat: Arc<FinCat>,
    pub embedding: Functor,
}

/// A functor with a chosen cleavage of cartesian and cocartesian lifts.
#[derive(Clone, Debug)]
pub struct Bifibration {
    p: Functor,
    tie_break: TieBreak,
    cart: Vec<Mor>,
    cocart: Vec<Mor>,
    push_fact: Vec<Mor>,
    pull_fact: Vec<Mor>,
    fibers: Vec<FiberView>,
    local_obj: Vec<Obj>,
    local_mor: Vec<Mor>,
}

/// Choose lifts for every base morphism and every object over its endpoint,
/// or name the first `(u, object)` without a lift.
pub fn build_cleavage(p: &Functor, tie_break: TieBreak) -> Construction<Bifibration> {
    let (e, b) = (p.dom().clone(), p.cod().clone());
    let n_obj = e.num_objects();
    let cart_ok: Vec<bool> = e.morphisms().map(|f| is_cartesian(p, f)).collect();
    let cocart_ok: Vec<bool> = e.morphisms().map(|f| is_cocartesian(p, f)).collect();
    let pick = |mut it: Box<dyn Iterator<Item = Mor> + '_>| match tie_break {
        TieBreak::Smallest => it.next(),
        TieBreak::Largest => it.last(),
    };
    let mut cart = vec![NONE; b.num_morphisms() * n_obj];
    for u in b.morphisms() {
        for y in e.objects().filter(|&y| p.obj(y) == b.tgt(u)) {
            let cands = e.incoming(y).iter().copied().filter(|&f| p.mor(f) == u && cart_ok[f]);
            let mut sorted: Vec<Mor> = cands.collect();
            sorted.sort_unstable();
            match pick(Box::new(sorted.into_iter())) {
                Some(f) => cart[u * n_obj + y] = f,
                None => return refuse(u, y, true),
            }
        }
    }
    let mut cocart = vec![NONE; b.num_morphisms() * n_obj];
    for u in b.morphisms() {
        for x in e.objects().filter(|&x| p.obj(x) == b.src(u)) {
            let mut sorted: Vec<Mor> =
                e.out_of(x).iter().copied().filter(|&f| p.mor(f) == u && cocart_ok[f]).collect();
            sorted.sort_unstable();
            match pick(Box::new(sorted.into_iter())) {
                Some(f) => cocart[u * n_obj + x] = f,
                None => return refuse(u, x, false),
            }
        }
    }

    let mut local_obj = vec![NONE; n_obj];
    let mut local_mor = vec![NONE; e.num_morphisms()];
    let mut fibers = Vec::with_capacity(b.num_objects());
    for a in b.objects() {
        let objs: Vec<Obj> = e.objects().filter(|&x| p.obj(x) == a).collect();
        let mors: Vec<Mor> = e.morphisms().filter(|&f| p.mor(f) == b.identity(a)).collect();
        let mut fb = CategoryBuilder::new().trusted();
        for (i, &x) in objs.iter().enumerate() {
            fb.add_object(e.obj_label(x));
            local_obj[x] = i;
        }
        for (i, &f) in mors.iter().enumerate() {
            fb.add_morphism(e.mor_label(f), local_obj[e.src(f)], local_obj[e.tgt(f)]);
            local_mor[f] = i;
        }
        for &x in &objs {
            fb.mark_identity(local_obj[x], local_mor[e.identity(x)]).expect("identity is vertical");
        }
        for &f in &mors {
            for &g in e.out_of(e.tgt(f)) {
                if local_mor[g] != NONE {
                    fb.set_composite(local_mor[g], local_mor[f], local_mor[e.comp(g, f)])
                        .expect("vertical morphisms compose");
                }
            }
        }
        let cat = Arc::new(fb.build().expect("fiber is a category"));
        let embedding = Functor::new_unchecked(cat.clone(), e.clone(), objs, mors);
        fibers.push(FiberView { base: a, cat, embedding });
    }

    let mut bf = Bifibration {
        p: p.clone(),
        tie_break,
        cart,
        cocart,
        push_fact: Vec::new(),
        pull_fact: Vec::new(),
        fibers,
        local_obj,
        local_mor,
    };
    bf.push_fact = e
        .morphisms()
        .map(|f| {
            let lam = bf.cocartesian_lift(p.mor(f), e.src(f));
            bf.factor_through_cocartesian(lam, f, b.identity(b.tgt(p.mor(f))))
                .expect("cocartesian lift factors every morphism over the same base arrow")
        })
        .collect();
    bf.pull_fact = e
        .morphisms()
        .map(|f| {
            let rho = bf.cartesian_lift(p.mor(f), e.tgt(f));
            bf.factor_through_cartesian(rho, f, b.identity(b.src(p.mor(f))))
                .expect("cartesian lift factors every morphism over the same base arrow")
        })
        .collect();
    Construction::Built(bf)
}

fn refuse(u: Mor, object: Obj, cartesian: bool) -> Construction<Bifibration> {
    let kind = if cartesian { "cartesian" } else { "cocartesian" };
    Construction::Refused(Refusal {
        reason: format!("no {kind} lift of base morphism {u} at object {object}"),
        verdict: Verdict::fail("cleavage", Witness::NoLiftOf { base: u, object, cartesian }),
    })
}

impl Bifibration {
    pub fn functor(&self) -> &Functor {
        &self.p
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.p.dom()
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.p.cod()
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    /// The chosen cartesian morphism `ρ: u*Y → Y`.
    pub fn cartesian_lift(&self, u: Mor, y: Obj) -> Mor {
        let m = self.cart[u * self.total().num_objects() + y];
        assert!(m != NONE, "object is not over the target of the base morphism");
        m
    }

    /// The chosen cocartesian morphism `λ: X → u_!X`.
    pub fn cocartesian_lift(&self, u: Mor, x: Obj) -> Mor {
        let m = self.cocart[u * self.total().num_objects() + x];
        assert!(m != NONE, "object is not over the source of the base morphism");
        m
    }

    pub fn fiber(&self, a: Obj) -> &FiberView {
        &self.fibers[a]
    }

    pub fn fibers(&self) -> &[FiberView] {
        &self.fibers
    }

    /// Index of `x` inside the fiber over `p(x)`.
    pub fn local_obj(&self, x: Obj) -> Obj {
        self.local_obj[x]
    }

    /// Index of a vertical morphism inside its fiber.
    pub fn local_mor(&self, f: Mor) -> Option<Mor> {
        (self.local_mor[f] != NONE).then_some(self.local_mor[f])
    }

    /// Total-category object for a fiber-local one.
    pub fn global_obj(&self, a: Obj, x: Obj) -> Obj {
        self.fibers[a].embedding.obj(x)
    }

    /// Total-category morphism for a fiber-local one.
    pub fn global_mor(&self, a: Obj, f: Mor) -> Mor {
        self.fibers[a].embedding.mor(f)
    }

    pub fn is_vertical(&self, f: Mor) -> bool {
        self.local_mor[f] != NONE
    }

    /// Unique `h: tgt λ → tgt g` over `v` with `h ∘ λ = g`.
    pub fn factor_through_cocartesian(&self, lam: Mor, g: Mor, v: Mor) -> Option<Mor> {
        let e = self.total();
        let mut it = e
            .hom(e.tgt(lam), e.tgt(g))
            .iter()
            .copied()
            .filter(|&h| self.p.mor(h) == v && e.comp(h, lam) == g);
        let h = it.next();
        debug_assert!(it.next().is_none(), "factorization through a cocartesian morphism is unique");
        h
    }

    /// Unique `h: src g → src ρ` over `v` with `ρ ∘ h = g`.
    pub fn factor_through_cartesian(&self, rho: Mor, g: Mor, v: Mor) -> Option<Mor> {
        let e = self.total();
        let mut it = e
            .hom(e.src(g), e.src(rho))
            .iter()
            .copied()
            .filter(|&h| self.p.mor(h) == v && e.comp(rho, h) == g);
        let h = it.next();
        debug_assert!(it.next().is_none(), "factorization through a cartesian morphism is unique");
        h
    }

    /// The vertical `u_!X → Y` with `pushfact(f) ∘ λ = f`.
    pub fn push_fact(&self, f: Mor) -> Mor {
        self.push_fact[f]
    }

    /// The vertical `X → u*Y` with `ρ ∘ pullfact(f) = f`.
    pub fn pull_fact(&self, f: Mor) -> Mor {
        self.pull_fact[f]
    }

    /// `(pushfact f, pullfact f)` as total-category morphisms.
    pub fn vertical_factors(&self, f: Mor) -> (Mor, Mor) {
        (self.push_fact[f], self.pull_fact[f])
    }

    /// `u_!: E_A → E_B` on fiber-local indices.
    pub fn push_functor(&self, u: Mor) -> Functor {
        let (e, b) = (self.total(), self.base());
        let (a, bb) = (b.src(u), b.tgt(u));
        let (fa, fb) = (&self.fibers[a], &self.fibers[bb]);
        let obj_map = fa
            .cat
            .objects()
            .map(|x| self.local_obj[e.tgt(self.cocartesian_lift(u, fa.embedding.obj(x)))])
            .collect();
        let mor_map = fa
            .cat
            .morphisms()
            .map(|k| {
                let k = fa.embedding.mor(k);
                let lam = self.cocartesian_lift(u, e.src(k));
                let lam2 = self.cocartesian_lift(u, e.tgt(k));
                let m = self
                    .factor_through_cocartesian(lam, e.comp(lam2, k), b.identity(bb))
                    .expect("push of a vertical morphism");
                self.local_mor[m]
            })
            .collect();
        Functor::new_unchecked(fa.cat.clone(), fb.cat.clone(), obj_map, mor_map)
    }

    /// `u*: E_B → E_A` on fiber-local indices.
    pub fn pull_functor(&self, u: Mor) -> Functor {
        let (e, b) = (self.total(), self.base());
        let (a, bb) = (b.src(u), b.tgt(u));
        let (fa, fb) = (&self.fibers[a], &self.fibers[bb]);
        let obj_map = fb
            .cat
            .objects()
            .map(|y| self.local_obj[e.src(self.cartesian_lift(u, fb.embedding.obj(y)))])
            .collect();
        let mor_map = fb
            .cat
            .morphisms()
            .map(|l| {
                let l = fb.embedding.mor(l);
                let rho = self.cartesian_lift(u, e.tgt(l));
                let rho2 = self.cartesian_lift(u, e.src(l));
                let m = self
                    .factor_through_cartesian(rho, e.comp(l, rho2), b.identity(a))
                    .expect("pull of a vertical morphism");
                self.local_mor[m]
            })
            .collect();
        Functor::new_unchecked(fb.cat.clone(), fa.cat.clone(), obj_map, mor_map)
    }

    /// The adjunction `u_! ⊣ u*`, transposing `k: u_!X → Y` to the unique
    /// vertical `X → u*Y` that recovers `k ∘ λ` after `ρ`.
    pub fn adjunction(&self, u: Mor) -> Result<AdjunctionData, BifibError> {
        let (e, b) = (self.total().clone(), self.base().clone());
        let (a, bb) = (b.src(u), b.tgt(u));
        let (fa, fb) = (self.fibers[a].clone(), self.fibers[bb].clone());
        let adj = AdjunctionData::new(self.push_functor(u), self.pull_functor(u), |x, y, k| {
            let (gx, gy) = (fa.embedding.obj(x), fb.embedding.obj(y));
            let lam = self.cocartesian_lift(u, gx);
            let rho = self.cartesian_lift(u, gy);
            let g = e.comp(fb.embedding.mor(k), lam);
            self.factor_through_cartesian(rho, g, b.identity(a))
                .map(|m| self.local_mor[m])
                .unwrap_or(NONE)
        })?;
        Ok(adj)
    }

    /// Unique vertical `m: j_!X → q*Y` with `ρ ∘ m ∘ λ = f`, for `p(f) = q ∘ j`.
    /// Both construction routes are computed and must agree.
    pub fn middle_factor(&self, f: Mor, j: Mor, q: Mor) -> Result<Mor, BifibError> {
        let (e, b) = (self.total(), self.base());
        if b.compose(q, j) != Some(self.p.mor(f)) {
            return Err(BifibError::FactorizationMismatch);
        }
        let c = b.tgt(j);
        let lam = self.cocartesian_lift(j, e.src(f));
        let rho = self.cartesian_lift(q, e.tgt(f));
        let k = self.factor_through_cocartesian(lam, f, q).expect("f factors through λ over q");
        let via_pull = self.factor_through_cartesian(rho, k, b.identity(c)).expect("k factors through ρ");
        let l = self.factor_through_cartesian(rho, f, j).expect("f factors through ρ over j");
        let via_push = self.factor_through_cocartesian(lam, l, b.identity(c)).expect("l factors through λ");
        assert_eq!(via_pull, via_push, "the two middle-factor routes disagree");
        Ok(via_pull)
    }

    /// Vertical iso `φ: (vu)_!X → v_!u_!X` with `φ ∘ λ_vu = λ_v ∘ λ_u`.
    pub fn push_pseudo_iso(&self, u: Mor, v: Mor, x: Obj) -> Result<Mor, BifibError> {
        let (e, b) = (self.total(), self.base());
        let vu = b.compose(v, u).ok_or(BifibError::NotComposable)?;
        let lu = self.cocartesian_lift(u, x);
        let lv = self.cocartesian_lift(v, e.tgt(lu));
        let lvu = self.cocartesian_lift(vu, x);
        let phi = self
            .factor_through_cocartesian(lvu, e.comp(lv, lu), b.identity(b.tgt(v)))
            .expect("composite of cocartesian morphisms factors");
        assert!(e.is_iso(phi), "pseudo-functoriality comparison is an isomorphism");
        Ok(phi)
    }

    /// Vertical iso `φ: (vu)*Y → u*v*Y` with `ρ_v ∘ ρ_u ∘ φ = ρ_vu`.
    pub fn pull_pseudo_iso(&self, u: Mor, v: Mor, y: Obj) -> Result<Mor, BifibError> {
        let (e, b) = (self.total(), self.base());
        let vu = b.compose(v, u).ok_or(BifibError::NotComposable)?;
        let rv = self.cartesian_lift(v, y);
        let ru = self.cartesian_lift(u, e.src(rv));
        let rvu = self.cartesian_lift(vu, y);
        let phi = self
            .factor_through_cartesian(e.comp(rv, ru), rvu, b.identity(b.src(u)))
            .expect("composite of cartesian morphisms factors");
        assert!(e.is_iso(phi), "pseudo-functoriality comparison is an isomorphism");
        Ok(phi)
    }

    /// Mate component at `z` over `square.right`'s source, a total-category
    /// morphism `u'_! v* z → v'* u_! z` over the identity of `C'`.
    pub fn mate_component(&self, square: &CommSquare, z: Obj) -> Mor {
        let (e, b) = (self.total(), self.base());
        let CommSquare { top: v, left: u2, right: u, bottom: v2 } = *square;
        let rho_v = self.cartesian_lift(v, z);
        let lam_u = self.cocartesian_lift(u, z);
        let g = e.comp(lam_u, rho_v);
        let rho_v2 = self.cartesian_lift(v2, e.tgt(lam_u));
        let k = self.factor_through_cartesian(rho_v2, g, u2).expect("factor through ρ_v'");
        let lam_u2 = self.cocartesian_lift(u2, e.src(rho_v));
        self.factor_through_cocartesian(lam_u2, k, b.identity(b.tgt(u2)))
            .expect("factor through λ_u'")
    }

    /// The mate `u'_! v* ⇒ v'* u_!` of a commuting base square, as a natural
    /// transformation between functors `E_C → E_C'`.
    pub fn mate(&self, square: &CommSquare) -> Result<NatTransformation, BifibError> {
        let b = self.base();
        if !square.commutes(b) {
            return Err(BifibError::SquareNotCommuting);
        }
        let c = b.tgt(square.top);
        let src = self.push_functor(square.left).after(&self.pull_functor(square.top));
        let tgt = self.pull_functor(square.bottom).after(&self.push_functor(square.right));
        let comps = self.fibers[c]
            .cat
            .objects()
            .map(|z| self.local_mor[self.mate_component(square, self.global_obj(c, z))])
            .collect();
        Ok(NatTransformation::new(src, tgt, comps).expect("mates are natural"))
    }

    /// The opposite functor with the cleavage rebuilt under the same tie-break.
    pub fn opposite(&self) -> Bifibration {
        let e_op = Arc::new(opposite(self.total()));
        let b_op = Arc::new(opposite(self.base()));
        let p_op = self.p.opposite(&e_op, &b_op);
        match build_cleavage(&p_op, self.tie_break) {
            Construction::Built(bf) => bf,
            Construction::Refused(r) => panic!("opposite of a bifibration lost a lift: {r:?}"),
        }
    }

    /// The same functor with the cleavage rebuilt under another tie-break.
    pub fn with_tie_break(&self, tie_break: TieBreak) -> Bifibration {
        match build_cleavage(&self.p, tie_break) {
            Construction::Built(bf) => bf,
            Construction::Refused(r) => panic!("lifts exist independently of the tie-break: {r:?}"),
        }
    }
}
