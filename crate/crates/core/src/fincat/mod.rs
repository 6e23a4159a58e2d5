//! Finite categories with dense object and morphism indices.
//!
//! Composition is a lookup: every morphism `f` owns a slice of the table with
//! one slot per morphism leaving `tgt f`, so storage is linear in the number
//! of composable pairs.

mod construct;
mod functor;
mod query;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::class::MorClass;
use crate::lifting::LiftTable;

pub use construct::{
    category_pullback, full_subcategory, functor_category, opposite, precomposition,
    product_category, FunctorCategory, Product, Pullback, TransData, DEFAULT_SIZE_GUARD,
};
pub use functor::{validate_functor, Functor, NatTransformation};
pub use query::{commutative_squares, factorizations, CommSquare, SquareFilter};

pub type Obj = usize;
pub type Mor = usize;

#[derive(Debug, Clone, Error, PartialEq, Eq, Serialize)]
pub enum ValidationError {
    #[error("morphism `{morphism}` refers to unknown object `{endpoint}`")]
    DanglingEndpoint { morphism: String, endpoint: String },
    #[error("unknown name `{name}`")]
    UnknownName { name: String },
    #[error("duplicate name `{name}`")]
    DuplicateName { name: String },
    #[error("object `{object}` has no identity")]
    MissingIdentity { object: String },
    #[error("object `{object}` has more than one identity")]
    DuplicateIdentity { object: String },
    #[error("identity `{morphism}` is not an endomorphism of its object")]
    IdentityNotEndo { morphism: String },
    #[error("no composite assigned for `{g}` after `{f}`")]
    MissingComposite { g: String, f: String },
    #[error("composite `{g}` after `{f}` assigned twice with different results")]
    ConflictingComposite { g: String, f: String },
    #[error("composite `{g}` after `{f}` = `{h}` has mismatched endpoints")]
    CompositeEndpointMismatch { g: String, f: String, h: String },
    #[error("identity law violated at `{morphism}`")]
    IdentityLawViolated { morphism: String },
    #[error("associativity violated for `{h}`, `{g}`, `{f}`")]
    AssociativityViolated { h: String, g: String, f: String },
    #[error("functor map does not cover `{name}`")]
    MapNotTotal { name: String },
    #[error("image of `{morphism}` has endpoints that disagree with the object map")]
    EndpointMismatch { morphism: String },
    #[error("identity of `{object}` is not sent to an identity")]
    IdentityNotPreserved { object: String },
    #[error("composite `{g}` after `{f}` is not preserved")]
    CompositionNotPreserved { g: String, f: String },
    #[error("component at `{object}` has wrong endpoints")]
    ComponentMismatch { object: String },
    #[error("naturality fails at `{morphism}`")]
    NaturalityViolated { morphism: String },
    #[error("{what} would have {size} entries, above the guard {guard}")]
    SizeGuardExceeded { what: String, size: usize, guard: usize },
}

/// Name-based description of a category, as written in workspace files.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    /// Every morphism in index order; identities are listed here too.
    pub morphisms: Vec<RawMorphism>,
    /// `(object, identity morphism)` assignments.
    pub identities: Vec<(String, String)>,
    /// `(g, f, h)` meaning `g ∘ f = h`.
    pub compositions: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMorphism {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

/// Resolve names and check every category axiom exhaustively.
///
/// Composites involving an identity may be omitted; they are filled in.
pub fn validate_category(raw: &RawCategory) -> Result<FinCat, ValidationError> {
    let mut b = CategoryBuilder::new();
    let mut objs = HashMap::new();
    for o in &raw.objects {
        if objs.insert(o.clone(), b.add_object(o)).is_some() {
            return Err(ValidationError::DuplicateName { name: o.clone() });
        }
    }
    let mut mors = HashMap::new();
    for m in &raw.morphisms {
        let end = |e: &String| {
            objs.get(e).copied().ok_or_else(|| ValidationError::DanglingEndpoint {
                morphism: m.name.clone(),
                endpoint: e.clone(),
            })
        };
        let (s, t) = (end(&m.src)?, end(&m.tgt)?);
        if mors.insert(m.name.clone(), b.add_morphism(&m.name, s, t)).is_some() {
            return Err(ValidationError::DuplicateName { name: m.name.clone() });
        }
    }
    let mor = |n: &String| {
        mors.get(n).copied().ok_or_else(|| ValidationError::UnknownName { name: n.clone() })
    };
    for (o, m) in &raw.identities {
        let o = objs.get(o).copied().ok_or_else(|| ValidationError::UnknownName { name: o.clone() })?;
        b.mark_identity(o, mor(m)?)?;
    }
    for (g, f, h) in &raw.compositions {
        b.set_composite(mor(g)?, mor(f)?, mor(h)?)?;
    }
    b.build()
}

/// Index-based incremental construction of a [`FinCat`].
#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    obj_labels: Vec<String>,
    mor_labels: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    ident: Vec<Option<Mor>>,
    comps: HashMap<(Mor, Mor), Mor>,
    check_associativity: bool,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        CategoryBuilder { check_associativity: true, ..Default::default() }
    }

    /// Skip the cubic associativity scan. Only for tables that are composed
    /// componentwise from categories that were already validated.
    pub(crate) fn trusted(mut self) -> Self {
        self.check_associativity = false;
        self
    }

    pub fn add_object(&mut self, label: impl Into<String>) -> Obj {
        self.obj_labels.push(label.into());
        self.ident.push(None);
        self.obj_labels.len() - 1
    }

    pub fn add_morphism(&mut self, label: impl Into<String>, src: Obj, tgt: Obj) -> Mor {
        self.mor_labels.push(label.into());
        self.src.push(src);
        self.tgt.push(tgt);
        self.mor_labels.len() - 1
    }

    /// Add an object together with its identity, labelled `id_<label>`.
    pub fn add_object_with_identity(&mut self, label: impl Into<String>) -> Obj {
        let label = label.into();
        let o = self.add_object(label.clone());
        let m = self.add_morphism(format!("id_{label}"), o, o);
        self.ident[o] = Some(m);
        o
    }

    pub fn mark_identity(&mut self, o: Obj, m: Mor) -> Result<(), ValidationError> {
        if self.src[m] != o || self.tgt[m] != o {
            return Err(ValidationError::IdentityNotEndo { morphism: self.mor_labels[m].clone() });
        }
        if self.ident[o].is_some_and(|e| e != m) {
            return Err(ValidationError::DuplicateIdentity { object: self.obj_labels[o].clone() });
        }
        self.ident[o] = Some(m);
        Ok(())
    }

    /// Record `g ∘ f = h`.
    pub fn set_composite(&mut self, g: Mor, f: Mor, h: Mor) -> Result<(), ValidationError> {
        match self.comps.insert((g, f), h) {
            Some(prev) if prev != h => Err(ValidationError::ConflictingComposite {
                g: self.mor_labels[g].clone(),
                f: self.mor_labels[f].clone(),
            }),
            _ => Ok(()),
        }
    }

    pub fn build(mut self) -> Result<FinCat, ValidationError> {
        let n_obj = self.obj_labels.len();
        let n_mor = self.mor_labels.len();
        let ml = |m: Mor| self.mor_labels[m].clone();
        for m in 0..n_mor {
            for e in [self.src[m], self.tgt[m]] {
                if e >= n_obj {
                    return Err(ValidationError::DanglingEndpoint { morphism: ml(m), endpoint: e.to_string() });
                }
            }
        }
        let mut ident = Vec::with_capacity(n_obj);
        for o in 0..n_obj {
            match self.ident[o] {
                Some(m) => ident.push(m),
                None => return Err(ValidationError::MissingIdentity { object: self.obj_labels[o].clone() }),
            }
        }
        for (&(g, f), &h) in &self.comps {
            if self.tgt[f] != self.src[g] || self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] {
                return Err(ValidationError::CompositeEndpointMismatch { g: ml(g), f: ml(f), h: ml(h) });
            }
        }
        for m in 0..n_mor {
            for key in [(ident[self.tgt[m]], m), (m, ident[self.src[m]])] {
                match self.comps.get(&key) {
                    Some(&h) if h != m => {
                        return Err(ValidationError::IdentityLawViolated { morphism: ml(m) })
                    }
                    Some(_) => {}
                    None => {
                        self.comps.insert(key, m);
                    }
                }
            }
        }

        let mut out: Vec<Vec<Mor>> = vec![Vec::new(); n_obj];
        let mut inc: Vec<Vec<Mor>> = vec![Vec::new(); n_obj];
        for m in 0..n_mor {
            out[self.src[m]].push(m);
            inc[self.tgt[m]].push(m);
        }
        for list in &mut out {
            list.sort_by_key(|&m| (self.tgt[m], m));
        }
        for list in &mut inc {
            list.sort_by_key(|&m| (self.src[m], m));
        }
        let mut out_pos = vec![0; n_mor];
        for list in &out {
            for (i, &m) in list.iter().enumerate() {
                out_pos[m] = i;
            }
        }
        let mut comp_offset = Vec::with_capacity(n_mor);
        let mut comp = Vec::new();
        for f in 0..n_mor {
            comp_offset.push(comp.len());
            for &g in &out[self.tgt[f]] {
                match self.comps.get(&(g, f)) {
                    Some(&h) => comp.push(h),
                    None => return Err(ValidationError::MissingComposite { g: ml(g), f: ml(f) }),
                }
            }
        }
        let cat = FinCat {
            obj_labels: self.obj_labels,
            mor_labels: self.mor_labels,
            src: self.src,
            tgt: self.tgt,
            ident,
            out,
            inc,
            out_pos,
            comp_offset,
            comp,
            cache: Cache::default(),
        };
        if self.check_associativity {
            if let Some((h, g, f)) = cat.associativity_failure() {
                return Err(ValidationError::AssociativityViolated {
                    h: cat.mor_label(h).to_owned(),
                    g: cat.mor_label(g).to_owned(),
                    f: cat.mor_label(f).to_owned(),
                });
            }
        }
        Ok(cat)
    }
}

#[derive(Clone, Default)]
struct Cache {
    lift: OnceLock<LiftTable>,
    pairs: OnceLock<Vec<(Mor, Mor, Mor)>>,
}

/// A validated finite category.
#[derive(Clone)]
pub struct FinCat {
    obj_labels: Vec<String>,
    mor_labels: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    ident: Vec<Mor>,
    out: Vec<Vec<Mor>>,
    inc: Vec<Vec<Mor>>,
    out_pos: Vec<usize>,
    comp_offset: Vec<usize>,
    comp: Vec<Mor>,
    cache: Cache,
}

impl FinCat {
    pub fn empty() -> Self {
        CategoryBuilder::new().build().expect("empty category is valid")
    }

    /// The category with one object and one morphism.
    pub fn terminal() -> Self {
        let mut b = CategoryBuilder::new();
        b.add_object_with_identity("*");
        b.build().expect("terminal category is valid")
    }

    /// The poset on `labels` generated by the relation `leq` (reflexive and
    /// transitive closure is taken). Morphisms are created in lexicographic
    /// order of `(source, target)`. Fails if the closure is not antisymmetric.
    pub fn from_preorder(labels: &[String], leq: &[(usize, usize)]) -> Result<Self, ValidationError> {
        let n = labels.len();
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in leq {
            rel[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rel[i][j] && rel[j][i] {
                    return Err(ValidationError::IdentityLawViolated {
                        morphism: format!("{}<{}", labels[i], labels[j]),
                    });
                }
            }
        }
        let mut b = CategoryBuilder::new().trusted();
        for l in labels {
            b.add_object(l.clone());
        }
        let mut idx = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if rel[i][j] {
                    let label = if i == j { format!("id_{}", labels[i]) } else { format!("{}<{}", labels[i], labels[j]) };
                    let m = b.add_morphism(label, i, j);
                    idx[i][j] = Some(m);
                    if i == j {
                        b.mark_identity(i, m)?;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let Some(f) = idx[i][j] else { continue };
                for k in 0..n {
                    if let Some(g) = idx[j][k] {
                        b.set_composite(g, f, idx[i][k].expect("transitive"))?;
                    }
                }
            }
        }
        b.build()
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let leq: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_preorder(&labels, &leq).expect("chains are posets")
    }

    pub fn num_objects(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mor_labels.len()
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.num_objects()
    }

    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.num_morphisms()
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.src[m]
    }

    pub fn tgt(&self, m: Mor) -> Obj {
        self.tgt[m]
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.ident[o]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.ident[self.src[m]] == m
    }

    pub fn obj_label(&self, o: Obj) -> &str {
        &self.obj_labels[o]
    }

    pub fn mor_label(&self, m: Mor) -> &str {
        &self.mor_labels[m]
    }

    pub fn find_object(&self, label: &str) -> Option<Obj> {
        self.obj_labels.iter().position(|l| l == label)
    }

    pub fn find_morphism(&self, label: &str) -> Option<Mor> {
        self.mor_labels.iter().position(|l| l == label)
    }

    /// Morphisms out of `a`, sorted by target then index.
    pub fn out_of(&self, a: Obj) -> &[Mor] {
        &self.out[a]
    }

    /// Morphisms into `b`, sorted by source then index.
    pub fn incoming(&self, b: Obj) -> &[Mor] {
        &self.inc[b]
    }

    /// `hom(a, b)` in increasing index order.
    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        let list = &self.out[a];
        let lo = list.partition_point(|&m| self.tgt[m] < b);
        let hi = list.partition_point(|&m| self.tgt[m] <= b);
        &list[lo..hi]
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.src[g] == self.tgt[f]).then(|| self.comp[self.comp_offset[f] + self.out_pos[g]])
    }

    /// `g ∘ f` for a pair known to be composable.
    pub fn comp(&self, g: Mor, f: Mor) -> Mor {
        self.compose(g, f).unwrap_or_else(|| {
            panic!("`{}` after `{}` is not composable", self.mor_label(g), self.mor_label(f))
        })
    }

    /// `g ∘ f` if composable and equal to `h`.
    pub fn composes_to(&self, g: Mor, f: Mor, h: Mor) -> bool {
        self.compose(g, f) == Some(h)
    }

    /// Every composable pair `(f, g, g ∘ f)`.
    pub fn composable_pairs(&self) -> &[(Mor, Mor, Mor)] {
        self.cache.pairs.get_or_init(|| {
            let mut v = Vec::new();
            for f in self.morphisms() {
                for &g in &self.out[self.tgt[f]] {
                    v.push((f, g, self.comp(g, f)));
                }
            }
            v
        })
    }

    /// The lifting relation, computed on first use.
    pub fn lift_table(&self) -> &LiftTable {
        self.cache.lift.get_or_init(|| LiftTable::compute(self))
    }

    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        let (a, b) = (self.src[f], self.tgt[f]);
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.comp(g, f) == self.ident[a] && self.comp(f, g) == self.ident[b])
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    pub fn isos(&self) -> MorClass {
        MorClass::isos(self)
    }

    pub fn all(&self) -> MorClass {
        MorClass::full(self.num_morphisms())
    }

    /// True when every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.objects().all(|a| self.out[a].windows(2).all(|w| self.tgt[w[0]] != self.tgt[w[1]]))
    }

    /// Initial object with the smallest index, if any.
    pub fn initial_object(&self) -> Option<Obj> {
        self.objects().find(|&a| self.objects().all(|b| self.hom(a, b).len() == 1))
    }

    /// Terminal object with the smallest index, if any.
    pub fn terminal_object(&self) -> Option<Obj> {
        self.objects().find(|&b| self.objects().all(|a| self.hom(a, b).len() == 1))
    }

    /// Structural equality of the tables, ignoring labels.
    pub fn same_tables(&self, other: &FinCat) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.ident == other.ident && self.comp == other.comp
    }

    fn associativity_failure(&self) -> Option<(Mor, Mor, Mor)> {
        for f in self.morphisms() {
            for &g in &self.out[self.tgt[f]] {
                let gf = self.comp(g, f);
                for &h in &self.out[self.tgt[g]] {
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                        return Some((h, g, f));
                    }
                }
            }
        }
        None
    }

    /// Name-based description from which [`validate_category`] rebuilds an
    /// index-identical category.
    pub fn to_raw(&self) -> RawCategory {
        let l = |m: Mor| self.mor_labels[m].clone();
        RawCategory {
            objects: self.obj_labels.clone(),
            morphisms: self
                .morphisms()
                .map(|m| RawMorphism {
                    name: l(m),
                    src: self.obj_labels[self.src[m]].clone(),
                    tgt: self.obj_labels[self.tgt[m]].clone(),
                })
                .collect(),
            identities: self.objects().map(|o| (self.obj_labels[o].clone(), l(self.ident[o]))).collect(),
            compositions: self
                .composable_pairs()
                .iter()
                .filter(|&&(f, g, _)| !self.is_identity(f) && !self.is_identity(g))
                .map(|&(f, g, h)| (l(g), l(f), l(h)))
                .collect(),
        }
    }

    /// Copy with new labels, which must be distinct within each kind.
    pub fn relabelled(&self, obj_labels: Vec<String>, mor_labels: Vec<String>) -> Self {
        assert_eq!(obj_labels.len(), self.num_objects());
        assert_eq!(mor_labels.len(), self.num_morphisms());
        let mut c = self.clone();
        c.obj_labels = obj_labels;
        c.mor_labels = mor_labels;
        c
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.same_tables(other)
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinCat({} objects, {} morphisms)", self.num_objects(), self.num_morphisms())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(objects: &[&str], mors: &[(&str, &str, &str)], comps: &[(&str, &str, &str)]) -> RawCategory {
        let s = |x: &str| x.to_string();
        let mut r = RawCategory { objects: objects.iter().map(|o| s(o)).collect(), ..Default::default() };
        for o in objects {
            r.morphisms.push(RawMorphism { name: format!("id{o}"), src: s(o), tgt: s(o) });
            r.identities.push((s(o), format!("id{o}")));
        }
        for (n, a, b) in mors {
            r.morphisms.push(RawMorphism { name: s(n), src: s(a), tgt: s(b) });
        }
        r.compositions = comps.iter().map(|(g, f, h)| (s(g), s(f), s(h))).collect();
        r
    }

    #[test]
    fn three_chain_from_raw() {
        let r = raw(&["0", "1", "2"], &[("a", "0", "1"), ("b", "1", "2"), ("ba", "0", "2")], &[("b", "a", "ba")]);
        let c = validate_category(&r).unwrap();
        assert_eq!(c.num_morphisms(), 6);
        assert_eq!(c.comp(c.find_morphism("b").unwrap(), c.find_morphism("a").unwrap()), 5);
    }

    #[test]
    fn missing_composite_is_reported() {
        let r = raw(&["0", "1", "2"], &[("a", "0", "1"), ("b", "1", "2"), ("ba", "0", "2")], &[]);
        assert!(matches!(validate_category(&r), Err(ValidationError::MissingComposite { .. })));
    }

    #[test]
    fn dangling_endpoint_is_reported() {
        let r = raw(&["0"], &[("a", "0", "9")], &[]);
        assert!(matches!(validate_category(&r), Err(ValidationError::DanglingEndpoint { .. })));
    }

    #[test]
    fn identity_law_is_checked() {
        let r = raw(&["0", "1"], &[("a", "0", "1"), ("b", "0", "1")], &[("id1", "a", "b")]);
        assert!(matches!(validate_category(&r), Err(ValidationError::IdentityLawViolated { .. })));
    }

    #[test]
    fn associativity_is_checked() {
        // One object with e, z where e∘e = z, z absorbing except z∘e = e: not associative.
        let r = raw(
            &["0"],
            &[("e", "0", "0"), ("z", "0", "0")],
            &[("e", "e", "z"), ("e", "z", "z"), ("z", "e", "e"), ("z", "z", "z")],
        );
        assert!(matches!(validate_category(&r), Err(ValidationError::AssociativityViolated { .. })));
    }

    #[test]
    fn empty_category_is_valid() {
        let c = validate_category(&RawCategory::default()).unwrap();
        assert_eq!((c.num_objects(), c.num_morphisms()), (0, 0));
    }

    #[test]
    fn raw_round_trip_is_index_identical() {
        let c = FinCat::chain(4);
        let back = validate_category(&c.to_raw()).unwrap();
        assert!(back.same_tables(&c));
        assert_eq!(back.mor_label(3), c.mor_label(3));
    }

    #[test]
    fn chain_hom_sets() {
        let c = FinCat::chain(3);
        assert_eq!(c.hom(0, 2).len(), 1);
        assert!(c.hom(2, 0).is_empty());
        assert!(c.is_thin());
        assert_eq!(c.initial_object(), Some(0));
        assert_eq!(c.terminal_object(), Some(2));
    }
}
