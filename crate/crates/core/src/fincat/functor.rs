use std::sync::Arc;

use super::{FinCat, Mor, Obj, ValidationError};

/// A functor between finite categories, stored as its object and morphism maps.
#[derive(Clone, Debug)]
pub struct Functor {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
}

/// Check the functor laws exhaustively and build the functor.
pub fn validate_functor(
    dom: &Arc<FinCat>,
    cod: &Arc<FinCat>,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
) -> Result<Functor, ValidationError> {
    let f = Functor { dom: dom.clone(), cod: cod.clone(), obj_map, mor_map };
    f.check()?;
    Ok(f)
}

impl Functor {
    /// Build without validation, for maps that are functorial by construction.
    pub(crate) fn new_unchecked(dom: Arc<FinCat>, cod: Arc<FinCat>, obj_map: Vec<Obj>, mor_map: Vec<Mor>) -> Self {
        let f = Functor { dom, cod, obj_map, mor_map };
        debug_assert_eq!(f.check(), Ok(()));
        f
    }

    pub fn identity(cat: &Arc<FinCat>) -> Self {
        Functor {
            dom: cat.clone(),
            cod: cat.clone(),
            obj_map: cat.objects().collect(),
            mor_map: cat.morphisms().collect(),
        }
    }

    fn check(&self) -> Result<(), ValidationError> {
        let (d, c) = (&*self.dom, &*self.cod);
        if self.obj_map.len() != d.num_objects() {
            return Err(ValidationError::MapNotTotal { name: "objects".into() });
        }
        if self.mor_map.len() != d.num_morphisms() {
            return Err(ValidationError::MapNotTotal { name: "morphisms".into() });
        }
        if let Some(&o) = self.obj_map.iter().find(|&&o| o >= c.num_objects()) {
            return Err(ValidationError::UnknownName { name: o.to_string() });
        }
        if let Some(&m) = self.mor_map.iter().find(|&&m| m >= c.num_morphisms()) {
            return Err(ValidationError::UnknownName { name: m.to_string() });
        }
        for m in d.morphisms() {
            let fm = self.mor_map[m];
            if c.src(fm) != self.obj_map[d.src(m)] || c.tgt(fm) != self.obj_map[d.tgt(m)] {
                return Err(ValidationError::EndpointMismatch { morphism: d.mor_label(m).into() });
            }
        }
        for o in d.objects() {
            if self.mor_map[d.identity(o)] != c.identity(self.obj_map[o]) {
                return Err(ValidationError::IdentityNotPreserved { object: d.obj_label(o).into() });
            }
        }
        for &(f, g, gf) in d.composable_pairs() {
            if c.compose(self.mor_map[g], self.mor_map[f]) != Some(self.mor_map[gf]) {
                return Err(ValidationError::CompositionNotPreserved {
                    g: d.mor_label(g).into(),
                    f: d.mor_label(f).into(),
                });
            }
        }
        Ok(())
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    pub fn obj(&self, o: Obj) -> Obj {
        self.obj_map[o]
    }

    pub fn mor(&self, m: Mor) -> Mor {
        self.mor_map[m]
    }

    pub fn obj_map(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[Mor] {
        &self.mor_map
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Functor {
        assert!(first.cod.same_tables(&self.dom), "functors are not composable");
        Functor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            obj_map: first.obj_map.iter().map(|&o| self.obj_map[o]).collect(),
            mor_map: first.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        }
    }

    /// The same maps read as a functor between the given opposite categories.
    pub fn opposite(&self, dom_op: &Arc<FinCat>, cod_op: &Arc<FinCat>) -> Functor {
        Functor::new_unchecked(dom_op.clone(), cod_op.clone(), self.obj_map.clone(), self.mor_map.clone())
    }

    /// True when both maps agree and the endpoint tables match.
    pub fn same_maps(&self, other: &Functor) -> bool {
        self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
            && self.dom.same_tables(&other.dom)
            && self.cod.same_tables(&other.cod)
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        let bij = |map: &[usize], n: usize| {
            let mut seen = vec![false; n];
            map.len() == n && map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        };
        bij(&self.obj_map, self.cod.num_objects()) && bij(&self.mor_map, self.cod.num_morphisms())
    }
}

/// A natural transformation between parallel functors.
#[derive(Clone, Debug)]
pub struct NatTransformation {
    src: Functor,
    tgt: Functor,
    components: Vec<Mor>,
}

impl NatTransformation {
    /// Check endpoints and naturality at every morphism.
    pub fn new(src: Functor, tgt: Functor, components: Vec<Mor>) -> Result<Self, ValidationError> {
        let t = NatTransformation { src, tgt, components };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<(), ValidationError> {
        let d = &**self.src.dom();
        let c = &**self.src.cod();
        assert!(d.same_tables(self.tgt.dom()) && c.same_tables(self.tgt.cod()), "functors are not parallel");
        if self.components.len() != d.num_objects() {
            return Err(ValidationError::MapNotTotal { name: "components".into() });
        }
        for o in d.objects() {
            let k = self.components[o];
            if k >= c.num_morphisms() || c.src(k) != self.src.obj(o) || c.tgt(k) != self.tgt.obj(o) {
                return Err(ValidationError::ComponentMismatch { object: d.obj_label(o).into() });
            }
        }
        for m in d.morphisms() {
            let lhs = c.comp(self.tgt.mor(m), self.components[d.src(m)]);
            let rhs = c.comp(self.components[d.tgt(m)], self.src.mor(m));
            if lhs != rhs {
                return Err(ValidationError::NaturalityViolated { morphism: d.mor_label(m).into() });
            }
        }
        Ok(())
    }

    pub fn src(&self) -> &Functor {
        &self.src
    }

    pub fn tgt(&self) -> &Functor {
        &self.tgt
    }

    pub fn component(&self, o: Obj) -> Mor {
        self.components[o]
    }

    pub fn components(&self) -> &[Mor] {
        &self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chains() -> (Arc<FinCat>, Arc<FinCat>) {
        (Arc::new(FinCat::chain(2)), Arc::new(FinCat::chain(3)))
    }

    #[test]
    fn valid_inclusion() {
        let (c2, c3) = chains();
        // chain(2): id0=0, 0<1=1, id1=2. chain(3): id0=0, 0<1=1, 0<2=2, id1=3, 1<2=4, id2=5.
        let f = validate_functor(&c2, &c3, vec![0, 2], vec![0, 2, 5]).unwrap();
        assert_eq!(f.obj(1), 2);
    }

    #[test]
    fn functor_errors() {
        let (c2, c3) = chains();
        assert!(matches!(
            validate_functor(&c2, &c3, vec![0, 2], vec![0, 1, 5]),
            Err(ValidationError::EndpointMismatch { .. })
        ));
        assert!(matches!(
            validate_functor(&c2, &c2, vec![0, 0], vec![0, 0, 1]),
            Err(ValidationError::EndpointMismatch { .. })
        ));
        let one = Arc::new(FinCat::chain(1));
        let loops = {
            let mut b = super::super::CategoryBuilder::new();
            let o = b.add_object_with_identity("x");
            let e = b.add_morphism("e", o, o);
            b.set_composite(e, e, e).unwrap();
            Arc::new(b.build().unwrap())
        };
        assert!(matches!(
            validate_functor(&one, &loops, vec![0], vec![1]),
            Err(ValidationError::IdentityNotPreserved { .. })
        ));
    }

    #[test]
    fn composition_and_identity() {
        let (c2, c3) = chains();
        let f = validate_functor(&c2, &c3, vec![0, 2], vec![0, 2, 5]).unwrap();
        let id = Functor::identity(&c3);
        assert!(id.after(&f).same_maps(&f));
    }

    #[test]
    fn naturality_is_checked() {
        let (c2, c3) = chains();
        let f = validate_functor(&c2, &c3, vec![0, 1], vec![0, 1, 3]).unwrap();
        let g = validate_functor(&c2, &c3, vec![1, 2], vec![3, 4, 5]).unwrap();
        let t = NatTransformation::new(f.clone(), g.clone(), vec![1, 4]).unwrap();
        assert_eq!(t.component(1), 4);
        assert!(NatTransformation::new(f, g, vec![1, 1]).is_err());
    }
}
