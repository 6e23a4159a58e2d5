//! Bigluing of a natural transformation and the glued model structure.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{FinLattice, ReedyError};
use crate::bifib::{build_cleavage, TieBreak};
use crate::class::MorClass;
use crate::fincat::{
    category_pullback, functor_category, precomposition, validate_functor, CategoryBuilder, FinCat, Functor,
    NatTransformation, Obj, ValidationError, Mor,
};
use crate::model::ModelStructure;
use crate::quillen::{grothendieck_model, QuillenSetup};
use crate::verdict::{Construction, Verdict, Witness};

/// `α: F ⇒ G` for `F, G: M → N` between lattices.
#[derive(Clone, Debug)]
pub struct GluingData {
    pub source: FinLattice,
    pub target: FinLattice,
    pub alpha: NatTransformation,
}

impl GluingData {
    pub fn new(source: FinLattice, target: FinLattice, alpha: NatTransformation) -> Self {
        assert!(alpha.src().dom().same_tables(source.cat()), "functors start at the source lattice");
        assert!(alpha.src().cod().same_tables(target.cat()), "functors land in the target lattice");
        GluingData { source, target, alpha }
    }

    /// Build from object maps `f ≤ g`.
    pub fn from_maps(source: FinLattice, target: FinLattice, f: &[Obj], g: &[Obj]) -> Option<Self> {
        let ff = source.monotone_functor(&target, f)?;
        let gg = source.monotone_functor(&target, g)?;
        let alpha = source.pointwise_below(&target, &ff, &gg)?;
        Some(GluingData { source, target, alpha })
    }

    pub fn left(&self) -> &Functor {
        self.alpha.src()
    }

    pub fn right(&self) -> &Functor {
        self.alpha.tgt()
    }
}

/// The category whose objects are factorizations `Fm → n → Gm` of `α_m`.
#[derive(Clone, Debug)]
pub struct Bigluing {
    pub cat: Arc<FinCat>,
    /// `(m, n, f, g)` with `g ∘ f = α_m`.
    pub objects: Vec<(Obj, Obj, Mor, Mor)>,
    /// `(h, k)` making both squares commute.
    pub morphisms: Vec<(Mor, Mor)>,
    /// Projection to `M`.
    pub projection: Functor,
}

/// Build the bigluing directly, then check it against the strict pullback
/// of restriction `[Δ2, N] → [Δ1, N]` along `α: M → [Δ1, N]`.
pub fn bigluing(left: &Functor, right: &Functor, alpha: &NatTransformation, size_guard: usize) -> Result<Bigluing, ValidationError> {
    let (m_cat, n_cat) = (left.dom().clone(), left.cod().clone());
    let mut objects = Vec::new();
    for m in m_cat.objects() {
        for n in n_cat.objects() {
            for &f in n_cat.hom(left.obj(m), n) {
                for &g in n_cat.hom(n, right.obj(m)) {
                    if n_cat.comp(g, f) == alpha.component(m) {
                        objects.push((m, n, f, g));
                    }
                }
            }
        }
        if objects.len() > size_guard {
            return Err(ValidationError::SizeGuardExceeded { what: "bigluing objects".into(), size: objects.len(), guard: size_guard });
        }
    }
    let mut b = CategoryBuilder::new();
    for &(m, n, _, _) in &objects {
        b.add_object(format!("({},{})", m_cat.obj_label(m), n_cat.obj_label(n)));
    }
    let mut morphisms = Vec::new();
    let mut index = HashMap::new();
    for (x, &(m, n, f, g)) in objects.iter().enumerate() {
        for (y, &(m2, n2, f2, g2)) in objects.iter().enumerate() {
            for &h in m_cat.hom(m, m2) {
                for &k in n_cat.hom(n, n2) {
                    if n_cat.comp(k, f) == n_cat.comp(f2, left.mor(h)) && n_cat.comp(right.mor(h), g) == n_cat.comp(g2, k) {
                        let id = b.add_morphism(format!("({},{})", m_cat.mor_label(h), n_cat.mor_label(k)), x, y);
                        index.insert((x, y, h, k), id);
                        morphisms.push((h, k));
                    }
                }
            }
        }
    }
    if morphisms.len() > size_guard {
        return Err(ValidationError::SizeGuardExceeded { what: "bigluing morphisms".into(), size: morphisms.len(), guard: size_guard });
    }
    for (x, &(m, n, _, _)) in objects.iter().enumerate() {
        b.mark_identity(x, index[&(x, x, m_cat.identity(m), n_cat.identity(n))])?;
    }
    for (&(x, y, h, k), &i) in &index {
        for (&(y2, z, h2, k2), &j) in &index {
            if y2 == y {
                b.set_composite(j, i, index[&(x, z, m_cat.comp(h2, h), n_cat.comp(k2, k))])?;
            }
        }
    }
    let cat = Arc::new(b.build()?);
    let projection = Functor::new_unchecked(
        cat.clone(),
        m_cat.clone(),
        objects.iter().map(|o| o.0).collect(),
        morphisms.iter().map(|p| p.0).collect(),
    );
    let gl = Bigluing { cat, objects, morphisms, projection };
    assert!(matches_pullback(&gl, left, right, alpha, size_guard)?, "bigluing agrees with the pullback of categories");
    Ok(gl)
}

/// Map the bigluing into the pullback of categories and check that the map
/// is an isomorphism of categories.
fn matches_pullback(gl: &Bigluing, left: &Functor, right: &Functor, alpha: &NatTransformation, size_guard: usize) -> Result<bool, ValidationError> {
    let (m_cat, n_cat) = (left.dom().clone(), left.cod().clone());
    let d1 = Arc::new(FinCat::chain(2));
    let d2 = Arc::new(FinCat::chain(3));
    let arr = functor_category(&d1, &n_cat, size_guard)?;
    let tri = functor_category(&d2, &n_cat, size_guard)?;
    let outer = validate_functor(
        &d1,
        &d2,
        vec![0, 2],
        d1.morphisms().map(|m| d2.hom(2 * d1.src(m), 2 * d1.tgt(m))[0]).collect(),
    )?;
    let restrict = precomposition(&tri, &arr, &outer);
    // α as a functor M → [Δ1, N].
    let arrow_at = |x: Obj, y: Obj, a: Mor| -> Vec<Mor> {
        d1.morphisms()
            .map(|u| match (d1.src(u), d1.tgt(u)) {
                (0, 0) => n_cat.identity(x),
                (1, 1) => n_cat.identity(y),
                _ => a,
            })
            .collect()
    };
    let obj_map: Vec<Obj> = m_cat
        .objects()
        .map(|m| arr.find_functor(&[left.obj(m), right.obj(m)], &arrow_at(left.obj(m), right.obj(m), alpha.component(m))).expect("arrow object"))
        .collect();
    let mor_map: Vec<Mor> = m_cat
        .morphisms()
        .map(|h| arr.find_transformation(obj_map[m_cat.src(h)], obj_map[m_cat.tgt(h)], &[left.mor(h), right.mor(h)]).expect("arrow morphism"))
        .collect();
    let alpha_f = validate_functor(&m_cat, &arr.cat, obj_map, mor_map)?;
    let pb = category_pullback(&alpha_f, &restrict);
    let pb_obj: HashMap<(Obj, Obj), Obj> =
        pb.cat.objects().map(|o| ((pb.proj1.obj(o), pb.proj2.obj(o)), o)).collect();
    let pb_mor: HashMap<(Mor, Mor), Mor> =
        pb.cat.morphisms().map(|t| ((pb.proj1.mor(t), pb.proj2.mor(t)), t)).collect();
    let triangle = |&(m, n, f, g): &(Obj, Obj, Mor, Mor)| -> Option<Obj> {
        let (a, c) = (left.obj(m), right.obj(m));
        let vals = [a, n, c];
        let mors: Vec<Mor> = d2
            .morphisms()
            .map(|u| match (d2.src(u), d2.tgt(u)) {
                (s, t) if s == t => n_cat.identity(vals[s]),
                (0, 1) => f,
                (1, 2) => g,
                _ => alpha.component(m),
            })
            .collect();
        tri.find_functor(&vals, &mors)
    };
    let tri_objs: Vec<Option<Obj>> = gl.objects.iter().map(triangle).collect();
    let mut obj_iso = Vec::new();
    for (x, o) in gl.objects.iter().enumerate() {
        match tri_objs[x].and_then(|t| pb_obj.get(&(o.0, t))) {
            Some(&p) => obj_iso.push(p),
            None => return Ok(false),
        }
    }
    let mut mor_iso = Vec::new();
    for t in gl.cat.morphisms() {
        let (h, k) = gl.morphisms[t];
        let (s, e) = (gl.cat.src(t), gl.cat.tgt(t));
        let trans = tri.find_transformation(tri_objs[s].unwrap(), tri_objs[e].unwrap(), &[left.mor(h), k, right.mor(h)]);
        match trans.and_then(|tr| pb_mor.get(&(h, tr))) {
            Some(&p) => mor_iso.push(p),
            None => return Ok(false),
        }
    }
    Ok(match validate_functor(&gl.cat, &pb.cat, obj_iso, mor_iso) {
        Ok(iso) => iso.is_isomorphism(),
        Err(_) => false,
    })
}

/// The expected glued classes: cofibrations `h ∈ C` with `Fm' ∨ n ≤ n'` in
/// `C`, fibrations `h ∈ F` with `n ≤ Gm ∧ n'` in `F`, weak equivalences
/// componentwise.
pub fn shulman_classes(data: &GluingData, gl: &Bigluing, m_model: &ModelStructure, n_model: &ModelStructure) -> ModelStructure {
    let (lat_n, cat) = (&data.target, &gl.cat);
    let count = cat.num_morphisms();
    let ends = |t: Mor| (gl.objects[cat.src(t)], gl.objects[cat.tgt(t)]);
    let cof = MorClass::from_predicate(count, |t| {
        let ((_, n, _, _), (m2, n2, _, _)) = ends(t);
        m_model.cof.contains(gl.morphisms[t].0) && n_model.cof.contains(lat_n.arrow(lat_n.join(data.left().obj(m2), n), n2))
    });
    let fib = MorClass::from_predicate(count, |t| {
        let ((m, n, _, _), (_, n2, _, _)) = ends(t);
        m_model.fib.contains(gl.morphisms[t].0) && n_model.fib.contains(lat_n.arrow(n, lat_n.meet(data.right().obj(m), n2)))
    });
    let weak = MorClass::from_predicate(count, |t| {
        let (h, k) = gl.morphisms[t];
        m_model.weak.contains(h) && n_model.weak.contains(k)
    });
    ModelStructure::new(cof, weak, fib)
}

/// The projection `Gl(α) → M` with fibers the intervals `[Fm, Gm]`
/// carrying the structure restricted from `N`.
pub fn bigluing_setup(gl: &Bigluing, m_model: &ModelStructure, n_model: &ModelStructure) -> Result<QuillenSetup, ReedyError> {
    let bifib = match build_cleavage(&gl.projection, TieBreak::Smallest) {
        Construction::Built(b) => b,
        Construction::Refused(r) => return Err(ReedyError::NotBifibration(Box::new(r))),
    };
    let fiber_models = bifib
        .fibers()
        .iter()
        .map(|fiber| {
            let class = |c: &MorClass| {
                MorClass::from_predicate(fiber.cat.num_morphisms(), |l| c.contains(gl.morphisms[fiber.embedding.mor(l)].1))
            };
            ModelStructure::new(class(&n_model.cof), class(&n_model.weak), class(&n_model.fib))
        })
        .collect();
    Ok(QuillenSetup::new(bifib, m_model.clone(), fiber_models)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ShulmanReport {
    pub hypotheses: Verdict,
    /// The structure built over the projection, when it could be built.
    pub built: Option<ModelStructure>,
    pub expected: ModelStructure,
    pub verdict: Verdict,
}

fn hypotheses(data: &GluingData, m_model: &ModelStructure, n_model: &ModelStructure) -> Verdict {
    let (lm, ln) = (&data.source, &data.target);
    let (f, g) = (data.left(), data.right());
    if f.obj(lm.bottom()) != ln.bottom() {
        return Verdict::fail("left-cocontinuous", Witness::Object { object: lm.bottom() });
    }
    if g.obj(lm.top()) != ln.top() {
        return Verdict::fail("right-continuous", Witness::Object { object: lm.top() });
    }
    for x in lm.elements() {
        for y in lm.elements() {
            if f.obj(lm.join(x, y)) != ln.join(f.obj(x), f.obj(y)) {
                return Verdict::fail("left-cocontinuous", Witness::Object { object: lm.join(x, y) });
            }
            if g.obj(lm.meet(x, y)) != ln.meet(g.obj(x), g.obj(y)) {
                return Verdict::fail("right-continuous", Witness::Object { object: lm.meet(x, y) });
            }
        }
    }
    let cat = lm.cat();
    for h in m_model.acyclic_cof().iter() {
        let (a, b) = (f.obj(cat.src(h)), f.obj(cat.tgt(h)));
        for z in ln.elements().filter(|&z| ln.leq(a, z)) {
            let pushed = ln.arrow(z, ln.join(z, b));
            if !n_model.weak.contains(pushed) {
                return Verdict::fail("couniversal", Witness::BaseChange { morphism: f.mor(h), along: z, result: pushed })
                    .with_trace(format!("pushout of F({}) along {} is not a weak equivalence", cat.mor_label(h), ln.cat().obj_label(z)));
            }
        }
    }
    for h in m_model.acyclic_fib().iter() {
        let (a, b) = (g.obj(cat.src(h)), g.obj(cat.tgt(h)));
        for z in ln.elements().filter(|&z| ln.leq(z, b)) {
            let pulled = ln.arrow(ln.meet(z, a), z);
            if !n_model.weak.contains(pulled) {
                return Verdict::fail("universal", Witness::BaseChange { morphism: g.mor(h), along: z, result: pulled })
                    .with_trace(format!("pullback of G({}) to {} is not a weak equivalence", cat.mor_label(h), ln.cat().obj_label(z)));
            }
        }
    }
    Verdict::pass("gluing-hypotheses")
}

/// Check the hypotheses, build the glued structure over the projection and
/// compare it with [`shulman_classes`].
pub fn check_shulman(data: &GluingData, m_model: &ModelStructure, n_model: &ModelStructure, size_guard: usize) -> Result<ShulmanReport, ReedyError> {
    let gl = bigluing(data.left(), data.right(), &data.alpha, size_guard)?;
    let expected = shulman_classes(data, &gl, m_model, n_model);
    let hyp = hypotheses(data, m_model, n_model);
    let setup = bigluing_setup(&gl, m_model, n_model)?;
    let built = match grothendieck_model(&setup) {
        Ok(Construction::Built(ms)) => Ok(ms),
        Ok(Construction::Refused(r)) => Err(r.verdict),
        Err(crate::quillen::QuillenError::HypothesisNotMet(v)) => Err(v),
        Err(e) => return Err(e.into()),
    };
    let verdict = if !hyp.passed() {
        Verdict::nest("shulman", hyp.clone())
    } else {
        match &built {
            Ok(ms) if *ms == expected => Verdict::pass("shulman"),
            Ok(ms) => {
                let diff = ms.cof.difference(&expected.cof).union(&expected.cof.difference(&ms.cof));
                let m = diff.iter().next().or_else(|| ms.fib.difference(&expected.fib).union(&expected.fib.difference(&ms.fib)).iter().next());
                Verdict::fail("shulman", Witness::Object { object: m.unwrap_or(0) }).with_trace("built classes differ from the glued description")
            }
            Err(v) => Verdict::nest("shulman", v.clone()),
        }
    };
    Ok(ShulmanReport { hypotheses: hyp, built: built.ok(), expected, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::DEFAULT_SIZE_GUARD;

    #[test]
    fn over_a_point_objects_are_intermediates() {
        let m = FinLattice::chain(1);
        let n = FinLattice::chain(4);
        let data = GluingData::from_maps(m, n, &[1], &[3]).unwrap();
        let gl = bigluing(data.left(), data.right(), &data.alpha, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(gl.objects.len(), 3);
        assert_eq!(gl.cat.num_morphisms(), 6);
    }

    #[test]
    fn identity_alpha_on_trivial_structures_passes() {
        let l = FinLattice::chain(2);
        let id: Vec<Obj> = l.elements().collect();
        let data = GluingData::from_maps(l.clone(), l.clone(), &id, &id).unwrap();
        let t = ModelStructure::trivial(l.cat());
        let rep = check_shulman(&data, &t, &t, DEFAULT_SIZE_GUARD).unwrap();
        assert!(rep.verdict.passed(), "{:?}", rep.verdict);
    }
}
