use std::collections::HashMap;
use std::sync::Arc;

use super::{CategoryBuilder, FinCat, Functor, Mor, Obj, ValidationError};

/// Default cap on generated morphism counts.
pub const DEFAULT_SIZE_GUARD: usize = 5000;

fn guard(what: &str, size: usize, limit: usize) -> Result<(), ValidationError> {
    if size > limit {
        Err(ValidationError::SizeGuardExceeded { what: what.into(), size, guard: limit })
    } else {
        Ok(())
    }
}

/// Same indices with sources and targets swapped.
pub fn opposite(cat: &FinCat) -> FinCat {
    let mut b = CategoryBuilder::new().trusted();
    for o in cat.objects() {
        b.add_object(cat.obj_label(o));
    }
    for m in cat.morphisms() {
        b.add_morphism(cat.mor_label(m), cat.tgt(m), cat.src(m));
    }
    for o in cat.objects() {
        b.mark_identity(o, cat.identity(o)).expect("identities carry over");
    }
    for &(f, g, gf) in cat.composable_pairs() {
        b.set_composite(f, g, gf).expect("composites carry over");
    }
    b.build().expect("opposite of a category is a category")
}

/// Full subcategory on `objects` (kept in the given order) and its inclusion.
pub fn full_subcategory(cat: &Arc<FinCat>, objects: &[Obj]) -> (Arc<FinCat>, Functor) {
    let mut b = CategoryBuilder::new().trusted();
    let mut local = HashMap::new();
    for &o in objects {
        local.insert(o, b.add_object(cat.obj_label(o)));
    }
    let mut mor_map = Vec::new();
    let mut local_mor = HashMap::new();
    for &a in objects {
        for &c in objects {
            for &m in cat.hom(a, c) {
                local_mor.insert(m, b.add_morphism(cat.mor_label(m), local[&a], local[&c]));
                mor_map.push(m);
            }
        }
    }
    for &o in objects {
        b.mark_identity(local[&o], local_mor[&cat.identity(o)]).expect("identity");
    }
    for (&m, &lm) in &local_mor {
        for &g in cat.out_of(cat.tgt(m)) {
            if let Some(&lg) = local_mor.get(&g) {
                b.set_composite(lg, lm, local_mor[&cat.comp(g, m)]).expect("composite");
            }
        }
    }
    let sub = Arc::new(b.build().expect("full subcategory is a category"));
    let inc = Functor::new_unchecked(sub.clone(), cat.clone(), objects.to_vec(), mor_map);
    (sub, inc)
}

/// `A × B` with its two projections. Object `(a, b)` has index
/// `a * |B| + b`, morphisms likewise.
pub struct Product {
    pub cat: Arc<FinCat>,
    pub proj_a: Functor,
    pub proj_b: Functor,
}

pub fn product_category(a: &Arc<FinCat>, b: &Arc<FinCat>, size_guard: usize) -> Result<Product, ValidationError> {
    guard("product morphisms", a.num_morphisms() * b.num_morphisms(), size_guard)?;
    let (nbo, nbm) = (b.num_objects(), b.num_morphisms());
    let mut bl = CategoryBuilder::new().trusted();
    for x in a.objects() {
        for y in b.objects() {
            bl.add_object(format!("({},{})", a.obj_label(x), b.obj_label(y)));
        }
    }
    for f in a.morphisms() {
        for g in b.morphisms() {
            bl.add_morphism(
                format!("({},{})", a.mor_label(f), b.mor_label(g)),
                a.src(f) * nbo + b.src(g),
                a.tgt(f) * nbo + b.tgt(g),
            );
        }
    }
    for x in a.objects() {
        for y in b.objects() {
            bl.mark_identity(x * nbo + y, a.identity(x) * nbm + b.identity(y))?;
        }
    }
    for &(f, f2, ff) in a.composable_pairs() {
        for &(g, g2, gg) in b.composable_pairs() {
            bl.set_composite(f2 * nbm + g2, f * nbm + g, ff * nbm + gg)?;
        }
    }
    let cat = Arc::new(bl.build()?);
    let proj_a = Functor::new_unchecked(
        cat.clone(),
        a.clone(),
        cat.objects().map(|o| o / nbo).collect(),
        cat.morphisms().map(|m| m / nbm).collect(),
    );
    let proj_b = Functor::new_unchecked(
        cat.clone(),
        b.clone(),
        cat.objects().map(|o| o % nbo).collect(),
        cat.morphisms().map(|m| m % nbm).collect(),
    );
    Ok(Product { cat, proj_a, proj_b })
}

/// A morphism of a functor category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransData {
    pub src: Obj,
    pub tgt: Obj,
    pub components: Vec<Mor>,
}

/// `[J, C]`: objects are functors `J → C`, morphisms natural transformations.
pub struct FunctorCategory {
    pub shape: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub cat: Arc<FinCat>,
    /// Object index to `(object map, morphism map)`.
    pub functors: Vec<(Vec<Obj>, Vec<Mor>)>,
    pub transformations: Vec<TransData>,
    functor_index: HashMap<(Vec<Obj>, Vec<Mor>), Obj>,
    trans_index: HashMap<TransData, Mor>,
}

impl FunctorCategory {
    pub fn find_functor(&self, obj_map: &[Obj], mor_map: &[Mor]) -> Option<Obj> {
        self.functor_index.get(&(obj_map.to_vec(), mor_map.to_vec())).copied()
    }

    pub fn find_transformation(&self, src: Obj, tgt: Obj, components: &[Mor]) -> Option<Mor> {
        self.trans_index.get(&TransData { src, tgt, components: components.to_vec() }).copied()
    }

    /// The functor `J → C` that object `x` stands for.
    pub fn as_functor(&self, x: Obj) -> Functor {
        let (om, mm) = &self.functors[x];
        Functor::new_unchecked(self.shape.clone(), self.target.clone(), om.clone(), mm.clone())
    }

    /// Value of object `x` at `j`.
    pub fn value(&self, x: Obj, j: Obj) -> Obj {
        self.functors[x].0[j]
    }

    /// Component at `j` of morphism `t`.
    pub fn component(&self, t: Mor, j: Obj) -> Mor {
        self.transformations[t].components[j]
    }

    /// Evaluation functor `[J, C] → C` at `j`.
    pub fn evaluation(&self, j: Obj) -> Functor {
        Functor::new_unchecked(
            self.cat.clone(),
            self.target.clone(),
            self.cat.objects().map(|x| self.value(x, j)).collect(),
            self.cat.morphisms().map(|t| self.component(t, j)).collect(),
        )
    }
}

fn enumerate_functors(j: &FinCat, c: &FinCat, size_guard: usize) -> Result<Vec<(Vec<Obj>, Vec<Mor>)>, ValidationError> {
    let mut out = Vec::new();
    let mut obj = vec![usize::MAX; j.num_objects()];
    functor_objects(j, c, 0, &mut obj, &mut out, size_guard)?;
    Ok(out)
}

fn functor_objects(
    j: &FinCat,
    c: &FinCat,
    next: Obj,
    obj: &mut Vec<Obj>,
    out: &mut Vec<(Vec<Obj>, Vec<Mor>)>,
    size_guard: usize,
) -> Result<(), ValidationError> {
    if next == j.num_objects() {
        let mut mor = vec![usize::MAX; j.num_morphisms()];
        for o in j.objects() {
            mor[j.identity(o)] = c.identity(obj[o]);
        }
        let free: Vec<Mor> = j.morphisms().filter(|&m| !j.is_identity(m)).collect();
        return functor_morphisms(j, c, &free, 0, obj, &mut mor, out, size_guard);
    }
    for x in c.objects() {
        obj[next] = x;
        // Every morphism between already placed objects needs a possible image.
        let ok = (0..=next).all(|a| {
            j.hom(a, next).is_empty() || !c.hom(obj[a], x).is_empty()
        }) && (0..next).all(|b| j.hom(next, b).is_empty() || !c.hom(x, obj[b]).is_empty());
        if ok {
            functor_objects(j, c, next + 1, obj, out, size_guard)?;
        }
    }
    obj[next] = usize::MAX;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn functor_morphisms(
    j: &FinCat,
    c: &FinCat,
    free: &[Mor],
    k: usize,
    obj: &[Obj],
    mor: &mut Vec<Mor>,
    out: &mut Vec<(Vec<Obj>, Vec<Mor>)>,
    size_guard: usize,
) -> Result<(), ValidationError> {
    if k == free.len() {
        out.push((obj.to_vec(), mor.clone()));
        return guard("functor count", out.len(), size_guard);
    }
    let m = free[k];
    for &cand in c.hom(obj[j.src(m)], obj[j.tgt(m)]) {
        mor[m] = cand;
        let consistent = j.composable_pairs().iter().all(|&(f, g, gf)| {
            let (a, b, ab) = (mor[f], mor[g], mor[gf]);
            a == usize::MAX || b == usize::MAX || ab == usize::MAX || c.comp(b, a) == ab
        });
        if consistent {
            functor_morphisms(j, c, free, k + 1, obj, mor, out, size_guard)?;
        }
    }
    mor[m] = usize::MAX;
    Ok(())
}

fn enumerate_transformations(
    j: &FinCat,
    c: &FinCat,
    f: &(Vec<Obj>, Vec<Mor>),
    g: &(Vec<Obj>, Vec<Mor>),
    out: &mut Vec<Vec<Mor>>,
) {
    let mut comps = vec![usize::MAX; j.num_objects()];
    trans_rec(j, c, f, g, 0, &mut comps, out);
}

fn trans_rec(
    j: &FinCat,
    c: &FinCat,
    f: &(Vec<Obj>, Vec<Mor>),
    g: &(Vec<Obj>, Vec<Mor>),
    next: Obj,
    comps: &mut Vec<Mor>,
    out: &mut Vec<Vec<Mor>>,
) {
    if next == j.num_objects() {
        out.push(comps.clone());
        return;
    }
    for &k in c.hom(f.0[next], g.0[next]) {
        comps[next] = k;
        let natural = j.morphisms().all(|m| {
            let (s, t) = (j.src(m), j.tgt(m));
            if s > next || t > next {
                return true;
            }
            c.comp(g.1[m], comps[s]) == c.comp(comps[t], f.1[m])
        });
        if natural {
            trans_rec(j, c, f, g, next + 1, comps, out);
        }
    }
    comps[next] = usize::MAX;
}

fn functor_label(j: &FinCat, c: &FinCat, f: &(Vec<Obj>, Vec<Mor>), thin: bool) -> String {
    let objs: Vec<&str> = f.0.iter().map(|&o| c.obj_label(o)).collect();
    if thin {
        format!("[{}]", objs.join(","))
    } else {
        let mors: Vec<&str> = j.morphisms().filter(|&m| !j.is_identity(m)).map(|m| c.mor_label(f.1[m])).collect();
        format!("[{}|{}]", objs.join(","), mors.join(","))
    }
}

/// Enumerate `[J, C]` exhaustively. Fails when the number of functors or of
/// natural transformations exceeds `size_guard`.
pub fn functor_category(shape: &Arc<FinCat>, target: &Arc<FinCat>, size_guard: usize) -> Result<FunctorCategory, ValidationError> {
    let (j, c) = (&**shape, &**target);
    let predicted = (c.num_objects() as f64).powi(j.num_objects() as i32);
    if predicted > (size_guard as f64) * 64.0 {
        return Err(ValidationError::SizeGuardExceeded {
            what: "candidate object maps".into(),
            size: predicted.min(usize::MAX as f64) as usize,
            guard: size_guard * 64,
        });
    }
    let functors = enumerate_functors(j, c, size_guard)?;
    let thin = c.is_thin();
    let mut b = CategoryBuilder::new().trusted();
    for f in &functors {
        b.add_object(functor_label(j, c, f, thin));
    }
    let mut transformations = Vec::new();
    let mut trans_index = HashMap::new();
    let mut per_pair: HashMap<(Obj, Obj), usize> = HashMap::new();
    for (fi, f) in functors.iter().enumerate() {
        for (gi, g) in functors.iter().enumerate() {
            let mut comps = Vec::new();
            enumerate_transformations(j, c, f, g, &mut comps);
            for comp in comps {
                let n = per_pair.entry((fi, gi)).or_insert(0);
                let label = if fi == gi && comp.iter().enumerate().all(|(o, &k)| k == c.identity(f.0[o])) {
                    format!("id_{}", b_label(&functors, j, c, fi, thin))
                } else if thin {
                    format!("{}=>{}", b_label(&functors, j, c, fi, thin), b_label(&functors, j, c, gi, thin))
                } else {
                    format!("{}=>{}#{}", b_label(&functors, j, c, fi, thin), b_label(&functors, j, c, gi, thin), n)
                };
                *n += 1;
                let m = b.add_morphism(label, fi, gi);
                let data = TransData { src: fi, tgt: gi, components: comp };
                trans_index.insert(data.clone(), m);
                transformations.push(data);
                guard("natural transformations", transformations.len(), size_guard)?;
            }
        }
    }
    for (fi, f) in functors.iter().enumerate() {
        let ids: Vec<Mor> = f.0.iter().map(|&o| c.identity(o)).collect();
        let m = trans_index[&TransData { src: fi, tgt: fi, components: ids }];
        b.mark_identity(fi, m)?;
    }
    let mut out_of: Vec<Vec<Mor>> = vec![Vec::new(); functors.len()];
    for (m, t) in transformations.iter().enumerate() {
        out_of[t.src].push(m);
    }
    for (m, t) in transformations.iter().enumerate() {
        for &n in &out_of[t.tgt] {
            let u = &transformations[n];
            let comps: Vec<Mor> = j.objects().map(|o| c.comp(u.components[o], t.components[o])).collect();
            let h = trans_index[&TransData { src: t.src, tgt: u.tgt, components: comps }];
            b.set_composite(n, m, h)?;
        }
    }
    let cat = Arc::new(b.build()?);
    let functor_index = functors.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    Ok(FunctorCategory {
        shape: shape.clone(),
        target: target.clone(),
        cat,
        functors,
        transformations,
        functor_index,
        trans_index,
    })
}

fn b_label(functors: &[(Vec<Obj>, Vec<Mor>)], j: &FinCat, c: &FinCat, i: usize, thin: bool) -> String {
    functor_label(j, c, &functors[i], thin)
}

/// Restriction `[J, C] → [J', C]` along `inc: J' → J`.
pub fn precomposition(big: &FunctorCategory, small: &FunctorCategory, inc: &Functor) -> Functor {
    let obj_map = big
        .cat
        .objects()
        .map(|x| {
            let (om, mm) = &big.functors[x];
            let o2: Vec<Obj> = inc.obj_map().iter().map(|&o| om[o]).collect();
            let m2: Vec<Mor> = inc.mor_map().iter().map(|&m| mm[m]).collect();
            small.find_functor(&o2, &m2).expect("restriction of a functor is a functor")
        })
        .collect::<Vec<_>>();
    let mor_map = big
        .cat
        .morphisms()
        .map(|t| {
            let d = &big.transformations[t];
            let comps: Vec<Mor> = inc.obj_map().iter().map(|&o| d.components[o]).collect();
            small
                .find_transformation(obj_map[d.src], obj_map[d.tgt], &comps)
                .expect("restriction of a transformation is a transformation")
        })
        .collect();
    Functor::new_unchecked(big.cat.clone(), small.cat.clone(), obj_map, mor_map)
}

/// Strict pullback of `f: C → B` and `g: D → B`, with its projections.
/// Objects and morphisms are pairs in lexicographic order.
pub struct Pullback {
    pub cat: Arc<FinCat>,
    pub proj1: Functor,
    pub proj2: Functor,
}

pub fn category_pullback(f: &Functor, g: &Functor) -> Pullback {
    assert!(f.cod().same_tables(g.cod()), "pullback of functors with different codomains");
    let (c, d) = (f.dom().clone(), g.dom().clone());
    let mut b = CategoryBuilder::new().trusted();
    let mut objs = HashMap::new();
    let mut obj_pairs = Vec::new();
    for x in c.objects() {
        for y in d.objects() {
            if f.obj(x) == g.obj(y) {
                objs.insert((x, y), b.add_object(format!("({},{})", c.obj_label(x), d.obj_label(y))));
                obj_pairs.push((x, y));
            }
        }
    }
    let mut mors = HashMap::new();
    let mut mor_pairs = Vec::new();
    for m in c.morphisms() {
        for n in d.morphisms() {
            if f.mor(m) == g.mor(n) {
                let s = objs[&(c.src(m), d.src(n))];
                let t = objs[&(c.tgt(m), d.tgt(n))];
                mors.insert((m, n), b.add_morphism(format!("({},{})", c.mor_label(m), d.mor_label(n)), s, t));
                mor_pairs.push((m, n));
            }
        }
    }
    for &(x, y) in &obj_pairs {
        b.mark_identity(objs[&(x, y)], mors[&(c.identity(x), d.identity(y))]).expect("identity");
    }
    for (i, &(m, n)) in mor_pairs.iter().enumerate() {
        for &m2 in c.out_of(c.tgt(m)) {
            for &n2 in d.out_of(d.tgt(n)) {
                if let Some(&j) = mors.get(&(m2, n2)) {
                    b.set_composite(j, i, mors[&(c.comp(m2, m), d.comp(n2, n))]).expect("composite");
                }
            }
        }
    }
    let cat = Arc::new(b.build().expect("pullback is a category"));
    let proj1 = Functor::new_unchecked(
        cat.clone(),
        c,
        obj_pairs.iter().map(|p| p.0).collect(),
        mor_pairs.iter().map(|p| p.0).collect(),
    );
    let proj2 = Functor::new_unchecked(
        cat.clone(),
        d,
        obj_pairs.iter().map(|p| p.1).collect(),
        mor_pairs.iter().map(|p| p.1).collect(),
    );
    Pullback { cat, proj1, proj2 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_two_chains() {
        let c2 = Arc::new(FinCat::chain(2));
        let p = product_category(&c2, &c2, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!((p.cat.num_objects(), p.cat.num_morphisms()), (4, 9));
    }

    #[test]
    fn product_guard() {
        let c = Arc::new(FinCat::chain(4));
        assert!(matches!(
            product_category(&c, &c, 50),
            Err(ValidationError::SizeGuardExceeded { .. })
        ));
    }

    #[test]
    fn arrow_categories() {
        let c2 = Arc::new(FinCat::chain(2));
        let c3 = Arc::new(FinCat::chain(3));
        assert_eq!(functor_category(&c2, &c3, DEFAULT_SIZE_GUARD).unwrap().cat.num_objects(), 6);
        let a = functor_category(&c2, &c2, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(a.cat.num_objects(), 3);
        assert_eq!(a.cat.num_morphisms(), 6);
    }

    #[test]
    fn opposite_is_involutive() {
        let c = FinCat::chain(3);
        let op = opposite(&c);
        assert_eq!(op.src(1), c.tgt(1));
        assert!(opposite(&op).same_tables(&c));
    }

    #[test]
    fn functors_into_non_thin_target() {
        // Two parallel arrows x ⇉ y; functors from the 2-chain pick one of them or an identity.
        let mut b = CategoryBuilder::new();
        let x = b.add_object_with_identity("x");
        let y = b.add_object_with_identity("y");
        b.add_morphism("p", x, y);
        b.add_morphism("q", x, y);
        let par = Arc::new(b.build().unwrap());
        let c2 = Arc::new(FinCat::chain(2));
        let fc = functor_category(&c2, &par, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(fc.cat.num_objects(), 4);
    }

    #[test]
    fn empty_shape_gives_terminal() {
        let e = Arc::new(FinCat::empty());
        let c3 = Arc::new(FinCat::chain(3));
        let fc = functor_category(&e, &c3, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!((fc.cat.num_objects(), fc.cat.num_morphisms()), (1, 1));
    }

    #[test]
    fn pullback_of_projections() {
        let c2 = Arc::new(FinCat::chain(2));
        let p = product_category(&c2, &c2, DEFAULT_SIZE_GUARD).unwrap();
        let pb = category_pullback(&p.proj_b, &p.proj_b);
        // Pairs of objects of the square agreeing in the second coordinate.
        assert_eq!(pb.cat.num_objects(), 8);
    }

    #[test]
    fn full_subcategory_inclusion() {
        let c3 = Arc::new(FinCat::chain(3));
        let (sub, inc) = full_subcategory(&c3, &[0, 2]);
        assert_eq!(sub.num_morphisms(), 3);
        assert_eq!(inc.obj(1), 2);
    }
}
