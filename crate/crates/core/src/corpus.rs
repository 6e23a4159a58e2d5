//! Generators for setups: lattice-indexed bifibrations and their collages,
//! product, codomain and domain bifibrations, seeded random samples.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bifib::{build_cleavage, TieBreak};
use crate::class::MorClass;
use crate::fincat::{functor_category, product_category, FinCat, Functor, FunctorCategory, Mor, Obj, Product, ValidationError};
use crate::model::{enumerate_model_structures, ModelError, ModelStructure, DEFAULT_BUDGET};
use crate::quillen::{check_q, QuillenError, QuillenSetup};
use crate::reedy::FinLattice;
use crate::verdict::{Construction, Refusal};

#[derive(Debug, Clone, Error)]
pub enum CorpusError {
    #[error("map over base morphism {morphism} is not join-preserving")]
    NotJoinPreserving { morphism: Mor },
    #[error("maps are not functorial at base morphisms {second} after {first}")]
    NotFunctorial { first: Mor, second: Mor },
    #[error("base category is not a poset")]
    BaseNotThin,
    #[error("expected {expected} entries, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("no cleavage: {0:?}")]
    NotBifibration(Box<Refusal>),
    #[error(transparent)]
    Quillen(#[from] QuillenError),
    #[error(transparent)]
    Size(#[from] ValidationError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A poset base with a lattice over each object and a join-preserving map
/// over each morphism, composing strictly.
#[derive(Clone, Debug)]
pub struct IndexedLattices {
    pub base: Arc<FinCat>,
    pub fibers: Vec<FinLattice>,
    /// Indexed by base morphism.
    pub push: Vec<Vec<Obj>>,
}

impl IndexedLattices {
    pub fn new(base: Arc<FinCat>, fibers: Vec<FinLattice>, push: Vec<Vec<Obj>>) -> Result<Self, CorpusError> {
        if !base.is_thin() {
            return Err(CorpusError::BaseNotThin);
        }
        if fibers.len() != base.num_objects() {
            return Err(CorpusError::Arity { expected: base.num_objects(), found: fibers.len() });
        }
        if push.len() != base.num_morphisms() {
            return Err(CorpusError::Arity { expected: base.num_morphisms(), found: push.len() });
        }
        for u in base.morphisms() {
            let (s, t) = (&fibers[base.src(u)], &fibers[base.tgt(u)]);
            let f = &push[u];
            let ok = f.len() == s.size()
                && f.iter().all(|&y| y < t.size())
                && f[s.bottom()] == t.bottom()
                && s.elements().all(|x| s.elements().all(|y| f[s.join(x, y)] == t.join(f[x], f[y])))
                && (!base.is_identity(u) || s.elements().all(|x| f[x] == x));
            if !ok {
                return Err(CorpusError::NotJoinPreserving { morphism: u });
            }
        }
        for &(f, g, gf) in base.composable_pairs() {
            if (0..fibers[base.src(f)].size()).any(|x| push[gf][x] != push[g][push[f][x]]) {
                return Err(CorpusError::NotFunctorial { first: f, second: g });
            }
        }
        Ok(IndexedLattices { base, fibers, push })
    }

    /// Over the `n`-chain with `steps[i]: L_i → L_{i+1}`.
    pub fn over_chain(fibers: Vec<FinLattice>, steps: Vec<Vec<Obj>>) -> Result<Self, CorpusError> {
        let n = fibers.len();
        if steps.len() + 1 != n {
            return Err(CorpusError::Arity { expected: n.saturating_sub(1), found: steps.len() });
        }
        let base = Arc::new(FinCat::chain(n));
        let push = base
            .morphisms()
            .map(|u| {
                let (i, j) = (base.src(u), base.tgt(u));
                (0..fibers[i].size()).map(|x| (i..j).fold(x, |y, k| steps[k][y])).collect()
            })
            .collect();
        Self::new(base, fibers, push)
    }

    /// The Grothendieck poset: `(a, x) ≤ (b, y)` when `a ≤ b` and `f_u(x) ≤ y`.
    pub fn grothendieck(&self) -> Grothendieck {
        let b = &self.base;
        let elements: Vec<(Obj, Obj)> = b.objects().flat_map(|a| self.fibers[a].elements().map(move |x| (a, x))).collect();
        let labels: Vec<String> = elements
            .iter()
            .map(|&(a, x)| format!("({},{})", b.obj_label(a), self.fibers[a].cat().obj_label(x)))
            .collect();
        let mut leq = Vec::new();
        for (i, &(a, x)) in elements.iter().enumerate() {
            for (j, &(c, y)) in elements.iter().enumerate() {
                if let Some(&u) = b.hom(a, c).first() {
                    if self.fibers[c].leq(self.push[u][x], y) {
                        leq.push((i, j));
                    }
                }
            }
        }
        let total = Arc::new(FinCat::from_preorder(&labels, &leq).expect("Grothendieck construction of posets is a poset"));
        let obj_map: Vec<Obj> = elements.iter().map(|e| e.0).collect();
        let mor_map = total.morphisms().map(|t| b.hom(obj_map[total.src(t)], obj_map[total.tgt(t)])[0]).collect();
        let functor = crate::fincat::validate_functor(&total, b, obj_map, mor_map).expect("projection is a functor");
        Grothendieck { total, functor, elements }
    }

    /// Fiber classes transported to vertical morphisms of `g`.
    pub fn vertical_classes(&self, g: &Grothendieck, fiber_models: &[ModelStructure]) -> ModelStructure {
        let e = &g.total;
        let pick = |c: &dyn Fn(&ModelStructure) -> &MorClass| {
            MorClass::from_predicate(e.num_morphisms(), |t| {
                let ((a, x), (b, y)) = (g.elements[e.src(t)], g.elements[e.tgt(t)]);
                a == b && c(&fiber_models[a]).contains(self.fibers[a].arrow(x, y))
            })
        };
        ModelStructure::new(pick(&|m| &m.cof), pick(&|m| &m.weak), pick(&|m| &m.fib))
    }

    /// The setup with the given base and fiber structures.
    pub fn setup(&self, base_model: ModelStructure, fiber_models: &[ModelStructure], tie_break: TieBreak) -> Result<(Grothendieck, QuillenSetup), CorpusError> {
        if fiber_models.len() != self.fibers.len() {
            return Err(CorpusError::Arity { expected: self.fibers.len(), found: fiber_models.len() });
        }
        let g = self.grothendieck();
        let classes = self.vertical_classes(&g, fiber_models);
        let bifib = cleave(&g.functor, tie_break)?;
        let setup = QuillenSetup::from_vertical_classes(bifib, base_model, &classes)?;
        Ok((g, setup))
    }
}

/// Total poset of an [`IndexedLattices`] with its projection.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub total: Arc<FinCat>,
    pub functor: Functor,
    /// Object index to `(base object, fiber element)`.
    pub elements: Vec<(Obj, Obj)>,
}

fn cleave(p: &Functor, tie_break: TieBreak) -> Result<crate::bifib::Bifibration, CorpusError> {
    match build_cleavage(p, tie_break) {
        Construction::Built(b) => Ok(b),
        Construction::Refused(r) => Err(CorpusError::NotBifibration(Box::new(r))),
    }
}

/// `M × B → B` with every fiber a copy of `M`.
pub fn product_setup(
    m: &Arc<FinCat>,
    m_model: &ModelStructure,
    b: &Arc<FinCat>,
    b_model: &ModelStructure,
    size_guard: usize,
    tie_break: TieBreak,
) -> Result<(Product, QuillenSetup), CorpusError> {
    let prod = product_category(m, b, size_guard)?;
    let e = &prod.cat;
    let pick = |c: &MorClass| {
        MorClass::from_predicate(e.num_morphisms(), |t| b.is_identity(prod.proj_b.mor(t)) && c.contains(prod.proj_a.mor(t)))
    };
    let classes = ModelStructure::new(pick(&m_model.cof), pick(&m_model.weak), pick(&m_model.fib));
    let bifib = cleave(&prod.proj_b, tie_break)?;
    let setup = QuillenSetup::from_vertical_classes(bifib, b_model.clone(), &classes)?;
    Ok((prod, setup))
}

/// The product structure: each class componentwise.
pub fn product_model(prod: &Product, m_model: &ModelStructure, b_model: &ModelStructure) -> ModelStructure {
    let n = prod.cat.num_morphisms();
    let both = |c: &MorClass, d: &MorClass| MorClass::from_predicate(n, |t| c.contains(prod.proj_a.mor(t)) && d.contains(prod.proj_b.mor(t)));
    ModelStructure::new(both(&m_model.cof, &b_model.cof), both(&m_model.weak, &b_model.weak), both(&m_model.fib, &b_model.fib))
}

/// Which end of the arrow category the projection reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrowEnd {
    /// `(x → a) ↦ a`.
    Codomain,
    /// `(a → x) ↦ a`.
    Domain,
}

/// The arrow category `[2, B]` of a lattice projected to one end, fibers
/// carrying the slice or coslice structure.
pub fn arrow_setup(lat: &FinLattice, ms: &ModelStructure, end: ArrowEnd, size_guard: usize, tie_break: TieBreak) -> Result<(FunctorCategory, QuillenSetup), CorpusError> {
    let fc = functor_category(&Arc::new(FinCat::chain(2)), lat.cat(), size_guard)?;
    let (fixed, free) = match end {
        ArrowEnd::Codomain => (1, 0),
        ArrowEnd::Domain => (0, 1),
    };
    let p = fc.evaluation(fixed);
    let e = &fc.cat;
    let pick = |c: &MorClass| {
        MorClass::from_predicate(e.num_morphisms(), |t| lat.cat().is_identity(fc.component(t, fixed)) && c.contains(fc.component(t, free)))
    };
    let classes = ModelStructure::new(pick(&ms.cof), pick(&ms.weak), pick(&ms.fib));
    let bifib = cleave(&p, tie_break)?;
    let setup = QuillenSetup::from_vertical_classes(bifib, ms.clone(), &classes)?;
    Ok((fc, setup))
}

/// Injective structure on `[2, B]`: cofibrations and weak equivalences
/// pointwise; a fibration has a fibration at the codomain and
/// `x0 ≤ x1 ∧ y0` a fibration.
pub fn injective_model(fc: &FunctorCategory, lat: &FinLattice, ms: &ModelStructure) -> ModelStructure {
    let e = &fc.cat;
    let n = e.num_morphisms();
    let pointwise = |c: &MorClass| MorClass::from_predicate(n, |t| c.contains(fc.component(t, 0)) && c.contains(fc.component(t, 1)));
    let fib = MorClass::from_predicate(n, |t| {
        let (x, y) = (e.src(t), e.tgt(t));
        let corner = lat.meet(fc.value(x, 1), fc.value(y, 0));
        ms.fib.contains(fc.component(t, 1)) && ms.fib.contains(lat.arrow(fc.value(x, 0), corner))
    });
    ModelStructure::new(pointwise(&ms.cof), pointwise(&ms.weak), fib)
}

/// Projective structure on `[2, B]`: fibrations and weak equivalences
/// pointwise; a cofibration has a cofibration at the domain and
/// `x1 ∨ y0 ≤ y1` a cofibration.
pub fn projective_model(fc: &FunctorCategory, lat: &FinLattice, ms: &ModelStructure) -> ModelStructure {
    let e = &fc.cat;
    let n = e.num_morphisms();
    let pointwise = |c: &MorClass| MorClass::from_predicate(n, |t| c.contains(fc.component(t, 0)) && c.contains(fc.component(t, 1)));
    let cof = MorClass::from_predicate(n, |t| {
        let (x, y) = (e.src(t), e.tgt(t));
        let corner = lat.join(fc.value(x, 1), fc.value(y, 0));
        ms.cof.contains(fc.component(t, 0)) && ms.cof.contains(lat.arrow(corner, fc.value(y, 1)))
    });
    ModelStructure::new(cof, pointwise(&ms.weak), pointwise(&ms.fib))
}

/// What produced a corpus entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetupKind {
    Product,
    Cod,
    Dom,
    Collage,
    RandomLatticeBifib,
    Reedy,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: SetupKind,
    pub setup: QuillenSetup,
}

/// Small lattices with their enumerated model structures.
pub struct LatticeStock {
    pub lattices: Vec<(String, FinLattice, Vec<ModelStructure>)>,
}

impl LatticeStock {
    pub fn small() -> Result<Self, CorpusError> {
        let lattices = FinLattice::small_lattices()
            .into_iter()
            .map(|(name, l)| {
                let ms = enumerate_model_structures(l.cat(), DEFAULT_BUDGET)?;
                Ok((name, l, ms))
            })
            .collect::<Result<_, CorpusError>>()?;
        Ok(LatticeStock { lattices })
    }
}

/// Seeded sample of lattice-indexed setups over the 2- and 3-chain that
/// satisfy the fiberwise Quillen condition. Distinct choices only.
pub fn random_lattice_setups(stock: &LatticeStock, seed: u64, count: usize, tie_break: TieBreak) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bases: HashMap<usize, Vec<ModelStructure>> = HashMap::new();
    for n in [2, 3] {
        bases.insert(n, enumerate_model_structures(&FinCat::chain(n), DEFAULT_BUDGET)?);
    }
    let mut maps: HashMap<(usize, usize), Vec<Vec<Obj>>> = HashMap::new();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let n = if rng.random_range(0..2) == 0 { 2 } else { 3 };
        let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..stock.lattices.len())).collect();
        let mut steps = Vec::new();
        let mut step_idx = Vec::new();
        for w in idx.windows(2) {
            let cands = maps
                .entry((w[0], w[1]))
                .or_insert_with(|| stock.lattices[w[0]].1.join_preserving_maps(&stock.lattices[w[1]].1));
            let k = rng.random_range(0..cands.len());
            step_idx.push(k);
            steps.push(cands[k].clone());
        }
        let base_ms = &bases[&n];
        let b = rng.random_range(0..base_ms.len());
        let fm: Vec<usize> = idx.iter().map(|&i| rng.random_range(0..stock.lattices[i].2.len())).collect();
        if !seen.insert((idx.clone(), step_idx.clone(), b, fm.clone())) {
            continue;
        }
        let data = IndexedLattices::over_chain(idx.iter().map(|&i| stock.lattices[i].1.clone()).collect(), steps)?;
        let fiber_models: Vec<ModelStructure> = idx.iter().zip(&fm).map(|(&i, &k)| stock.lattices[i].2[k].clone()).collect();
        let (_, setup) = data.setup(base_ms[b].clone(), &fiber_models, tie_break)?;
        if !check_q(&setup).passed() {
            continue;
        }
        let lat_names: Vec<&str> = idx.iter().map(|&i| stock.lattices[i].0.as_str()).collect();
        let name = format!("random-{seed}-{}-{}", out.len(), lat_names.join("-"));
        out.push(CorpusEntry { name, kind: SetupKind::RandomLatticeBifib, setup });
    }
    Ok(out)
}

/// Seeded sample over the commuting-square base `00 → 01, 10 → 11`, where
/// squares with non-identity sides exist. Maps are drawn per generating
/// arrow and kept when the square of maps commutes.
pub fn random_square_setups(stock: &LatticeStock, seed: u64, count: usize, tie_break: TieBreak) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = Arc::new(FinCat::chain(2));
    let base = product_category(&two, &two, usize::MAX)?.cat;
    let base_ms = enumerate_model_structures(&base, DEFAULT_BUDGET)?;
    let mut maps: HashMap<(usize, usize), Vec<Vec<Obj>>> = HashMap::new();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 400 {
        attempts += 1;
        let idx: Vec<usize> = (0..4).map(|_| rng.random_range(0..stock.lattices.len())).collect();
        // Generating arrows (source corner, target corner); corner 0 is bottom, 3 is top.
        let mut gens = Vec::new();
        let mut choice = Vec::new();
        for (s, t) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            let cands = maps
                .entry((idx[s], idx[t]))
                .or_insert_with(|| stock.lattices[idx[s]].1.join_preserving_maps(&stock.lattices[idx[t]].1));
            let k = rng.random_range(0..cands.len());
            choice.push(k);
            gens.push(cands[k].clone());
        }
        let diag: Vec<Obj> = gens[0].iter().map(|&x| gens[2][x]).collect();
        if diag != gens[1].iter().map(|&x| gens[3][x]).collect::<Vec<_>>() {
            continue;
        }
        let b = rng.random_range(0..base_ms.len());
        let fm: Vec<usize> = idx.iter().map(|&i| rng.random_range(0..stock.lattices[i].2.len())).collect();
        if !seen.insert((idx.clone(), choice, b, fm.clone())) {
            continue;
        }
        let push = base
            .morphisms()
            .map(|u| match (base.src(u), base.tgt(u)) {
                (s, t) if s == t => stock.lattices[idx[s]].1.elements().collect(),
                (0, 1) => gens[0].clone(),
                (0, 2) => gens[1].clone(),
                (1, 3) => gens[2].clone(),
                (2, 3) => gens[3].clone(),
                _ => diag.clone(),
            })
            .collect();
        let data = IndexedLattices::new(base.clone(), idx.iter().map(|&i| stock.lattices[i].1.clone()).collect(), push)?;
        let fiber_models: Vec<ModelStructure> = idx.iter().zip(&fm).map(|(&i, &k)| stock.lattices[i].2[k].clone()).collect();
        let (_, setup) = data.setup(base_ms[b].clone(), &fiber_models, tie_break)?;
        if !check_q(&setup).passed() {
            continue;
        }
        let lat_names: Vec<&str> = idx.iter().map(|&i| stock.lattices[i].0.as_str()).collect();
        let name = format!("square-{seed}-{}-{}", out.len(), lat_names.join("-"));
        out.push(CorpusEntry { name, kind: SetupKind::RandomLatticeBifib, setup });
    }
    Ok(out)
}

/// Every collage over the 2-chain between two given lattices, over all maps,
/// base structures and fiber structures satisfying the fiberwise Quillen
/// condition.
pub fn collage_setups(stock: &LatticeStock, left: usize, right: usize, tie_break: TieBreak) -> Result<Vec<CorpusEntry>, CorpusError> {
    let base_ms = enumerate_model_structures(&FinCat::chain(2), DEFAULT_BUDGET)?;
    let (ln, l, lms) = &stock.lattices[left];
    let (rn, r, rms) = &stock.lattices[right];
    let mut out = Vec::new();
    for (mi, map) in l.join_preserving_maps(r).into_iter().enumerate() {
        let data = IndexedLattices::over_chain(vec![l.clone(), r.clone()], vec![map])?;
        for (bi, b) in base_ms.iter().enumerate() {
            for (i, m0) in lms.iter().enumerate() {
                for (j, m1) in rms.iter().enumerate() {
                    let (_, setup) = data.setup(b.clone(), &[m0.clone(), m1.clone()], tie_break)?;
                    if check_q(&setup).passed() {
                        out.push(CorpusEntry { name: format!("collage-{ln}-{rn}-f{mi}-b{bi}-{i}-{j}"), kind: SetupKind::Collage, setup });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Seed of the shipped theorem corpus.
pub const THEOREM_SEED: u64 = 20_240_501;

/// Seed of the square-base sample.
pub const SQUARE_SEED: u64 = 1;

/// The setups for the main-theorem sweep: several exhaustive collage
/// families and a seeded random sample over the 2- and 3-chain.
pub fn theorem_corpus(tie_break: TieBreak) -> Result<Vec<CorpusEntry>, CorpusError> {
    let stock = LatticeStock::small()?;
    let find = |name: &str| stock.lattices.iter().position(|l| l.0 == name).expect("known lattice");
    let mut out = Vec::new();
    for (a, b) in [("chain2", "chain2"), ("chain2", "chain3"), ("chain3", "chain2")] {
        out.extend(collage_setups(&stock, find(a), find(b), tie_break)?);
    }
    out.extend(random_lattice_setups(&stock, THEOREM_SEED, 160, tie_break)?);
    Ok(out)
}

/// Setups over the square base, where the commutation condition on
/// mates has non-degenerate squares to test.
pub fn square_corpus(tie_break: TieBreak) -> Result<Vec<CorpusEntry>, CorpusError> {
    random_square_setups(&LatticeStock::small()?, SQUARE_SEED, 60, tie_break)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::DEFAULT_SIZE_GUARD;

    #[test]
    fn collage_poset() {
        let data = IndexedLattices::over_chain(vec![FinLattice::chain(2), FinLattice::chain(2)], vec![vec![0, 1]]).unwrap();
        let g = data.grothendieck();
        assert_eq!(g.total.num_objects(), 4);
        assert!(g.total.is_thin());
    }

    #[test]
    fn non_functorial_maps_are_rejected() {
        let data = IndexedLattices::over_chain(vec![FinLattice::chain(2); 3], vec![vec![0, 1], vec![0, 1]]).unwrap();
        let mut push = data.push.clone();
        let u02 = data.base.hom(0, 2)[0];
        push[u02] = vec![0, 0];
        assert!(matches!(
            IndexedLattices::new(data.base.clone(), data.fibers.clone(), push),
            Err(CorpusError::NotFunctorial { .. })
        ));
    }

    #[test]
    fn cod_and_dom_setups_build() {
        let lat = FinLattice::chain(3);
        let ms = ModelStructure::trivial(lat.cat());
        for end in [ArrowEnd::Codomain, ArrowEnd::Domain] {
            let (fc, setup) = arrow_setup(&lat, &ms, end, DEFAULT_SIZE_GUARD, TieBreak::Smallest).unwrap();
            assert_eq!(fc.cat.num_objects(), 6);
            assert_eq!(setup.bifib.fibers().len(), 3);
        }
    }

    #[test]
    fn random_sample_is_deterministic() {
        let stock = LatticeStock::small().unwrap();
        let a = random_lattice_setups(&stock, 7, 10, TieBreak::Smallest).unwrap();
        let b = random_lattice_setups(&stock, 7, 10, TieBreak::Smallest).unwrap();
        assert_eq!(a.len(), 10);
        assert!(a.iter().zip(&b).all(|(x, y)| x.name == y.name && x.setup.vertical_classes() == y.setup.vertical_classes()));
    }
}
