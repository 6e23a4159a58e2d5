use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{FinCat, Functor, Mor, NatTransformation, Obj};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("category is not a poset")]
    NotAPoset,
    #[error("elements {0} and {1} have no {2}")]
    MissingBound(Obj, Obj, &'static str),
    #[error("lattice is empty")]
    Empty,
}

/// A finite lattice: a poset category with binary meets and joins.
/// Elements are the objects of the underlying category.
#[derive(Clone, Debug)]
pub struct FinLattice {
    cat: Arc<FinCat>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<Obj>>,
    join: Vec<Vec<Obj>>,
    top: Obj,
    bottom: Obj,
}

impl FinLattice {
    pub fn from_poset(cat: Arc<FinCat>) -> Result<Self, LatticeError> {
        let n = cat.num_objects();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if !cat.is_thin() {
            return Err(LatticeError::NotAPoset);
        }
        let leq: Vec<Vec<bool>> =
            (0..n).map(|x| (0..n).map(|y| !cat.hom(x, y).is_empty()).collect()).collect();
        if (0..n).any(|x| (0..n).any(|y| x != y && leq[x][y] && leq[y][x])) {
            return Err(LatticeError::NotAPoset);
        }
        let bound = |x: Obj, y: Obj, lower: bool| -> Option<Obj> {
            let below = |z: Obj, w: Obj| if lower { leq[z][w] } else { leq[w][z] };
            let cands: Vec<Obj> = (0..n).filter(|&z| below(z, x) && below(z, y)).collect();
            cands.iter().copied().find(|&z| cands.iter().all(|&c| below(c, z)))
        };
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                meet[x][y] = bound(x, y, true).ok_or(LatticeError::MissingBound(x, y, "meet"))?;
                join[x][y] = bound(x, y, false).ok_or(LatticeError::MissingBound(x, y, "join"))?;
            }
        }
        let bottom = (0..n).find(|&x| (0..n).all(|y| leq[x][y])).ok_or(LatticeError::MissingBound(0, 0, "bottom"))?;
        let top = (0..n).find(|&x| (0..n).all(|y| leq[y][x])).ok_or(LatticeError::MissingBound(0, 0, "top"))?;
        Ok(FinLattice { cat, leq, meet, join, top, bottom })
    }

    /// Lattice generated by a covering relation on named elements.
    pub fn from_relation(labels: &[&str], leq: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let cat = FinCat::from_preorder(&labels, leq).map_err(|_| LatticeError::NotAPoset)?;
        Self::from_poset(Arc::new(cat))
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_poset(Arc::new(FinCat::chain(n))).expect("chains are lattices")
    }

    /// `bot < a, b < top`.
    pub fn diamond() -> Self {
        Self::from_relation(&["bot", "a", "b", "top"], &[(0, 1), (0, 2), (1, 3), (2, 3)]).expect("diamond")
    }

    /// The lattices with at most four elements, up to isomorphism.
    pub fn small_lattices() -> Vec<(String, FinLattice)> {
        let mut v: Vec<(String, FinLattice)> = (1..=4).map(|n| (format!("chain{n}"), Self::chain(n))).collect();
        v.push(("diamond".into(), Self::diamond()));
        v
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn size(&self) -> usize {
        self.leq.len()
    }

    pub fn elements(&self) -> std::ops::Range<Obj> {
        0..self.size()
    }

    pub fn leq(&self, x: Obj, y: Obj) -> bool {
        self.leq[x][y]
    }

    pub fn meet(&self, x: Obj, y: Obj) -> Obj {
        self.meet[x][y]
    }

    pub fn join(&self, x: Obj, y: Obj) -> Obj {
        self.join[x][y]
    }

    pub fn top(&self) -> Obj {
        self.top
    }

    pub fn bottom(&self) -> Obj {
        self.bottom
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = Obj>) -> Obj {
        xs.into_iter().fold(self.bottom, |a, x| self.join(a, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = Obj>) -> Obj {
        xs.into_iter().fold(self.top, |a, x| self.meet(a, x))
    }

    /// The morphism `x ≤ y`.
    pub fn arrow(&self, x: Obj, y: Obj) -> Mor {
        self.cat.hom(x, y).first().copied().unwrap_or_else(|| panic!("{x} is not below {y}"))
    }

    /// The functor of the monotone map `map: self → other`, or `None` when
    /// `map` is not monotone.
    pub fn monotone_functor(&self, other: &FinLattice, map: &[Obj]) -> Option<Functor> {
        let c = &self.cat;
        if map.len() != self.size() || c.morphisms().any(|m| !other.leq(map[c.src(m)], map[c.tgt(m)])) {
            return None;
        }
        let mors = c.morphisms().map(|m| other.arrow(map[c.src(m)], map[c.tgt(m)])).collect();
        Some(Functor::new_unchecked(c.clone(), other.cat.clone(), map.to_vec(), mors))
    }

    /// The transformation `f ⇒ g` between monotone maps, when `f ≤ g` pointwise.
    pub fn pointwise_below(&self, other: &FinLattice, f: &Functor, g: &Functor) -> Option<NatTransformation> {
        if self.elements().any(|x| !other.leq(f.obj(x), g.obj(x))) {
            return None;
        }
        let comps = self.elements().map(|x| other.arrow(f.obj(x), g.obj(x))).collect();
        NatTransformation::new(f.clone(), g.clone(), comps).ok()
    }

    /// Monotone maps `self → other` that preserve the bottom and binary joins.
    pub fn join_preserving_maps(&self, other: &FinLattice) -> Vec<Vec<Obj>> {
        let n = self.size();
        let mut out = Vec::new();
        let mut map = vec![0; n];
        fn rec(l: &FinLattice, o: &FinLattice, i: usize, map: &mut Vec<Obj>, out: &mut Vec<Vec<Obj>>) {
            if i == map.len() {
                let ok = map[l.bottom] == o.bottom
                    && l.elements().all(|x| l.elements().all(|y| map[l.join(x, y)] == o.join(map[x], map[y])));
                if ok {
                    out.push(map.clone());
                }
                return;
            }
            for v in o.elements() {
                map[i] = v;
                if (0..i).all(|j| !l.leq(j, i) || o.leq(map[j], v)) && (0..i).all(|j| !l.leq(i, j) || o.leq(v, map[j])) {
                    rec(l, o, i + 1, map, out);
                }
            }
        }
        rec(self, other, 0, &mut map, &mut out);
        out
    }

    /// Right adjoint of a join-preserving map: `y ↦ max { x : f(x) ≤ y }`.
    pub fn right_adjoint(&self, other: &FinLattice, f: &[Obj]) -> Vec<Obj> {
        other
            .elements()
            .map(|y| self.join_all(self.elements().filter(|&x| other.leq(f[x], y))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_operations() {
        let d = FinLattice::diamond();
        assert_eq!(d.join(1, 2), 3);
        assert_eq!(d.meet(1, 2), 0);
        assert_eq!((d.bottom(), d.top()), (0, 3));
        assert_eq!(d.cat().num_morphisms(), 9);
    }

    #[test]
    fn v_shape_is_not_a_lattice() {
        assert!(FinLattice::from_relation(&["a", "b", "c"], &[(0, 2), (1, 2)]).is_err());
    }

    #[test]
    fn join_preserving_maps_between_chains() {
        let c2 = FinLattice::chain(2);
        let c3 = FinLattice::chain(3);
        // bottom to bottom; top anywhere.
        assert_eq!(c2.join_preserving_maps(&c3).len(), 3);
        let f = vec![0, 2];
        assert_eq!(c2.right_adjoint(&c3, &f), vec![0, 0, 1]);
    }
}
