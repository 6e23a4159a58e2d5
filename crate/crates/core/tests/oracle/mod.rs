//! Brute-force reference checks that rely only on the raw tables of a
//! category: sources, targets, hom sets and composition.
#![allow(dead_code)]

use qbif_core::fincat::{FinCat, Mor};

/// Membership vector over morphisms.
pub type Bits = Vec<bool>;

pub fn bits_from(cat: &FinCat, members: impl IntoIterator<Item = Mor>) -> Bits {
    let mut b = vec![false; cat.num_morphisms()];
    for m in members {
        b[m] = true;
    }
    b
}

/// Every subset of the morphisms of `cat`.
pub fn all_subsets(cat: &FinCat) -> Vec<Bits> {
    let n = cat.num_morphisms();
    (0..1u64 << n).map(|mask| (0..n).map(|i| mask >> i & 1 == 1).collect()).collect()
}

fn compose(cat: &FinCat, g: Mor, f: Mor) -> Mor {
    cat.compose(g, f).expect("composable")
}

/// Does every square from `j` to `q` have a diagonal filler?
pub fn lifts(cat: &FinCat, j: Mor, q: Mor) -> bool {
    let (a, b, x, y) = (cat.src(j), cat.tgt(j), cat.src(q), cat.tgt(q));
    for &top in cat.hom(a, x) {
        for &bottom in cat.hom(b, y) {
            if compose(cat, q, top) != compose(cat, bottom, j) {
                continue;
            }
            let filled = cat.hom(b, x).iter().any(|&d| compose(cat, d, j) == top && compose(cat, q, d) == bottom);
            if !filled {
                return false;
            }
        }
    }
    true
}

/// Pairs `(l, r)` with `r ∘ l = f`.
pub fn splittings(cat: &FinCat, f: Mor) -> Vec<(Mor, Mor)> {
    let (a, b) = (cat.src(f), cat.tgt(f));
    let mut out = Vec::new();
    for c in cat.objects() {
        for &l in cat.hom(a, c) {
            for &r in cat.hom(c, b) {
                if compose(cat, r, l) == f {
                    out.push((l, r));
                }
            }
        }
    }
    out
}

/// `(left, right)` is a weak factorization system: each class is exactly
/// the lifting complement of the other and every morphism factors.
pub fn is_wfs(cat: &FinCat, left: &Bits, right: &Bits) -> bool {
    let ms: Vec<Mor> = cat.morphisms().collect();
    for &f in &ms {
        let in_llp = ms.iter().all(|&r| !right[r] || lifts(cat, f, r));
        if in_llp != left[f] {
            return false;
        }
        let in_rlp = ms.iter().all(|&l| !left[l] || lifts(cat, l, f));
        if in_rlp != right[f] {
            return false;
        }
        if !splittings(cat, f).iter().any(|&(l, r)| left[l] && right[r]) {
            return false;
        }
    }
    true
}

pub fn two_out_of_three(cat: &FinCat, weak: &Bits) -> bool {
    for f in cat.morphisms() {
        for &g in cat.out_of(cat.tgt(f)) {
            let gf = compose(cat, g, f);
            if [weak[f], weak[g], weak[gf]].iter().filter(|&&b| b).count() == 2 {
                return false;
            }
        }
    }
    true
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

/// Clause-by-clause model structure check.
pub fn is_model(cat: &FinCat, cof: &Bits, weak: &Bits, fib: &Bits) -> bool {
    two_out_of_three(cat, weak) && is_wfs(cat, cof, &and(fib, weak)) && is_wfs(cat, &and(cof, weak), fib)
}

/// Every weak factorization system, by search over all pairs of subsets.
pub fn all_wfs(cat: &FinCat) -> Vec<(Bits, Bits)> {
    let subsets = all_subsets(cat);
    let mut out = Vec::new();
    for l in &subsets {
        // The right class is forced to be the lifting complement.
        let r: Bits = cat.morphisms().map(|f| cat.morphisms().all(|j| !l[j] || lifts(cat, j, f))).collect();
        if is_wfs(cat, l, &r) {
            out.push((l.clone(), r));
        }
    }
    out
}

/// Every model structure, filtering all triples of subsets.
pub fn all_models(cat: &FinCat) -> Vec<(Bits, Bits, Bits)> {
    let subsets = all_subsets(cat);
    let mut out = Vec::new();
    for w in subsets.iter().filter(|w| two_out_of_three(cat, w)) {
        for c in &subsets {
            for f in &subsets {
                if is_wfs(cat, c, &and(f, w)) && is_wfs(cat, &and(c, w), f) {
                    out.push((c.clone(), w.clone(), f.clone()));
                }
            }
        }
    }
    out
}

/// Commutative squares `right ∘ top = bottom ∘ left`, as index quadruples.
pub fn squares(cat: &FinCat) -> Vec<(Mor, Mor, Mor, Mor)> {
    let ms: Vec<Mor> = cat.morphisms().collect();
    let mut out = Vec::new();
    for &top in &ms {
        for &left in &ms {
            if cat.src(top) != cat.src(left) {
                continue;
            }
            for &right in cat.out_of(cat.tgt(top)) {
                for &bottom in cat.out_of(cat.tgt(left)) {
                    if cat.tgt(right) == cat.tgt(bottom) && compose(cat, right, top) == compose(cat, bottom, left) {
                        out.push((top, left, right, bottom));
                    }
                }
            }
        }
    }
    out
}

/// Monotone maps between finite posets given by their order relations.
pub fn monotone_maps(dom_leq: &[Vec<bool>], cod_leq: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let (n, m) = (dom_leq.len(), cod_leq.len());
    let mut out = Vec::new();
    let total = m.pow(n as u32);
    for code in 0..total {
        let map: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
        let ok = (0..n).all(|i| (0..n).all(|j| !dom_leq[i][j] || cod_leq[map[i]][map[j]]));
        if ok {
            out.push(map);
        }
    }
    out
}

/// Order relation of a thin category.
pub fn order(cat: &FinCat) -> Vec<Vec<bool>> {
    cat.objects().map(|a| cat.objects().map(|b| !cat.hom(a, b).is_empty()).collect()).collect()
}
